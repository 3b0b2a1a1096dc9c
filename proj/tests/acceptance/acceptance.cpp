// Acceptance gate: one PASS/FAIL line per criterion. Every tolerance, seed
// and configuration is fixed here; nothing is tuned at run time.
//
//   acceptance            run every criterion
//   acceptance AC3 AC5    run a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbmh/experiments.hpp"
#include "sbmh/hitting.hpp"
#include "sbmh/rng.hpp"
#include "sbmh/spectral.hpp"

using namespace sbmh;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

BlockModelConfig make(int n, int m, std::vector<double> p, double q, bool loops = true) {
  BlockModelConfig c;
  c.n = n;
  c.m = m;
  c.p = std::move(p);
  c.q = q;
  c.allow_loops = loops;
  return c;
}

ExperimentPlan plan(BlockModelConfig c, ExperimentMode mode, int replicates) {
  ExperimentPlan p;
  p.config = std::move(c);
  p.mode = mode;
  p.replicates = replicates;
  p.base_seed = kSeed;
  return p;
}

// Desk-scale graphs shared by the algebraic criteria.
struct DeskGraph {
  BlockModelConfig config;
  Graph graph;
};

const std::vector<DeskGraph>& desk_graphs() {
  static const std::vector<DeskGraph> graphs = [] {
    std::vector<DeskGraph> out;
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> p_dist(0.1, 0.6), q_dist(0.02, 0.2);
    const int sizes[] = {50, 150, 300};
    const int block_counts[] = {1, 2, 3, 5};
    for (int i = 0; i < 20; ++i) {
      const int n = sizes[i % 3];
      int m = 1;
      do {
        m = block_counts[rng() % 4];
      } while (n % m != 0);
      std::vector<double> p(m);
      for (auto& x : p) x = p_dist(rng);
      std::sort(p.begin(), p.end(), std::greater<>());
      ExperimentPlan pl = plan(make(n, m, p, q_dist(rng), i % 4 != 3), ExperimentMode::lln_start, 1);
      pl.base_seed = rng();
      auto rep = sample_replicate(pl, i, true);
      pl.config.seed = rep.seed;
      out.push_back({pl.config, std::move(rep.graph)});
    }
    return out;
  }();
  return graphs;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_start = 0.0, worst_target = 0.0;
  std::mt19937_64 pick(kSeed + 1);
  for (const auto& dg : desk_graphs()) {
    const Graph& g = dg.graph;
    const auto spec = decompose(normalized_adjacency(g), MatrixKind::B);
    const auto exact = exact_hitting(g);
    const double hs = spectral_h_start(spec);
    for (int v = 0; v < g.n(); ++v) {
      worst_start = std::max(worst_start, std::abs(hs - exact.h_start(v)) / exact.h_start(v));
    }
    for (int i = 0; i < 10; ++i) {
      const int w = static_cast<int>(pick() % g.n());
      const double ht = spectral_h_target(spec, g, w);
      worst_target = std::max(worst_target, std::abs(ht - exact.h_target(w)) / exact.h_target(w));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst_start <= 1e-6 && worst_target <= 1e-6 && secs < 120.0,
          "20 graphs; max rel err H^v " + fmt("%.3g", worst_start) + ", H_w " + fmt("%.3g", worst_target) +
              " (tol 1e-6); " + fmt("%.1f", secs) + " s (limit 120 s)"};
}

Outcome ac2() {
  double worst = 0.0, worst_tail_ratio = 0.0;
  long checked = 0;
  for (const auto& dg : desk_graphs()) {
    const Graph& g = dg.graph;
    const auto spec = decompose(normalized_adjacency(g), MatrixKind::B);
    const double env = zn_tail_envelope(derive(dg.config)).envelope;
    for (int w = 0; w < g.n(); ++w) {
      const auto z = zn_decomposition(spec, g, w);
      worst = std::max(worst, std::abs(z.total - z.direct));
      worst_tail_ratio = std::max(worst_tail_ratio, z.tail / env);
      ++checked;
    }
  }
  return {worst <= 1e-9, std::to_string(checked) + " (graph, w) pairs; max |lhs - rhs| " +
                             fmt("%.3g", worst) + " (tol 1e-9); tail/envelope max " +
                             fmt("%.3g", worst_tail_ratio) + " (= calibrated C)"};
}

Outcome ac3() {
  std::mt19937_64 rng(kSeed + 3);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 20 + static_cast<int>(rng() % 31);
    std::vector<int> divisors;
    for (int m = 1; m <= 5; ++m) {
      if (n % m == 0 && m < n) divisors.push_back(m);
    }
    const int m = divisors[rng() % divisors.size()];
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> p(m);
    for (auto& x : p) x = u(rng);
    std::sort(p.begin(), p.end(), std::greater<>());
    const auto c = make(n, m, p, u(rng));
    const auto d = derive(c);
    // Independent dense assembly: P_vw / sqrt(gamma_B(v) gamma_B(w)).
    Eigen::MatrixXd dense(n, n);
    for (int v = 0; v < n; ++v) {
      for (int w = 0; w < n; ++w) {
        const int bv = v / (n / m), bw = w / (n / m);
        const double pr = bv == bw ? p[bv] : c.q;
        dense(v, w) = pr / std::sqrt(d.gamma[bv] * d.gamma[bw]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd want = es.eigenvalues().reverse();
    const auto got = expected_adjacency_spectrum(d).eigenvalues;
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-9, "20 configs, N in [20, 50]; max |diff| " + fmt("%.3g", worst) + " (tol 1e-9)"};
}

Outcome ac4() {
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 8);
    const double p = u(rng), q = u(rng);
    const auto ev = block_probability_eigenvalues(derive(make(2 * m, m, std::vector<double>(m, p), q)));
    std::vector<double> want{p + (m - 1) * q};
    for (int k = 1; k < m; ++k) want.push_back(p - q);
    std::sort(want.begin(), want.end(), std::greater<>());
    for (int k = 0; k < m; ++k) worst = std::max(worst, std::abs(ev(k) - want[k]));
  }
  return {worst <= 1e-12, "50 draws, M in [1, 8]; max |diff| " + fmt("%.3g", worst) + " (tol 1e-12)"};
}

Outcome ac5() {
  std::mt19937_64 rng(kSeed + 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double worst = -1.0;
  std::string example;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);
    std::vector<double> p(m);
    for (auto& x : p) x = u(rng);
    std::sort(p.begin(), p.end(), std::greater<>());
    double q = 0.0;
    while (q <= 0.0) q = u(rng);
    const auto d = derive(make(10 * m, m, p, q));
    const double lambda2 = (d.config.n / m) * block_matrix_spectrum(d).eigenvalues(1);
    const double excess = lambda2 - cheeger_bound(d).bound;
    if (excess > 1e-12) {
      ++violations;
      if (excess > worst) {
        worst = excess;
        std::ostringstream os;
        os << "M=" << m << " p_M=" << fmt("%.3f", p.back()) << " q=" << fmt("%.3f", q)
           << ": lambda2=" << fmt("%.4f", lambda2) << " > bound=" << fmt("%.4f", cheeger_bound(d).bound);
        example = os.str();
      }
    }
  }
  std::string detail = std::to_string(violations) + "/100 draws violate (tol 1e-12)";
  if (violations > 0) detail += "; worst " + example;
  return {violations == 0, detail};
}

// Shared by AC6 and AC7.
ExperimentPlan uniform_lln(ExperimentMode mode) {
  return plan(make(2000, 4, {0.2, 0.2, 0.2, 0.2}, 0.05), mode, 20);
}

Outcome ac6() {
  const auto t0 = std::chrono::steady_clock::now();
  auto pl = uniform_lln(ExperimentMode::lln_start);
  pl.targets = TargetRule::all;
  const auto r = run_lln(pl);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {r.max_abs_deviation <= 0.05 && secs < 600.0,
          "N=2000 M=4 p=0.2 q=0.05, 20 replicates, all v; max |H^v/N - 1| " +
              fmt("%.4f", r.max_abs_deviation) + " (tol 0.05); resamples " +
              std::to_string(r.resamples_total) + "; " + fmt("%.0f", secs) + " s (limit 600 s)"};
}

Outcome ac7() {
  auto uni = uniform_lln(ExperimentMode::lln_target);
  auto het = plan(make(2000, 4, {0.3, 0.25, 0.2, 0.15}, 0.05), ExperimentMode::lln_target, 20);
  const auto a = run_lln(uni);
  const auto b = run_lln(het);
  // The ratio is evaluated for the first vertex of every block in every
  // replicate; the criterion is the max over all of them.
  const double worst = std::max(a.max_abs_deviation, b.max_abs_deviation);
  return {worst <= 0.05,
          "first vertex per block, 20 replicates; max |ratio - 1| uniform " + fmt("%.4f", a.max_abs_deviation) +
              ", heterogeneous " + fmt("%.4f", b.max_abs_deviation) + " (tol 0.05); replicate-mean per block: " +
              fmt("%.4f", a.max_block_mean_deviation) + ", " + fmt("%.4f", b.max_block_mean_deviation)};
}

Outcome ac8() {
  const auto pl = plan(make(1000, 2, {0.3, 0.3}, 0.1), ExperimentMode::clt_edges, 500);
  const auto r = run_clt_edges(pl);
  const auto d = derive(pl.config);
  double mean = 0.0;
  for (const auto& rec : r.records) mean += rec.raw;
  mean /= r.records.size();
  const double se4 = 4.0 * std::sqrt(d.tau2 / 500.0);
  return {r.summary.ks_distance <= 0.10,
          "N=1000 M=2 p=0.3 q=0.1, 500 replicates; ks " + fmt("%.4f", r.summary.ks_distance) +
              " (tol 0.10); |mean|E| - mu| " + fmt("%.1f", std::abs(mean - d.mu_in - d.mu_out)) +
              " vs 4 se " + fmt("%.1f", se4)};
}

Outcome ac9() {
  const auto t0 = std::chrono::steady_clock::now();
  auto ident = plan(make(1500, 2, {0.1, 0.1}, 0.05), ExperimentMode::clt_target, 300);
  ident.scaling = CltScaling::identical_p;
  auto gen = plan(make(1500, 2, {0.15, 0.08}, 0.05), ExperimentMode::clt_target, 300);
  gen.scaling = CltScaling::general;
  const auto a = run_clt_target(ident);
  const auto b = run_clt_target(gen);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto ok = [](const CltSummary& s) {
    return std::abs(s.mean) <= 0.2 && std::abs(s.variance / s.target_variance - 1.0) <= 0.3 &&
           s.ks_distance <= 0.15;
  };
  auto show = [](const char* label, const CltSummary& s) {
    return std::string(label) + ": mean " + fmt("%.3f", s.mean) + ", var/target " +
           fmt("%.3f", s.variance / s.target_variance) + ", ks " + fmt("%.3f", s.ks_distance);
  };
  return {ok(a.summary) && ok(b.summary) && secs < 1800.0,
          show("identical p=0.1", a.summary) + "; " + show("general p=(0.15,0.08)", b.summary) +
              " (tol 0.2 / 0.3 / 0.15); " + fmt("%.0f", secs) + " s (limit 1800 s)"};
}

// AC10 replicates feed AC12.
std::vector<WeylCheck> g_weyl;

Outcome ac10() {
  const auto pl = plan(make(2000, 2, {0.2, 0.2}, 0.05), ExperimentMode::bounds, 100);
  const auto r = run_bounds(pl);
  for (const auto& rec : r.records) g_weyl.push_back(rec.weyl);
  bool ok = true;
  std::string detail = "N=2000 M=2 p=0.2 q=0.05, 100 replicates, c=1, slack 1.5; pass fractions";
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    ok = ok && r.pass_fraction[i] >= 0.95;
    detail += " " + r.names[i] + "=" + fmt("%.2f", r.pass_fraction[i]);
  }
  detail += " (need >= 0.95); calibrated c " + fmt("%.3f", r.calibrated_c);
  return {ok, detail};
}

Outcome ac11() {
  auto c = make(100, 2, {0.5, 0.3}, 0.1);
  auto pl = plan(c, ExperimentMode::lln_start, 1);
  const auto rep = sample_replicate(pl, 0, true);
  const Graph& g = rep.graph;
  const auto exact = *exact_hitting(g).h_matrix;
  std::mt19937_64 rng(kSeed + 11);
  int within = 0, biased = 0;
  for (int i = 0; i < 10; ++i) {
    const int v = static_cast<int>(rng() % g.n());
    int w = v;
    while (w == v) w = static_cast<int>(rng() % g.n());
    const auto e = mc_hitting(g, v, w, 10000, default_max_steps(g.n()), derive_seed(kSeed, 1000 + i));
    if (e.biased()) {
      ++biased;
      continue;
    }
    if (std::abs(e.estimate - exact(v, w)) <= 3.0 * e.std_error) ++within;
  }
  return {within >= 9, std::to_string(within) + "/10 pairs within 3 se (need >= 9); truncated estimates " +
                           std::to_string(biased)};
}

Outcome ac12() {
  double worst = -1e300;
  int graphs = 0, failed = 0;
  auto take = [&](const WeylCheck& w) {
    ++graphs;
    worst = std::max({worst, w.b_vs_a_prime_excess, w.a_prime_vs_expected_excess});
    if (!w.holds(1e-9)) ++failed;
  };
  for (const auto& dg : desk_graphs()) take(weyl_check(graph_spectra(dg.graph, derive(dg.config))));
  for (const auto& w : g_weyl) take(w);
  return {failed == 0, std::to_string(graphs) + " graphs (desk set + bound replicates); " +
                           std::to_string(failed) + " violations; max excess " + fmt("%.3g", worst) +
                           " (tol 1e-9)"};
}

// Not a numbered criterion: the walk with and without loops on the same
// seeds should give nearly the same start-averaged time.
Outcome loops_check() {
  auto with = uniform_lln(ExperimentMode::lln_start);
  auto without = with;
  without.config.allow_loops = false;
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    const double a = exact_hitting(sample_replicate(with, r, true).graph).h_start(0);
    const double b = exact_hitting(sample_replicate(without, r, true).graph).h_start(0);
    worst = std::max(worst, std::abs(a - b) / with.config.n);
  }
  return {worst <= 0.02, "N=2000, 20 seeds; max |dH^v|/N " + fmt("%.4f", worst) + " (tol 0.02)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", ac1},   {"AC2", ac2},   {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},
      {"AC6", ac6},   {"AC7", ac7},   {"AC8", ac8}, {"AC9", ac9},   {"AC10", ac10},
      {"AC11", ac11}, {"AC12", ac12}, {"LOOPS", loops_check}};
  std::set<std::string> only(argv + 1, argv + argc);

  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && !only.contains(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%-5s %s  %s  [%.1f s]\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
