#include "sbmh/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbmh/csv.hpp"
#include "sbmh/error.hpp"
#include "sbmh/rng.hpp"

namespace sbmh {

namespace {

void require_connected(const Graph& g) {
  if (!is_connected(g)) {
    throw ValidationError("graph is disconnected; hitting times are infinite");
  }
}

void require_vertex(const Graph& g, int v) {
  if (v < 0 || v >= g.n()) {
    throw ValidationError("vertex " + std::to_string(v) + " out of range [0, " +
                          std::to_string(g.n()) + ")");
  }
}

void require_b(const SpectralDecomposition& spec_b) {
  if (spec_b.kind != MatrixKind::B) {
    throw ValidationError("spectral hitting formulas need the decomposition of B, got " +
                          to_string(spec_b.kind));
  }
}

// 1 / (1 - lambda_k) for k >= 1 (0-based), guarding the near-singular case.
Eigen::VectorXd inverse_gaps(const SpectralDecomposition& spec_b) {
  const Eigen::Index n = spec_b.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double gap = 1.0 - spec_b.eigenvalues(k);
    if (std::abs(gap) < 1e-12) {
      throw NumericalError("eigenvalue " + std::to_string(k) +
                           " of B equals 1: graph effectively disconnected or bipartite-degenerate");
    }
    out(k) = 1.0 / gap;
  }
  return out;
}

}  // namespace

Eigen::VectorXd stationary_distribution(const Graph& g) {
  Eigen::VectorXd pi(g.n());
  const double total = static_cast<double>(g.degree_sum());
  for (int v = 0; v < g.n(); ++v) pi(v) = g.degree(v) / total;
  return pi;
}

HittingResult exact_hitting(const Graph& g) {
  require_connected(g);
  const int n = g.n();
  HittingResult out;
  out.method = "exact:fundamental-matrix";
  out.pi = stationary_distribution(g);

  const Eigen::VectorXd u = out.pi.cwiseSqrt();
  Eigen::MatrixXd s = -normalized_adjacency(g);
  s.diagonal().array() += 1.0;
  s.noalias() += u * u.transpose();

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("fundamental matrix factorisation failed");
  }
  // Symmetric fundamental matrix, overwritten in place by the hitting times.
  Eigen::MatrixXd zs = llt.solve(Eigen::MatrixXd::Identity(n, n));

  Eigen::VectorXd sqrt_d(n);
  for (int v = 0; v < n; ++v) sqrt_d(v) = std::sqrt(static_cast<double>(g.degree(v)));
  const Eigen::VectorXd diag = zs.diagonal();

  Eigen::MatrixXd h(n, n);
  for (int w = 0; w < n; ++w) {
    for (int v = 0; v < n; ++v) {
      const double z_vw = zs(v, w) * sqrt_d(w) / sqrt_d(v);
      h(v, w) = v == w ? 0.0 : (diag(w) - z_vw) / out.pi(w);
    }
  }
  zs.resize(0, 0);

  out.h_target = h.transpose() * out.pi;
  out.h_start = h * out.pi;
  out.h_matrix = std::move(h);
  return out;
}

double exact_target_hitting(const Graph& g, int w) {
  require_vertex(g, w);
  require_connected(g);
  const int n = g.n();
  if (n == 1) return 0.0;

  // y = D^{1/2} h solves (I - B) y = D^{1/2} 1 off the target.
  std::vector<int> rest;
  rest.reserve(n - 1);
  for (int v = 0; v < n; ++v) {
    if (v != w) rest.push_back(v);
  }
  Eigen::VectorXd inv_sqrt(n);
  for (int v = 0; v < n; ++v) inv_sqrt(v) = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));

  const int k = n - 1;
  Eigen::MatrixXd s(k, k);
  Eigen::VectorXd rhs(k);
  for (int j = 0; j < k; ++j) {
    const int b = rest[j];
    for (int i = 0; i < k; ++i) {
      const int a = rest[i];
      s(i, j) = (a == b ? 1.0 : 0.0) - (g.edge(a, b) ? inv_sqrt(a) * inv_sqrt(b) : 0.0);
    }
    rhs(j) = 1.0 / inv_sqrt(b);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) throw NumericalError("target hitting system is singular");
  const Eigen::VectorXd y = llt.solve(rhs);

  const double total = static_cast<double>(g.degree_sum());
  double h_w = 0.0;
  for (int j = 0; j < k; ++j) {
    const int v = rest[j];
    h_w += (g.degree(v) / total) * y(j) * inv_sqrt(v);
  }
  return h_w;
}

HittingResult exact_and_spectral_hitting(const Graph& g, const SpectralDecomposition& spec_b) {
  HittingResult out = exact_hitting(g);
  out.method = "exact:fundamental-matrix+spectral";
  out.spectral_h_start = spectral_h_start(spec_b);
  Eigen::VectorXd target(g.n());
  for (int w = 0; w < g.n(); ++w) target(w) = spectral_h_target(spec_b, g, w);
  out.spectral_h_target = std::move(target);
  return out;
}

double spectral_h_start(const SpectralDecomposition& spec_b) {
  require_b(spec_b);
  return inverse_gaps(spec_b).sum();
}

double spectral_h_target(const SpectralDecomposition& spec_b, const Graph& g, int w) {
  require_b(spec_b);
  require_vertex(g, w);
  if (!spec_b.has_vectors()) throw ValidationError("spectral H_w needs eigenvectors of B");
  const Eigen::VectorXd inv = inverse_gaps(spec_b);
  double sum = 0.0;
  for (Eigen::Index k = 1; k < spec_b.size(); ++k) {
    const double u = spec_b.eigenvectors(w, k);
    sum += u * u * inv(k);
  }
  return static_cast<double>(g.degree_sum()) / g.degree(w) * sum;
}

ZnDecomposition zn_decomposition(const SpectralDecomposition& spec_b, const Graph& g, int w) {
  require_b(spec_b);
  require_vertex(g, w);
  if (!spec_b.has_vectors()) throw ValidationError("Z_N decomposition needs eigenvectors of B");
  const Eigen::VectorXd inv = inverse_gaps(spec_b);
  ZnDecomposition z;
  z.b_ww = g.edge(w, w) ? 1.0 / g.degree(w) : 0.0;
  z.two_pi_w = 2.0 * g.degree(w) / static_cast<double>(g.degree_sum());
  for (Eigen::Index k = 1; k < spec_b.size(); ++k) {
    const double u2 = spec_b.eigenvectors(w, k) * spec_b.eigenvectors(w, k);
    const double lambda = spec_b.eigenvalues(k);
    z.direct += u2 * inv(k);
    z.tail += lambda * lambda * u2 * inv(k);
  }
  z.total = z.one + z.b_ww - z.two_pi_w + z.tail;
  return z;
}

TailEnvelope zn_tail_envelope(const DerivedParams& params) {
  TailEnvelope out;
  const double kappa = params.kappa.value_or(std::numeric_limits<double>::infinity());
  out.assortative_branch = kappa < 1.0;
  out.envelope = out.assortative_branch ? 1.0 / (kappa * kappa * params.gamma_min)
                                        : 1.0 / params.gamma_min;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class StartFn>
WalkEstimate run_walks(const Graph& g, int w, std::int64_t n_walks, std::int64_t max_steps,
                       std::uint64_t seed, StartFn&& start_of) {
  require_vertex(g, w);
  if (n_walks < 1) throw ValidationError("need at least one walk");
  if (max_steps < 1) throw ValidationError("max_steps must be positive");
  const auto nbrs = g.neighbour_lists();

  WalkEstimate out;
  out.max_steps = max_steps;
  double mean = 0.0;
  double m2 = 0.0;  // Welford
  for (std::int64_t i = 0; i < n_walks; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    int at = start_of(rng);
    std::int64_t steps = 0;
    while (at != w && steps < max_steps) {
      const auto& next = nbrs[at];
      if (next.empty()) throw ValidationError("walk reached an isolated vertex");
      at = next[rng.below(next.size())];
      ++steps;
    }
    if (at != w) {
      ++out.truncated;
      continue;
    }
    ++out.n_walks;
    const double x = static_cast<double>(steps);
    const double delta = x - mean;
    mean += delta / out.n_walks;
    m2 += delta * (x - mean);
  }
  out.estimate = mean;
  out.std_error = out.n_walks > 1 ? std::sqrt(m2 / (out.n_walks - 1) / out.n_walks) : 0.0;
  return out;
}

}  // namespace

WalkEstimate mc_hitting(const Graph& g, int v, int w, std::int64_t n_walks,
                        std::int64_t max_steps, std::uint64_t seed) {
  require_vertex(g, v);
  return run_walks(g, w, n_walks, max_steps, seed, [v](Rng&) { return v; });
}

WalkEstimate mc_target_hitting(const Graph& g, int w, std::int64_t n_walks,
                               std::int64_t max_steps, std::uint64_t seed) {
  // Drawing a uniform half-edge endpoint gives a vertex with probability
  // d_v / sum(d) = pi_v.
  std::vector<int> cumulative(g.n());
  int acc = 0;
  for (int v = 0; v < g.n(); ++v) {
    acc += g.degree(v);
    cumulative[v] = acc;
  }
  if (acc == 0) throw ValidationError("graph has no edges");
  return run_walks(g, w, n_walks, max_steps, seed, [&](Rng& rng) {
    const auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(acc)));
    return static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), r) -
                            cumulative.begin());
  });
}

std::int64_t default_max_steps(int n) {
  const double cap = 100.0 * n * std::log(std::max(n, 2));
  return std::max<std::int64_t>(1000, static_cast<std::int64_t>(std::ceil(cap)));
}

std::string hitting_csv(const Graph& g, const std::vector<HittingRow>& rows,
                        double h_start_exact, double h_start_spectral) {
  std::string out = "w,block,d_w,H_w_exact,H_w_spectral,H_w_mc,mc_stderr\n";
  const std::string nan = fmt_double(std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : rows) {
    out += csv_row({std::to_string(r.w), std::to_string(g.block_of(r.w)),
                    std::to_string(g.degree(r.w)), fmt_double(r.exact), fmt_double(r.spectral),
                    r.mc ? fmt_double(r.mc->estimate) : nan,
                    r.mc ? fmt_double(r.mc->std_error) : nan});
  }
  out += "# H_start_exact=" + fmt_double(h_start_exact) + "\n";
  out += "# H_start_spectral=" + fmt_double(h_start_spectral) + "\n";
  for (const auto& r : rows) {
    if (r.mc && r.mc->biased()) {
      out += "# w=" + std::to_string(r.w) + " mc_truncated=" + std::to_string(r.mc->truncated) + "\n";
    }
  }
  return out;
}

}  // namespace sbmh
