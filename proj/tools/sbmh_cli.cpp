// sbmh: sample block-model graphs, inspect spectra, compute hitting times and
// run replicate experiments.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbmh/config_io.hpp"
#include "sbmh/csv.hpp"
#include "sbmh/error.hpp"
#include "sbmh/experiments.hpp"
#include "sbmh/graph.hpp"
#include "sbmh/hitting.hpp"
#include "sbmh/model.hpp"
#include "sbmh/rng.hpp"
#include "sbmh/spectral.hpp"

namespace {

using namespace sbmh;

struct ModelFlags {
  std::string config_path;
  int n = 0;
  int m = 0;
  std::string p;
  double q = 0.0;
  std::uint64_t seed = 0;
  CLI::Option* n_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* loops_opt = nullptr;
  CLI::Option* no_loops_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON model config; flags below override it");
    n_opt = app->add_option("--n", n, "number of vertices");
    m_opt = app->add_option("--m", m, "number of blocks (must divide n)");
    p_opt = app->add_option("--p", p, "intra-block probabilities, comma-separated, one per block, descending");
    q_opt = app->add_option("--q", q, "inter-block probability");
    seed_opt = app->add_option("--seed", seed, "random seed (all randomness derives from it)");
    loops_opt = app->add_flag("--loops", "allow loops (default)");
    no_loops_opt = app->add_flag("--no-loops", "forbid loops");
    loops_opt->excludes(no_loops_opt);
  }

  bool any() const {
    return !config_path.empty() || n_opt->count() || m_opt->count() || p_opt->count() ||
           q_opt->count();
  }

  BlockModelConfig build() const {
    BlockModelConfig c;
    if (!config_path.empty()) {
      c = load_config(config_path);
    } else {
      for (const auto* o : {n_opt, m_opt, p_opt, q_opt}) {
        if (!o->count()) {
          throw ValidationError("missing " + o->get_name() + " (give --config or all of --n --m --p --q)");
        }
      }
    }
    if (n_opt->count()) c.n = n;
    if (m_opt->count()) c.m = m;
    if (q_opt->count()) c.q = q;
    if (seed_opt->count()) c.seed = seed;
    if (loops_opt->count()) c.allow_loops = true;
    if (no_loops_opt->count()) c.allow_loops = false;
    if (p_opt->count()) {
      c.p.clear();
      std::stringstream ss(p);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          c.p.push_back(std::stod(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw ValidationError("--p: '" + item + "' is not a number");
        }
      }
      if (static_cast<int>(c.p.size()) != c.m) {
        throw ValidationError("--p has " + std::to_string(c.p.size()) + " entries but m = " +
                              std::to_string(c.m));
      }
    }
    c.validate();
    return c;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

struct BoundFlags {
  double c = 1.0;
  double slack = 1.5;
  std::string r_form = "general";

  void attach(CLI::App* app) {
    app->add_option("--c", c, "constant of the ||X||_2 envelope")->capture_default_str();
    app->add_option("--slack", slack, "multiplier on the R and eigenvalue envelopes")->capture_default_str();
    app->add_option("--r-form", r_form, "shape of the ||R||_inf envelope: general or identical_p")
        ->check(CLI::IsMember({"general", "identical_p"}))
        ->capture_default_str();
  }

  BoundOptions options() const {
    BoundOptions o;
    o.c = c;
    o.slack = slack;
    if (r_form == "identical_p") {
      o.r_form = RBoundForm::identical_p;
      o.r_constant = 1.0;
    }
    return o;
  }
};

// Either a graph file or a model to sample from.
Graph obtain_graph(const std::string& in_path, const ModelFlags& model) {
  if (!in_path.empty()) return load_edge_list(in_path);
  return sample(model.build());
}

int run(int argc, char** argv) {
  CLI::App app{"Stochastic block model hitting times: sampling, spectra, hitting times, experiments"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");

  // generate ------------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "sample a graph and write its edge list");
  ModelFlags gen_model;
  gen_model.attach(gen);
  std::string gen_out;
  gen->add_option("--out", gen_out, "edge list path (default: stdout)");

  // spectrum ------------------------------------------------------------------
  auto* spec = app.add_subcommand("spectrum", "eigenvalues of a model or graph matrix, plus bound reports");
  ModelFlags spec_model;
  spec_model.attach(spec);
  std::string spec_in, spec_out, spec_bounds_out, spec_matrix = "B";
  bool spec_vectors = false;
  BoundFlags spec_bound_flags;
  spec->add_option("--in", spec_in, "edge list to analyse instead of sampling");
  spec->add_option("--matrix", spec_matrix, "B, A_prime, X, P_prime or EA_prime")
      ->check(CLI::IsMember({"B", "A_prime", "X", "P_prime", "EA_prime"}))
      ->capture_default_str();
  spec->add_flag("--vectors", spec_vectors, "also write eigenvector columns");
  spec->add_option("--out", spec_out, "spectrum CSV path (default: stdout)");
  spec->add_option("--bounds-out", spec_bounds_out, "bound report CSV path (needs a model)");
  spec_bound_flags.attach(spec);

  // hitting -------------------------------------------------------------------
  auto* hit = app.add_subcommand("hitting", "exact, spectral and Monte Carlo hitting times");
  ModelFlags hit_model;
  hit_model.attach(hit);
  std::string hit_in, hit_out;
  std::vector<int> hit_targets;
  std::int64_t hit_walks = 1000;
  std::int64_t hit_max_steps = 0;
  hit->add_option("--in", hit_in, "edge list to analyse instead of sampling");
  hit->add_option("--target", hit_targets, "target vertex (0-based; repeatable; default: all)");
  hit->add_option("--walks", hit_walks, "Monte Carlo walks per target (0 disables)")->capture_default_str();
  hit->add_option("--max-steps", hit_max_steps, "walk step cap (default: 100 N log N)");
  hit->add_option("--out", hit_out, "hitting CSV path (default: stdout)");

  // check-conditions ------------------------------------------------------------
  auto* cond = app.add_subcommand("check-conditions", "evaluate the asymptotic conditions at this N");
  ModelFlags cond_model;
  cond_model.attach(cond);
  std::string cond_mode = "lln", cond_out;
  double cond_threshold = 0.1;
  cond->add_option("--mode", cond_mode, "lln, clt or identical_p")
      ->check(CLI::IsMember({"lln", "clt", "identical_p"}))
      ->capture_default_str();
  cond->add_option("--threshold", cond_threshold, "pass threshold for lhs/rhs")->capture_default_str();
  cond->add_option("--out", cond_out, "report CSV path (default: stdout)");

  // experiment ------------------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "replicate sweeps: LLN, CLT and bound checks");
  ModelFlags exp_model;
  exp_model.attach(exp);
  std::string exp_mode, exp_out, exp_hist, exp_targets = "one_per_block", exp_scaling = "general";
  std::vector<int> exp_fixed;
  int exp_replicates = 1, exp_threads = 0, exp_block = 0, exp_bins = 20, exp_max_resamples = 100;
  BoundFlags exp_bound_flags;
  exp->add_option("--mode", exp_mode, "lln_start, lln_target, clt_target, clt_edges or bounds")
      ->required()
      ->check(CLI::IsMember({"lln_start", "lln_target", "clt_target", "clt_edges", "bounds"}));
  exp->add_option("--replicates", exp_replicates, "number of sampled graphs")->capture_default_str();
  exp->add_option("--targets", exp_targets, "one_per_block, fixed or all")
      ->check(CLI::IsMember({"one_per_block", "fixed", "all"}))
      ->capture_default_str();
  exp->add_option("--target", exp_fixed, "target vertex for --targets fixed (repeatable)");
  exp->add_option("--scaling", exp_scaling, "clt_target scaling: general or identical_p")
      ->check(CLI::IsMember({"general", "identical_p"}))
      ->capture_default_str();
  exp->add_option("--block", exp_block, "clt_target: block whose first vertex is the target")
      ->capture_default_str();
  exp->add_option("--bins", exp_bins, "histogram bins for CLT modes")->capture_default_str();
  exp->add_option("--max-resamples", exp_max_resamples, "redraws allowed per disconnected replicate")
      ->capture_default_str();
  exp->add_option("--threads", exp_threads, "worker threads (0: all cores)")->capture_default_str();
  exp->add_option("--out", exp_out, "records CSV path (default: stdout)");
  exp->add_option("--histogram", exp_hist, "histogram CSV path (CLT modes; default: <out>.hist.csv)");
  exp_bound_flags.attach(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  auto log = [&](const std::string& msg) {
    if (verbose) std::cerr << msg << '\n';
  };

  if (*gen) {
    const Graph g = sample(gen_model.build());
    log("generated n=" + std::to_string(g.n()) + " edges=" + std::to_string(g.edge_count()) +
        " loops=" + std::to_string(g.loop_count()) + (is_connected(g) ? " connected" : " disconnected"));
    write_text(gen_out, to_edge_list(g));
    return 0;
  }

  if (*spec) {
    const MatrixKind kind = parse_matrix_kind(spec_matrix);
    const bool have_model = spec_model.any();
    std::optional<DerivedParams> params;
    if (have_model) params = derive(spec_model.build());
    const bool needs_model = kind == MatrixKind::A_prime || kind == MatrixKind::X ||
                             kind == MatrixKind::P_prime || kind == MatrixKind::EA_prime ||
                             !spec_bounds_out.empty();
    if (needs_model && !params) throw ValidationError("--matrix " + spec_matrix + " and --bounds-out need a model (--config or --n/--m/--p/--q)");

    SpectralDecomposition d;
    std::optional<Graph> g;
    if (kind == MatrixKind::P_prime) {
      d = block_matrix_spectrum(*params);
    } else if (kind == MatrixKind::EA_prime) {
      d = decompose(expected_adjacency_dense(*params), kind, spec_vectors);
    } else {
      g = obtain_graph(spec_in, spec_model);
      if (params && g->n() != params->config.n) throw ValidationError("graph and model disagree on n");
      if (kind == MatrixKind::B) {
        d = decompose(normalized_adjacency(*g), kind, spec_vectors);
      } else {
        const RescaledMatrices r = build_rescaled(*g, *params);
        d = decompose(kind == MatrixKind::X ? r.x : r.a_prime, kind, spec_vectors);
      }
    }
    write_text(spec_out, spectrum_csv(d, spec_vectors));
    if (!spec_bounds_out.empty()) {
      if (!g) g = obtain_graph(spec_in, spec_model);
      write_text(spec_bounds_out, bounds_csv(norm_bounds(*g, *params, spec_bound_flags.options())));
    }
    return 0;
  }

  if (*hit) {
    const Graph g = obtain_graph(hit_in, hit_model);
    const std::uint64_t seed = hit_model.seed_opt->count() ? hit_model.seed
                               : hit_model.any()           ? hit_model.build().seed
                                                           : 0;
    if (hit_targets.empty()) {
      for (int w = 0; w < g.n(); ++w) hit_targets.push_back(w);
    }
    for (int w : hit_targets) {
      if (w < 0 || w >= g.n()) throw ValidationError("--target " + std::to_string(w) + " out of range");
    }
    const SpectralDecomposition d = decompose(normalized_adjacency(g), MatrixKind::B, true);
    const HittingResult h = exact_and_spectral_hitting(g, d);
    const std::int64_t cap = hit_max_steps > 0 ? hit_max_steps : default_max_steps(g.n());
    std::vector<HittingRow> rows;
    for (std::size_t i = 0; i < hit_targets.size(); ++i) {
      const int w = hit_targets[i];
      HittingRow row{w, h.h_target(w), (*h.spectral_h_target)(w), std::nullopt};
      if (hit_walks > 0) {
        row.mc = mc_target_hitting(g, w, hit_walks, cap, derive_seed(seed, static_cast<std::uint64_t>(w)));
        log("w=" + std::to_string(w) + " mc truncated=" + std::to_string(row.mc->truncated));
      }
      rows.push_back(row);
    }
    write_text(hit_out, hitting_csv(g, rows, h.h_start(0), *h.spectral_h_start));
    return 0;
  }

  if (*cond) {
    const auto report = check_conditions(cond_model.build(), parse_condition_mode(cond_mode), cond_threshold);
    write_text(cond_out, to_csv(report));
    return 0;
  }

  if (*exp) {
    ExperimentPlan plan;
    plan.config = exp_model.build();
    plan.base_seed = plan.config.seed;
    plan.mode = parse_experiment_mode(exp_mode);
    plan.replicates = exp_replicates;
    plan.targets = parse_target_rule(exp_targets);
    plan.fixed_targets = exp_fixed;
    plan.scaling = parse_clt_scaling(exp_scaling);
    plan.designated_block = exp_block;
    plan.histogram_bins = exp_bins;
    plan.max_resamples = exp_max_resamples;
    plan.threads = exp_threads;
    plan.bounds = exp_bound_flags.options();
    plan.validate();
    log("experiment mode=" + exp_mode + " replicates=" + std::to_string(plan.replicates));

    switch (plan.mode) {
      case ExperimentMode::lln_start:
      case ExperimentMode::lln_target: {
        const auto r = run_lln(plan);
        log("resamples=" + std::to_string(r.resamples_total));
        write_text(exp_out, lln_csv(r));
        break;
      }
      case ExperimentMode::clt_target:
      case ExperimentMode::clt_edges: {
        const auto r = plan.mode == ExperimentMode::clt_target ? run_clt_target(plan) : run_clt_edges(plan);
        log("resamples=" + std::to_string(r.resamples_total));
        write_text(exp_out, clt_csv(r));
        std::string hist_path = exp_hist;
        if (hist_path.empty() && !exp_out.empty() && exp_out != "-") hist_path = exp_out + ".hist.csv";
        if (!hist_path.empty()) write_text(hist_path, histogram_csv(r.histogram));
        // Summary on stdout unless the records already went there.
        if (!exp_out.empty() && exp_out != "-") std::cout << clt_summary_csv(r.summary);
        break;
      }
      case ExperimentMode::bounds: {
        const auto r = run_bounds(plan);
        log("resamples=" + std::to_string(r.resamples_total));
        write_text(exp_out, bounds_records_csv(r, plan.bounds));
        break;
      }
    }
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sbmh::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sbmh::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
