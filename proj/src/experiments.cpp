#include "sbmh/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "sbmh/csv.hpp"
#include "sbmh/error.hpp"
#include "sbmh/hitting.hpp"
#include "sbmh/rng.hpp"

namespace sbmh {

ExperimentMode parse_experiment_mode(const std::string& s) {
  if (s == "lln_start") return ExperimentMode::lln_start;
  if (s == "lln_target") return ExperimentMode::lln_target;
  if (s == "clt_target") return ExperimentMode::clt_target;
  if (s == "clt_edges") return ExperimentMode::clt_edges;
  if (s == "bounds") return ExperimentMode::bounds;
  throw ValidationError("unknown experiment mode '" + s +
                        "' (expected lln_start, lln_target, clt_target, clt_edges or bounds)");
}

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::lln_start: return "lln_start";
    case ExperimentMode::lln_target: return "lln_target";
    case ExperimentMode::clt_target: return "clt_target";
    case ExperimentMode::clt_edges: return "clt_edges";
    case ExperimentMode::bounds: return "bounds";
  }
  return "?";
}

TargetRule parse_target_rule(const std::string& s) {
  if (s == "one_per_block") return TargetRule::one_per_block;
  if (s == "fixed") return TargetRule::fixed;
  if (s == "all") return TargetRule::all;
  throw ValidationError("unknown target rule '" + s + "' (expected one_per_block, fixed or all)");
}

std::string to_string(TargetRule rule) {
  switch (rule) {
    case TargetRule::one_per_block: return "one_per_block";
    case TargetRule::fixed: return "fixed";
    case TargetRule::all: return "all";
  }
  return "?";
}

void ExperimentPlan::validate() const {
  config.validate();
  if (replicates < 1) throw ValidationError("replicates must be at least 1");
  if (threads < 0) throw ValidationError("threads must be non-negative");
  if (max_resamples < 0) throw ValidationError("max_resamples must be non-negative");
  if (histogram_bins < 1) throw ValidationError("histogram_bins must be at least 1");
  if (designated_block < 0 || designated_block >= config.m) {
    throw ValidationError("designated block " + std::to_string(designated_block) +
                          " out of range [0, " + std::to_string(config.m) + ")");
  }
  if (targets == TargetRule::fixed) {
    if (fixed_targets.empty()) throw ValidationError("fixed target rule needs at least one target");
    for (int v : fixed_targets) {
      if (v < 0 || v >= config.n) {
        throw ValidationError("target " + std::to_string(v) + " out of range [0, " +
                              std::to_string(config.n) + ")");
      }
    }
  }
}

std::vector<int> ExperimentPlan::resolve_targets() const {
  std::vector<int> out;
  switch (targets) {
    case TargetRule::one_per_block:
      for (int b = 0; b < config.m; ++b) out.push_back(b * config.block_size());
      break;
    case TargetRule::fixed:
      out = fixed_targets;
      break;
    case TargetRule::all:
      for (int v = 0; v < config.n; ++v) out.push_back(v);
      break;
  }
  return out;
}

int ExperimentPlan::clt_vertex() const {
  if (targets == TargetRule::fixed && fixed_targets.size() == 1) return fixed_targets.front();
  return designated_block * config.block_size();
}

ReplicateGraph sample_replicate(const ExperimentPlan& plan, int replicate, bool require_connected) {
  BlockModelConfig cfg = plan.config;
  for (int attempt = 0; attempt <= plan.max_resamples; ++attempt) {
    cfg.seed = derive_seed(plan.base_seed, static_cast<std::uint64_t>(replicate),
                           static_cast<std::uint64_t>(attempt));
    Graph g = sample(cfg);
    if (!require_connected || is_connected(g)) return {std::move(g), cfg.seed, attempt};
  }
  throw NumericalError("replicate " + std::to_string(replicate) + ": no connected draw in " +
                       std::to_string(plan.max_resamples + 1) + " attempts");
}

namespace {

// Runs fn(r) for r in [0, count) on a small pool. Results are written by
// index, so output order never depends on scheduling. The first exception
// (lowest replicate) is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < count; r = next++) {
      try {
        fn(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_mode(const ExperimentPlan& plan, std::initializer_list<ExperimentMode> modes) {
  for (auto m : modes) {
    if (plan.mode == m) return;
  }
  throw ValidationError("plan mode " + to_string(plan.mode) + " does not match the runner");
}

}  // namespace

// ---------------------------------------------------------------------------

LlnResult run_lln(const ExperimentPlan& plan) {
  require_mode(plan, {ExperimentMode::lln_start, ExperimentMode::lln_target});
  plan.validate();
  const DerivedParams params = derive(plan.config);
  const auto targets = plan.resolve_targets();
  const bool start = plan.mode == ExperimentMode::lln_start;

  std::vector<std::vector<LlnRecord>> per(plan.replicates);
  parallel_for(plan.replicates, plan.threads, [&](int r) {
    const auto rep = sample_replicate(plan, r, true);
    const HittingResult h = exact_hitting(rep.graph);
    for (int v : targets) {
      LlnRecord rec;
      rec.replicate = r;
      rec.vertex = v;
      rec.block = rep.graph.block_of(v);
      const auto pred = lln_prediction(params, rec.block);
      rec.value = start ? h.h_start(v) : h.h_target(v);
      rec.prediction = start ? pred.h_v_pred : pred.h_w_pred;
      rec.ratio = rec.value / rec.prediction;
      rec.resamples = rep.resamples;
      per[r].push_back(rec);
    }
  });

  LlnResult out;
  out.mode = plan.mode;
  std::map<int, std::pair<double, int>> block_sums;
  for (int r = 0; r < plan.replicates; ++r) {
    if (!per[r].empty()) out.resamples_total += per[r].front().resamples;
    for (const auto& rec : per[r]) {
      out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(rec.ratio - 1.0));
      auto& [sum, count] = block_sums[rec.block];
      sum += rec.ratio;
      ++count;
      out.records.push_back(rec);
    }
  }
  for (const auto& [block, sc] : block_sums) {
    out.max_block_mean_deviation =
        std::max(out.max_block_mean_deviation, std::abs(sc.first / sc.second - 1.0));
  }
  return out;
}

namespace {

CltResult finish_clt(CltResult out, const ExperimentPlan& plan, double target_variance) {
  std::vector<double> stats;
  stats.reserve(out.records.size());
  for (const auto& rec : out.records) {
    stats.push_back(rec.statistic);
    out.resamples_total += rec.resamples;
  }
  out.summary = summarize_clt(stats, target_variance);
  out.histogram = histogram(stats, plan.histogram_bins);
  return out;
}

}  // namespace

CltResult run_clt_target(const ExperimentPlan& plan) {
  require_mode(plan, {ExperimentMode::clt_target});
  plan.validate();
  const DerivedParams params = derive(plan.config);
  const int w = plan.clt_vertex();
  const int block = plan.config.block_of(w);
  const CltAffine affine = clt_affine(params, block, plan.scaling);

  CltResult out;
  out.mode = plan.mode;
  out.scale = affine.scale;
  out.centre = affine.centre;
  out.records.resize(plan.replicates);
  parallel_for(plan.replicates, plan.threads, [&](int r) {
    const auto rep = sample_replicate(plan, r, true);
    auto& rec = out.records[r];
    rec.replicate = r;
    rec.vertex = w;
    rec.raw = exact_target_hitting(rep.graph, w);
    rec.statistic = affine.scale * (rec.raw - affine.centre);
    rec.resamples = rep.resamples;
  });
  return finish_clt(std::move(out), plan, affine.target_variance);
}

CltResult run_clt_edges(const ExperimentPlan& plan) {
  require_mode(plan, {ExperimentMode::clt_edges});
  plan.validate();
  const DerivedParams params = derive(plan.config);
  if (!(params.tau2 > 0.0)) throw ValidationError("degenerate: no edge randomness");
  const double tau = std::sqrt(params.tau2);
  const double mu = params.mu_in + params.mu_out;

  CltResult out;
  out.mode = plan.mode;
  out.scale = 1.0 / tau;
  out.centre = mu;
  out.records.resize(plan.replicates);
  parallel_for(plan.replicates, plan.threads, [&](int r) {
    const auto rep = sample_replicate(plan, r, false);
    auto& rec = out.records[r];
    rec.replicate = r;
    rec.vertex = -1;
    rec.raw = static_cast<double>(rep.graph.edge_count());
    rec.statistic = (rec.raw - mu) / tau;
  });
  return finish_clt(std::move(out), plan, 1.0);
}

std::vector<double> restandardize(const CltResult& result, const DerivedParams& params, int block,
                                  CltScaling scaling) {
  const CltAffine affine = clt_affine(params, block, scaling);
  std::vector<double> out;
  out.reserve(result.records.size());
  for (const auto& rec : result.records) out.push_back(affine.scale * (rec.raw - affine.centre));
  return out;
}

double BoundsResult::fraction_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return pass_fraction[i];
  }
  throw ValidationError("no bound named '" + name + "'");
}

BoundsResult run_bounds(const ExperimentPlan& plan) {
  require_mode(plan, {ExperimentMode::bounds});
  plan.validate();
  const DerivedParams params = derive(plan.config);

  BoundsResult out;
  out.records.resize(plan.replicates);
  parallel_for(plan.replicates, plan.threads, [&](int r) {
    const auto rep = sample_replicate(plan, r, true);
    const GraphSpectra spectra = graph_spectra(rep.graph, params);
    auto& rec = out.records[r];
    rec.replicate = r;
    rec.reports = norm_bounds(spectra, params, plan.bounds);
    rec.minimal_c = minimal_x_constant(spectra, params);
    rec.weyl = weyl_check(spectra);
    rec.resamples = rep.resamples;
  });

  for (const auto& report : out.records.front().reports) out.names.push_back(report.name);
  out.pass_fraction.assign(out.names.size(), 0.0);
  out.calibrated_c = -std::numeric_limits<double>::infinity();
  for (const auto& rec : out.records) {
    for (std::size_t i = 0; i < rec.reports.size(); ++i) {
      if (rec.reports[i].satisfied) out.pass_fraction[i] += 1.0;
    }
    out.calibrated_c = std::max(out.calibrated_c, rec.minimal_c);
    out.weyl_all_hold = out.weyl_all_hold && rec.weyl.holds();
    out.resamples_total += rec.resamples;
  }
  for (auto& f : out.pass_fraction) f /= plan.replicates;
  return out;
}

// ---------------------------------------------------------------------------

std::string lln_csv(const LlnResult& result) {
  std::string out = "replicate,vertex,block,value,prediction,ratio,resamples\n";
  for (const auto& r : result.records) {
    out += csv_row({std::to_string(r.replicate), std::to_string(r.vertex), std::to_string(r.block),
                    fmt_double(r.value), fmt_double(r.prediction), fmt_double(r.ratio),
                    std::to_string(r.resamples)});
  }
  out += "# mode=" + to_string(result.mode) + "\n";
  out += "# max_abs_deviation=" + fmt_double(result.max_abs_deviation) + "\n";
  out += "# max_block_mean_deviation=" + fmt_double(result.max_block_mean_deviation) + "\n";
  out += "# resamples_total=" + std::to_string(result.resamples_total) + "\n";
  return out;
}

std::string clt_csv(const CltResult& result) {
  std::string out = "replicate,vertex,raw,statistic,resamples\n";
  for (const auto& r : result.records) {
    out += csv_row({std::to_string(r.replicate), std::to_string(r.vertex), fmt_double(r.raw),
                    fmt_double(r.statistic), std::to_string(r.resamples)});
  }
  const auto& s = result.summary;
  out += "# mode=" + to_string(result.mode) + "\n";
  out += "# scale=" + fmt_double(result.scale) + "\n";
  out += "# centre=" + fmt_double(result.centre) + "\n";
  out += "# n=" + std::to_string(s.n) + "\n";
  out += "# mean=" + fmt_double(s.mean) + "\n";
  out += "# variance=" + fmt_double(s.variance) + "\n";
  out += "# skewness=" + fmt_double(s.skewness) + "\n";
  out += "# ks_distance=" + fmt_double(s.ks_distance) + "\n";
  out += "# target_variance=" + fmt_double(s.target_variance) + "\n";
  out += std::string("# degenerate=") + (s.degenerate ? "true" : "false") + "\n";
  out += "# resamples_total=" + std::to_string(result.resamples_total) + "\n";
  return out;
}

std::string clt_summary_csv(const CltSummary& s) {
  std::string out = "n,mean,variance,skewness,ks_distance,target_variance,degenerate\n";
  out += csv_row({std::to_string(s.n), fmt_double(s.mean), fmt_double(s.variance),
                  fmt_double(s.skewness), fmt_double(s.ks_distance), fmt_double(s.target_variance),
                  s.degenerate ? "true" : "false"});
  return out;
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::string out = "bin_left,bin_right,count\n";
  for (const auto& b : bins) {
    out += csv_row({fmt_double(b.left), fmt_double(b.right), std::to_string(b.count)});
  }
  return out;
}

std::string bounds_records_csv(const BoundsResult& result, const BoundOptions& options) {
  std::string out = "replicate,bound,empirical,envelope,satisfied,minimal_c,weyl_holds\n";
  for (const auto& rec : result.records) {
    for (const auto& b : rec.reports) {
      out += csv_row({std::to_string(rec.replicate), b.name, fmt_double(b.empirical),
                      fmt_double(b.envelope), b.satisfied ? "true" : "false",
                      fmt_double(rec.minimal_c), rec.weyl.holds() ? "true" : "false"});
    }
  }
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    out += "# pass_fraction." + result.names[i] + "=" + fmt_double(result.pass_fraction[i]) + "\n";
  }
  out += "# calibrated_c=" + fmt_double(result.calibrated_c) + "\n";
  out += "# c=" + fmt_double(options.c) + "\n";
  out += "# slack=" + fmt_double(options.slack) + "\n";
  out += std::string("# weyl_all_hold=") + (result.weyl_all_hold ? "true" : "false") + "\n";
  out += "# resamples_total=" + std::to_string(result.resamples_total) + "\n";
  return out;
}

}  // namespace sbmh
