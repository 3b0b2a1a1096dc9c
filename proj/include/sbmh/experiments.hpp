#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbmh/graph.hpp"
#include "sbmh/model.hpp"
#include "sbmh/spectral.hpp"
#include "sbmh/stats.hpp"

namespace sbmh {

enum class ExperimentMode { lln_start, lln_target, clt_target, clt_edges, bounds };
ExperimentMode parse_experiment_mode(const std::string& s);
std::string to_string(ExperimentMode mode);

/// Which vertices a replicate reports on.
///   one_per_block  the first vertex of every block
///   fixed          plan.fixed_targets
///   all            every vertex
enum class TargetRule { one_per_block, fixed, all };
TargetRule parse_target_rule(const std::string& s);
std::string to_string(TargetRule rule);

struct ExperimentPlan {
  BlockModelConfig config;
  int replicates = 1;
  ExperimentMode mode = ExperimentMode::lln_start;
  TargetRule targets = TargetRule::one_per_block;
  std::vector<int> fixed_targets;
  std::uint64_t base_seed = 0;
  int threads = 0;  // 0: hardware concurrency

  // clt_target: the statistic is taken at the first vertex of this block,
  // unless a single fixed target is given.
  CltScaling scaling = CltScaling::general;
  int designated_block = 0;
  int histogram_bins = 20;

  BoundOptions bounds;

  // Disconnected draws are resampled with derive_seed(base, r, attempt) up
  // to this many times per replicate before giving up.
  int max_resamples = 100;

  /// Throws ValidationError for replicates < 1, unresolvable targets, a bad
  /// designated block or an invalid config.
  void validate() const;
  std::vector<int> resolve_targets() const;
  int clt_vertex() const;
};

/// Graph for replicate r. With require_connected, disconnected draws are
/// redrawn (attempt 1, 2, ...); `resamples` counts them. Throws
/// NumericalError after plan.max_resamples failed attempts.
struct ReplicateGraph {
  Graph graph;
  std::uint64_t seed = 0;
  int resamples = 0;
};
ReplicateGraph sample_replicate(const ExperimentPlan& plan, int replicate, bool require_connected);

// ---------------------------------------------------------------------------

struct LlnRecord {
  int replicate = 0;
  int vertex = 0;
  int block = 0;
  double value = 0.0;       // H^v (start mode) or H_w (target mode)
  double prediction = 0.0;  // N or N gamma_bar / gamma_block
  double ratio = 0.0;
  int resamples = 0;
};

struct LlnResult {
  ExperimentMode mode = ExperimentMode::lln_start;
  std::vector<LlnRecord> records;
  double max_abs_deviation = 0.0;         // max over records of |ratio - 1|
  double max_block_mean_deviation = 0.0;  // max over blocks of |mean ratio - 1|
  int resamples_total = 0;
};

LlnResult run_lln(const ExperimentPlan& plan);

struct CltRecord {
  int replicate = 0;
  int vertex = 0;
  double raw = 0.0;        // H_w or |E|
  double statistic = 0.0;  // standardized
  int resamples = 0;
};

struct CltResult {
  ExperimentMode mode = ExperimentMode::clt_target;
  std::vector<CltRecord> records;
  CltSummary summary;
  std::vector<HistogramBin> histogram;
  double scale = 0.0;
  double centre = 0.0;
  int resamples_total = 0;
};

/// Standardized H_w at the designated target over replicates.
CltResult run_clt_target(const ExperimentPlan& plan);

/// (|E| - (mu_in + mu_out)) / tau over replicates. Disconnected draws are
/// kept. Throws ValidationError "degenerate: no edge randomness" if tau = 0.
CltResult run_clt_edges(const ExperimentPlan& plan);

/// Re-standardizes stored raw H_w values under another scaling.
std::vector<double> restandardize(const CltResult& result, const DerivedParams& params,
                                  int block, CltScaling scaling);

struct BoundsRecord {
  int replicate = 0;
  std::vector<BoundReport> reports;
  double minimal_c = 0.0;
  WeylCheck weyl;
  int resamples = 0;
};

struct BoundsResult {
  std::vector<BoundsRecord> records;
  std::vector<std::string> names;
  std::vector<double> pass_fraction;  // parallel to names
  double calibrated_c = 0.0;          // max minimal_c over replicates
  bool weyl_all_hold = true;
  int resamples_total = 0;

  double fraction_of(const std::string& name) const;
};

BoundsResult run_bounds(const ExperimentPlan& plan);

// ---------------------------------------------------------------------------
// Output.

std::string lln_csv(const LlnResult& result);
std::string clt_csv(const CltResult& result);
std::string clt_summary_csv(const CltSummary& summary);
std::string histogram_csv(const std::vector<HistogramBin>& bins);
std::string bounds_records_csv(const BoundsResult& result, const BoundOptions& options);

}  // namespace sbmh
