#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sbmh {

/// Parameters of the stochastic block model G_N(M, P): N vertices in M
/// equal blocks, intra-block edge probabilities p (one per block, sorted
/// descending) and a common inter-block probability q.
///
/// Vertices and blocks are 0-based throughout the library: vertex v lives in
/// block v / (N / M).
struct BlockModelConfig {
  int n = 0;
  int m = 1;
  std::vector<double> p;
  double q = 0.0;
  bool allow_loops = true;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless 1 <= m < n, n % m == 0, p.size() == m,
  /// p sorted descending and all probabilities lie in [0, 1].
  void validate() const;

  int block_size() const { return n / m; }
  int block_of(int v) const { return v / block_size(); }
  bool identical_p() const;
};

/// Scalar quantities derived from a configuration. Fields that are only
/// meaningful for identical intra-block probabilities are empty otherwise.
struct DerivedParams {
  BlockModelConfig config;

  std::vector<double> gamma;  // expected degree of a vertex in block m
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  double gamma_bar = 0.0;
  double p_bar = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double sigma2 = 0.0;
  std::vector<double> upsilon2;  // degree variance per block
  double upsilon_bar2 = 0.0;

  // Edge-count moments. Within-block pairs include loops when the config
  // allows them.
  double mu_in = 0.0;
  double mu_out = 0.0;
  double tau_in2 = 0.0;
  double tau_out2 = 0.0;
  double tau2 = 0.0;

  /// Finite-N surrogate (M-1)q / p_min. Empty when M = 1 or q = 0; use
  /// kappa_of() to get a diagnostic in those cases.
  std::optional<double> kappa;

  // Identical-p only.
  std::optional<double> kappa_tilde;  // (M-1)q(1-q) / (p(1-p))
  std::optional<double> zeta;         // (1-p) / (1-q)
  std::optional<double> rho_n;
  std::optional<double> alpha;

  bool identical_p() const { return kappa_tilde.has_value(); }
};

/// Validates `config` and computes every derived quantity. Deterministic.
DerivedParams derive(const BlockModelConfig& config);

/// kappa, or throws ValidationError: "disconnected-in-expectation" when
/// q = 0 and M > 1, "undefined for M = 1" when there is a single block.
double kappa_of(const DerivedParams& params);

/// Variance correction for the identical-p target CLT:
///   kt (2 zeta - 1 + kt zeta^2) / (1 + zeta kt)^2  for kt in (0, inf),
///   0 otherwise.
double alpha_of(double kappa_tilde, double zeta);

// ---------------------------------------------------------------------------
// Asymptotic conditions evaluated at a concrete N.

enum class ConditionMode { lln, clt, identical_p };

/// "small" conditions (left -> 0 or left << right) pass when
/// ratio = lhs / rhs <= threshold; "large" conditions (left >> right) pass
/// when ratio >= 1 / threshold.
enum class ConditionDirection { small, large };

struct ConditionRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  ConditionDirection direction = ConditionDirection::small;
  bool pass = false;
};

struct ConditionReport {
  ConditionMode mode = ConditionMode::lln;
  double threshold = 0.1;
  std::vector<ConditionRow> rows;
  std::optional<double> kappa;
  std::optional<double> kappa_tilde;

  const ConditionRow* find(const std::string& name) const;
  bool all_pass() const;
};

ConditionMode parse_condition_mode(const std::string& s);
std::string to_string(ConditionMode mode);

/// Evaluates each condition relevant to `mode` at the configured N. Never
/// throws for a valid config; every condition is reported with its ratio.
ConditionReport check_conditions(const BlockModelConfig& config,
                                 ConditionMode mode, double threshold = 0.1);

/// CSV with header condition,lhs,rhs,ratio,pass and '#' footer lines.
std::string to_csv(const ConditionReport& report);

// ---------------------------------------------------------------------------
// Law-of-large-numbers predictions and CLT standardization.

struct LlnPrediction {
  double h_v_pred = 0.0;  // start-averaged hitting time, N
  double h_w_pred = 0.0;  // target-averaged, N * gamma_bar / gamma_block
};

LlnPrediction lln_prediction(const DerivedParams& params, int block);

enum class CltScaling { general, identical_p };

CltScaling parse_clt_scaling(const std::string& s);
std::string to_string(CltScaling scaling);

struct StandardizedStatistic {
  double value = 0.0;
  double target_variance = 1.0;  // limit law is N(0, target_variance)
};

/// Affine standardization of a target-averaged hitting time h_w for a
/// target in `block`.
///   general:     gamma_m^2 / (N upsilon_m gamma_bar) * (h_w - N gamma_bar / gamma_m), variance 1
///   identical_p: rho_N * (h_w - N), variance 1 - alpha
/// identical_p on heterogeneous p throws ValidationError.
StandardizedStatistic clt_standardize(const DerivedParams& params, int block,
                                      double h_w,
                                      CltScaling scaling = CltScaling::general);

/// The slope and centre used by clt_standardize, exposed for reporting.
struct CltAffine {
  double scale = 0.0;
  double centre = 0.0;
  double target_variance = 1.0;
};
CltAffine clt_affine(const DerivedParams& params, int block, CltScaling scaling);

}  // namespace sbmh
