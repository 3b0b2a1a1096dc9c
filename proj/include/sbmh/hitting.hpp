#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbmh/graph.hpp"
#include "sbmh/spectral.hpp"

namespace sbmh {

/// Hitting times of the simple random walk on a connected graph. A vertex
/// with a loop stays put with probability a_vv / d_v.
///
///   H_w = sum_v pi_v H_vw   (average over the start, target w fixed)
///   H^v = sum_w pi_w H_vw   (average over the target, start v fixed)
struct HittingResult {
  std::optional<Eigen::MatrixXd> h_matrix;  // H(v, w), exact
  Eigen::VectorXd pi;                       // d_v / (2|E| - |L|)
  Eigen::VectorXd h_target;                 // H_w for every w
  Eigen::VectorXd h_start;                  // H^v for every v
  std::optional<double> spectral_h_start;
  std::optional<Eigen::VectorXd> spectral_h_target;
  std::string method;
};

/// pi_v = d_v / (2|E| - |L|).
Eigen::VectorXd stationary_distribution(const Graph& g);

/// All hitting times from one factorisation of the symmetrised fundamental
/// matrix: with B = D^{-1/2} A D^{-1/2} and u = sqrt(pi),
///   Z = D^{-1/2} (I - B + u u^T)^{-1} D^{1/2},  H_vw = (Z_ww - Z_vw) / pi_w.
/// O(N^3) total. Throws ValidationError if g is disconnected and
/// NumericalError if the factorisation fails.
HittingResult exact_hitting(const Graph& g);

/// H_w for a single target via one Cholesky solve of (I - B) with row and
/// column w removed. Cheaper than exact_hitting when only one target matters.
double exact_target_hitting(const Graph& g, int w);

/// The exact path plus the spectral formulas, for cross-checking.
HittingResult exact_and_spectral_hitting(const Graph& g, const SpectralDecomposition& spec_b);

/// sum_{k>=2} 1 / (1 - lambda_k(B)). Throws NumericalError when some
/// |1 - lambda_k| < 1e-12 for k >= 2.
double spectral_h_start(const SpectralDecomposition& spec_b);

/// ((2|E| - |L|) / d_w) sum_{k>=2} u_{k,w}^2 / (1 - lambda_k). Needs
/// unit-length eigenvectors.
double spectral_h_target(const SpectralDecomposition& spec_b, const Graph& g, int w);

/// Terms of the identity
///   sum_{k>=2} u_{k,w}^2 / (1 - lambda_k)
///     = 1 + B_ww - 2 pi_w + sum_{k>=2} lambda_k^2 u_{k,w}^2 / (1 - lambda_k).
struct ZnDecomposition {
  double one = 1.0;
  double b_ww = 0.0;
  double two_pi_w = 0.0;
  double tail = 0.0;
  double total = 0.0;   // 1 + b_ww - two_pi_w + tail
  double direct = 0.0;  // sum_{k>=2} u_{k,w}^2 / (1 - lambda_k)
};

ZnDecomposition zn_decomposition(const SpectralDecomposition& spec_b, const Graph& g, int w);

/// Envelope for the tail term: 1 / (kappa^2 gamma_min) in the strongly
/// assortative regime (kappa < 1), 1 / gamma_min otherwise. The tail is
/// expected to stay below constant * envelope.
struct TailEnvelope {
  double envelope = 0.0;
  bool assortative_branch = false;
};
TailEnvelope zn_tail_envelope(const DerivedParams& params);

/// Monte Carlo estimate of a hitting time from independent walks.
struct WalkEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_walks)
  std::int64_t n_walks = 0;     // completed walks used in the estimate
  std::int64_t truncated = 0;   // walks that hit max_steps, excluded
  std::int64_t max_steps = 0;
  bool biased() const { return truncated > 0; }
};

/// Estimates H_vw. Walk i uses its own generator seeded with
/// derive_seed(seed, i).
WalkEstimate mc_hitting(const Graph& g, int v, int w, std::int64_t n_walks,
                        std::int64_t max_steps, std::uint64_t seed);

/// Estimates H_w by starting each walk at a vertex drawn from pi.
WalkEstimate mc_target_hitting(const Graph& g, int w, std::int64_t n_walks,
                               std::int64_t max_steps, std::uint64_t seed);

/// Default step cap: 100 N log N, at least 1000.
std::int64_t default_max_steps(int n);

/// Rows "w,block,d_w,H_w_exact,H_w_spectral,H_w_mc,mc_stderr" for the
/// requested targets (missing values written as "nan") and a "# H_start=..."
/// footer.
struct HittingRow {
  int w = 0;
  double exact = 0.0;
  double spectral = 0.0;
  std::optional<WalkEstimate> mc;
};
std::string hitting_csv(const Graph& g, const std::vector<HittingRow>& rows,
                        double h_start_exact, double h_start_spectral);

}  // namespace sbmh
