#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbmh/graph.hpp"
#include "sbmh/model.hpp"

namespace sbmh {

/// Which matrix a decomposition belongs to.
///   P_prime   Gamma^{-1/2} P_M Gamma^{-1/2}            (M x M)
///   EA_prime  expected rescaled adjacency, P'_M (x) J   (N x N)
///   A_prime   (E D)^{-1/2} A (E D)^{-1/2}
///   X         A' - E A'
///   B         D^{-1/2} A D^{-1/2}
///   R         B - A'; only its infinity norm is ever reported
enum class MatrixKind { P_prime, EA_prime, A_prime, X, B, R_infnorm_only, other };

std::string to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(const std::string& s);

struct SpectralDecomposition {
  MatrixKind kind = MatrixKind::other;
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues(k); empty if not computed
  /// max_k ||M u_k - lambda_k u_k||_inf; empty when only eigenvalues were computed.
  std::optional<double> residual;

  bool has_vectors() const { return eigenvectors.size() > 0; }
  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Full symmetric eigendecomposition, eigenvalues descending. Each
/// eigenvector is unit length with its first nonzero entry positive.
/// Throws NumericalError if the solver fails.
SpectralDecomposition decompose(const Eigen::MatrixXd& matrix, MatrixKind kind,
                                bool with_vectors = true);

/// max_v sum_w |m_vw|
double inf_norm(const Eigen::MatrixXd& m);

// ---------------------------------------------------------------------------
// Block-level matrices.

Eigen::MatrixXd block_probability_matrix(const DerivedParams& params);  // P_M
Eigen::MatrixXd rescaled_block_matrix(const DerivedParams& params);     // P'_M

/// Eigenvalues of P_M, descending. For identical p they are checked against
/// p + (M-1)q and p - q (M-1 times) to 1e-12; a mismatch throws
/// NumericalError.
Eigen::VectorXd block_probability_eigenvalues(const DerivedParams& params);

/// Decomposition of P'_M. Requires every gamma_m > 0. Performs the same
/// identical-p check as block_probability_eigenvalues.
SpectralDecomposition block_matrix_spectrum(const DerivedParams& params);

struct CheegerBound {
  double bound = 0.0;                // 1 - 2 (1 + p_M / ((M-1) q))^{-2}
  double conductance_witness = 0.0;  // conductance of the singleton cut {M}
};

/// Envelope for (N/M) lambda_2(P'_M) from the conductance of the weighted
/// block graph. Throws ValidationError for M = 1 (no second eigenvalue) or
/// q = 0 (the singleton cut has no weight).
///
/// The envelope is not a valid upper bound everywhere: it fails when
/// (M-1)q dominates the smallest p, e.g. p = q with M >= 4.
CheegerBound cheeger_bound(const DerivedParams& params);

/// Spectrum of E A' from its Kronecker structure: (N/M) lambda_m(P'_M) for
/// m = 1..M and N - M zeros, descending. No N x N matrix is formed.
SpectralDecomposition expected_adjacency_spectrum(const DerivedParams& params);

/// The assembled N x N expected rescaled adjacency (test oracle, small N).
Eigen::MatrixXd expected_adjacency_dense(const DerivedParams& params);

// ---------------------------------------------------------------------------
// Rescaled random matrices.

struct RescaledMatrices {
  Eigen::MatrixXd a_prime;
  Eigen::MatrixXd b;
  Eigen::MatrixXd x;
  Eigen::MatrixXd r;
};

/// B = D^{-1/2} A D^{-1/2}. Throws ValidationError on an isolated vertex.
Eigen::MatrixXd normalized_adjacency(const Graph& g);

/// A', B, X = A' - E A', R = B - A' for a sampled graph.
/// Throws ValidationError on an isolated vertex.
RescaledMatrices build_rescaled(const Graph& g, const DerivedParams& params);

/// Everything the norm and eigenvalue bounds need from one graph.
struct GraphSpectra {
  Eigen::VectorXd lambda_b;         // descending
  Eigen::VectorXd lambda_a_prime;   // descending
  Eigen::VectorXd lambda_expected;  // spectrum of E A', descending
  double x_norm = 0.0;              // ||X||_2, exact
  double r_inf_norm = 0.0;          // ||R||_inf
  double trace_b = 0.0;
};

GraphSpectra graph_spectra(const Graph& g, const DerivedParams& params);

// ---------------------------------------------------------------------------
// Bounds.

/// Shape of the ||R||_inf envelope.
///   general:     r_constant (log N / gamma_min)^{1/4} sqrt(gamma_max / gamma_min)
///   identical_p: r_constant sqrt(log N / gamma)
enum class RBoundForm { general, identical_p };

struct BoundOptions {
  double c = 1.0;        // constant of the ||X||_2 envelope
  double slack = 1.5;    // multiplies the R and eigenvalue envelopes
  RBoundForm r_form = RBoundForm::general;
  double r_constant = 1.7320508075688772;  // sqrt(3); 1 for identical_p
};

struct BoundReport {
  std::string name;
  double empirical = 0.0;
  double envelope = 0.0;
  bool satisfied = false;
};

/// Reports, in order:
///   x_norm          ||X||_2 vs (2 sqrt(N sigma^2) + c log N (N sigma^2)^{1/4}) / gamma_min
///   r_inf_norm      ||R||_inf vs the RBoundForm envelope times slack
///   eigenvalues_b   max_k |lambda_k(B) - lambda_k(E A')| vs slack * (O_R + O_X),
///                   both spectra sorted descending
///   lambda2_b       lambda_2(B) vs cheeger_bound + slack * (O_R + O_X)
///                   (only when M >= 2 and q > 0)
/// where O_R = (log N / gamma_min)^{1/4} sqrt(gamma_max / gamma_min) and
/// O_X = (sqrt(N sigma^2) + c log N (N sigma^2)^{1/4}) / gamma_min.
std::vector<BoundReport> norm_bounds(const GraphSpectra& spectra, const DerivedParams& params,
                                     const BoundOptions& options = {});
std::vector<BoundReport> norm_bounds(const Graph& g, const DerivedParams& params,
                                     const BoundOptions& options = {});

/// Smallest c for which the ||X||_2 envelope holds on this graph (may be
/// negative when the leading term alone suffices; 0 when sigma^2 = 0).
double minimal_x_constant(const GraphSpectra& spectra, const DerivedParams& params);

/// Largest violation of the Weyl perturbation inequalities
///   |lambda_k(B) - lambda_k(A')| <= ||R||_inf  and
///   |lambda_k(A') - lambda_k(E A')| <= ||X||_2.
/// Values <= 0 mean the inequality holds with room to spare.
struct WeylCheck {
  double b_vs_a_prime_excess = 0.0;
  double a_prime_vs_expected_excess = 0.0;
  bool holds(double tol = 1e-9) const {
    return b_vs_a_prime_excess <= tol && a_prime_vs_expected_excess <= tol;
  }
};
WeylCheck weyl_check(const GraphSpectra& spectra);

// ---------------------------------------------------------------------------
// CSV.

/// Header "k,lambda" (plus u_0..u_{n-1} when with_vectors), one row per k.
std::string spectrum_csv(const SpectralDecomposition& spec, bool with_vectors = false);
/// Header "bound,empirical,envelope,satisfied".
std::string bounds_csv(const std::vector<BoundReport>& reports);

}  // namespace sbmh
