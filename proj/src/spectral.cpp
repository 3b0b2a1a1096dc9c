#include "sbmh/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "sbmh/csv.hpp"
#include "sbmh/error.hpp"

namespace sbmh {

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::P_prime: return "P_prime";
    case MatrixKind::EA_prime: return "EA_prime";
    case MatrixKind::A_prime: return "A_prime";
    case MatrixKind::X: return "X";
    case MatrixKind::B: return "B";
    case MatrixKind::R_infnorm_only: return "R_infnorm_only";
    case MatrixKind::other: return "other";
  }
  return "other";
}

MatrixKind parse_matrix_kind(const std::string& s) {
  for (auto k : {MatrixKind::P_prime, MatrixKind::EA_prime, MatrixKind::A_prime, MatrixKind::X,
                 MatrixKind::B}) {
    if (s == to_string(k)) return k;
  }
  throw ValidationError("unknown matrix '" + s + "' (expected B, A_prime, X, P_prime or EA_prime)");
}

SpectralDecomposition decompose(const Eigen::MatrixXd& matrix, MatrixKind kind,
                                bool with_vectors) {
  if (matrix.rows() != matrix.cols()) throw ValidationError("matrix is not square");
  const Eigen::Index n = matrix.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      matrix, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge for " + to_string(kind));
  }

  SpectralDecomposition out;
  out.kind = kind;
  out.eigenvalues = solver.eigenvalues().reverse();
  if (!with_vectors) return out;

  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = out.eigenvectors.col(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-12) {
        if (col(i) < 0) col *= -1.0;
        break;
      }
    }
  }
  const Eigen::MatrixXd diff =
      matrix * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
  out.residual = n ? diff.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

double inf_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd block_probability_matrix(const DerivedParams& params) {
  const int m = params.config.m;
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(m, m, params.config.q);
  for (int b = 0; b < m; ++b) p(b, b) = params.config.p[b];
  return p;
}

Eigen::MatrixXd rescaled_block_matrix(const DerivedParams& params) {
  const int m = params.config.m;
  for (double g : params.gamma) {
    if (!(g > 0.0)) throw ValidationError("every expected degree gamma_m must be positive");
  }
  Eigen::VectorXd inv_sqrt(m);
  for (int b = 0; b < m; ++b) inv_sqrt(b) = 1.0 / std::sqrt(params.gamma[b]);
  return inv_sqrt.asDiagonal() * block_probability_matrix(params) * inv_sqrt.asDiagonal();
}

namespace {

void check_identical_p_eigenvalues(const DerivedParams& params, const Eigen::VectorXd& ev) {
  if (!params.config.identical_p()) return;
  const int m = params.config.m;
  const double p = params.config.p.front();
  const double q = params.config.q;
  Eigen::VectorXd expected(m);
  expected(0) = p + (m - 1) * q;
  for (int k = 1; k < m; ++k) expected(k) = p - q;
  std::sort(expected.begin(), expected.end(), std::greater<>());
  const double err = (ev - expected).cwiseAbs().maxCoeff();
  if (err > 1e-12) {
    throw NumericalError("block matrix eigenvalues deviate from p + (M-1)q, p - q by " +
                         fmt_double(err));
  }
}

}  // namespace

Eigen::VectorXd block_probability_eigenvalues(const DerivedParams& params) {
  Eigen::VectorXd ev = decompose(block_probability_matrix(params), MatrixKind::other, false).eigenvalues;
  check_identical_p_eigenvalues(params, ev);
  return ev;
}

SpectralDecomposition block_matrix_spectrum(const DerivedParams& params) {
  block_probability_eigenvalues(params);
  return decompose(rescaled_block_matrix(params), MatrixKind::P_prime, true);
}

CheegerBound cheeger_bound(const DerivedParams& params) {
  const int m = params.config.m;
  const double q = params.config.q;
  if (m == 1) throw ValidationError("Cheeger envelope is undefined for a single block (M = 1)");
  if (!(q > 0.0)) throw ValidationError("Cheeger envelope requires q > 0");
  const double cross = (m - 1) * q;
  const double ratio = params.config.p.back() / cross;
  CheegerBound out;
  out.conductance_witness = cross / (params.config.p.back() + cross);
  out.bound = 1.0 - 2.0 / ((1.0 + ratio) * (1.0 + ratio));
  return out;
}

SpectralDecomposition expected_adjacency_spectrum(const DerivedParams& params) {
  const int n = params.config.n;
  const int m = params.config.m;
  const Eigen::VectorXd block_ev = block_matrix_spectrum(params).eigenvalues;
  std::vector<double> all(n, 0.0);
  const double k = static_cast<double>(n) / m;
  for (int b = 0; b < m; ++b) all[b] = k * block_ev(b);
  std::sort(all.begin(), all.end(), std::greater<>());
  SpectralDecomposition out;
  out.kind = MatrixKind::EA_prime;
  out.eigenvalues = Eigen::Map<Eigen::VectorXd>(all.data(), n);
  return out;
}

Eigen::MatrixXd expected_adjacency_dense(const DerivedParams& params) {
  const int n = params.config.n;
  const Eigen::MatrixXd pp = rescaled_block_matrix(params);
  Eigen::MatrixXd out(n, n);
  for (int v = 0; v < n; ++v) {
    for (int w = 0; w < n; ++w) out(v, w) = pp(params.config.block_of(v), params.config.block_of(w));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  const int n = g.n();
  Eigen::MatrixXd a(n, n);
  const auto& adj = g.adjacency();
  for (int v = 0; v < n; ++v) {
    for (int w = 0; w < n; ++w) a(v, w) = adj[static_cast<std::size_t>(v) * n + w];
  }
  return a;
}

Eigen::VectorXd inverse_sqrt_degrees(const Graph& g) {
  Eigen::VectorXd s(g.n());
  for (int v = 0; v < g.n(); ++v) {
    if (g.degree(v) == 0) {
      throw ValidationError("isolated vertex " + std::to_string(v) +
                            ": graph violates connectivity assumption");
    }
    s(v) = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  }
  return s;
}

}  // namespace

Eigen::MatrixXd normalized_adjacency(const Graph& g) {
  const Eigen::VectorXd s = inverse_sqrt_degrees(g);
  return s.asDiagonal() * adjacency_matrix(g) * s.asDiagonal();
}

RescaledMatrices build_rescaled(const Graph& g, const DerivedParams& params) {
  if (g.n() != params.config.n) throw ValidationError("graph and parameters disagree on n");
  const int n = g.n();
  const Eigen::VectorXd s = inverse_sqrt_degrees(g);
  Eigen::VectorXd e(n);
  for (int v = 0; v < n; ++v) e(v) = 1.0 / std::sqrt(params.gamma[params.config.block_of(v)]);

  RescaledMatrices out;
  const Eigen::MatrixXd a = adjacency_matrix(g);
  out.a_prime = e.asDiagonal() * a * e.asDiagonal();
  out.b = s.asDiagonal() * a * s.asDiagonal();
  out.x = out.a_prime - expected_adjacency_dense(params);
  out.r = out.b - out.a_prime;
  return out;
}

GraphSpectra graph_spectra(const Graph& g, const DerivedParams& params) {
  GraphSpectra out;
  {
    RescaledMatrices mats = build_rescaled(g, params);
    out.r_inf_norm = inf_norm(mats.r);
    mats.r.resize(0, 0);
    out.trace_b = mats.b.trace();
    out.lambda_b = decompose(mats.b, MatrixKind::B, false).eigenvalues;
    mats.b.resize(0, 0);
    out.lambda_a_prime = decompose(mats.a_prime, MatrixKind::A_prime, false).eigenvalues;
    mats.a_prime.resize(0, 0);
    const Eigen::VectorXd lx = decompose(mats.x, MatrixKind::X, false).eigenvalues;
    out.x_norm = lx.size() ? std::max(std::abs(lx(0)), std::abs(lx(lx.size() - 1))) : 0.0;
  }
  out.lambda_expected = expected_adjacency_spectrum(params).eigenvalues;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Envelopes {
  double x;    // ||X||_2 envelope with constant c
  double o_r;  // R-type O-term
  double o_x;  // X-type O-term
};

Envelopes envelopes(const DerivedParams& params, double c) {
  const double n = params.config.n;
  const double logn = std::log(n);
  const double ns2 = n * params.sigma2;
  Envelopes e;
  e.x = (2.0 * std::sqrt(ns2) + c * logn * std::pow(ns2, 0.25)) / params.gamma_min;
  e.o_r = std::pow(logn / params.gamma_min, 0.25) * std::sqrt(params.gamma_max / params.gamma_min);
  e.o_x = (std::sqrt(ns2) + c * logn * std::pow(ns2, 0.25)) / params.gamma_min;
  return e;
}

// Absolute slack for round-off, so exactly-zero envelopes (deterministic
// graphs) are not failed by 1e-16 residue.
constexpr double kRoundOff = 1e-12;

BoundReport report(std::string name, double empirical, double envelope) {
  return {std::move(name), empirical, envelope, empirical <= envelope + kRoundOff};
}

}  // namespace

std::vector<BoundReport> norm_bounds(const GraphSpectra& spectra, const DerivedParams& params,
                                     const BoundOptions& options) {
  const Envelopes env = envelopes(params, options.c);
  const double logn = std::log(static_cast<double>(params.config.n));
  std::vector<BoundReport> out;

  out.push_back(report("x_norm", spectra.x_norm, env.x));

  double r_env = 0.0;
  if (options.r_form == RBoundForm::general) {
    r_env = options.r_constant * env.o_r;
  } else {
    r_env = options.r_constant * std::sqrt(logn / params.gamma_min);
  }
  out.push_back(report("r_inf_norm", spectra.r_inf_norm, options.slack * r_env));

  // lambda_expected holds (N/M) lambda_k(P'_M) and N - M zeros in descending
  // order, so negative block eigenvalues are matched against the bottom of
  // the spectrum of B rather than against its top M.
  const int m = params.config.m;
  double dev = 0.0;
  for (Eigen::Index k = 0; k < spectra.lambda_b.size(); ++k) {
    dev = std::max(dev, std::abs(spectra.lambda_b(k) - spectra.lambda_expected(k)));
  }
  const double o_terms = options.slack * (env.o_r + env.o_x);
  out.push_back(report("eigenvalues_b", dev, o_terms));

  if (m >= 2 && params.config.q > 0.0 && spectra.lambda_b.size() >= 2) {
    out.push_back(report("lambda2_b", spectra.lambda_b(1), cheeger_bound(params).bound + o_terms));
  }
  return out;
}

std::vector<BoundReport> norm_bounds(const Graph& g, const DerivedParams& params,
                                     const BoundOptions& options) {
  return norm_bounds(graph_spectra(g, params), params, options);
}

double minimal_x_constant(const GraphSpectra& spectra, const DerivedParams& params) {
  const double n = params.config.n;
  const double ns2 = n * params.sigma2;
  if (!(ns2 > 0.0)) return 0.0;
  return (spectra.x_norm * params.gamma_min - 2.0 * std::sqrt(ns2)) /
         (std::log(n) * std::pow(ns2, 0.25));
}

WeylCheck weyl_check(const GraphSpectra& spectra) {
  WeylCheck out{-spectra.r_inf_norm, -spectra.x_norm};
  for (Eigen::Index k = 0; k < spectra.lambda_b.size(); ++k) {
    out.b_vs_a_prime_excess =
        std::max(out.b_vs_a_prime_excess,
                 std::abs(spectra.lambda_b(k) - spectra.lambda_a_prime(k)) - spectra.r_inf_norm);
    out.a_prime_vs_expected_excess =
        std::max(out.a_prime_vs_expected_excess,
                 std::abs(spectra.lambda_a_prime(k) - spectra.lambda_expected(k)) - spectra.x_norm);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string spectrum_csv(const SpectralDecomposition& spec, bool with_vectors) {
  with_vectors = with_vectors && spec.has_vectors();
  const Eigen::Index n = spec.size();
  std::vector<std::string> header{"k", "lambda"};
  if (with_vectors) {
    for (Eigen::Index i = 0; i < spec.eigenvectors.rows(); ++i) header.push_back("u_" + std::to_string(i));
  }
  std::string out = csv_row(header);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::vector<std::string> row{std::to_string(k), fmt_double(spec.eigenvalues(k))};
    if (with_vectors) {
      for (Eigen::Index i = 0; i < spec.eigenvectors.rows(); ++i) {
        row.push_back(fmt_double(spec.eigenvectors(i, k)));
      }
    }
    out += csv_row(row);
  }
  out += "# matrix=" + to_string(spec.kind) + "\n";
  if (spec.residual) out += "# residual=" + fmt_double(*spec.residual) + "\n";
  return out;
}

std::string bounds_csv(const std::vector<BoundReport>& reports) {
  std::string out = "bound,empirical,envelope,satisfied\n";
  for (const auto& r : reports) {
    out += csv_row({r.name, fmt_double(r.empirical), fmt_double(r.envelope),
                    r.satisfied ? "true" : "false"});
  }
  return out;
}

}  // namespace sbmh
