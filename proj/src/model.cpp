#include "sbmh/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sbmh/csv.hpp"
#include "sbmh/error.hpp"

namespace sbmh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pairs_with_loops(double k) { return k * (k + 1.0) / 2.0; }
double pairs_without_loops(double k) { return k * (k - 1.0) / 2.0; }

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

ConditionRow make_row(std::string name, double lhs, double rhs,
                      ConditionDirection direction, double threshold) {
  ConditionRow row;
  row.name = std::move(name);
  row.lhs = lhs;
  row.rhs = rhs;
  row.direction = direction;
  if (rhs == 0.0) {
    row.ratio = lhs == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
  } else {
    row.ratio = lhs / rhs;
  }
  if (direction == ConditionDirection::small) {
    row.pass = row.ratio <= threshold;
  } else {
    row.pass = row.ratio >= 1.0 / threshold;
  }
  return row;
}

}  // namespace

void BlockModelConfig::validate() const {
  if (m < 1) throw ValidationError("block count m must be at least 1");
  if (n <= m) throw ValidationError("vertex count n must exceed block count m");
  if (n % m != 0) {
    throw ValidationError("vertex count n = " + std::to_string(n) +
                          " is not a multiple of m = " + std::to_string(m));
  }
  if (static_cast<int>(p.size()) != m) {
    throw ValidationError("p has " + std::to_string(p.size()) +
                          " entries, expected m = " + std::to_string(m));
  }
  for (double pm : p) {
    if (!in_unit_interval(pm)) throw ValidationError("p entries must lie in [0, 1]");
  }
  if (!in_unit_interval(q)) throw ValidationError("q must lie in [0, 1]");
  if (!std::is_sorted(p.begin(), p.end(), std::greater<>())) {
    throw ValidationError("p must be sorted in descending order (relabel the blocks)");
  }
}

bool BlockModelConfig::identical_p() const {
  return std::all_of(p.begin(), p.end(), [&](double x) { return x == p.front(); });
}

double alpha_of(double kappa_tilde, double zeta) {
  if (!(kappa_tilde > 0.0) || std::isinf(kappa_tilde) || !std::isfinite(zeta)) return 0.0;
  const double denom = 1.0 + zeta * kappa_tilde;
  return kappa_tilde * (2.0 * zeta - 1.0 + kappa_tilde * zeta * zeta) / (denom * denom);
}

DerivedParams derive(const BlockModelConfig& config) {
  config.validate();
  DerivedParams d;
  d.config = config;

  const int m = config.m;
  const double n = config.n;
  const double k = n / m;  // block size
  const double q = config.q;

  d.gamma.resize(m);
  d.upsilon2.resize(m);
  for (int b = 0; b < m; ++b) {
    const double pb = config.p[b];
    d.gamma[b] = k * pb + (m - 1) * k * q;
    d.upsilon2[b] = k * pb * (1.0 - pb) + (m - 1) * k * q * (1.0 - q);
  }
  d.gamma_min = *std::min_element(d.gamma.begin(), d.gamma.end());
  d.gamma_max = *std::max_element(d.gamma.begin(), d.gamma.end());
  d.gamma_bar = std::accumulate(d.gamma.begin(), d.gamma.end(), 0.0) / m;
  d.p_bar = std::accumulate(config.p.begin(), config.p.end(), 0.0) / m;
  d.p_min = config.p.back();
  d.p_max = config.p.front();
  d.upsilon_bar2 = std::accumulate(d.upsilon2.begin(), d.upsilon2.end(), 0.0) / m;

  double max_var = 0.0;
  for (double pb : config.p) max_var = std::max(max_var, pb * (1.0 - pb));
  d.sigma2 = (max_var + (m - 1) * q * (1.0 - q)) / m;

  const double within = config.allow_loops ? pairs_with_loops(k) : pairs_without_loops(k);
  const double between = pairs_without_loops(m) * k * k;
  for (double pb : config.p) {
    d.mu_in += within * pb;
    d.tau_in2 += within * pb * (1.0 - pb);
  }
  d.mu_out = between * q;
  d.tau_out2 = between * q * (1.0 - q);
  d.tau2 = d.tau_in2 + d.tau_out2;

  if (m > 1 && q > 0.0) {
    d.kappa = d.p_min > 0.0 ? (m - 1) * q / d.p_min : kInf;
  }

  if (config.identical_p()) {
    const double p = config.p.front();
    const double num = (m - 1) * q * (1.0 - q);
    const double den = p * (1.0 - p);
    const double kt = den > 0.0 ? num / den : (num > 0.0 ? kInf : 0.0);
    const double zeta = q < 1.0 ? (1.0 - p) / (1.0 - q) : (p == 1.0 ? 1.0 : kInf);
    d.kappa_tilde = kt;
    d.zeta = zeta;
    d.alpha = alpha_of(kt, zeta);
    if (std::isinf(kt)) {
      d.rho_n = std::sqrt((m - 1) * q / (n * m * (1.0 - q)));
    } else {
      d.rho_n = std::sqrt(p / (n * m * (1.0 - p)));
    }
  }
  return d;
}

double kappa_of(const DerivedParams& params) {
  if (params.config.m == 1) {
    throw ValidationError("kappa is undefined for a single block (M = 1)");
  }
  if (params.config.q == 0.0) {
    throw ValidationError(
        "disconnected-in-expectation: q = 0 with M > 1 leaves the blocks unlinked");
  }
  return *params.kappa;
}

// ---------------------------------------------------------------------------

const ConditionRow* ConditionReport::find(const std::string& name) const {
  for (const auto& row : rows) {
    if (row.name == name) return &row;
  }
  return nullptr;
}

bool ConditionReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

ConditionMode parse_condition_mode(const std::string& s) {
  if (s == "lln") return ConditionMode::lln;
  if (s == "clt") return ConditionMode::clt;
  if (s == "identical_p") return ConditionMode::identical_p;
  throw ValidationError("unknown condition mode '" + s + "' (expected lln, clt or identical_p)");
}

std::string to_string(ConditionMode mode) {
  switch (mode) {
    case ConditionMode::lln: return "lln";
    case ConditionMode::clt: return "clt";
    case ConditionMode::identical_p: return "identical_p";
  }
  return "?";
}

ConditionReport check_conditions(const BlockModelConfig& config, ConditionMode mode,
                                 double threshold) {
  const DerivedParams d = derive(config);
  const double n = config.n;
  const int m = config.m;
  const double q = config.q;
  const double logn = std::log(n);
  const double log4 = std::pow(logn, 4);

  ConditionReport report;
  report.mode = mode;
  report.threshold = threshold;
  report.kappa = d.kappa;
  report.kappa_tilde = d.kappa_tilde;

  // Block-indexed conditions are reported at their worst block.
  auto worst = [&](auto&& lhs_of, auto&& rhs_of) {
    double best_ratio = -1.0;
    std::pair<double, double> out{0.0, 1.0};
    for (int b = 0; b < m; ++b) {
      const double l = lhs_of(b);
      const double r = rhs_of(b);
      const double ratio = r == 0.0 ? kInf : l / r;
      if (!(ratio <= best_ratio)) {
        best_ratio = ratio;
        out = {l, r};
      }
    }
    return out;
  };

  switch (mode) {
    case ConditionMode::lln: {
      auto [l, r] = worst(
          [&](int b) {
            return m * log4 / (n * config.p[b] + n * (m - 1) * q) *
                   (d.gamma_max * d.gamma_max) / (d.gamma_min * d.gamma_min);
          },
          [](int) { return 1.0; });
      report.rows.push_back(make_row("connectivity", l, r, ConditionDirection::small, threshold));
      const double lhs = std::pow((m - 1) * q, 2);
      const double rhs = std::pow(m * logn / n, 0.25) * std::pow(d.p_min, 1.25) * std::sqrt(d.p_max);
      report.rows.push_back(make_row("q_lower", lhs, rhs, ConditionDirection::large, threshold));
      break;
    }
    case ConditionMode::clt: {
      auto [l1, r1] = worst(
          [&](int b) {
            const double pb = config.p[b];
            return m * log4 / (n * pb * (1.0 - pb) + n * (m - 1) * q * (1.0 - q)) *
                   (d.p_max * d.p_max) / (d.p_min * d.p_min);
          },
          [](int) { return 1.0; });
      report.rows.push_back(make_row("connectivity_clt", l1, r1, ConditionDirection::small, threshold));
      auto [l2, r2] = worst([&](int b) { return d.gamma[b] / d.gamma_bar; },
                            [&](int b) { return std::sqrt(d.upsilon2[b]) / d.p_bar; });
      report.rows.push_back(make_row("degree_balance", l2, r2, ConditionDirection::small, threshold));
      auto [l3, r3] = worst(
          [&](int b) {
            return std::sqrt(d.upsilon_bar2 / d.upsilon2[b]) * d.gamma[b] / d.gamma_bar;
          },
          [&](int) { return std::sqrt(n); });
      report.rows.push_back(make_row("variance_balance", l3, r3, ConditionDirection::small, threshold));
      auto [l4, r4] = worst(
          [&](int b) {
            return d.gamma[b] / std::sqrt(d.upsilon2[b]) * d.p_min * d.p_min /
                   (d.gamma_min * (m - 1) * (m - 1) * q * q);
          },
          [](int) { return 1.0; });
      report.rows.push_back(make_row("spectral_clt", l4, r4, ConditionDirection::small, threshold));
      break;
    }
    case ConditionMode::identical_p: {
      const double p = d.p_min;
      const double l1 = m * log4 / (n * p + n * (m - 1) * q);
      report.rows.push_back(
          make_row("connectivity_identical_p", l1, 1.0, ConditionDirection::small, threshold));
      const double r2 = std::sqrt(p * logn / (n * m));
      report.rows.push_back(
          make_row("q_lower_identical_p", q, r2, ConditionDirection::large, threshold));
      break;
    }
  }
  return report;
}

std::string to_csv(const ConditionReport& report) {
  std::string out = "condition,lhs,rhs,ratio,pass\n";
  for (const auto& row : report.rows) {
    out += csv_row({row.name, fmt_double(row.lhs), fmt_double(row.rhs), fmt_double(row.ratio),
                    row.pass ? "true" : "false"});
  }
  out += "# mode=" + to_string(report.mode) + "\n";
  out += "# threshold=" + fmt_double(report.threshold) + "\n";
  out += "# kappa=" + (report.kappa ? fmt_double(*report.kappa) : std::string("undefined")) + "\n";
  if (report.kappa_tilde) out += "# kappa_tilde=" + fmt_double(*report.kappa_tilde) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

LlnPrediction lln_prediction(const DerivedParams& params, int block) {
  if (block < 0 || block >= params.config.m) {
    throw ValidationError("block index " + std::to_string(block) + " out of range [0, " +
                          std::to_string(params.config.m) + ")");
  }
  const double n = params.config.n;
  return {n, n * params.gamma_bar / params.gamma[block]};
}

CltScaling parse_clt_scaling(const std::string& s) {
  if (s == "general") return CltScaling::general;
  if (s == "identical_p") return CltScaling::identical_p;
  throw ValidationError("unknown CLT scaling '" + s + "' (expected general or identical_p)");
}

std::string to_string(CltScaling scaling) {
  return scaling == CltScaling::general ? "general" : "identical_p";
}

CltAffine clt_affine(const DerivedParams& params, int block, CltScaling scaling) {
  const LlnPrediction pred = lln_prediction(params, block);
  CltAffine affine;
  if (scaling == CltScaling::general) {
    const double g = params.gamma[block];
    affine.scale = g * g / (params.config.n * std::sqrt(params.upsilon2[block]) * params.gamma_bar);
    affine.centre = pred.h_w_pred;
    affine.target_variance = 1.0;
  } else {
    if (!params.identical_p()) {
      throw ValidationError("identical_p scaling requires equal intra-block probabilities");
    }
    affine.scale = *params.rho_n;
    affine.centre = params.config.n;
    affine.target_variance = 1.0 - *params.alpha;
  }
  if (!std::isfinite(affine.scale)) {
    throw ValidationError("degenerate CLT scaling: degree variance is zero");
  }
  return affine;
}

StandardizedStatistic clt_standardize(const DerivedParams& params, int block, double h_w,
                                      CltScaling scaling) {
  const CltAffine a = clt_affine(params, block, scaling);
  return {a.scale * (h_w - a.centre), a.target_variance};
}

}  // namespace sbmh
