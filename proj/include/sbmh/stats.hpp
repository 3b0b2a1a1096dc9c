#pragma once

#include <vector>

namespace sbmh {

/// Standard normal CDF, 0.5 erfc(-x / sqrt 2).
double normal_cdf(double x);

/// sup_x |F_n(x) - Phi(x / sqrt(variance))| for the empirical CDF F_n of
/// `samples`. variance must be positive. Empty input throws ValidationError.
double ks_distance(std::vector<double> samples, double variance = 1.0);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n - 1 denominator); 0 for n < 2
  double skewness = 0.0;  // 0 when the variance vanishes
};

Moments moments(const std::vector<double>& samples);

/// Summary of standardized statistics against N(0, target_variance).
/// `degenerate` flags a (numerically) constant sample, for which the KS
/// distance is the gap of a point mass.
struct CltSummary {
  int n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double ks_distance = 0.0;
  double target_variance = 1.0;
  bool degenerate = false;
};

CltSummary summarize_clt(const std::vector<double>& samples, double target_variance = 1.0);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  int count = 0;
};

/// `bins` equal-width bins spanning [min, max] of the samples; the last bin
/// is closed. A constant sample yields one bin of width 1 centred on it.
std::vector<HistogramBin> histogram(const std::vector<double>& samples, int bins);

}  // namespace sbmh
