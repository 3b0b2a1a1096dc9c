#include "sbmh/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sbmh/error.hpp"

namespace sbmh {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance(std::vector<double> samples, double variance) {
  if (samples.empty()) throw ValidationError("ks_distance needs at least one sample");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ValidationError("ks_distance needs a positive finite target variance");
  }
  std::sort(samples.begin(), samples.end());
  const double sd = std::sqrt(variance);
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = normal_cdf(samples[i] / sd);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

Moments moments(const std::vector<double>& samples) {
  Moments m;
  const auto n = samples.size();
  if (n == 0) return m;
  double sum = 0.0;
  for (double x : samples) sum += x;
  m.mean = sum / n;
  double s2 = 0.0, s3 = 0.0;
  for (double x : samples) {
    const double d = x - m.mean;
    s2 += d * d;
    s3 += d * d * d;
  }
  if (n >= 2) m.variance = s2 / (n - 1);
  const double pop_var = s2 / n;
  if (pop_var > 0.0) m.skewness = (s3 / n) / std::pow(pop_var, 1.5);
  return m;
}

CltSummary summarize_clt(const std::vector<double>& samples, double target_variance) {
  CltSummary s;
  s.n = static_cast<int>(samples.size());
  s.target_variance = target_variance;
  const Moments m = moments(samples);
  s.mean = m.mean;
  s.variance = m.variance;
  s.skewness = m.skewness;
  double scale = 0.0;
  for (double x : samples) scale = std::max(scale, std::abs(x));
  s.degenerate = s.n < 2 || m.variance <= 1e-24 * std::max(1.0, scale * scale);
  s.ks_distance = ks_distance(samples, target_variance);
  return s;
}

std::vector<HistogramBin> histogram(const std::vector<double>& samples, int bins) {
  if (bins < 1) throw ValidationError("histogram needs at least one bin");
  if (samples.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return {HistogramBin{lo - 0.5, lo + 0.5, static_cast<int>(samples.size())}};

  const double width = (hi - lo) / bins;
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) {
    out[b].left = lo + b * width;
    out[b].right = b + 1 == bins ? hi : lo + (b + 1) * width;
  }
  for (double x : samples) {
    int b = static_cast<int>((x - lo) / width);
    out[std::clamp(b, 0, bins - 1)].count += 1;
  }
  return out;
}

}  // namespace sbmh
