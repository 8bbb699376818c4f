#include "qxlab/harness/smoothing.hpp"

#include <cmath>

#include "qxlab/errors.hpp"

namespace qxlab::harness {

namespace {

std::size_t reflect(long i, long n) {
  const long period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return static_cast<std::size_t>(i < n ? i : period - 1 - i);
}

}  // namespace

std::vector<double> gaussian_smooth(std::span<const double> x, double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("smoothing sigma must be >= 0");
  std::vector<double> out(x.begin(), x.end());
  if (sigma == 0.0 || x.empty()) return out;
  const long radius = static_cast<long>(4.0 * sigma + 0.5);
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (long k = -radius; k <= radius; ++k) {
    w[k + radius] = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    total += w[k + radius];
  }
  for (double& v : w) v /= total;
  const long n = static_cast<long>(x.size());
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long k = -radius; k <= radius; ++k) acc += w[k + radius] * x[reflect(i + k, n)];
    out[i] = acc;
  }
  return out;
}

}  // namespace qxlab::harness
