#include "qxlab/policy/cem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qxlab/errors.hpp"

namespace qxlab::policy {

ActionBounds ActionBounds::symmetric(std::size_t dim, double limit) {
  return ActionBounds{std::vector<double>(dim, -limit), std::vector<double>(dim, limit)};
}

bool ActionBounds::contains(std::span<const double> a) const {
  if (a.size() != dim()) return false;
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (!(a[d] >= low[d] && a[d] <= high[d])) return false;
  }
  return true;
}

void ActionBounds::clip(std::span<double> a) const {
  for (std::size_t d = 0; d < a.size(); ++d) a[d] = std::clamp(a[d], low[d], high[d]);
}

void CemConfig::validate() const {
  if (iterations < 1) throw ConfigError("CEM iterations must be >= 1");
  if (num_samples < 1) throw ConfigError("CEM num_samples must be >= 1");
  if (top_k < 1 || top_k > num_samples) throw ConfigError("CEM top_k must lie in [1, num_samples]");
  if (!(init_std > 0.0) || !(min_std > 0.0)) throw ConfigError("CEM stdevs must be positive");
}

nn::Tensor cem_select_batch(const QBatchEval& q, const nn::Tensor& states, const CemConfig& cfg,
                            const ActionBounds& bounds, Rng& rng, CemTrace* trace) {
  cfg.validate();
  const std::size_t n = states.rows();
  const std::size_t k = cfg.num_samples;
  const std::size_t dim = bounds.dim();
  for (std::size_t d = 0; d < dim; ++d) {
    if (!std::isfinite(bounds.low[d]) || !std::isfinite(bounds.high[d]) || bounds.low[d] > bounds.high[d]) {
      throw ConfigError("CEM needs finite, ordered action bounds");
    }
  }

  nn::Tensor tiled(n * k, states.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::copy(states.row(i).begin(), states.row(i).end(), tiled.row(i * k + j).begin());
    }
  }

  nn::Tensor mean(n, dim);
  nn::Tensor stdev(n, dim, cfg.init_std);
  for (std::size_t i = 0; i < n; ++i) bounds.clip(mean.row(i));

  std::normal_distribution<double> unit(0.0, 1.0);
  nn::Tensor samples(n * k, dim);
  std::vector<std::size_t> order(k);
  if (trace) trace->elite_mean_value.clear();

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        auto row = samples.row(i * k + j);
        for (std::size_t d = 0; d < dim; ++d) row[d] = mean(i, d) + stdev(i, d) * unit(rng);
        bounds.clip(row);
      }
    }
    const std::vector<double> values = q(tiled, samples);
    if (values.size() != n * k) throw ShapeError("CEM objective returned the wrong number of values");

    double elite_value_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* v = values.data() + i * k;
      std::iota(order.begin(), order.end(), 0);
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.top_k), order.end(),
                        [v](std::size_t a, std::size_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
      for (std::size_t d = 0; d < dim; ++d) {
        double m = 0.0;
        for (std::size_t e = 0; e < cfg.top_k; ++e) m += samples(i * k + order[e], d);
        m /= static_cast<double>(cfg.top_k);
        double var = 0.0;
        for (std::size_t e = 0; e < cfg.top_k; ++e) {
          const double diff = samples(i * k + order[e], d) - m;
          var += diff * diff;
        }
        var = cfg.top_k > 1 ? var / static_cast<double>(cfg.top_k - 1) : 0.0;
        mean(i, d) = m;
        stdev(i, d) = std::max(std::sqrt(var), cfg.min_std);
      }
      double ev = 0.0;
      for (std::size_t e = 0; e < cfg.top_k; ++e) ev += v[order[e]];
      elite_value_sum += ev / static_cast<double>(cfg.top_k);
    }
    if (trace) trace->elite_mean_value.push_back(n ? elite_value_sum / static_cast<double>(n) : 0.0);
  }

  if (trace && n > 0) {
    trace->last_samples = nn::Tensor(k, dim);
    for (std::size_t j = 0; j < k; ++j) {
      std::copy(samples.row(j).begin(), samples.row(j).end(), trace->last_samples.row(j).begin());
    }
    trace->fitted_mean.assign(mean.row(0).begin(), mean.row(0).end());
    trace->fitted_std.assign(stdev.row(0).begin(), stdev.row(0).end());
  }

  nn::Tensor out(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (std::size_t d = 0; d < dim; ++d) {
      row[d] = cfg.stochastic_final ? mean(i, d) + stdev(i, d) * unit(rng) : mean(i, d);
    }
    bounds.clip(row);
  }
  return out;
}

std::vector<double> cem_select(const QBatchEval& q, std::span<const double> state, const CemConfig& cfg,
                               const ActionBounds& bounds, Rng& rng, CemTrace* trace) {
  const nn::Tensor s(1, state.size(), std::vector<double>(state.begin(), state.end()));
  const nn::Tensor a = cem_select_batch(q, s, cfg, bounds, rng, trace);
  return {a.row(0).begin(), a.row(0).end()};
}

}  // namespace qxlab::policy
