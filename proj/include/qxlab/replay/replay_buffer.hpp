#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qxlab/nn/tensor.hpp"
#include "qxlab/rng.hpp"

namespace qxlab::replay {

enum class EndKind : std::uint8_t { NotDone = 0, Terminal = 1, Truncated = 2 };

struct Transition {
  std::vector<double> s;
  std::vector<double> a;
  double r = 0.0;
  std::vector<double> s_next;
  EndKind end = EndKind::NotDone;
};

/// Fixed-capacity ring of transitions; once full the oldest entry is overwritten.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim);

  void push(const Transition& t);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t act_dim() const { return act_dim_; }

  /// i-th stored transition counted from the oldest.
  Transition at(std::size_t i) const;

  /// Raw slot index of the i-th oldest transition (for sampling).
  std::size_t slot(std::size_t i) const;

  void save(const std::filesystem::path& path) const;
  static ReplayBuffer load(const std::filesystem::path& path);

 private:
  friend struct BatchBuilder;
  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t act_dim_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  std::vector<double> s_;
  std::vector<double> a_;
  std::vector<double> r_;
  std::vector<double> s_next_;
  std::vector<EndKind> end_;
};

enum class Source : std::uint8_t { Self = 0, Other = 1 };

/// Column-major-by-field minibatch. Row i of every field belongs to one transition.
struct TransitionBatch {
  nn::Tensor s;
  nn::Tensor a;
  std::vector<double> r;
  nn::Tensor s_next;
  std::vector<EndKind> end;
  std::vector<Source> source;

  std::size_t size() const { return r.size(); }
};

/// B samples, floor(B * self_ratio) of them from the caller's own buffer.
struct MixedBatchSpec {
  std::size_t batch_size = 128;
  double self_ratio = 0.75;

  std::size_t self_count() const;
  std::size_t other_count() const { return batch_size - self_count(); }
};

/// Uniform with-replacement draws from both buffers, shuffled together.
/// Returns nullopt when a buffer that must contribute is empty.
std::optional<TransitionBatch> sample_mixed(const ReplayBuffer& self_buf, const ReplayBuffer& other_buf,
                                            const MixedBatchSpec& spec, Rng& rng);

/// Single-buffer uniform sample.
std::optional<TransitionBatch> sample_uniform(const ReplayBuffer& buf, std::size_t batch_size, Rng& rng);

}  // namespace qxlab::replay
