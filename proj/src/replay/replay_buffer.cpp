#include "qxlab/replay/replay_buffer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "qxlab/errors.hpp"

namespace qxlab::replay {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
  if (capacity == 0) throw ConfigError("replay capacity must be >= 1");
  // storage grows with use so large nominal capacities stay cheap
}

void ReplayBuffer::push(const Transition& t) {
  if (t.s.size() != obs_dim_ || t.s_next.size() != obs_dim_ || t.a.size() != act_dim_) {
    throw ShapeError("transition dims (" + std::to_string(t.s.size()) + "," + std::to_string(t.a.size()) +
                     "," + std::to_string(t.s_next.size()) + ") do not match buffer (" +
                     std::to_string(obs_dim_) + "," + std::to_string(act_dim_) + ")");
  }
  if (!std::isfinite(t.r)) throw ShapeError("transition reward must be finite");
  if (size_ < capacity_ && cursor_ == r_.size()) {
    s_.insert(s_.end(), t.s.begin(), t.s.end());
    a_.insert(a_.end(), t.a.begin(), t.a.end());
    r_.push_back(t.r);
    s_next_.insert(s_next_.end(), t.s_next.begin(), t.s_next.end());
    end_.push_back(t.end);
  } else {
    std::copy(t.s.begin(), t.s.end(), s_.begin() + static_cast<std::ptrdiff_t>(cursor_ * obs_dim_));
    std::copy(t.a.begin(), t.a.end(), a_.begin() + static_cast<std::ptrdiff_t>(cursor_ * act_dim_));
    r_[cursor_] = t.r;
    std::copy(t.s_next.begin(), t.s_next.end(), s_next_.begin() + static_cast<std::ptrdiff_t>(cursor_ * obs_dim_));
    end_[cursor_] = t.end;
  }
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::size_t ReplayBuffer::slot(std::size_t i) const {
  if (i >= size_) throw ShapeError("replay index out of range");
  return size_ < capacity_ ? i : (cursor_ + i) % capacity_;
}

Transition ReplayBuffer::at(std::size_t i) const {
  const std::size_t k = slot(i);
  Transition t;
  t.s.assign(s_.begin() + static_cast<std::ptrdiff_t>(k * obs_dim_),
             s_.begin() + static_cast<std::ptrdiff_t>((k + 1) * obs_dim_));
  t.a.assign(a_.begin() + static_cast<std::ptrdiff_t>(k * act_dim_),
             a_.begin() + static_cast<std::ptrdiff_t>((k + 1) * act_dim_));
  t.r = r_[k];
  t.s_next.assign(s_next_.begin() + static_cast<std::ptrdiff_t>(k * obs_dim_),
                  s_next_.begin() + static_cast<std::ptrdiff_t>((k + 1) * obs_dim_));
  t.end = end_[k];
  return t;
}

struct BatchBuilder {
  static void copy_row(const ReplayBuffer& b, std::size_t k, TransitionBatch& out, std::size_t row, Source src) {
    std::copy_n(b.s_.begin() + static_cast<std::ptrdiff_t>(k * b.obs_dim_), b.obs_dim_, out.s.row(row).begin());
    std::copy_n(b.a_.begin() + static_cast<std::ptrdiff_t>(k * b.act_dim_), b.act_dim_, out.a.row(row).begin());
    out.r[row] = b.r_[k];
    std::copy_n(b.s_next_.begin() + static_cast<std::ptrdiff_t>(k * b.obs_dim_), b.obs_dim_,
                out.s_next.row(row).begin());
    out.end[row] = b.end_[k];
    out.source[row] = src;
  }
};

namespace {

TransitionBatch empty_batch(std::size_t n, std::size_t obs_dim, std::size_t act_dim) {
  TransitionBatch b;
  b.s = nn::Tensor(n, obs_dim);
  b.a = nn::Tensor(n, act_dim);
  b.r.assign(n, 0.0);
  b.s_next = nn::Tensor(n, obs_dim);
  b.end.assign(n, EndKind::NotDone);
  b.source.assign(n, Source::Self);
  return b;
}

}  // namespace

std::size_t MixedBatchSpec::self_count() const {
  if (!(self_ratio >= 0.0 && self_ratio <= 1.0)) throw ConfigError("batch self ratio must lie in [0, 1]");
  return static_cast<std::size_t>(std::floor(static_cast<double>(batch_size) * self_ratio));
}

std::optional<TransitionBatch> sample_mixed(const ReplayBuffer& self_buf, const ReplayBuffer& other_buf,
                                            const MixedBatchSpec& spec, Rng& rng) {
  if (self_buf.obs_dim() != other_buf.obs_dim() || self_buf.act_dim() != other_buf.act_dim()) {
    throw ShapeError("mixed sampling across buffers of different dims");
  }
  const std::size_t n_self = spec.self_count();
  const std::size_t n_other = spec.batch_size - n_self;
  if ((n_self > 0 && self_buf.empty()) || (n_other > 0 && other_buf.empty())) return std::nullopt;

  // draw order: row positions are shuffled first, then filled self-then-other
  std::vector<std::size_t> rows(spec.batch_size);
  std::iota(rows.begin(), rows.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);

  TransitionBatch out = empty_batch(spec.batch_size, self_buf.obs_dim(), self_buf.act_dim());
  std::size_t next = 0;
  auto draw = [&](const ReplayBuffer& buf, std::size_t count, Source src) {
    if (count == 0) return;
    std::uniform_int_distribution<std::size_t> pick(0, buf.size() - 1);
    for (std::size_t i = 0; i < count; ++i) BatchBuilder::copy_row(buf, buf.slot(pick(rng)), out, rows[next++], src);
  };
  draw(self_buf, n_self, Source::Self);
  draw(other_buf, n_other, Source::Other);
  return out;
}

std::optional<TransitionBatch> sample_uniform(const ReplayBuffer& buf, std::size_t batch_size, Rng& rng) {
  if (buf.empty()) return std::nullopt;
  TransitionBatch out = empty_batch(batch_size, buf.obs_dim(), buf.act_dim());
  std::uniform_int_distribution<std::size_t> pick(0, buf.size() - 1);
  for (std::size_t i = 0; i < batch_size; ++i) BatchBuilder::copy_row(buf, buf.slot(pick(rng)), out, i, Source::Self);
  return out;
}

// Snapshot layout (little-endian):
//   char[8] "QXREPLAY", u32 version, u64 capacity, u64 obs_dim, u64 act_dim, u64 count,
//   then `count` records oldest-first: s[obs], a[act], r, s_next[obs] as f64, end as u8.
namespace {
constexpr char kMagic[8] = {'Q', 'X', 'R', 'E', 'P', 'L', 'A', 'Y'};
constexpr std::uint32_t kVersion = 1;
static_assert(std::endian::native == std::endian::little, "snapshots are written in host order");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ParseError("truncated replay snapshot");
  return v;
}
}  // namespace

void ReplayBuffer::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put(os, kVersion);
  put(os, static_cast<std::uint64_t>(capacity_));
  put(os, static_cast<std::uint64_t>(obs_dim_));
  put(os, static_cast<std::uint64_t>(act_dim_));
  put(os, static_cast<std::uint64_t>(size_));
  for (std::size_t i = 0; i < size_; ++i) {
    const Transition t = at(i);
    for (double v : t.s) put(os, v);
    for (double v : t.a) put(os, v);
    put(os, t.r);
    for (double v : t.s_next) put(os, v);
    put(os, static_cast<std::uint8_t>(t.end));
  }
}

ReplayBuffer ReplayBuffer::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(magic, magic + 8, kMagic)) throw ParseError("not a replay snapshot: " + path.string());
  if (get<std::uint32_t>(is) != kVersion) throw ParseError("unsupported replay snapshot version");
  const auto capacity = get<std::uint64_t>(is);
  const auto obs = get<std::uint64_t>(is);
  const auto act = get<std::uint64_t>(is);
  const auto count = get<std::uint64_t>(is);
  if (count > capacity) throw ParseError("replay snapshot count exceeds capacity");
  ReplayBuffer buf(capacity, obs, act);
  for (std::uint64_t i = 0; i < count; ++i) {
    Transition t;
    t.s.resize(obs);
    t.a.resize(act);
    t.s_next.resize(obs);
    for (double& v : t.s) v = get<double>(is);
    for (double& v : t.a) v = get<double>(is);
    t.r = get<double>(is);
    for (double& v : t.s_next) v = get<double>(is);
    const auto end = get<std::uint8_t>(is);
    if (end > 2) throw ParseError("bad end kind in replay snapshot");
    t.end = static_cast<EndKind>(end);
    buf.push(t);
  }
  return buf;
}

}  // namespace qxlab::replay
