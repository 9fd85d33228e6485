#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace oblivisel {

enum class ProbeOp : std::uint8_t { Read = 0x00, Write = 0x01 };

/// One adversary-visible memory event.
struct Probe {
  ProbeOp op;
  std::uint64_t location;

  friend bool operator==(const Probe&, const Probe&) = default;
};

struct TraceFingerprint {
  std::uint64_t digest;
  std::uint64_t probe_count;

  friend bool operator==(const TraceFingerprint&, const TraceFingerprint&) = default;
};

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

/// Bits reserved for the element index inside a probe location.
inline constexpr unsigned kIndexBits = 48;

constexpr std::uint64_t encode_location(std::uint64_t array_id, std::uint64_t index) {
  return (array_id << kIndexBits) + index;
}

/// FNV-1a step over one probe: op tag byte, then 8 little-endian location bytes.
constexpr std::uint64_t fnv1a_probe(std::uint64_t h, ProbeOp op, std::uint64_t location) {
  h ^= static_cast<std::uint8_t>(op);
  h *= kFnvPrime;
  for (int b = 0; b < 8; ++b) {
    h ^= (location >> (8 * b)) & 0xffU;
    h *= kFnvPrime;
  }
  return h;
}

TraceFingerprint fingerprint(std::span<const Probe> probes);

/// Writes `R <location>` / `W <location>` lines.
void write_trace(std::ostream& out, std::span<const Probe> probes);

/// The ambient probe log of one (log, arrays, rng) bundle.
///
/// Count mode only counts probes, Digest additionally folds them into a running
/// FNV-1a digest, Record also keeps the probe sequence. Arrays allocated
/// against a log report every element access to it.
class TraceLog {
 public:
  enum class Mode { Count, Digest, Record };

  static constexpr std::uint64_t kDefaultCapacity = std::uint64_t{1} << 40;

  explicit TraceLog(Mode mode = Mode::Digest, std::uint64_t capacity = kDefaultCapacity)
      : mode_(mode), capacity_(capacity) {}

  TraceLog(const TraceLog&) = delete;
  TraceLog& operator=(const TraceLog&) = delete;

  void probe(ProbeOp op, std::uint64_t location) {
    if (!enabled_) return;
    ++count_;
    if (mode_ == Mode::Count) return;
    digest_ = fnv1a_probe(digest_, op, location);
    if (mode_ == Mode::Record) probes_.push_back({op, location});
  }

  Mode mode() const { return mode_; }
  bool enabled() const { return enabled_; }
  void set_enabled(bool on) { enabled_ = on; }

  std::uint64_t probe_count() const { return count_; }
  std::span<const Probe> probes() const { return probes_; }

  /// Fingerprint of everything logged since construction or the last clear().
  TraceFingerprint fingerprint() const;

  void clear() {
    probes_.clear();
    count_ = 0;
    digest_ = kFnvOffsetBasis;
  }

  std::uint64_t live_cells() const { return live_cells_; }
  std::uint64_t capacity() const { return capacity_; }

  // Used by TracedArray. Ids are the smallest free ones, so equal
  // allocation sequences see equal locations.
  std::uint64_t acquire(std::size_t cells);
  void release(std::uint64_t id, std::size_t cells) noexcept {
    live_cells_ -= cells;
    free_ids_.insert(id);
  }

 private:
  template <typename F>
  friend auto scoped_trace(TraceLog& log, F&& action);

  struct Section {
    std::vector<Probe> probes;
    std::uint64_t count = 0;
    std::uint64_t digest = kFnvOffsetBasis;
  };

  Section swap_section(Section s) {
    Section old{std::move(probes_), count_, digest_};
    probes_ = std::move(s.probes);
    count_ = s.count;
    digest_ = s.digest;
    return old;
  }

  Mode mode_;
  bool enabled_ = true;
  std::vector<Probe> probes_;
  std::uint64_t count_ = 0;
  std::uint64_t digest_ = kFnvOffsetBasis;
  std::uint64_t capacity_;
  std::uint64_t live_cells_ = 0;
  std::uint64_t next_id_ = 0;
  std::set<std::uint64_t> free_ids_;
};

template <typename R>
struct Traced {
  R value;
  TraceFingerprint fingerprint;
};

template <>
struct Traced<void> {
  TraceFingerprint fingerprint;
};

/// Runs `action` against a fresh section of `log`. The returned fingerprint
/// covers exactly the probes emitted by the action; those probes are not
/// added to the enclosing section.
template <typename F>
auto scoped_trace(TraceLog& log, F&& action) {
  using R = std::invoke_result_t<F>;
  struct Restore {
    TraceLog& log;
    TraceLog::Section outer;
    ~Restore() { log.swap_section(std::move(outer)); }
  } restore{log, log.swap_section({})};

  if constexpr (std::is_void_v<R>) {
    std::forward<F>(action)();
    return Traced<void>{log.fingerprint()};
  } else {
    R value = std::forward<F>(action)();
    return Traced<R>{std::move(value), log.fingerprint()};
  }
}

/// Fixed-length array whose element reads and writes are reported to a TraceLog.
template <typename T>
class TracedArray {
  static_assert(std::is_trivially_copyable_v<T>);

 public:
  using value_type = T;

  TracedArray() = default;

  TracedArray(TraceLog& log, std::size_t length)
      : log_(&log), id_(log.acquire(length)), cells_(length) {}

  TracedArray(const TracedArray&) = delete;
  TracedArray& operator=(const TracedArray&) = delete;

  TracedArray(TracedArray&& other) noexcept
      : log_(std::exchange(other.log_, nullptr)), id_(other.id_), cells_(std::move(other.cells_)) {
    other.cells_.clear();
  }

  TracedArray& operator=(TracedArray&& other) noexcept {
    if (this != &other) {
      reset();
      log_ = std::exchange(other.log_, nullptr);
      id_ = other.id_;
      cells_ = std::move(other.cells_);
      other.cells_.clear();
    }
    return *this;
  }

  ~TracedArray() { reset(); }

  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  std::uint64_t id() const { return id_; }
  TraceLog& log() const { return *log_; }

  T get(std::size_t i) const {
    check(i);
    log_->probe(ProbeOp::Read, encode_location(id_, i));
    return cells_[i];
  }

  void put(std::size_t i, const T& value) {
    check(i);
    log_->probe(ProbeOp::Write, encode_location(id_, i));
    cells_[i] = value;
  }

  /// Untraced view for oracles and assertions in tests.
  std::span<const T> peek() const { return cells_; }

 private:
  void check(std::size_t i) const {
    if (i >= cells_.size()) throw std::out_of_range("TracedArray index out of range");
  }

  void reset() noexcept {
    if (log_ != nullptr) log_->release(id_, cells_.size());
    log_ = nullptr;
  }

  TraceLog* log_ = nullptr;
  std::uint64_t id_ = 0;
  std::vector<T> cells_;
};

template <typename T>
TracedArray<T> alloc(TraceLog& log, std::size_t length) {
  return TracedArray<T>(log, length);
}

/// Allocates and fills with traced writes in index order.
template <typename T>
TracedArray<T> alloc_from(TraceLog& log, std::span<const T> values) {
  TracedArray<T> a(log, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) a.put(i, values[i]);
  return a;
}

template <typename T>
TracedArray<T> alloc_from(TraceLog& log, const std::vector<T>& values) {
  return alloc_from(log, std::span<const T>(values));
}

/// Reads every element in index order.
template <typename T>
std::vector<T> read_all(const TracedArray<T>& a) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a.get(i);
  return out;
}

/// Contiguous window [offset, offset + length) of a TracedArray.
template <typename T>
class TracedRange {
 public:
  TracedRange(TracedArray<T>& array)  // NOLINT(google-explicit-constructor)
      : array_(&array), offset_(0), length_(array.size()) {}

  TracedRange(TracedArray<T>& array, std::size_t offset, std::size_t length)
      : array_(&array), offset_(offset), length_(length) {
    if (offset + length > array.size()) throw std::out_of_range("TracedRange exceeds array");
  }

  std::size_t size() const { return length_; }
  TraceLog& log() const { return array_->log(); }

  T get(std::size_t i) const {
    if (i >= length_) throw std::out_of_range("TracedRange index out of range");
    return array_->get(offset_ + i);
  }

  void put(std::size_t i, const T& value) {
    if (i >= length_) throw std::out_of_range("TracedRange index out of range");
    array_->put(offset_ + i, value);
  }

  TracedRange sub(std::size_t offset, std::size_t length) const {
    if (offset + length > length_) throw std::out_of_range("TracedRange::sub exceeds range");
    return TracedRange(*array_, offset_ + offset, length, 0);
  }

 private:
  TracedRange(TracedArray<T>& array, std::size_t offset, std::size_t length, int)
      : array_(&array), offset_(offset), length_(length) {}

  TracedArray<T>* array_;
  std::size_t offset_;
  std::size_t length_;
};

}  // namespace oblivisel
