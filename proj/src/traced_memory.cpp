#include "oblivisel/traced_memory.hpp"

#include <ostream>

namespace oblivisel {

TraceFingerprint fingerprint(std::span<const Probe> probes) {
  std::uint64_t h = kFnvOffsetBasis;
  for (const Probe& p : probes) h = fnv1a_probe(h, p.op, p.location);
  return {h, probes.size()};
}

void write_trace(std::ostream& out, std::span<const Probe> probes) {
  for (const Probe& p : probes) out << (p.op == ProbeOp::Read ? 'R' : 'W') << ' ' << p.location << '\n';
}

TraceFingerprint TraceLog::fingerprint() const {
  if (mode_ == Mode::Count) throw std::logic_error("TraceLog in Count mode keeps no digest");
  return {digest_, count_};
}

std::uint64_t TraceLog::acquire(std::size_t cells) {
  if (cells > capacity_ - live_cells_) throw std::length_error("traced memory capacity exhausted");
  if (cells >= (std::uint64_t{1} << kIndexBits)) throw std::length_error("array too long for location encoding");
  live_cells_ += cells;
  if (free_ids_.empty()) return next_id_++;
  const std::uint64_t id = *free_ids_.begin();
  free_ids_.erase(free_ids_.begin());
  return id;
}

}  // namespace oblivisel
