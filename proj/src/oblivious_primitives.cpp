#include "oblivisel/oblivious_primitives.hpp"

#include <map>

namespace oblivisel {

namespace {

using Positions = std::vector<std::uint32_t>;

Positions take(const Positions& v, std::size_t from) {
  Positions out;
  for (std::size_t i = from; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

// Odd-even merge over cell lists; returns the cells in rank order.
Positions build(const Positions& a, const Positions& b, MergeNetwork& net) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() == 1 && b.size() == 1) {
    net.comparators.emplace_back(a[0], b[0]);
    return {a[0], b[0]};
  }
  const Positions v = build(take(a, 0), take(b, 0), net);
  const Positions w = build(take(a, 1), take(b, 1), net);
  Positions out;
  out.reserve(v.size() + w.size());
  for (std::size_t i = 0; i < std::max(v.size(), w.size()); ++i) {
    if (i < v.size()) out.push_back(v[i]);
    if (i < w.size()) out.push_back(w[i]);
  }
  for (std::size_t i = 1; i + 1 < out.size(); i += 2) net.comparators.emplace_back(out[i], out[i + 1]);
  return out;
}

}  // namespace

std::uint64_t sort_comparator_count(std::size_t n) {
  std::uint64_t c = 0;
  for_each_sort_comparator(n, [&](std::size_t, std::size_t) { ++c; });
  return c;
}

const MergeNetwork& merge_network(std::size_t p, std::size_t q) {
  thread_local std::map<std::pair<std::size_t, std::size_t>, MergeNetwork> cache;
  auto it = cache.find({p, q});
  if (it != cache.end()) return it->second;
  if (p + q > UINT32_MAX) throw std::length_error("merge network too large");
  MergeNetwork net;
  Positions a(p), b(q);
  for (std::size_t i = 0; i < p; ++i) a[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < q; ++i) b[i] = static_cast<std::uint32_t>(p + i);
  net.output = build(a, b, net);
  for (std::size_t r = 0; r < net.output.size(); ++r) net.identity = net.identity && net.output[r] == r;
  return cache.emplace(std::make_pair(p, q), std::move(net)).first->second;
}

}  // namespace oblivisel
