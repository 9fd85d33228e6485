#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "oblivisel/oblivious_primitives.hpp"

using namespace oblivisel;

namespace {

const auto int_less = [](int a, int b) { return a < b; };

std::vector<int> random_ints(std::mt19937_64& rng, std::size_t n, int hi = 1000) {
  std::uniform_int_distribution<int> d(0, hi);
  std::vector<int> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

template <typename F>
TraceFingerprint trace_of(TraceLog& log, F&& f) {
  return scoped_trace(log, std::forward<F>(f)).fingerprint;
}

}  // namespace

TEST_CASE("sort: 0-1 principle for every n up to 14") {
  for (std::size_t n = 0; n <= 14; ++n) {
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      TraceLog log;
      std::vector<int> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = (bits >> i) & 1;
      auto a = alloc_from(log, v);
      sort(a, int_less);
      REQUIRE(std::is_sorted(a.peek().begin(), a.peek().end()));
    }
  }
}

TEST_CASE("sort: simple cases and random arrays") {
  TraceLog log;
  std::vector<int> rev(8);
  std::iota(rev.rbegin(), rev.rend(), 0);
  auto a = alloc_from(log, rev);
  sort(a, int_less);
  CHECK(read_all(a) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  sort(a, int_less);
  CHECK(read_all(a) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});

  std::mt19937_64 rng(1);
  for (std::size_t n : {1, 2, 3, 31, 100, 257}) {
    auto v = random_ints(rng, n);
    auto b = alloc_from(log, v);
    sort(b, int_less);
    std::sort(v.begin(), v.end());
    CHECK(read_all(b) == v);
  }
}

TEST_CASE("sort: fingerprint depends on length only") {
  TraceLog log;
  std::mt19937_64 rng(2);
  for (std::size_t n : {8, 33}) {
    std::vector<TraceFingerprint> fps;
    for (int c = 0; c < 10; ++c) {
      auto a = alloc_from(log, random_ints(rng, n));
      fps.push_back(trace_of(log, [&] { sort(a, int_less); }));
    }
    CHECK(std::count(fps.begin(), fps.end(), fps[0]) == 10);
    CHECK(fps[0].probe_count == 4 * sort_comparator_count(n));
  }
}

TEST_CASE("sort comparator counts match Batcher for powers of two") {
  // (p^2 - p + 4) 2^(p-2) - 1 comparators for n = 2^p.
  for (std::uint64_t p = 1; p <= 10; ++p) {
    CHECK(sort_comparator_count(std::size_t{1} << p) == ((p * p - p + 4) << (p - 1)) / 2 - 1);
  }
}

TEST_CASE("merge: 0-1 principle over all splits up to 12") {
  for (std::size_t total = 0; total <= 12; ++total) {
    for (std::size_t p = 0; p <= total; ++p) {
      const std::size_t q = total - p;
      // A sorted 0-1 run is determined by its number of zeros.
      for (std::size_t za = 0; za <= p; ++za) {
        for (std::size_t zb = 0; zb <= q; ++zb) {
          TraceLog log;
          std::vector<int> v;
          for (std::size_t i = 0; i < p; ++i) v.push_back(i < za ? 0 : 1);
          for (std::size_t i = 0; i < q; ++i) v.push_back(i < zb ? 0 : 1);
          auto a = alloc_from(log, v);
          merge_in_place(a, p, int_less);
          REQUIRE(std::is_sorted(a.peek().begin(), a.peek().end()));
        }
      }
    }
  }
}

TEST_CASE("merge: all 2^8 bit patterns over 4+4") {
  for (std::uint32_t bits = 0; bits < 256; ++bits) {
    TraceLog log;
    std::vector<int> x, y;
    for (int i = 0; i < 4; ++i) x.push_back((bits >> i) & 1);
    for (int i = 4; i < 8; ++i) y.push_back((bits >> i) & 1);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    auto a = alloc_from(log, x);
    auto b = alloc_from(log, y);
    auto out = merge(a, b, int_less);
    CHECK(std::is_sorted(out.peek().begin(), out.peek().end()));
  }
}

TEST_CASE("merge: examples, random sizes, and fingerprints") {
  TraceLog log;
  auto e = alloc<int>(log, 0);
  auto one = alloc_from(log, std::vector<int>{7});
  CHECK(read_all(merge(e, one, int_less)) == std::vector<int>{7});
  auto x = alloc_from(log, std::vector<int>{1, 3});
  auto y = alloc_from(log, std::vector<int>{2, 4});
  CHECK(read_all(merge(x, y, int_less)) == std::vector<int>{1, 2, 3, 4});

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t p = rng() % 70, q = rng() % 70;
    auto u = random_ints(rng, p, 50), w = random_ints(rng, q, 50);
    std::sort(u.begin(), u.end());
    std::sort(w.begin(), w.end());
    auto a = alloc_from(log, u);
    auto b = alloc_from(log, w);
    auto out = merge(a, b, int_less);
    std::vector<int> expect = u;
    expect.insert(expect.end(), w.begin(), w.end());
    std::sort(expect.begin(), expect.end());
    REQUIRE(read_all(out) == expect);
  }

  for (auto [p, q] : {std::pair<std::size_t, std::size_t>{5, 3}, {16, 17}, {50, 50}}) {
    std::vector<TraceFingerprint> fps;
    for (int c = 0; c < 10; ++c) {
      auto u = random_ints(rng, p), w = random_ints(rng, q);
      std::sort(u.begin(), u.end());
      std::sort(w.begin(), w.end());
      auto a = alloc_from(log, u);
      auto b = alloc_from(log, w);
      fps.push_back(trace_of(log, [&] { return merge(a, b, int_less).size(); }));
    }
    CHECK(std::count(fps.begin(), fps.end(), fps[0]) == 10);
  }
}

TEST_CASE("select") {
  TraceLog log;
  auto a = alloc_from(log, std::vector<int>{5});
  CHECK(select(a, 0, int_less) == 5);
  CHECK_THROWS_AS(select(a, 1, int_less), std::out_of_range);
  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(4);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto b = alloc_from(log, perm);
  CHECK(select(b, 3, int_less) == 3);
  CHECK(read_all(b) == perm);

  for (int t = 0; t < 100; ++t) {
    auto v = random_ints(rng, 1 + rng() % 40);
    const std::size_t k = rng() % v.size();
    auto c = alloc_from(log, v);
    const int got = select(c, k, int_less);
    std::sort(v.begin(), v.end());
    CHECK(got == v[k]);
  }
}

TEST_CASE("select: leakage is (|A|, k); concealed select leaks |A|") {
  TraceLog log;
  std::mt19937_64 rng(5);
  auto fp = [&](std::size_t k, bool concealed) {
    auto a = alloc_from(log, random_ints(rng, 33));
    return trace_of(log, [&] {
      const std::size_t ranks[] = {k};
      return concealed ? select_concealed(a, std::span<const std::size_t>(ranks), int_less)[0]
                       : select(a, k, int_less);
    });
  };
  CHECK(fp(3, false) == fp(3, false));
  CHECK(fp(3, false) != fp(4, false));
  CHECK(fp(3, true) == fp(20, true));

  auto v = random_ints(rng, 21);
  auto a = alloc_from(log, v);
  const std::size_t ranks[] = {0, 10, 20};
  const auto got = select_concealed(a, std::span<const std::size_t>(ranks), int_less);
  std::sort(v.begin(), v.end());
  CHECK(got == std::vector<int>{v[0], v[10], v[20]});
}

TEST_CASE("filter is stable and oblivious") {
  TraceLog log;
  auto a = alloc_from(log, std::vector<int>{4, 1, 3, 2});
  const auto even = [](int x) { return x % 2 == 0; };
  CHECK(filter(a, even) == 2);
  CHECK(a.peek()[0] == 4);
  CHECK(a.peek()[1] == 2);
  CHECK(filter(a, [](int) { return false; }) == 0);

  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    auto v = random_ints(rng, rng() % 50, 20);
    std::vector<int> expect;
    std::copy_if(v.begin(), v.end(), std::back_inserter(expect), even);
    auto b = alloc_from(log, v);
    const std::size_t c = filter(b, even);
    REQUIRE(c == expect.size());
    CHECK(std::equal(expect.begin(), expect.end(), b.peek().begin()));
  }

  std::vector<TraceFingerprint> fps;
  for (int c = 0; c < 10; ++c) {
    auto b = alloc_from(log, random_ints(rng, 33));
    fps.push_back(trace_of(log, [&] { return filter(b, even); }));
  }
  CHECK(std::count(fps.begin(), fps.end(), fps[0]) == 10);
}

TEST_CASE("append") {
  TraceLog log;
  auto a = alloc_from(log, std::vector<int>{9, 9, 0, 0});
  auto b = alloc_from(log, std::vector<int>{1, 2});
  append(a, b, 2, 2);
  CHECK(read_all(a) == std::vector<int>{9, 9, 1, 2});
  append(a, b, 0, 0);
  CHECK_THROWS_AS(append(a, b, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(append(a, b, 5, 0), std::invalid_argument);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t na = 1 + rng() % 30, nb = rng() % 30;
    auto u = random_ints(rng, na), w = random_ints(rng, nb);
    const std::size_t i = rng() % (na + 1);
    const std::size_t k = std::min(nb, static_cast<std::size_t>(rng() % (na - i + 1)));
    auto x = alloc_from(log, u);
    auto y = alloc_from(log, w);
    append(x, y, i, k);
    for (std::size_t j = 0; j < i; ++j) CHECK(x.peek()[j] == u[j]);
    for (std::size_t j = 0; j < k; ++j) CHECK(x.peek()[i + j] == w[j]);
  }

  std::vector<TraceFingerprint> fps;
  for (auto [i, k] : {std::pair<std::size_t, std::size_t>{0, 3}, {2, 1}, {3, 0}}) {
    auto x = alloc_from(log, random_ints(rng, 5));
    auto y = alloc_from(log, random_ints(rng, 3));
    fps.push_back(trace_of(log, [&] { append(x, y, i, k); }));
  }
  CHECK(std::count(fps.begin(), fps.end(), fps[0]) == 3);
}
