#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace minicog {

/// Accept-or-reject outcome of a relation check. Rejection carries the
/// violated clause name; it is an expected result, not an error.
template <class T>
struct Result {
  std::optional<T> val;
  std::string reject;

  static Result ok(T v) { return Result{std::move(v), {}}; }
  static Result fail(std::string why) { return Result{std::nullopt, std::move(why)}; }

  explicit operator bool() const { return val.has_value(); }
  const T& operator*() const { return *val; }
  const T* operator->() const { return &*val; }
};

// splitmix64; reproducible across platforms, unlike <random> distributions.
struct Rng {
  uint64_t state = 0;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  /// Inclusive range.
  uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

  uint32_t u32() { return static_cast<uint32_t>(next()); }
  uint8_t u8() { return static_cast<uint8_t>(next()); }
  bool flip() { return (next() & 1) != 0; }

  /// Independent stream for trial i of a seeded run.
  Rng fork(uint64_t i) const { return Rng(state ^ (0x517cc1b727220a95ULL * (i + 1))); }
};

}  // namespace minicog
