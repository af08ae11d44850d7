#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "minicog/values.hpp"

namespace minicog {

// ---------------------------------------------------------------------------
// pure top-of-tower values

struct SValue;

struct SUnit {
  bool operator==(const SUnit&) const = default;
};
struct SBool {
  bool v = false;
  bool operator==(const SBool&) const = default;
};
struct SU8 {
  uint8_t v = 0;
  bool operator==(const SU8&) const = default;
};
struct SU32 {
  uint32_t v = 0;
  bool operator==(const SU32&) const = default;
};
struct STuple {
  std::vector<SValue> items;
  bool operator==(const STuple&) const = default;
};
struct SList {
  std::vector<SValue> xs;
  bool operator==(const SList&) const = default;
};
/// Reference to a registered pure function.
struct SFun {
  std::string name;
  bool operator==(const SFun&) const = default;
};

struct SValue {
  std::variant<SUnit, SBool, SU8, SU32, STuple, SList, SFun> v;
  bool operator==(const SValue&) const = default;

  static SValue unit() { return {SUnit{}}; }
  static SValue boolean(bool b) { return {SBool{b}}; }
  static SValue u8(uint8_t x) { return {SU8{x}}; }
  static SValue u32(uint32_t x) { return {SU32{x}}; }
  static SValue tuple(std::vector<SValue> xs) { return {STuple{std::move(xs)}}; }
  static SValue list(std::vector<SValue> xs) { return {SList{std::move(xs)}}; }
  static SValue fun(std::string n) { return {SFun{std::move(n)}}; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
};

std::string to_string(const SValue& v);

/// Table of registered pure functions, for resolving SFun references.
struct ShallowCtx {
  std::map<std::string, std::function<SValue(const ShallowCtx&, const SValue&)>> funs;

  SValue apply(const SValue& fn, const SValue& arg) const;
};

// ---------------------------------------------------------------------------
// array operations on plain lists

SValue length_s(const SValue& xs);
SValue get_s(const SValue& xs, uint32_t i, const SValue& d);
SValue put_s(const SValue& xs, uint32_t i, const SValue& v);

/// Folds body over slice frm..to of xs, threading acc; body sees
/// (element, acc, obsv).
SValue fold_s(const std::function<SValue(const SValue&, const SValue&, const SValue&)>& body,
              const SValue& acc, const SValue& xs, uint32_t frm, uint32_t to, const SValue& obsv);

/// Rewrites slice frm..to with the body's element output while threading acc;
/// returns (list, acc). The untouched prefix and suffix are preserved.
std::pair<SValue, SValue> mapaccum_s(
    const std::function<std::pair<SValue, SValue>(const SValue&, const SValue&, const SValue&)>&
        body,
    const SValue& acc, const SValue& xs, uint32_t frm, uint32_t to, const SValue& obsv);

/// Structural recursion on fuel n; stops early when stop yields true.
SValue repeat_s(uint64_t n, const std::function<bool(const SValue&, const SValue&)>& stop,
                const std::function<SValue(const SValue&, const SValue&)>& step,
                const SValue& acc, const SValue& obsv);

// ---------------------------------------------------------------------------
// hand-written program embeddings

uint32_t sum_s(const std::vector<uint32_t>& xs);

struct SearchStats {
  uint64_t step_calls = 0;
  uint64_t stop_calls = 0;
};

/// Index of v in sorted xs; returns the length when absent.
uint32_t binary_search_s(const std::vector<uint32_t>& xs, uint32_t v,
                         SearchStats* stats = nullptr);

// ---------------------------------------------------------------------------
// relation to the polymorphic deep embedding

/// Prims equal; tuples pointwise; lists relate to arrays of the same length
/// with pairwise-related elements; function references relate by name.
bool rel_ps(const SValue& s, const VValue& p);

}  // namespace minicog
