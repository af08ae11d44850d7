#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "minicog/values.hpp"

namespace minicog {

/// Byte size of an unboxed element in the flat heap.
/// U32: 4, U8: 1, Bool: 1. Other types have no machine layout.
uint32_t size_of(const Type& t);
bool has_layout(const Type& t);

// ---------------------------------------------------------------------------
// machine values

struct LowValue;

struct LUnit {
  bool operator==(const LUnit&) const = default;
};
struct LBool {
  uint8_t v = 0;  // 0 or 1
  bool operator==(const LBool&) const = default;
};
struct LU8 {
  uint8_t v = 0;
  bool operator==(const LU8&) const = default;
};
struct LU32 {
  uint32_t v = 0;
  bool operator==(const LU32&) const = default;
};
struct LTuple {
  std::vector<LowValue> items;
  bool operator==(const LTuple&) const = default;
};
/// struct { u32 len; T* vals; } passed by value.
struct LStructArray {
  uint32_t len = 0;
  uint32_t vals = 0;  // byte address of element 0
  bool operator==(const LStructArray&) const = default;
};
struct LFunId {
  uint32_t fid = 0;
  bool operator==(const LFunId&) const = default;
};

struct LowValue {
  std::variant<LUnit, LBool, LU8, LU32, LTuple, LStructArray, LFunId> v;
  bool operator==(const LowValue&) const = default;

  static LowValue unit() { return {LUnit{}}; }
  static LowValue boolean(bool b) { return {LBool{static_cast<uint8_t>(b ? 1 : 0)}}; }
  static LowValue u8(uint8_t x) { return {LU8{x}}; }
  static LowValue u32(uint32_t x) { return {LU32{x}}; }
  static LowValue tuple(std::vector<LowValue> xs) { return {LTuple{std::move(xs)}}; }
  static LowValue arr(uint32_t len, uint32_t vals) { return {LStructArray{len, vals}}; }
  static LowValue fid(uint32_t f) { return {LFunId{f}}; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
};

std::string to_string(const LowValue& v);

// ---------------------------------------------------------------------------
// heap

struct Allocation {
  uint32_t base = 0;
  uint32_t bytes = 0;
  Type elem;  // element layout of the region
  bool operator==(const Allocation&) const = default;
};

/// Flat little-endian byte-addressed heap with an allocation table.
struct LowHeap {
  std::vector<uint8_t> bytes;
  std::vector<Allocation> allocs;

  explicit LowHeap(uint32_t size = 1u << 20) : bytes(size, 0) {}

  uint32_t size() const { return static_cast<uint32_t>(bytes.size()); }

  /// Reserves [base, base+len) for values of layout elem. Regions must be
  /// disjoint and in bounds; returns false otherwise.
  bool reserve(uint32_t base, uint32_t len, const Type& elem);

  bool allocated(uint32_t addr, uint32_t len) const;

  bool operator==(const LowHeap&) const = default;
};

/// Hex image, 16 bytes per line, zero-only lines elided:
///   00000010: 03 00 00 00 ...
std::string hex_dump(const LowHeap& h);

// ---------------------------------------------------------------------------
// execution

/// Success carries the result and the heap after the call; Failed marks
/// undefined behaviour (out-of-bounds or unaligned access, unknown function
/// id, address arithmetic wraparound).
struct ExecOutcome {
  bool is_ok = false;
  LowValue value;
  LowHeap heap{0};
  std::string failure;

  static ExecOutcome ok(LowValue v, LowHeap h) { return {true, std::move(v), std::move(h), {}}; }
  static ExecOutcome failed(std::string why) { return {false, {}, LowHeap{0}, std::move(why)}; }
};

/// Machine-level function: mutates the heap it is handed, returns a value or
/// reports failure via the thrown-free Result channel.
struct LowResult {
  bool is_ok = false;
  LowValue value;
  std::string failure;

  static LowResult ok(LowValue v) { return {true, std::move(v), {}}; }
  static LowResult failed(std::string why) { return {false, {}, std::move(why)}; }
};

using LowFn = std::function<LowResult(struct FidTable const&, LowHeap&, const LowValue&)>;

/// Function-id dispatch table; the machine has no function pointers.
struct FidTable {
  std::map<uint32_t, LowFn> fns;

  LowResult dispatch(uint32_t fid, LowHeap& heap, const LowValue& arg) const;
};

// Word accessors. Addresses must be 4-aligned and inside an allocated region.
LowResult read_word(const LowHeap& h, uint32_t addr);
LowResult write_word(LowHeap& h, uint32_t addr, uint32_t val);

LowResult read_elem(const LowHeap& h, const Type& elem, uint32_t addr);
LowResult write_elem(LowHeap& h, const Type& elem, uint32_t addr, const LowValue& v);

// Array library ops (Fig-style layouts: struct of len and element block).
ExecOutcome low_length(const LowHeap& h, const LStructArray& arr);
ExecOutcome low_get(const LowHeap& h, const Type& elem, const LStructArray& arr, uint32_t i,
                    const LowValue& def);
ExecOutcome low_put(const LowHeap& h, const Type& elem, const LStructArray& arr, uint32_t i,
                    const LowValue& v);
ExecOutcome low_fold(const LowHeap& h, const FidTable& tbl, uint32_t fid, const LowValue& acc,
                     const Type& elem, const LStructArray& arr, uint32_t frm, uint32_t to,
                     const LowValue& obsv);
ExecOutcome low_mapaccum(const LowHeap& h, const FidTable& tbl, uint32_t fid, const LowValue& acc,
                         const Type& elem, const LStructArray& arr, uint32_t frm, uint32_t to,
                         const LowValue& obsv);
ExecOutcome low_repeat(const LowHeap& h, const FidTable& tbl, uint32_t n, uint32_t fid_stop,
                       uint32_t fid_step, const LowValue& acc, const LowValue& obsv);

// ---------------------------------------------------------------------------
// relations against the update semantics

using AddrMap = std::map<Loc, uint32_t>;

/// Value relation: machine value vs update-semantics value. Arrays relate
/// when lengths agree and the element-block location maps to the vals
/// address; locations are dereferenced through the store.
bool rel_vc(const LowValue& c, const UValue& u, const Store& mu, const AddrMap& amap,
            const std::map<std::string, uint32_t>& fids);

/// Heap relation: every mapped store location decodes, at its mapped address,
/// to the same bytes the heap holds, and allocation-table regions cover
/// exactly the encoded bytes of mapped locations.
bool rel_hc(const LowHeap& sigma, const Store& mu, const AddrMap& amap);

}  // namespace minicog
