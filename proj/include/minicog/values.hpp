#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "minicog/ast.hpp"

namespace minicog {

using Loc = uint64_t;

// ---------------------------------------------------------------------------
// value semantics

struct VValue;

struct VUnit {
  bool operator==(const VUnit&) const = default;
};
struct VBool {
  bool v = false;
  bool operator==(const VBool&) const = default;
};
struct VU8 {
  uint8_t v = 0;
  bool operator==(const VU8&) const = default;
};
struct VU32 {
  uint32_t v = 0;
  bool operator==(const VU32&) const = default;
};
struct VProd {
  std::vector<VValue> items;
  bool operator==(const VProd&) const = default;
};
struct VFun {
  std::string name;
  std::vector<Type> tyargs;
  bool operator==(const VFun&) const = default;
};
/// Abstract value; the one registered payload shape is the list-backed array.
struct VWArray {
  Type elem;
  std::vector<VValue> xs;
  bool operator==(const VWArray&) const = default;
};
struct VAbs {
  std::string tag;  // "Array"
  VWArray wa;
  bool operator==(const VAbs&) const = default;
};

struct VValue {
  std::variant<VUnit, VBool, VU8, VU32, VProd, VFun, VAbs> v;
  bool operator==(const VValue&) const = default;

  static VValue unit() { return {VUnit{}}; }
  static VValue boolean(bool b) { return {VBool{b}}; }
  static VValue u8(uint8_t x) { return {VU8{x}}; }
  static VValue u32(uint32_t x) { return {VU32{x}}; }
  static VValue prod(std::vector<VValue> xs) { return {VProd{std::move(xs)}}; }
  static VValue fun(std::string n, std::vector<Type> tys = {}) {
    return {VFun{std::move(n), std::move(tys)}};
  }
  static VValue array(Type elem, std::vector<VValue> xs) {
    return {VAbs{"Array", VWArray{std::move(elem), std::move(xs)}}};
  }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
};

std::string to_string(const VValue& v);

// ---------------------------------------------------------------------------
// update semantics

struct UValue;

struct UUnit {
  bool operator==(const UUnit&) const = default;
};
struct UBool {
  bool v = false;
  bool operator==(const UBool&) const = default;
};
struct UU8 {
  uint8_t v = 0;
  bool operator==(const UU8&) const = default;
};
struct UU32 {
  uint32_t v = 0;
  bool operator==(const UU32&) const = default;
};
struct UProd {
  std::vector<UValue> items;
  bool operator==(const UProd&) const = default;
};
struct UFun {
  std::string name;
  std::vector<Type> tyargs;
  bool operator==(const UFun&) const = default;
};
struct ULoc {
  Loc loc = 0;
  bool operator==(const ULoc&) const = default;
};
/// Array header: element type, length, and the location of element 0.
/// Elements live at consecutive locations base .. base+len-1.
struct UWArray {
  Type elem;
  uint32_t len = 0;
  Loc base = 0;
  bool operator==(const UWArray&) const = default;
};
struct UAbs {
  std::string tag;  // "Array"
  UWArray wa;
  bool operator==(const UAbs&) const = default;
};

struct UValue {
  std::variant<UUnit, UBool, UU8, UU32, UProd, UFun, ULoc, UAbs> v;
  bool operator==(const UValue&) const = default;

  static UValue unit() { return {UUnit{}}; }
  static UValue boolean(bool b) { return {UBool{b}}; }
  static UValue u8(uint8_t x) { return {UU8{x}}; }
  static UValue u32(uint32_t x) { return {UU32{x}}; }
  static UValue prod(std::vector<UValue> xs) { return {UProd{std::move(xs)}}; }
  static UValue fun(std::string n, std::vector<Type> tys = {}) {
    return {UFun{std::move(n), std::move(tys)}};
  }
  static UValue loc(Loc l) { return {ULoc{l}}; }
  static UValue array(Type elem, uint32_t len, Loc base) {
    return {UAbs{"Array", UWArray{std::move(elem), len, base}}};
  }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
};

std::string to_string(const UValue& v);

/// The mutable store μ. Reads of unmapped locations are a distinguishable
/// absence, not an error value.
struct Store {
  std::map<Loc, UValue> cells;
  Loc next = 1;
  uint64_t version = 0;  // bumped on every mutation; lets purity checks skip deep compares

  Loc alloc(UValue v) {
    Loc l = next++;
    cells.emplace(l, std::move(v));
    version++;
    return l;
  }

  const UValue* get(Loc l) const {
    auto it = cells.find(l);
    return it == cells.end() ? nullptr : &it->second;
  }

  void put(Loc l, UValue v) {
    cells[l] = std::move(v);
    if (l >= next) next = l + 1;
    version++;
  }

  void erase(Loc l) {
    cells.erase(l);
    version++;
  }

  /// Mapped entries only; the fresh counter does not take part in equality.
  bool same_cells(const Store& other) const { return cells == other.cells; }
};

/// Canonical JSON snapshot, sorted by location id.
std::string store_to_json(const Store& s);

// ---------------------------------------------------------------------------
// footprints

/// Read-only and writable location sets reachable from a value.
struct Footprint {
  std::set<Loc> r, w;

  bool operator==(const Footprint&) const = default;

  bool disjoint() const;
  Footprint unite(const Footprint& other) const;  // plain union, no checks
  std::set<Loc> all() const;
};

bool subset(const std::set<Loc>& a, const std::set<Loc>& b);

}  // namespace minicog
