#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "minicog/lowmachine.hpp"
#include "minicog/shallow.hpp"
#include "minicog/support.hpp"
#include "minicog/values.hpp"

namespace minicog {

struct EvalCtx;  // dynsem; entries call back into the evaluators through it

/// ξ at the value level, shared between the polymorphic and monomorphic
/// layers: entries are parametric in their type arguments.
using VFfiFun =
    std::function<VValue(const EvalCtx&, const std::vector<Type>&, const VValue&)>;
/// ξ at the update level: store-transforming.
using UFfiFun =
    std::function<UValue(const EvalCtx&, Store&, const std::vector<Type>&, const UValue&)>;

struct VEnvEntry {
  VFfiFun fn;
  int order = 1;
};
struct UEnvEntry {
  UFfiFun fn;
  int order = 1;
};

struct FfiEnvV {
  std::map<std::string, VEnvEntry> fns;
};
struct FfiEnvU {
  std::map<std::string, UEnvEntry> fns;
};

// ---------------------------------------------------------------------------
// abstract types

struct GenAbs {
  UValue u;  // boxed: a location whose cell holds the abstract header
  VValue v;
};

/// Everything the system needs to know about one externally-defined type:
/// value typing at both levels, the cross-level correspondence case, the
/// machine layout of elements, and a generator for randomized obligation
/// checks.
struct AbsTypeEntry {
  std::string tag;
  std::function<bool(const VAbs&, const Type&, std::string*)> vtype_v;
  std::function<Result<Footprint>(const UAbs&, const Store&, const Type&)> vtype_u;
  std::function<Result<Footprint>(const UAbs&, const Store&, const VAbs&, const Type&)> corr;
  std::function<uint32_t(const Type&)> elem_size;
  std::function<GenAbs(Rng&, Store&, const Type&)> gen;
};

// ---------------------------------------------------------------------------
// registry

struct RegistryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One foreign function, registered for every semantic level at once.
struct FfiEntry {
  std::string name;
  int order = 1;
  std::vector<std::string> tyvars;
  Type arg_scheme;
  Type ret_scheme;
  VFfiFun value_fn;
  UFfiFun update_fn;
  uint32_t fid = 0;
  LowFn low_fn;  // machine form of the default (U32) instantiation
  std::function<SValue(const ShallowCtx&, const SValue&)> shallow_fn;
  std::vector<std::string> deps;  // names this entry may dispatch into

  Type fun_scheme() const { return Type::fun(arg_scheme, ret_scheme); }
};

struct Registry {
  FfiEnvV env_v;
  FfiEnvU env_u;
  FidTable fid_table;
  std::map<std::string, uint32_t> fids;  // every dispatchable name, incl. program functions
  std::map<std::string, int> orders;
  ShallowCtx shallow;
  std::map<std::string, AbsTypeEntry> abs_types;
  std::map<std::string, FfiEntry> entries;
  uint32_t next_fid = 1;

  /// All five layers at once; rejects duplicates and order-rank violations
  /// (every declared dependency must already be registered at a lower rank).
  void register_entry(FfiEntry e);

  /// Low-level and shallow forms of a program-defined function (its value and
  /// update semantics come from its body).
  void register_program_fun(const std::string& name, int order,
                            const std::vector<std::string>& deps, LowFn low,
                            std::function<SValue(const ShallowCtx&, const SValue&)> shallow);

  void register_abs_type(AbsTypeEntry e);

  const FfiEntry* find_entry(const std::string& name) const {
    auto it = entries.find(name);
    return it == entries.end() ? nullptr : &it->second;
  }

  uint32_t fid_of(const std::string& name) const;
};

/// The array type and its five operations plus the generic loop, Fig-faithful
/// at every level.
AbsTypeEntry make_array_abs_entry();
void register_array_library(Registry& reg);

// ---------------------------------------------------------------------------
// obligation checks

struct ClauseReport {
  std::string clause;
  uint64_t trials = 0;
  uint64_t failures = 0;
  std::string counterexample;  // empty when clean
};

struct ObligationReport {
  std::string tag;
  std::vector<ClauseReport> clauses;

  bool ok() const;
  std::string to_json() const;
};

/// Randomized checks of the six value-typing requirements for an abstract
/// type: bang_v, bang_u, no-alias, valid, frame, read-only.
ObligationReport check_abs_type_obligations(const AbsTypeEntry& entry, uint64_t seed,
                                            uint64_t trials);

enum class ObligationClause { BangV, BangU, NoAlias, Valid, Frame, ReadOnly };

const char* clause_name(ObligationClause c);

/// Deliberately broken copy of the array entry violating exactly one clause;
/// used to show the obligation checker catches each kind of fault.
AbsTypeEntry make_faulty_array_abs_entry(ObligationClause which);

}  // namespace minicog
