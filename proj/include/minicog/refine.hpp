#pragma once

#include <map>
#include <string>
#include <vector>

#include "minicog/corpus.hpp"
#include "minicog/dynsem.hpp"
#include "minicog/support.hpp"

namespace minicog {

// ---------------------------------------------------------------------------
// monomorphisation

struct MonoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// (polymorphic name, instantiation) → monomorphic name; injective and total
/// on every instantiation the program uses.
struct NameMap {
  std::map<std::string, std::string> m;  // key = name + '|' + mangled tyargs

  static std::string key(const std::string& name, const std::vector<Type>& tyargs);

  void add(const std::string& name, const std::vector<Type>& tyargs, std::string mono);
  const std::string& lookup(const std::string& name, const std::vector<Type>& tyargs) const;
  bool has(const std::string& name, const std::vector<Type>& tyargs) const;
};

/// Rewrites specialised calls through the name map; the result carries no
/// type arguments. Type arguments must already be concrete.
Expr mono_expr(const NameMap& n, const Expr& e);

/// Rewrites function-value names through the map; data is untouched.
VValue mono_value(const NameMap& n, const VValue& v);

struct MonoProgram {
  TypedProgram prog;
  NameMap nmap;
};

/// Specialises every instantiation reachable from the defined monomorphic
/// functions; foreign declarations get per-instantiation copies that resolve
/// to the shared registry entries.
MonoProgram monomorphise(const TypedProgram& p);

// ---------------------------------------------------------------------------
// cross-layer value generation

/// One randomly generated trial world: an update store plus the machine heap
/// image and the location→address map tying them together.
struct WorldBuilder {
  Store store;
  LowHeap heap;
  AddrMap amap;
  uint32_t cursor = 16;

  explicit WorldBuilder(uint32_t heap_bytes = 1u << 12) : heap(heap_bytes) {}

  /// Aligned region in the machine heap; throws when the heap is exhausted.
  uint32_t alloc_region(uint32_t bytes, const Type& elem);
};

struct ValueBundle {
  SValue s;
  VValue v;
  UValue u;
  LowValue c;
};

/// A value of type t represented at every layer at once; the cross-layer
/// relations hold by construction (and are re-verified in tests).
ValueBundle gen_value(Rng& rng, WorldBuilder& w, const Type& t, uint32_t array_len_max = 64);

/// Asserts corr, rel_vc, rel_hc and rel_ps on a bundle; returns the failing
/// relation's name, or empty when all hold.
std::string bundle_violation(const EvalCtx& ctx, const WorldBuilder& w, const ValueBundle& b,
                             const Type& t);

/// Literal syntax for entry arguments: ints, True/False, (), tuples in
/// parens, arrays in brackets. Type-directed.
ValueBundle parse_value_literal(const std::string& text, const Type& t, WorldBuilder& w);

// ---------------------------------------------------------------------------
// program generation

struct GeneratedProgram {
  std::string source;
  Program prog;            // parsed, not yet typechecked
  std::string entry;       // always "entry"
  Type arg_type;
  Type ret_type;
};

/// Emits a well-typed program over the implemented fragment: literals, lets,
/// conditionals, primitive ops, tuples, let! regions and calls into the
/// registered library. size bounds the number of binding steps.
GeneratedProgram gen_program(uint64_t seed, uint32_t size);

// ---------------------------------------------------------------------------
// differential checkers

struct CheckConfig {
  uint64_t seed = 42;
  uint64_t trials = 1000;
  uint32_t array_len_max = 64;
  uint32_t size_max = 6;
  uint32_t heap_bytes = 1u << 12;
};

struct CheckReport {
  std::string id;
  uint64_t seed = 0;
  uint64_t trials = 0;
  uint64_t failures = 0;
  std::string counterexample;  // first failure only
  double elapsed_ms = 0;

  bool ok() const { return failures == 0; }
  std::string to_json(bool with_timing) const;
};

CheckReport check_thm1(const Registry& reg, const CheckConfig& cfg);
CheckReport check_thm2(const Registry& reg, const CheckConfig& cfg);
CheckReport check_thm3(const Registry& reg, const CheckConfig& cfg);
CheckReport check_thm4(const Registry& reg, const CheckConfig& cfg);
CheckReport check_thm5(const Registry& reg, const CheckConfig& cfg);

/// Per-operation refinement across all three layer boundaries
/// (machine↔update, update↔value, value↔shallow) on related random inputs.
CheckReport check_thm_corres(const Registry& reg, const std::string& op, const CheckConfig& cfg);

/// One run through all five layers per trial, asserting every cross-layer
/// relation plus the footprint-shrink and frame conditions.
CheckReport check_combined(const Registry& reg, const std::string& program,
                           const CheckConfig& cfg);

/// Faults planted into ξ to show the checkers catch real divergences.
enum class SemFault {
  IllTypedLength,   // value-level length returns a boolean
  LeakyPut,         // update-level put erases the cell instead of writing
  StrayWritePut,    // update-level put scribbles on a fresh location
  DivergentPut,     // update side writes v+1 while the value side writes v
};

Registry make_registry_with_fault(SemFault fault);

}  // namespace minicog
