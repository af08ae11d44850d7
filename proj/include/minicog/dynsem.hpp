#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "minicog/ffi.hpp"
#include "minicog/typecheck.hpp"
#include "minicog/values.hpp"

namespace minicog {

/// Raised when evaluation gets stuck or an invariant is breached at runtime.
/// Well-typed programs never raise it; in the differential suites it is a
/// test failure, not an expected outcome.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalCtx {
  const Program& prog;  // elaborated (typechecked) program
  const Registry& reg;
};

using VEnv = std::map<std::string, VValue>;
using UEnv = std::map<std::string, UValue>;

/// Checks foreign declarations against the registry's schemes; raises
/// EvalError on a mismatch. Call once before evaluating a new program.
void validate_foreigns(const EvalCtx& ctx);

VValue eval_v(const EvalCtx& ctx, const VEnv& env, const Expr& e);
UValue eval_u(const EvalCtx& ctx, const UEnv& env, Store& mu, const Expr& e);

VValue apply_fun_v(const EvalCtx& ctx, const VValue& fn, const VValue& arg);
UValue apply_fun_u(const EvalCtx& ctx, Store& mu, const UValue& fn, const UValue& arg);

/// Applies a defined function to an argument at a given layer.
VValue run_fun_v(const EvalCtx& ctx, const std::string& fun, const VValue& arg);
UValue run_fun_u(const EvalCtx& ctx, Store& mu, const std::string& fun, const UValue& arg);

/// Highest foreign order rank reachable from a function value's body;
/// combinator entries use it to enforce the staged-registration discipline.
int ffi_order_of(const EvalCtx& ctx, const std::string& fun);

// ---------------------------------------------------------------------------
// value typing

bool vtyping_v(const EvalCtx& ctx, const VValue& v, const Type& t, std::string* why = nullptr);

/// Canonical heap footprint of u at t, or the reason it has none. Accepted
/// footprints always satisfy r ∩ w = ∅.
Result<Footprint> vtyping_u(const EvalCtx& ctx, const UValue& u, const Store& mu, const Type& t);

/// Footprint of a whole environment: member footprints united, writable sets
/// required pairwise disjoint.
Result<Footprint> vtyping_env_u(const EvalCtx& ctx, const UEnv& env,
                                const std::map<std::string, Type>& gamma, const Store& mu);

// ---------------------------------------------------------------------------
// frame relation

/// Inertia, leak freedom, fresh allocation, quantified over every location
/// mentioned in either store or either set.
bool frame(const std::set<Loc>& wi, const Store& mi, const std::set<Loc>& wo, const Store& mo);

// ---------------------------------------------------------------------------
// combined value/update correspondence

/// Both value typings plus "same conceptual value": structural equality after
/// dereferencing locations; array elements pairwise with empty footprints.
Result<Footprint> corr(const EvalCtx& ctx, const UValue& u, const Store& mu, const VValue& v,
                       const Type& t);

}  // namespace minicog
