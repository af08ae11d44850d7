#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "minicog/ast.hpp"

namespace minicog {

enum class Kind { Linear, Shareable };

/// Kinding assumptions for the type variables of the function being checked.
struct TyVarCtx {
  std::map<std::string, Kind> vars;

  static TyVarCtx all_linear(const std::vector<std::string>& names) {
    TyVarCtx a;
    for (const std::string& n : names) a.vars[n] = Kind::Linear;
    return a;
  }
};

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear iff the type contains a writable abstract type, a linear type
/// variable, or a product component that is linear. Banged types, functions
/// and primitives are shareable (usable any number of times, droppable).
Kind kind_of(const TyVarCtx& A, const Type& t);

struct Binding {
  std::string name;
  Type type;
  bool used = false;
};

/// Γ with single-pass usage tracking: a linear binding flips available→used
/// at its single permitted use site.
struct TypingCtx {
  std::vector<Binding> binds;  // innermost scope last

  Binding* lookup(const std::string& name) {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  void push(std::string name, Type type) { binds.push_back({std::move(name), std::move(type), false}); }
};

/// Checks e under A; Γ, returning its type. Mutates Γ's usage states, and
/// elaborates e in place: integer literals adopt the width the context
/// demands, and inferred type arguments are recorded on call nodes.
Type typecheck_expr(const Program& prog, const TyVarCtx& A, TypingCtx& G, Expr& e);

struct TypedProgram {
  Program prog;  // bodies elaborated: literal widths fixed, call type-arguments explicit
};

TypedProgram typecheck_program(const Program& p);

/// Substitution for checking polymorphic bodies; unlike instantiate_type the
/// replacement types may mention the enclosing function's type variables.
Type subst_type(const Type& scheme, const std::vector<std::string>& vars,
                const std::vector<Type>& args);

}  // namespace minicog
