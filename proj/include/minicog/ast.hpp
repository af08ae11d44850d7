#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace minicog {

// ---------------------------------------------------------------------------
// types

enum class TyTag { Unit, Bool, U8, U32, Prod, Fun, Var, Abs, Bang };

struct Type {
  TyTag tag = TyTag::Unit;
  std::string name;        // Var: variable name; Abs: constructor name
  std::vector<Type> args;  // Prod: components; Fun: {arg, ret}; Abs: parameters; Bang: {inner}
  bool readonly = false;   // Abs only

  bool operator==(const Type&) const = default;

  static Type unit() { return {TyTag::Unit, {}, {}, false}; }
  static Type boolean() { return {TyTag::Bool, {}, {}, false}; }
  static Type u8() { return {TyTag::U8, {}, {}, false}; }
  static Type u32() { return {TyTag::U32, {}, {}, false}; }
  static Type prod(std::vector<Type> parts) { return {TyTag::Prod, {}, std::move(parts), false}; }
  static Type fun(Type arg, Type ret) { return {TyTag::Fun, {}, {std::move(arg), std::move(ret)}, false}; }
  static Type var(std::string n) { return {TyTag::Var, std::move(n), {}, false}; }
  static Type abs(std::string n, std::vector<Type> params, bool ro) {
    return {TyTag::Abs, std::move(n), std::move(params), ro};
  }
};

inline bool is_prim(const Type& t) {
  return t.tag == TyTag::Unit || t.tag == TyTag::Bool || t.tag == TyTag::U8 || t.tag == TyTag::U32;
}

inline bool is_numeric(const Type& t) { return t.tag == TyTag::U8 || t.tag == TyTag::U32; }

/// Writable array of element type t.
inline Type array_of(Type elem, bool ro = false) { return Type::abs("Array", {std::move(elem)}, ro); }

std::string to_string(const Type& t);

/// The !-operator. Normalizing: idempotent, pushes through products and into
/// abstract-type parameters; Bang nodes survive only around type variables.
Type bang_type(const Type& t);

bool contains_var(const Type& t);

struct TypeOpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Substitutes args for vars (positionally) throughout scheme. The result must
/// be variable-free; Bang nodes are normalized away during substitution.
Type instantiate_type(const Type& scheme, const std::vector<std::string>& vars,
                      const std::vector<Type>& args);

/// True when a and b are the same type up to renaming of type variables.
bool alpha_equal(const Type& a, const Type& b);

// ---------------------------------------------------------------------------
// expressions

enum class PrimKind { Unit, Bool, U8, U32 };

struct PrimValue {
  PrimKind kind = PrimKind::Unit;
  uint32_t bits = 0;  // Bool: 0/1; U8: low byte; U32: all

  bool operator==(const PrimValue&) const = default;
};

struct Pattern {
  bool tuple = false;
  std::string name;            // leaf binder
  std::vector<Pattern> parts;  // tuple components

  bool operator==(const Pattern&) const = default;

  static Pattern var(std::string n) { return {false, std::move(n), {}}; }
  static Pattern tup(std::vector<Pattern> ps) { return {true, {}, std::move(ps)}; }

  void collect_names(std::vector<std::string>& out) const;
};

enum class BinOp { Add, Sub, Mul, Div, Lt, Gt, Le, Ge, Eq, Ne, And, Or };

const char* spelling(BinOp op);
bool is_comparison(BinOp op);
bool is_arith(BinOp op);
bool is_logic(BinOp op);

enum class ExTag { Lit, Var, Let, If, Prim, Tuple, App, Bang };

struct Expr {
  ExTag tag = ExTag::Lit;
  PrimValue lit;                      // Lit
  std::string name;                   // Var: variable; App: function name
  BinOp op = BinOp::Add;              // Prim
  std::vector<Type> tyargs;           // App (empty: monomorphic or inferred)
  Pattern pat;                        // Let, Bang
  std::vector<std::string> observed;  // Bang: variables read-only for the region
  std::vector<Expr> kids;             // Let/Bang: {rhs, body}; If: {c,t,e}; Prim: {l,r};
                                      // Tuple: elements; App: {argument}
  int line = 0, col = 0;

  static Expr lit_u32(uint32_t v);
  static Expr lit_bool(bool b);
  static Expr lit_unit();
  static Expr variable(std::string n);
  static Expr tuple(std::vector<Expr> es);
  static Expr app(std::string f, std::vector<Type> tys, Expr arg);
  static Expr let(Pattern p, Expr rhs, Expr body);
  static Expr cond(Expr c, Expr t, Expr e);
  static Expr prim(BinOp op, Expr l, Expr r);
  static Expr bang(std::vector<std::string> vars, Pattern p, Expr rhs, Expr body);
};

/// Structural equality ignoring source positions.
bool same_expr(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// programs

struct TypeDecl {
  std::string name;
  std::vector<std::string> tyvars;
};

struct FunDef {
  std::string name;
  std::vector<std::string> tyvars;
  Pattern param;  // meaningful only when body is present
  Type arg_type;
  Type ret_type;
  std::optional<Expr> body;  // nullopt: foreign

  // For monomorphised copies of foreign declarations: the original registry
  // name and the fixed instantiation. Identity for ordinary declarations.
  std::string base_name;
  std::vector<Type> base_tyargs;

  bool foreign() const { return !body.has_value(); }
  Type fun_type() const { return Type::fun(arg_type, ret_type); }
};

struct Program {
  std::vector<TypeDecl> typedefs;
  std::vector<FunDef> fundefs;

  const FunDef* find(const std::string& name) const;
  const TypeDecl* find_type(const std::string& name) const;
};

bool same_program(const Program& a, const Program& b);

}  // namespace minicog
