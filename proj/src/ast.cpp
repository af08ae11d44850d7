#include "minicog/ast.hpp"

#include <map>

namespace minicog {

// ---------------------------------------------------------------------------
// type printing

namespace {

// Precedence levels for type syntax: arrow < application < bang-atom.
enum { TP_ARROW = 0, TP_APP = 1, TP_ATOM = 2 };

void print_type(const Type& t, int ctx, std::string& out) {
  switch (t.tag) {
    case TyTag::Unit: out += "Unit"; return;
    case TyTag::Bool: out += "Bool"; return;
    case TyTag::U8: out += "U8"; return;
    case TyTag::U32: out += "U32"; return;
    case TyTag::Var: out += t.name; return;
    case TyTag::Prod: {
      out += "(";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        print_type(t.args[i], TP_ARROW, out);
      }
      out += ")";
      return;
    }
    case TyTag::Fun: {
      bool paren = ctx > TP_ARROW;
      if (paren) out += "(";
      print_type(t.args[0], TP_APP, out);
      out += " -> ";
      print_type(t.args[1], TP_ARROW, out);
      if (paren) out += ")";
      return;
    }
    case TyTag::Bang: {
      print_type(t.args[0], TP_ATOM, out);
      out += "!";
      return;
    }
    case TyTag::Abs: {
      // A read-only application prints as (Name args)!. Its parameters are
      // bang-normalized; strip the visible layer so reparsing restores it.
      if (t.readonly) {
        out += "(";
        Type w = t;
        w.readonly = false;
        for (Type& a : w.args)
          if (a.tag == TyTag::Bang) a = a.args[0];
        print_type(w, TP_ARROW, out);
        out += ")!";
        return;
      }
      bool paren = t.args.empty() ? false : ctx > TP_APP;
      if (paren) out += "(";
      out += t.name;
      for (const Type& a : t.args) {
        out += " ";
        print_type(a, TP_ATOM, out);
      }
      if (paren) out += ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Type& t) {
  std::string out;
  print_type(t, TP_ARROW, out);
  return out;
}

Type bang_type(const Type& t) {
  switch (t.tag) {
    case TyTag::Unit:
    case TyTag::Bool:
    case TyTag::U8:
    case TyTag::U32:
      return t;
    case TyTag::Fun:
      return t;  // function values are freely shareable
    case TyTag::Bang:
      return t;
    case TyTag::Var:
      return {TyTag::Bang, {}, {t}, false};
    case TyTag::Prod: {
      Type r = t;
      for (Type& a : r.args) a = bang_type(a);
      return r;
    }
    case TyTag::Abs: {
      Type r = t;
      r.readonly = true;
      for (Type& a : r.args) a = bang_type(a);
      return r;
    }
  }
  return t;
}

bool contains_var(const Type& t) {
  if (t.tag == TyTag::Var) return true;
  for (const Type& a : t.args)
    if (contains_var(a)) return true;
  return false;
}

namespace {

Type subst(const Type& t, const std::map<std::string, Type>& sub) {
  switch (t.tag) {
    case TyTag::Var: {
      auto it = sub.find(t.name);
      if (it == sub.end()) throw TypeOpError("uninstantiated type variable '" + t.name + "'");
      return it->second;
    }
    case TyTag::Bang:
      return bang_type(subst(t.args[0], sub));
    default: {
      Type r = t;
      for (Type& a : r.args) a = subst(a, sub);
      return r;
    }
  }
}

}  // namespace

Type instantiate_type(const Type& scheme, const std::vector<std::string>& vars,
                      const std::vector<Type>& args) {
  if (vars.size() != args.size())
    throw TypeOpError("type argument arity mismatch: expected " + std::to_string(vars.size()) +
                      ", got " + std::to_string(args.size()));
  std::map<std::string, Type> sub;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (contains_var(args[i])) throw TypeOpError("type argument contains a type variable");
    sub[vars[i]] = args[i];
  }
  return subst(scheme, sub);
}

namespace {

void canon_vars(const Type& t, std::map<std::string, std::string>& names, Type& out) {
  out = t;
  if (t.tag == TyTag::Var) {
    auto it = names.find(t.name);
    if (it == names.end())
      it = names.emplace(t.name, "$" + std::to_string(names.size())).first;
    out.name = it->second;
    return;
  }
  for (size_t i = 0; i < t.args.size(); ++i) canon_vars(t.args[i], names, out.args[i]);
}

}  // namespace

bool alpha_equal(const Type& a, const Type& b) {
  std::map<std::string, std::string> na, nb;
  Type ca, cb;
  canon_vars(a, na, ca);
  canon_vars(b, nb, cb);
  return ca == cb;
}

// ---------------------------------------------------------------------------
// expressions

void Pattern::collect_names(std::vector<std::string>& out) const {
  if (!tuple) {
    out.push_back(name);
    return;
  }
  for (const Pattern& p : parts) p.collect_names(out);
}

const char* spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "/=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

bool is_comparison(BinOp op) {
  return op == BinOp::Lt || op == BinOp::Gt || op == BinOp::Le || op == BinOp::Ge ||
         op == BinOp::Eq || op == BinOp::Ne;
}

bool is_arith(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul || op == BinOp::Div;
}

bool is_logic(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

Expr Expr::lit_u32(uint32_t v) {
  Expr e;
  e.tag = ExTag::Lit;
  e.lit = {PrimKind::U32, v};
  return e;
}

Expr Expr::lit_bool(bool b) {
  Expr e;
  e.tag = ExTag::Lit;
  e.lit = {PrimKind::Bool, b ? 1u : 0u};
  return e;
}

Expr Expr::lit_unit() {
  Expr e;
  e.tag = ExTag::Lit;
  e.lit = {PrimKind::Unit, 0};
  return e;
}

Expr Expr::variable(std::string n) {
  Expr e;
  e.tag = ExTag::Var;
  e.name = std::move(n);
  return e;
}

Expr Expr::tuple(std::vector<Expr> es) {
  Expr e;
  e.tag = ExTag::Tuple;
  e.kids = std::move(es);
  return e;
}

Expr Expr::app(std::string f, std::vector<Type> tys, Expr arg) {
  Expr e;
  e.tag = ExTag::App;
  e.name = std::move(f);
  e.tyargs = std::move(tys);
  e.kids.push_back(std::move(arg));
  return e;
}

Expr Expr::let(Pattern p, Expr rhs, Expr body) {
  Expr e;
  e.tag = ExTag::Let;
  e.pat = std::move(p);
  e.kids.push_back(std::move(rhs));
  e.kids.push_back(std::move(body));
  return e;
}

Expr Expr::cond(Expr c, Expr t, Expr f) {
  Expr e;
  e.tag = ExTag::If;
  e.kids.push_back(std::move(c));
  e.kids.push_back(std::move(t));
  e.kids.push_back(std::move(f));
  return e;
}

Expr Expr::prim(BinOp op, Expr l, Expr r) {
  Expr e;
  e.tag = ExTag::Prim;
  e.op = op;
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}

Expr Expr::bang(std::vector<std::string> vars, Pattern p, Expr rhs, Expr body) {
  Expr e;
  e.tag = ExTag::Bang;
  e.observed = std::move(vars);
  e.pat = std::move(p);
  e.kids.push_back(std::move(rhs));
  e.kids.push_back(std::move(body));
  return e;
}

bool same_expr(const Expr& a, const Expr& b) {
  if (a.tag != b.tag || a.name != b.name || a.tyargs != b.tyargs || a.pat != b.pat ||
      a.observed != b.observed || a.kids.size() != b.kids.size())
    return false;
  if (a.tag == ExTag::Lit && !(a.lit == b.lit)) return false;
  if (a.tag == ExTag::Prim && a.op != b.op) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!same_expr(a.kids[i], b.kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// programs

const FunDef* Program::find(const std::string& name) const {
  for (const FunDef& f : fundefs)
    if (f.name == name) return &f;
  return nullptr;
}

const TypeDecl* Program::find_type(const std::string& name) const {
  for (const TypeDecl& t : typedefs)
    if (t.name == name) return &t;
  return nullptr;
}

bool same_program(const Program& a, const Program& b) {
  if (a.typedefs.size() != b.typedefs.size() || a.fundefs.size() != b.fundefs.size()) return false;
  for (size_t i = 0; i < a.typedefs.size(); ++i) {
    if (a.typedefs[i].name != b.typedefs[i].name || a.typedefs[i].tyvars != b.typedefs[i].tyvars)
      return false;
  }
  for (size_t i = 0; i < a.fundefs.size(); ++i) {
    const FunDef &f = a.fundefs[i], &g = b.fundefs[i];
    if (f.name != g.name || f.tyvars != g.tyvars || !(f.param == g.param) ||
        !(f.arg_type == g.arg_type) || !(f.ret_type == g.ret_type) ||
        f.body.has_value() != g.body.has_value())
      return false;
    if (f.body && !same_expr(*f.body, *g.body)) return false;
  }
  return true;
}

}  // namespace minicog
