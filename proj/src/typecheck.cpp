#include "minicog/typecheck.hpp"

#include <optional>

namespace minicog {

Kind kind_of(const TyVarCtx& A, const Type& t) {
  switch (t.tag) {
    case TyTag::Unit:
    case TyTag::Bool:
    case TyTag::U8:
    case TyTag::U32:
    case TyTag::Fun:
    case TyTag::Bang:
      return Kind::Shareable;
    case TyTag::Var: {
      auto it = A.vars.find(t.name);
      if (it == A.vars.end()) throw TypeError("unbound type variable '" + t.name + "'");
      return it->second;
    }
    case TyTag::Prod: {
      for (const Type& a : t.args)
        if (kind_of(A, a) == Kind::Linear) return Kind::Linear;
      return Kind::Shareable;
    }
    case TyTag::Abs:
      return t.readonly ? Kind::Shareable : Kind::Linear;
  }
  return Kind::Shareable;
}

namespace {

Type subst_impl(const Type& t, const std::map<std::string, Type>& sub) {
  switch (t.tag) {
    case TyTag::Var: {
      auto it = sub.find(t.name);
      if (it == sub.end()) throw TypeError("unresolved type variable '" + t.name + "'");
      return it->second;
    }
    case TyTag::Bang:
      return bang_type(subst_impl(t.args[0], sub));
    default: {
      Type r = t;
      for (Type& a : r.args) a = subst_impl(a, sub);
      return r;
    }
  }
}

[[noreturn]] void err(const Expr& e, const std::string& msg) {
  throw TypeError(msg + " at " + std::to_string(e.line) + ":" + std::to_string(e.col));
}

struct Checker {
  const Program& prog;
  const TyVarCtx& A;
  TypingCtx& G;

  // -- pattern binding --------------------------------------------------------

  void bind_pattern(const Pattern& p, const Type& t, const Expr& site) {
    if (!p.tuple) {
      G.push(p.name, t);
      return;
    }
    if (t.tag != TyTag::Prod || t.args.size() != p.parts.size())
      err(site, "pattern does not match type " + to_string(t));
    for (size_t i = 0; i < p.parts.size(); ++i) bind_pattern(p.parts[i], t.args[i], site);
  }

  // Pops bindings down to `mark`, rejecting dropped linear variables.
  void pop_scope(size_t mark, const Expr& site) {
    while (G.binds.size() > mark) {
      const Binding& b = G.binds.back();
      if (!b.used && kind_of(A, b.type) == Kind::Linear)
        err(site, "linear variable '" + b.name + "' is never used");
      G.binds.pop_back();
    }
  }

  // -- type-argument inference --------------------------------------------------

  // Collects Var solutions where scheme and candidate align structurally.
  // First binding wins: the provisional synthesis may give literals the wrong
  // width, so disagreements here are left for the checking pass to settle.
  static void match_scheme(const Type& scheme, const Type& t,
                           std::map<std::string, Type>& sol) {
    if (scheme.tag == TyTag::Var) {
      sol.emplace(scheme.name, t);
      return;
    }
    if (scheme.tag == TyTag::Bang && scheme.args[0].tag == TyTag::Var) {
      if (bang_type(t) == t) sol.emplace(scheme.args[0].name, t);
      return;
    }
    if (scheme.tag != t.tag || scheme.args.size() != t.args.size()) return;
    if (scheme.tag == TyTag::Abs && (scheme.name != t.name || scheme.readonly != t.readonly))
      return;
    for (size_t i = 0; i < scheme.args.size(); ++i)
      match_scheme(scheme.args[i], t.args[i], sol);
  }

  // -- judgement ----------------------------------------------------------------

  Type synth(Expr& e) { return go(e, nullptr); }

  void check(Expr& e, const Type& want) { go(e, &want); }

  Type go(Expr& e, const Type* want) {
    Type got = dispatch(e, want);
    if (want && !(got == *want))
      err(e, "type mismatch: expected " + to_string(*want) + ", got " + to_string(got));
    return got;
  }

  Type dispatch(Expr& e, const Type* want) {
    switch (e.tag) {
      case ExTag::Lit: {
        switch (e.lit.kind) {
          case PrimKind::Unit: return Type::unit();
          case PrimKind::Bool: return Type::boolean();
          case PrimKind::U8: return Type::u8();
          case PrimKind::U32:
            if (want && want->tag == TyTag::U8) {
              if (e.lit.bits > 0xff) err(e, "literal does not fit in U8");
              e.lit.kind = PrimKind::U8;
              return Type::u8();
            }
            return Type::u32();
        }
        return Type::unit();
      }

      case ExTag::Var: {
        if (Binding* b = G.lookup(e.name)) {
          if (b->used) err(e, "variable '" + e.name + "' used after being consumed");
          if (kind_of(A, b->type) == Kind::Linear) b->used = true;
          return b->type;
        }
        const FunDef* f = prog.find(e.name);
        if (!f) err(e, "unbound name '" + e.name + "'");
        if (!f->tyvars.empty())
          err(e, "polymorphic function '" + e.name + "' cannot be referenced without application");
        return f->fun_type();
      }

      case ExTag::Tuple: {
        if (want && want->tag == TyTag::Prod && want->args.size() == e.kids.size()) {
          for (size_t i = 0; i < e.kids.size(); ++i) check(e.kids[i], want->args[i]);
          return *want;
        }
        std::vector<Type> parts;
        parts.reserve(e.kids.size());
        for (Expr& k : e.kids) parts.push_back(synth(k));
        return Type::prod(std::move(parts));
      }

      case ExTag::Prim: {
        if (is_arith(e.op)) {
          if (want && is_numeric(*want)) {
            check(e.kids[0], *want);
            check(e.kids[1], *want);
            return *want;
          }
          Type l = synth(e.kids[0]);
          if (!is_numeric(l)) err(e, "arithmetic on non-numeric type " + to_string(l));
          check(e.kids[1], l);
          return l;
        }
        if (is_comparison(e.op)) {
          Type l = synth(e.kids[0]);
          bool eqlike = e.op == BinOp::Eq || e.op == BinOp::Ne;
          if (!is_numeric(l) && !(eqlike && l.tag == TyTag::Bool))
            err(e, "comparison on unsupported type " + to_string(l));
          check(e.kids[1], l);
          return Type::boolean();
        }
        // logic
        check(e.kids[0], Type::boolean());
        check(e.kids[1], Type::boolean());
        return Type::boolean();
      }

      case ExTag::If: {
        check(e.kids[0], Type::boolean());
        std::vector<bool> before = usage_flags();
        Type then_t = want ? (check(e.kids[1], *want), *want) : synth(e.kids[1]);
        std::vector<bool> after_then = usage_flags();
        set_usage_flags(before);
        check(e.kids[2], then_t);
        std::vector<bool> after_else = usage_flags();
        if (after_then != after_else)
          err(e, "branches of if consume different sets of linear variables");
        return then_t;
      }

      case ExTag::Let: {
        Type rhs_t = synth(e.kids[0]);
        size_t mark = G.binds.size();
        bind_pattern(e.pat, rhs_t, e);
        Type body_t = want ? (check(e.kids[1], *want), *want) : synth(e.kids[1]);
        pop_scope(mark, e);
        return body_t;
      }

      case ExTag::Bang: {
        // Observed variables are retyped at their banged type for the bound
        // expression; the region result must be shareable so no banged
        // reference escapes.
        std::vector<std::pair<size_t, Type>> saved;
        for (const std::string& v : e.observed) {
          Binding* b = G.lookup(v);
          if (!b) err(e, "unbound name '" + v + "' in let! list");
          if (b->used) err(e, "variable '" + v + "' observed after being consumed");
          size_t idx = static_cast<size_t>(b - G.binds.data());
          bool seen = false;
          for (const auto& [i, _] : saved) seen = seen || i == idx;
          if (seen) continue;  // a repeated name must not shadow the saved type
          saved.emplace_back(idx, b->type);
          b->type = bang_type(b->type);
        }
        Type rhs_t = synth(e.kids[0]);
        if (kind_of(A, rhs_t) != Kind::Shareable)
          err(e, "let! region result must be shareable, got " + to_string(rhs_t));
        for (auto& [idx, ty] : saved) G.binds[idx].type = ty;
        size_t mark = G.binds.size();
        bind_pattern(e.pat, rhs_t, e);
        Type body_t = want ? (check(e.kids[1], *want), *want) : synth(e.kids[1]);
        pop_scope(mark, e);
        return body_t;
      }

      case ExTag::App: {
        const FunDef* f = prog.find(e.name);
        if (!f) err(e, "unbound function '" + e.name + "'");
        std::vector<Type> tyargs = e.tyargs;
        if (tyargs.empty() && !f->tyvars.empty()) {
          // Infer instantiation by matching the declared argument scheme
          // against a provisional synthesis of the argument.
          TypingCtx scratch = G;
          Checker probe{prog, A, scratch};
          Type arg_t = probe.synth(e.kids[0]);
          std::map<std::string, Type> sol;
          match_scheme(f->arg_type, arg_t, sol);
          for (const std::string& v : f->tyvars) {
            auto it = sol.find(v);
            if (it == sol.end())
              err(e, "cannot infer type argument '" + v + "' for '" + e.name +
                         "'; supply it explicitly");
            tyargs.push_back(it->second);
          }
          e.tyargs = tyargs;  // record the instantiation for later passes
        }
        if (tyargs.size() != f->tyvars.size())
          err(e, "'" + e.name + "' expects " + std::to_string(f->tyvars.size()) +
                     " type arguments");
        Type arg_want = subst_type(f->arg_type, f->tyvars, tyargs);
        Type ret = subst_type(f->ret_type, f->tyvars, tyargs);
        check(e.kids[0], arg_want);
        return ret;
      }
    }
    err(e, "malformed expression");
  }

  std::vector<bool> usage_flags() const {
    std::vector<bool> f;
    f.reserve(G.binds.size());
    for (const Binding& b : G.binds) f.push_back(b.used);
    return f;
  }

  void set_usage_flags(const std::vector<bool>& f) {
    for (size_t i = 0; i < f.size() && i < G.binds.size(); ++i) G.binds[i].used = f[i];
  }
};

}  // namespace

Type subst_type(const Type& scheme, const std::vector<std::string>& vars,
                const std::vector<Type>& args) {
  if (vars.size() != args.size()) throw TypeError("type argument arity mismatch");
  std::map<std::string, Type> sub;
  for (size_t i = 0; i < vars.size(); ++i) sub[vars[i]] = args[i];
  return subst_impl(scheme, sub);
}

Type typecheck_expr(const Program& prog, const TyVarCtx& A, TypingCtx& G, Expr& e) {
  Checker c{prog, A, G};
  return c.synth(e);
}

TypedProgram typecheck_program(const Program& p) {
  TypedProgram tp{p};
  for (FunDef& f : tp.prog.fundefs) {
    if (f.foreign()) continue;
    TyVarCtx A = TyVarCtx::all_linear(f.tyvars);
    TypingCtx G;
    Checker c{tp.prog, A, G};
    try {
      c.bind_pattern(f.param, f.arg_type, f.body ? *f.body : Expr{});
      c.check(*f.body, f.ret_type);
      c.pop_scope(0, *f.body);
    } catch (const TypeError& ex) {
      throw TypeError("in function '" + f.name + "': " + ex.what());
    }
  }
  return tp;
}

}  // namespace minicog
