#include "minicog/dynsem.hpp"

#include <algorithm>

namespace minicog {

namespace {

using TySub = std::map<std::string, Type>;

Type resolve(const Type& t, const TySub& sub) {
  switch (t.tag) {
    case TyTag::Var: {
      auto it = sub.find(t.name);
      if (it == sub.end()) throw EvalError("unresolved type variable '" + t.name + "' at runtime");
      return it->second;
    }
    case TyTag::Bang:
      return bang_type(resolve(t.args[0], sub));
    default: {
      Type r = t;
      for (Type& a : r.args) a = resolve(a, sub);
      return r;
    }
  }
}

std::vector<Type> resolve_all(const std::vector<Type>& ts, const TySub& sub) {
  std::vector<Type> out;
  out.reserve(ts.size());
  for (const Type& t : ts) out.push_back(resolve(t, sub));
  return out;
}

// Effective registry key and type arguments for a foreign declaration:
// monomorphised copies carry their instantiation with them.
std::pair<std::string, std::vector<Type>> foreign_target(const FunDef& f,
                                                         const std::vector<Type>& tyargs) {
  if (!f.base_tyargs.empty() || f.base_name != f.name) return {f.base_name, f.base_tyargs};
  return {f.name, tyargs};
}

// ---------------------------------------------------------------------------
// value semantics

struct VInterp {
  const EvalCtx& ctx;

  void bind(const Pattern& p, const VValue& v, VEnv& env) {
    if (!p.tuple) {
      env[p.name] = v;
      return;
    }
    const VProd* t = v.as<VProd>();
    if (!t || t->items.size() != p.parts.size())
      throw EvalError("stuck: pattern does not match " + to_string(v));
    for (size_t i = 0; i < p.parts.size(); ++i) bind(p.parts[i], t->items[i], env);
  }

  VValue eval(const VEnv& env, const TySub& sub, const Expr& e) {
    switch (e.tag) {
      case ExTag::Lit:
        switch (e.lit.kind) {
          case PrimKind::Unit: return VValue::unit();
          case PrimKind::Bool: return VValue::boolean(e.lit.bits != 0);
          case PrimKind::U8: return VValue::u8(static_cast<uint8_t>(e.lit.bits));
          case PrimKind::U32: return VValue::u32(e.lit.bits);
        }
        return VValue::unit();
      case ExTag::Var: {
        auto it = env.find(e.name);
        if (it != env.end()) return it->second;
        const FunDef* f = ctx.prog.find(e.name);
        if (!f) throw EvalError("stuck: unbound '" + e.name + "'");
        return VValue::fun(e.name);
      }
      case ExTag::Tuple: {
        std::vector<VValue> items;
        items.reserve(e.kids.size());
        for (const Expr& k : e.kids) items.push_back(eval(env, sub, k));
        return VValue::prod(std::move(items));
      }
      case ExTag::Prim:
        return prim(e.op, eval(env, sub, e.kids[0]), eval(env, sub, e.kids[1]));
      case ExTag::If: {
        VValue c = eval(env, sub, e.kids[0]);
        const VBool* b = c.as<VBool>();
        if (!b) throw EvalError("stuck: non-boolean condition");
        return eval(env, sub, e.kids[b->v ? 1 : 2]);
      }
      case ExTag::Let:
      case ExTag::Bang: {
        VValue rhs = eval(env, sub, e.kids[0]);
        VEnv inner = env;
        bind(e.pat, rhs, inner);
        return eval(inner, sub, e.kids[1]);
      }
      case ExTag::App: {
        VValue arg = eval(env, sub, e.kids[0]);
        return call(e.name, resolve_all(e.tyargs, sub), arg);
      }
    }
    throw EvalError("stuck: malformed expression");
  }

  VValue call(const std::string& name, const std::vector<Type>& tyargs, const VValue& arg) {
    const FunDef* f = ctx.prog.find(name);
    if (!f) {
      // Direct registry call (combinator bodies drawn from the library).
      auto it = ctx.reg.env_v.fns.find(name);
      if (it == ctx.reg.env_v.fns.end()) throw EvalError("stuck: unknown function '" + name + "'");
      return it->second.fn(ctx, tyargs, arg);
    }
    if (f->foreign()) {
      auto [key, tys] = foreign_target(*f, tyargs);
      auto it = ctx.reg.env_v.fns.find(key);
      if (it == ctx.reg.env_v.fns.end())
        throw EvalError("foreign function '" + key + "' has no value-level meaning");
      return it->second.fn(ctx, tys, arg);
    }
    if (f->tyvars.size() != tyargs.size())
      throw EvalError("stuck: bad instantiation of '" + name + "'");
    TySub sub;
    for (size_t i = 0; i < f->tyvars.size(); ++i) sub[f->tyvars[i]] = tyargs[i];
    VEnv env;
    bind(f->param, arg, env);
    return eval(env, sub, *f->body);
  }

  static VValue prim(BinOp op, const VValue& l, const VValue& r) {
    if (const VU32* a = l.as<VU32>()) {
      const VU32* b = r.as<VU32>();
      if (!b) throw EvalError("stuck: mixed operand widths");
      return prim_num<uint32_t>(op, a->v, b->v);
    }
    if (const VU8* a = l.as<VU8>()) {
      const VU8* b = r.as<VU8>();
      if (!b) throw EvalError("stuck: mixed operand widths");
      return prim_num<uint8_t>(op, a->v, b->v);
    }
    if (const VBool* a = l.as<VBool>()) {
      const VBool* b = r.as<VBool>();
      if (!b) throw EvalError("stuck: boolean op on non-boolean");
      switch (op) {
        case BinOp::And: return VValue::boolean(a->v && b->v);
        case BinOp::Or: return VValue::boolean(a->v || b->v);
        case BinOp::Eq: return VValue::boolean(a->v == b->v);
        case BinOp::Ne: return VValue::boolean(a->v != b->v);
        default: throw EvalError("stuck: arithmetic on booleans");
      }
    }
    throw EvalError("stuck: primitive op on non-primitive");
  }

  template <class W>
  static VValue prim_num(BinOp op, W a, W b) {
    switch (op) {
      case BinOp::Add: return make<W>(static_cast<W>(a + b));
      case BinOp::Sub: return make<W>(static_cast<W>(a - b));
      case BinOp::Mul: return make<W>(static_cast<W>(a * b));
      case BinOp::Div: return make<W>(b == 0 ? W(0) : static_cast<W>(a / b));
      case BinOp::Lt: return VValue::boolean(a < b);
      case BinOp::Gt: return VValue::boolean(a > b);
      case BinOp::Le: return VValue::boolean(a <= b);
      case BinOp::Ge: return VValue::boolean(a >= b);
      case BinOp::Eq: return VValue::boolean(a == b);
      case BinOp::Ne: return VValue::boolean(a != b);
      default: throw EvalError("stuck: logic op on numbers");
    }
  }

  template <class W>
  static VValue make(W v) {
    if constexpr (sizeof(W) == 1)
      return VValue::u8(v);
    else
      return VValue::u32(v);
  }
};

// ---------------------------------------------------------------------------
// update semantics

struct UInterp {
  const EvalCtx& ctx;
  Store& mu;

  void bind(const Pattern& p, const UValue& v, UEnv& env) {
    if (!p.tuple) {
      env[p.name] = v;
      return;
    }
    const UProd* t = v.as<UProd>();
    if (!t || t->items.size() != p.parts.size())
      throw EvalError("stuck: pattern does not match " + to_string(v));
    for (size_t i = 0; i < p.parts.size(); ++i) bind(p.parts[i], t->items[i], env);
  }

  UValue eval(const UEnv& env, const TySub& sub, const Expr& e) {
    switch (e.tag) {
      case ExTag::Lit:
        switch (e.lit.kind) {
          case PrimKind::Unit: return UValue::unit();
          case PrimKind::Bool: return UValue::boolean(e.lit.bits != 0);
          case PrimKind::U8: return UValue::u8(static_cast<uint8_t>(e.lit.bits));
          case PrimKind::U32: return UValue::u32(e.lit.bits);
        }
        return UValue::unit();
      case ExTag::Var: {
        auto it = env.find(e.name);
        if (it != env.end()) return it->second;
        const FunDef* f = ctx.prog.find(e.name);
        if (!f) throw EvalError("stuck: unbound '" + e.name + "'");
        return UValue::fun(e.name);
      }
      case ExTag::Tuple: {
        std::vector<UValue> items;
        items.reserve(e.kids.size());
        for (const Expr& k : e.kids) items.push_back(eval(env, sub, k));
        return UValue::prod(std::move(items));
      }
      case ExTag::Prim: {
        UValue l = eval(env, sub, e.kids[0]);
        UValue r = eval(env, sub, e.kids[1]);
        return from_v(VInterp::prim(e.op, to_v(l), to_v(r)));
      }
      case ExTag::If: {
        UValue c = eval(env, sub, e.kids[0]);
        const UBool* b = c.as<UBool>();
        if (!b) throw EvalError("stuck: non-boolean condition");
        return eval(env, sub, e.kids[b->v ? 1 : 2]);
      }
      case ExTag::Let:
      case ExTag::Bang: {
        UValue rhs = eval(env, sub, e.kids[0]);
        UEnv inner = env;
        bind(e.pat, rhs, inner);
        return eval(inner, sub, e.kids[1]);
      }
      case ExTag::App: {
        UValue arg = eval(env, sub, e.kids[0]);
        return call(e.name, resolve_all(e.tyargs, sub), arg);
      }
    }
    throw EvalError("stuck: malformed expression");
  }

  UValue call(const std::string& name, const std::vector<Type>& tyargs, const UValue& arg) {
    const FunDef* f = ctx.prog.find(name);
    if (!f) {
      auto it = ctx.reg.env_u.fns.find(name);
      if (it == ctx.reg.env_u.fns.end()) throw EvalError("stuck: unknown function '" + name + "'");
      return it->second.fn(ctx, mu, tyargs, arg);
    }
    if (f->foreign()) {
      auto [key, tys] = foreign_target(*f, tyargs);
      auto it = ctx.reg.env_u.fns.find(key);
      if (it == ctx.reg.env_u.fns.end())
        throw EvalError("foreign function '" + key + "' has no update-level meaning");
      return it->second.fn(ctx, mu, tys, arg);
    }
    if (f->tyvars.size() != tyargs.size())
      throw EvalError("stuck: bad instantiation of '" + name + "'");
    TySub sub;
    for (size_t i = 0; i < f->tyvars.size(); ++i) sub[f->tyvars[i]] = tyargs[i];
    UEnv env;
    bind(f->param, arg, env);
    return eval(env, sub, *f->body);
  }

  // Primitive operands are store-free; round-tripping through the pure
  // representation keeps one arithmetic definition.
  static VValue to_v(const UValue& u) {
    if (const UU32* x = u.as<UU32>()) return VValue::u32(x->v);
    if (const UU8* x = u.as<UU8>()) return VValue::u8(x->v);
    if (const UBool* x = u.as<UBool>()) return VValue::boolean(x->v);
    if (u.as<UUnit>()) return VValue::unit();
    throw EvalError("stuck: primitive op on non-primitive");
  }

  static UValue from_v(const VValue& v) {
    if (const VU32* x = v.as<VU32>()) return UValue::u32(x->v);
    if (const VU8* x = v.as<VU8>()) return UValue::u8(x->v);
    if (const VBool* x = v.as<VBool>()) return UValue::boolean(x->v);
    return UValue::unit();
  }
};

}  // namespace

void validate_foreigns(const EvalCtx& ctx) {
  for (const FunDef& f : ctx.prog.fundefs) {
    if (!f.foreign()) continue;
    const FfiEntry* e = ctx.reg.find_entry(f.base_name);
    if (!e) throw EvalError("foreign function '" + f.base_name + "' is not registered");
    if (f.base_tyargs.empty() && !alpha_equal(f.fun_type(), e->fun_scheme()))
      throw EvalError("foreign declaration of '" + f.name + "' does not match the registered " +
                      "signature " + to_string(e->fun_scheme()));
  }
}

VValue eval_v(const EvalCtx& ctx, const VEnv& env, const Expr& e) {
  VInterp in{ctx};
  return in.eval(env, {}, e);
}

UValue eval_u(const EvalCtx& ctx, const UEnv& env, Store& mu, const Expr& e) {
  UInterp in{ctx, mu};
  return in.eval(env, {}, e);
}

VValue apply_fun_v(const EvalCtx& ctx, const VValue& fn, const VValue& arg) {
  const VFun* f = fn.as<VFun>();
  if (!f) throw EvalError("stuck: applying a non-function " + to_string(fn));
  VInterp in{ctx};
  return in.call(f->name, f->tyargs, arg);
}

UValue apply_fun_u(const EvalCtx& ctx, Store& mu, const UValue& fn, const UValue& arg) {
  const UFun* f = fn.as<UFun>();
  if (!f) throw EvalError("stuck: applying a non-function " + to_string(fn));
  UInterp in{ctx, mu};
  return in.call(f->name, f->tyargs, arg);
}

VValue run_fun_v(const EvalCtx& ctx, const std::string& fun, const VValue& arg) {
  return apply_fun_v(ctx, VValue::fun(fun), arg);
}

UValue run_fun_u(const EvalCtx& ctx, Store& mu, const std::string& fun, const UValue& arg) {
  return apply_fun_u(ctx, mu, UValue::fun(fun), arg);
}

namespace {

void collect_called(const Expr& e, std::vector<std::string>& out) {
  if (e.tag == ExTag::App || e.tag == ExTag::Var) out.push_back(e.name);
  for (const Expr& k : e.kids) collect_called(k, out);
}

}  // namespace

int ffi_order_of(const EvalCtx& ctx, const std::string& fun) {
  auto it = ctx.reg.orders.find(fun);
  const FunDef* f = ctx.prog.find(fun);
  if (f && f->foreign()) {
    auto base = ctx.reg.orders.find(f->base_name);
    return base == ctx.reg.orders.end() ? 0 : base->second;
  }
  if (!f || !f->body) return it == ctx.reg.orders.end() ? 0 : it->second;
  int order = 0;
  std::vector<std::string> called;
  collect_called(*f->body, called);
  for (const std::string& g : called) {
    if (g == fun) continue;  // shadowing variable or self mention
    if (ctx.prog.find(g) || ctx.reg.orders.count(g))
      order = std::max(order, ffi_order_of(ctx, g));
  }
  return order;
}

// ---------------------------------------------------------------------------
// value typing

namespace {

Result<Footprint> merge_disjoint(std::vector<Footprint> parts) {
  Footprint out;
  for (const Footprint& p : parts) {
    for (Loc l : p.w) {
      if (out.w.count(l)) return Result<Footprint>::fail("aliasing: writable location shared");
      out.w.insert(l);
    }
    out.r.insert(p.r.begin(), p.r.end());
  }
  if (!out.disjoint())
    return Result<Footprint>::fail("aliasing: writable location also observed");
  return Result<Footprint>::ok(std::move(out));
}

// Declared signature of a function value; checks tyarg arity.
Result<Type> fun_signature(const EvalCtx& ctx, const std::string& name,
                           const std::vector<Type>& tyargs) {
  if (const FunDef* f = ctx.prog.find(name)) {
    if (f->tyvars.size() != tyargs.size()) return Result<Type>::fail("bad instantiation");
    return Result<Type>::ok(
        Type::fun(subst_type(f->arg_type, f->tyvars, tyargs),
                  subst_type(f->ret_type, f->tyvars, tyargs)));
  }
  if (const FfiEntry* e = ctx.reg.find_entry(name)) {
    if (e->tyvars.size() != tyargs.size()) return Result<Type>::fail("bad instantiation");
    return Result<Type>::ok(
        Type::fun(subst_type(e->arg_scheme, e->tyvars, tyargs),
                  subst_type(e->ret_scheme, e->tyvars, tyargs)));
  }
  return Result<Type>::fail("unknown function '" + name + "'");
}

}  // namespace

bool vtyping_v(const EvalCtx& ctx, const VValue& v, const Type& t, std::string* why) {
  auto no = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  switch (t.tag) {
    case TyTag::Unit: return v.as<VUnit>() ? true : no("not a unit");
    case TyTag::Bool: return v.as<VBool>() ? true : no("not a boolean");
    case TyTag::U8: return v.as<VU8>() ? true : no("not a U8");
    case TyTag::U32: return v.as<VU32>() ? true : no("not a U32");
    case TyTag::Prod: {
      const VProd* p = v.as<VProd>();
      if (!p || p->items.size() != t.args.size()) return no("tuple shape mismatch");
      for (size_t i = 0; i < t.args.size(); ++i)
        if (!vtyping_v(ctx, p->items[i], t.args[i], why)) return false;
      return true;
    }
    case TyTag::Fun: {
      const VFun* f = v.as<VFun>();
      if (!f) return no("not a function");
      Result<Type> sig = fun_signature(ctx, f->name, f->tyargs);
      if (!sig) return no(sig.reject);
      return *sig == t ? true : no("function signature mismatch");
    }
    case TyTag::Abs: {
      const VAbs* a = v.as<VAbs>();
      if (!a) return no("not an abstract value");
      if (a->tag != t.name) return no("abstract tag mismatch");
      auto entry = ctx.reg.abs_types.find(t.name);
      if (entry == ctx.reg.abs_types.end())
        throw EvalError("unregistered abstract tag '" + t.name + "'");
      return entry->second.vtype_v(*a, t, why);
    }
    default:
      return no("type " + to_string(t) + " is not a runtime type");
  }
}

Result<Footprint> vtyping_u(const EvalCtx& ctx, const UValue& u, const Store& mu, const Type& t) {
  using R = Result<Footprint>;
  switch (t.tag) {
    case TyTag::Unit: return u.as<UUnit>() ? R::ok({}) : R::fail("not a unit");
    case TyTag::Bool: return u.as<UBool>() ? R::ok({}) : R::fail("not a boolean");
    case TyTag::U8: return u.as<UU8>() ? R::ok({}) : R::fail("not a U8");
    case TyTag::U32: return u.as<UU32>() ? R::ok({}) : R::fail("not a U32");
    case TyTag::Prod: {
      const UProd* p = u.as<UProd>();
      if (!p || p->items.size() != t.args.size()) return R::fail("tuple shape mismatch");
      std::vector<Footprint> parts;
      for (size_t i = 0; i < t.args.size(); ++i) {
        R r = vtyping_u(ctx, p->items[i], mu, t.args[i]);
        if (!r) return r;
        parts.push_back(*r);
      }
      return merge_disjoint(std::move(parts));
    }
    case TyTag::Fun: {
      const UFun* f = u.as<UFun>();
      if (!f) return R::fail("not a function");
      Result<Type> sig = fun_signature(ctx, f->name, f->tyargs);
      if (!sig) return R::fail(sig.reject);
      return *sig == t ? R::ok({}) : R::fail("function signature mismatch");
    }
    case TyTag::Abs: {
      auto entry = ctx.reg.abs_types.find(t.name);
      if (entry == ctx.reg.abs_types.end())
        throw EvalError("unregistered abstract tag '" + t.name + "'");
      if (const UAbs* a = u.as<UAbs>()) {
        if (a->tag != t.name) return R::fail("abstract tag mismatch");
        return entry->second.vtype_u(*a, mu, t);
      }
      const ULoc* l = u.as<ULoc>();
      if (!l) return R::fail("not an abstract value or pointer");
      const UValue* cell = mu.get(l->loc);
      if (!cell) return R::fail("dangling pointer " + std::to_string(l->loc));
      const UAbs* a = cell->as<UAbs>();
      if (!a || a->tag != t.name) return R::fail("pointer does not lead to " + t.name);
      R inner = entry->second.vtype_u(*a, mu, t);
      if (!inner) return inner;
      Footprint fp = *inner;
      if (fp.r.count(l->loc) || fp.w.count(l->loc)) return R::fail("aliasing: header in footprint");
      (t.readonly ? fp.r : fp.w).insert(l->loc);
      return R::ok(std::move(fp));
    }
    default:
      return R::fail("type " + to_string(t) + " is not a runtime type");
  }
}

Result<Footprint> vtyping_env_u(const EvalCtx& ctx, const UEnv& env,
                                const std::map<std::string, Type>& gamma, const Store& mu) {
  std::vector<Footprint> parts;
  for (const auto& [name, ty] : gamma) {
    auto it = env.find(name);
    if (it == env.end()) return Result<Footprint>::fail("environment lacks '" + name + "'");
    Result<Footprint> r = vtyping_u(ctx, it->second, mu, ty);
    if (!r) return r;
    parts.push_back(*r);
  }
  return merge_disjoint(std::move(parts));
}

// ---------------------------------------------------------------------------
// frame relation

bool frame(const std::set<Loc>& wi, const Store& mi, const std::set<Loc>& wo, const Store& mo) {
  std::set<Loc> domain = wi;
  domain.insert(wo.begin(), wo.end());
  for (const auto& [l, _] : mi.cells) domain.insert(l);
  for (const auto& [l, _] : mo.cells) domain.insert(l);
  for (Loc p : domain) {
    const UValue* in = mi.get(p);
    const UValue* out = mo.get(p);
    bool in_wi = wi.count(p) != 0, in_wo = wo.count(p) != 0;
    if (!in_wi && !in_wo) {  // inertia
      if ((in == nullptr) != (out == nullptr)) return false;
      if (in && !(*in == *out)) return false;
    }
    if (in_wi && !in_wo && out != nullptr) return false;  // leak freedom
    if (!in_wi && in_wo && in != nullptr) return false;   // fresh allocation
  }
  return true;
}

// ---------------------------------------------------------------------------
// correspondence

Result<Footprint> corr(const EvalCtx& ctx, const UValue& u, const Store& mu, const VValue& v,
                       const Type& t) {
  using R = Result<Footprint>;
  switch (t.tag) {
    case TyTag::Unit:
    case TyTag::Bool:
    case TyTag::U8:
    case TyTag::U32: {
      R tu = vtyping_u(ctx, u, mu, t);
      if (!tu) return tu;
      if (!vtyping_v(ctx, v, t)) return R::fail("value side ill-typed");
      bool same = (u.as<UBool>() && v.as<VBool>() && u.as<UBool>()->v == v.as<VBool>()->v) ||
                  (u.as<UU8>() && v.as<VU8>() && u.as<UU8>()->v == v.as<VU8>()->v) ||
                  (u.as<UU32>() && v.as<VU32>() && u.as<UU32>()->v == v.as<VU32>()->v) ||
                  (u.as<UUnit>() && v.as<VUnit>());
      return same ? R::ok({}) : R::fail("primitive values differ");
    }
    case TyTag::Prod: {
      const UProd* up = u.as<UProd>();
      const VProd* vp = v.as<VProd>();
      if (!up || !vp || up->items.size() != t.args.size() || vp->items.size() != t.args.size())
        return R::fail("tuple shape mismatch");
      std::vector<Footprint> parts;
      for (size_t i = 0; i < t.args.size(); ++i) {
        R r = corr(ctx, up->items[i], mu, vp->items[i], t.args[i]);
        if (!r) return r;
        parts.push_back(*r);
      }
      return merge_disjoint(std::move(parts));
    }
    case TyTag::Fun: {
      const UFun* uf = u.as<UFun>();
      const VFun* vf = v.as<VFun>();
      if (!uf || !vf) return R::fail("not function values");
      if (uf->name != vf->name || uf->tyargs != vf->tyargs)
        return R::fail("function values differ");
      return vtyping_u(ctx, u, mu, t);
    }
    case TyTag::Abs: {
      auto entry = ctx.reg.abs_types.find(t.name);
      if (entry == ctx.reg.abs_types.end())
        throw EvalError("unregistered abstract tag '" + t.name + "'");
      const VAbs* va = v.as<VAbs>();
      if (!va || va->tag != t.name) return R::fail("value side is not " + t.name);
      if (const UAbs* ua = u.as<UAbs>()) return entry->second.corr(*ua, mu, *va, t);
      const ULoc* l = u.as<ULoc>();
      if (!l) return R::fail("update side is not an abstract value or pointer");
      const UValue* cell = mu.get(l->loc);
      if (!cell) return R::fail("dangling pointer");
      const UAbs* ua = cell->as<UAbs>();
      if (!ua || ua->tag != t.name) return R::fail("pointer does not lead to " + t.name);
      R inner = entry->second.corr(*ua, mu, *va, t);
      if (!inner) return inner;
      Footprint fp = *inner;
      (t.readonly ? fp.r : fp.w).insert(l->loc);
      return R::ok(std::move(fp));
    }
    default:
      return R::fail("type " + to_string(t) + " is not a runtime type");
  }
}

}  // namespace minicog
