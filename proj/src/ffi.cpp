#include "minicog/ffi.hpp"

#include <algorithm>

#include <json.hpp>

#include "minicog/dynsem.hpp"

namespace minicog {

// ---------------------------------------------------------------------------
// registry

namespace {

void validate_new_name(const Registry& reg, const std::string& name) {
  if (reg.orders.count(name)) throw RegistryError("duplicate registration of '" + name + "'");
}

void validate_deps(const Registry& reg, const std::string& name, int order,
                   const std::vector<std::string>& deps) {
  for (const std::string& d : deps) {
    auto it = reg.orders.find(d);
    if (it == reg.orders.end())
      throw RegistryError("'" + name + "' depends on unregistered '" + d + "'");
    if (it->second >= order)
      throw RegistryError("'" + name + "' (order " + std::to_string(order) +
                          ") may only invoke entries of lower order; '" + d + "' has order " +
                          std::to_string(it->second));
  }
}

}  // namespace

void Registry::register_entry(FfiEntry e) {
  validate_new_name(*this, e.name);
  validate_deps(*this, e.name, e.order, e.deps);
  if (e.fid == 0) e.fid = next_fid++;
  env_v.fns[e.name] = {e.value_fn, e.order};
  env_u.fns[e.name] = {e.update_fn, e.order};
  if (e.low_fn) fid_table.fns[e.fid] = e.low_fn;
  fids[e.name] = e.fid;
  orders[e.name] = e.order;
  if (e.shallow_fn) shallow.funs[e.name] = e.shallow_fn;
  entries[e.name] = std::move(e);
}

void Registry::register_program_fun(const std::string& name, int order,
                                    const std::vector<std::string>& deps, LowFn low,
                                    std::function<SValue(const ShallowCtx&, const SValue&)> sh) {
  validate_new_name(*this, name);
  validate_deps(*this, name, order, deps);
  uint32_t f = next_fid++;
  if (low) fid_table.fns[f] = std::move(low);
  fids[name] = f;
  orders[name] = order;
  if (sh) shallow.funs[name] = std::move(sh);
}

void Registry::register_abs_type(AbsTypeEntry e) {
  if (abs_types.count(e.tag)) throw RegistryError("duplicate abstract type '" + e.tag + "'");
  abs_types[e.tag] = std::move(e);
}

uint32_t Registry::fid_of(const std::string& name) const {
  auto it = fids.find(name);
  if (it == fids.end()) throw RegistryError("no function id for '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// array value typing (the abstract-type entry)

namespace {

bool supported_elem(const Type& t) {
  return t.tag == TyTag::U8 || t.tag == TyTag::U32 || t.tag == TyTag::Bool;
}

bool prim_v_at(const VValue& v, const Type& t) {
  switch (t.tag) {
    case TyTag::U8: return v.as<VU8>() != nullptr;
    case TyTag::U32: return v.as<VU32>() != nullptr;
    case TyTag::Bool: return v.as<VBool>() != nullptr;
    default: return false;
  }
}

bool prim_u_at(const UValue& u, const Type& t) {
  switch (t.tag) {
    case TyTag::U8: return u.as<UU8>() != nullptr;
    case TyTag::U32: return u.as<UU32>() != nullptr;
    case TyTag::Bool: return u.as<UBool>() != nullptr;
    default: return false;
  }
}

bool prim_uv_equal(const UValue& u, const VValue& v) {
  if (const UU8* a = u.as<UU8>()) {
    const VU8* b = v.as<VU8>();
    return b && a->v == b->v;
  }
  if (const UU32* a = u.as<UU32>()) {
    const VU32* b = v.as<VU32>();
    return b && a->v == b->v;
  }
  if (const UBool* a = u.as<UBool>()) {
    const VBool* b = v.as<VBool>();
    return b && a->v == b->v;
  }
  return false;
}

constexpr uint64_t kMaxWord = 0xffffffffULL;  // 32-bit pointers

Result<Type> array_elem_type(const Type& t) {
  if (t.tag != TyTag::Abs || t.args.size() != 1)
    return Result<Type>::fail("not a unary abstract type");
  if (!supported_elem(t.args[0]))
    return Result<Type>::fail("unsupported-elem: " + to_string(t.args[0]));
  return Result<Type>::ok(t.args[0]);
}

bool array_vtype_v(const VAbs& a, const Type& t, std::string* why) {
  auto no = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  Result<Type> elem = array_elem_type(t);
  if (!elem) return no(elem.reject);
  if (!(a.wa.elem == *elem)) return no("element type mismatch");
  for (const VValue& x : a.wa.xs)
    if (!prim_v_at(x, *elem)) return no("element-ill-typed: " + to_string(x));
  return true;
}

Result<Footprint> array_vtype_u(const UAbs& a, const Store& mu, const Type& t) {
  using R = Result<Footprint>;
  Result<Type> elem = array_elem_type(t);
  if (!elem) return R::fail(elem.reject);
  if (!(a.wa.elem == *elem)) return R::fail("element type mismatch");
  // okay predicate: index arithmetic must not overflow the pointer width
  if (static_cast<uint64_t>(a.wa.len) * size_of(*elem) > kMaxWord) return R::fail("overflow");
  Footprint fp;
  std::set<Loc>& side = t.readonly ? fp.r : fp.w;
  for (uint32_t i = 0; i < a.wa.len; ++i) {
    Loc l = a.wa.base + i;
    const UValue* cell = mu.get(l);
    if (!cell) return R::fail("dangling: location " + std::to_string(l));
    if (!prim_u_at(*cell, *elem)) return R::fail("element-ill-typed: " + to_string(*cell));
    side.insert(l);
  }
  return R::ok(std::move(fp));
}

Result<Footprint> array_corr(const UAbs& ua, const Store& mu, const VAbs& va, const Type& t) {
  using R = Result<Footprint>;
  R fp = array_vtype_u(ua, mu, t);
  if (!fp) return fp;
  std::string why;
  if (!array_vtype_v(va, t, &why)) return R::fail(why);
  if (static_cast<uint64_t>(ua.wa.len) != va.wa.xs.size()) return R::fail("length mismatch");
  for (uint32_t i = 0; i < ua.wa.len; ++i) {
    const UValue* cell = mu.get(ua.wa.base + i);
    if (!prim_uv_equal(*cell, va.wa.xs[i]))
      return R::fail("element " + std::to_string(i) + " differs");
  }
  return fp;
}

VValue random_prim_v(Rng& rng, const Type& t) {
  switch (t.tag) {
    case TyTag::U8: return VValue::u8(rng.u8());
    case TyTag::Bool: return VValue::boolean(rng.flip());
    default: return VValue::u32(rng.flip() ? static_cast<uint32_t>(rng.below(16)) : rng.u32());
  }
}

UValue u_of_v_prim(const VValue& v) {
  if (const VU8* x = v.as<VU8>()) return UValue::u8(x->v);
  if (const VBool* x = v.as<VBool>()) return UValue::boolean(x->v);
  return UValue::u32(v.as<VU32>()->v);
}

GenAbs array_gen(Rng& rng, Store& mu, const Type& t) {
  Type elem = t.args[0];
  uint32_t len = static_cast<uint32_t>(rng.below(9));
  std::vector<VValue> xs;
  xs.reserve(len);
  Loc base = mu.next;
  for (uint32_t i = 0; i < len; ++i) {
    VValue x = random_prim_v(rng, elem);
    mu.alloc(u_of_v_prim(x));
    xs.push_back(std::move(x));
  }
  Loc header = mu.alloc(UValue::array(elem, len, base));
  return {UValue::loc(header), VValue::array(elem, std::move(xs))};
}

}  // namespace

AbsTypeEntry make_array_abs_entry() {
  AbsTypeEntry e;
  e.tag = "Array";
  e.vtype_v = array_vtype_v;
  e.vtype_u = array_vtype_u;
  e.corr = array_corr;
  e.elem_size = [](const Type& t) { return size_of(t); };
  e.gen = array_gen;
  return e;
}

// ---------------------------------------------------------------------------
// array operations, value level (pure; shared by poly and mono layers)

namespace {

const VAbs& want_varray(const VValue& v) {
  const VAbs* a = v.as<VAbs>();
  if (!a || a->tag != "Array") throw EvalError("stuck: expected an array, got " + to_string(v));
  return *a;
}

const std::vector<VValue>& want_vtuple(const VValue& v, size_t n, const char* who) {
  const VProd* p = v.as<VProd>();
  if (!p || p->items.size() != n)
    throw EvalError(std::string("stuck: ") + who + " expects " + std::to_string(n) + " arguments");
  return p->items;
}

uint32_t want_u32(const VValue& v) {
  const VU32* x = v.as<VU32>();
  if (!x) throw EvalError("stuck: expected a U32, got " + to_string(v));
  return x->v;
}

void require_dispatch_order(const EvalCtx& ctx, int own_order, const char* who, const VValue& fn) {
  const VFun* f = fn.as<VFun>();
  if (!f) throw EvalError(std::string("stuck: ") + who + " needs a function value");
  if (ffi_order_of(ctx, f->name) >= own_order)
    throw EvalError(std::string("obligation breach: ") + who + " (order " +
                    std::to_string(own_order) + ") dispatched '" + f->name +
                    "', which reaches an entry of order >= " + std::to_string(own_order));
}

void require_dispatch_order_u(const EvalCtx& ctx, int own_order, const char* who,
                              const UValue& fn) {
  const UFun* f = fn.as<UFun>();
  if (!f) throw EvalError(std::string("stuck: ") + who + " needs a function value");
  if (ffi_order_of(ctx, f->name) >= own_order)
    throw EvalError(std::string("obligation breach: ") + who + " (order " +
                    std::to_string(own_order) + ") dispatched '" + f->name +
                    "', which reaches an entry of order >= " + std::to_string(own_order));
}

VValue arr_length_v(const EvalCtx&, const std::vector<Type>&, const VValue& x) {
  return VValue::u32(static_cast<uint32_t>(want_varray(x).wa.xs.size()));
}

VValue arr_get_v(const EvalCtx&, const std::vector<Type>&, const VValue& arg) {
  const auto& a = want_vtuple(arg, 3, "get");
  const VAbs& arr = want_varray(a[0]);
  uint32_t i = want_u32(a[1]);
  if (i < arr.wa.xs.size()) return arr.wa.xs[i];
  return a[2];
}

VValue arr_put_v(const EvalCtx&, const std::vector<Type>&, const VValue& arg) {
  const auto& a = want_vtuple(arg, 3, "put");
  VAbs arr = want_varray(a[0]);
  uint32_t i = want_u32(a[1]);
  if (i < arr.wa.xs.size()) arr.wa.xs[i] = a[2];
  return {arr};
}

VValue arr_fold_v(const EvalCtx& ctx, const std::vector<Type>&, const VValue& arg) {
  const auto& a = want_vtuple(arg, 6, "fold");
  require_dispatch_order(ctx, 2, "fold", a[0]);
  const VAbs& arr = want_varray(a[2]);
  uint32_t s = want_u32(a[3]), e = want_u32(a[4]);
  VValue acc = a[1];
  uint64_t end = std::min<uint64_t>(e, arr.wa.xs.size());
  for (uint64_t i = s; i < end; ++i)
    acc = apply_fun_v(ctx, a[0], VValue::prod({arr.wa.xs[i], acc, a[5]}));
  return acc;
}

VValue arr_mapaccum_v(const EvalCtx& ctx, const std::vector<Type>&, const VValue& arg) {
  const auto& a = want_vtuple(arg, 6, "mapAccum");
  require_dispatch_order(ctx, 2, "mapAccum", a[0]);
  VAbs arr = want_varray(a[2]);
  uint32_t s = want_u32(a[3]), e = want_u32(a[4]);
  VValue acc = a[1];
  uint64_t end = std::min<uint64_t>(e, arr.wa.xs.size());
  for (uint64_t i = s; i < end; ++i) {
    VValue out = apply_fun_v(ctx, a[0], VValue::prod({arr.wa.xs[i], acc, a[5]}));
    const auto& pair = want_vtuple(out, 2, "mapAccum body result");
    arr.wa.xs[i] = pair[0];
    acc = pair[1];
  }
  return VValue::prod({{arr}, acc});
}

VValue repeat_v(const EvalCtx& ctx, const std::vector<Type>&, const VValue& arg) {
  const auto& a = want_vtuple(arg, 5, "repeat");
  require_dispatch_order(ctx, 3, "repeat", a[1]);
  require_dispatch_order(ctx, 3, "repeat", a[2]);
  uint32_t n = want_u32(a[0]);
  VValue acc = a[3];
  for (uint32_t i = 0; i < n; ++i) {
    VValue b = apply_fun_v(ctx, a[1], VValue::prod({acc, a[4]}));
    const VBool* stop = b.as<VBool>();
    if (!stop) throw EvalError("stuck: repeat stop body must return Bool");
    if (stop->v) break;
    acc = apply_fun_v(ctx, a[2], VValue::prod({acc, a[4]}));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// array operations, update level

const std::vector<UValue>& want_utuple(const UValue& v, size_t n, const char* who) {
  const UProd* p = v.as<UProd>();
  if (!p || p->items.size() != n)
    throw EvalError(std::string("stuck: ") + who + " expects " + std::to_string(n) + " arguments");
  return p->items;
}

uint32_t want_u32_u(const UValue& v) {
  const UU32* x = v.as<UU32>();
  if (!x) throw EvalError("stuck: expected a U32, got " + to_string(v));
  return x->v;
}

UWArray deref_wa(const Store& mu, const UValue& x) {
  const ULoc* l = x.as<ULoc>();
  if (!l) throw EvalError("harness misuse: array argument is not a pointer");
  const UValue* cell = mu.get(l->loc);
  if (!cell) throw EvalError("harness misuse: store lacks the array header");
  const UAbs* a = cell->as<UAbs>();
  if (!a || a->tag != "Array")
    throw EvalError("harness misuse: pointer does not lead to an array header");
  return a->wa;
}

UValue arr_length_u(const EvalCtx&, Store& mu, const std::vector<Type>&, const UValue& x) {
  return UValue::u32(deref_wa(mu, x).len);
}

UValue arr_get_u(const EvalCtx&, Store& mu, const std::vector<Type>&, const UValue& arg) {
  const auto& a = want_utuple(arg, 3, "get");
  UWArray wa = deref_wa(mu, a[0]);
  uint32_t i = want_u32_u(a[1]);
  if (i >= wa.len) return a[2];
  const UValue* cell = mu.get(wa.base + i);
  if (!cell) throw EvalError("harness misuse: array element missing from store");
  return *cell;
}

UValue arr_put_u(const EvalCtx&, Store& mu, const std::vector<Type>&, const UValue& arg) {
  const auto& a = want_utuple(arg, 3, "put");
  UWArray wa = deref_wa(mu, a[0]);
  uint32_t i = want_u32_u(a[1]);
  if (i < wa.len) mu.put(wa.base + i, a[2]);
  return a[0];
}

UValue arr_fold_u(const EvalCtx& ctx, Store& mu, const std::vector<Type>&, const UValue& arg) {
  const auto& a = want_utuple(arg, 6, "fold");
  require_dispatch_order_u(ctx, 2, "fold", a[0]);
  UWArray wa = deref_wa(mu, a[2]);
  uint32_t s = want_u32_u(a[3]), e = want_u32_u(a[4]);
  UValue acc = a[1];
  uint64_t end = std::min<uint64_t>(e, wa.len);
  for (uint64_t i = s; i < end; ++i) {
    const UValue* cell = mu.get(wa.base + i);
    if (!cell) throw EvalError("harness misuse: array element missing from store");
    acc = apply_fun_u(ctx, mu, a[0], UValue::prod({*cell, acc, a[5]}));
  }
  return acc;
}

UValue arr_mapaccum_u(const EvalCtx& ctx, Store& mu, const std::vector<Type>&, const UValue& arg) {
  const auto& a = want_utuple(arg, 6, "mapAccum");
  require_dispatch_order_u(ctx, 2, "mapAccum", a[0]);
  UWArray wa = deref_wa(mu, a[2]);
  uint32_t s = want_u32_u(a[3]), e = want_u32_u(a[4]);
  UValue acc = a[1];
  uint64_t end = std::min<uint64_t>(e, wa.len);
  for (uint64_t i = s; i < end; ++i) {
    const UValue* cell = mu.get(wa.base + i);
    if (!cell) throw EvalError("harness misuse: array element missing from store");
    UValue out = apply_fun_u(ctx, mu, a[0], UValue::prod({*cell, acc, a[5]}));
    const auto& pair = want_utuple(out, 2, "mapAccum body result");
    mu.put(wa.base + i, pair[0]);
    acc = pair[1];
  }
  return UValue::prod({a[2], acc});
}

UValue repeat_u(const EvalCtx& ctx, Store& mu, const std::vector<Type>&, const UValue& arg) {
  const auto& a = want_utuple(arg, 5, "repeat");
  require_dispatch_order_u(ctx, 3, "repeat", a[1]);
  require_dispatch_order_u(ctx, 3, "repeat", a[2]);
  uint32_t n = want_u32_u(a[0]);
  UValue acc = a[3];
  for (uint32_t i = 0; i < n; ++i) {
    uint64_t v0 = mu.version;
    UValue b = apply_fun_u(ctx, mu, a[1], UValue::prod({acc, a[4]}));
    if (mu.version != v0)
      throw EvalError("obligation breach: repeat stop body mutated the store");
    const UBool* stop = b.as<UBool>();
    if (!stop) throw EvalError("stuck: repeat stop body must return Bool");
    if (stop->v) break;
    acc = apply_fun_u(ctx, mu, a[2], UValue::prod({acc, a[4]}));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// low-level entry wrappers (U32 instantiation, fid-dispatchable)

LowResult to_result(ExecOutcome out, LowHeap& h) {
  if (!out.is_ok) return LowResult::failed(out.failure);
  h = std::move(out.heap);
  return LowResult::ok(std::move(out.value));
}

const std::vector<LowValue>& want_ltuple(const LowValue& v, size_t n) {
  static const std::vector<LowValue> empty;
  const LTuple* t = v.as<LTuple>();
  if (!t || t->items.size() != n) return empty;
  return t->items;
}

LowResult length_low(const FidTable&, LowHeap& h, const LowValue& arg) {
  const LStructArray* arr = arg.as<LStructArray>();
  if (!arr) return LowResult::failed("length: bad argument");
  return to_result(low_length(h, *arr), h);
}

LowResult get_low(const FidTable&, LowHeap& h, const LowValue& arg) {
  const auto& a = want_ltuple(arg, 3);
  if (a.empty()) return LowResult::failed("get: bad argument");
  const LStructArray* arr = a[0].as<LStructArray>();
  const LU32* i = a[1].as<LU32>();
  if (!arr || !i) return LowResult::failed("get: bad argument");
  return to_result(low_get(h, Type::u32(), *arr, i->v, a[2]), h);
}

LowResult put_low(const FidTable&, LowHeap& h, const LowValue& arg) {
  const auto& a = want_ltuple(arg, 3);
  if (a.empty()) return LowResult::failed("put: bad argument");
  const LStructArray* arr = a[0].as<LStructArray>();
  const LU32* i = a[1].as<LU32>();
  if (!arr || !i) return LowResult::failed("put: bad argument");
  return to_result(low_put(h, Type::u32(), *arr, i->v, a[2]), h);
}

LowResult fold_low(const FidTable& tbl, LowHeap& h, const LowValue& arg) {
  const auto& a = want_ltuple(arg, 6);
  if (a.empty()) return LowResult::failed("fold: bad argument");
  const LFunId* f = a[0].as<LFunId>();
  const LStructArray* arr = a[2].as<LStructArray>();
  const LU32* frm = a[3].as<LU32>();
  const LU32* to = a[4].as<LU32>();
  if (!f || !arr || !frm || !to) return LowResult::failed("fold: bad argument");
  return to_result(low_fold(h, tbl, f->fid, a[1], Type::u32(), *arr, frm->v, to->v, a[5]), h);
}

LowResult mapaccum_low(const FidTable& tbl, LowHeap& h, const LowValue& arg) {
  const auto& a = want_ltuple(arg, 6);
  if (a.empty()) return LowResult::failed("mapAccum: bad argument");
  const LFunId* f = a[0].as<LFunId>();
  const LStructArray* arr = a[2].as<LStructArray>();
  const LU32* frm = a[3].as<LU32>();
  const LU32* to = a[4].as<LU32>();
  if (!f || !arr || !frm || !to) return LowResult::failed("mapAccum: bad argument");
  return to_result(low_mapaccum(h, tbl, f->fid, a[1], Type::u32(), *arr, frm->v, to->v, a[5]), h);
}

LowResult repeat_low(const FidTable& tbl, LowHeap& h, const LowValue& arg) {
  const auto& a = want_ltuple(arg, 5);
  if (a.empty()) return LowResult::failed("repeat: bad argument");
  const LU32* n = a[0].as<LU32>();
  const LFunId* f = a[1].as<LFunId>();
  const LFunId* g = a[2].as<LFunId>();
  if (!n || !f || !g) return LowResult::failed("repeat: bad argument");
  return to_result(low_repeat(h, tbl, n->v, f->fid, g->fid, a[3], a[4]), h);
}

// ---------------------------------------------------------------------------
// shallow entry wrappers

SValue length_sh(const ShallowCtx&, const SValue& arg) { return length_s(arg); }

SValue get_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = arg.as<STuple>()->items;
  return get_s(a[0], a[1].as<SU32>()->v, a[2]);
}

SValue put_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = arg.as<STuple>()->items;
  return put_s(a[0], a[1].as<SU32>()->v, a[2]);
}

SValue fold_sh(const ShallowCtx& ctx, const SValue& arg) {
  const auto& a = arg.as<STuple>()->items;
  return fold_s(
      [&](const SValue& el, const SValue& acc, const SValue& obs) {
        return ctx.apply(a[0], SValue::tuple({el, acc, obs}));
      },
      a[1], a[2], a[3].as<SU32>()->v, a[4].as<SU32>()->v, a[5]);
}

SValue mapaccum_sh(const ShallowCtx& ctx, const SValue& arg) {
  const auto& a = arg.as<STuple>()->items;
  auto [xs, acc] = mapaccum_s(
      [&](const SValue& el, const SValue& acc0, const SValue& obs) {
        SValue out = ctx.apply(a[0], SValue::tuple({el, acc0, obs}));
        const auto& pair = out.as<STuple>()->items;
        return std::make_pair(pair[0], pair[1]);
      },
      a[1], a[2], a[3].as<SU32>()->v, a[4].as<SU32>()->v, a[5]);
  return SValue::tuple({xs, acc});
}

SValue repeat_sh(const ShallowCtx& ctx, const SValue& arg) {
  const auto& a = arg.as<STuple>()->items;
  return repeat_s(
      a[0].as<SU32>()->v,
      [&](const SValue& acc, const SValue& obs) {
        return ctx.apply(a[1], SValue::tuple({acc, obs})).as<SBool>()->v;
      },
      [&](const SValue& acc, const SValue& obs) {
        return ctx.apply(a[2], SValue::tuple({acc, obs}));
      },
      a[3], a[4]);
}

}  // namespace

void register_array_library(Registry& reg) {
  reg.register_abs_type(make_array_abs_entry());

  Type a = Type::var("a"), b = Type::var("b"), c = Type::var("c");
  Type arr_w = array_of(a);
  Type arr_ro = bang_type(arr_w);

  FfiEntry length;
  length.name = "length";
  length.order = 1;
  length.tyvars = {"a"};
  length.arg_scheme = arr_ro;
  length.ret_scheme = Type::u32();
  length.value_fn = arr_length_v;
  length.update_fn = arr_length_u;
  length.low_fn = length_low;
  length.shallow_fn = length_sh;
  reg.register_entry(std::move(length));

  FfiEntry get;
  get.name = "get";
  get.order = 1;
  get.tyvars = {"a"};
  get.arg_scheme = Type::prod({arr_ro, Type::u32(), bang_type(a)});
  get.ret_scheme = bang_type(a);
  get.value_fn = arr_get_v;
  get.update_fn = arr_get_u;
  get.low_fn = get_low;
  get.shallow_fn = get_sh;
  reg.register_entry(std::move(get));

  FfiEntry put;
  put.name = "put";
  put.order = 1;
  put.tyvars = {"a"};
  put.arg_scheme = Type::prod({arr_w, Type::u32(), a});
  put.ret_scheme = arr_w;
  put.value_fn = arr_put_v;
  put.update_fn = arr_put_u;
  put.low_fn = put_low;
  put.shallow_fn = put_sh;
  reg.register_entry(std::move(put));

  FfiEntry fold;
  fold.name = "fold";
  fold.order = 2;
  fold.tyvars = {"a", "b", "c"};
  fold.arg_scheme = Type::prod({Type::fun(Type::prod({a, b, bang_type(c)}), b), b, arr_ro,
                                Type::u32(), Type::u32(), bang_type(c)});
  fold.ret_scheme = b;
  fold.value_fn = arr_fold_v;
  fold.update_fn = arr_fold_u;
  fold.low_fn = fold_low;
  fold.shallow_fn = fold_sh;
  fold.deps = {"length", "get", "put"};
  reg.register_entry(std::move(fold));

  FfiEntry mapaccum;
  mapaccum.name = "mapAccum";
  mapaccum.order = 2;
  mapaccum.tyvars = {"a", "b", "c"};
  mapaccum.arg_scheme =
      Type::prod({Type::fun(Type::prod({a, b, bang_type(c)}), Type::prod({a, b})), b, arr_w,
                  Type::u32(), Type::u32(), bang_type(c)});
  mapaccum.ret_scheme = Type::prod({arr_w, b});
  mapaccum.value_fn = arr_mapaccum_v;
  mapaccum.update_fn = arr_mapaccum_u;
  mapaccum.low_fn = mapaccum_low;
  mapaccum.shallow_fn = mapaccum_sh;
  mapaccum.deps = {"length", "get", "put"};
  reg.register_entry(std::move(mapaccum));

  FfiEntry repeat;
  repeat.name = "repeat";
  repeat.order = 3;
  repeat.tyvars = {"a", "b"};
  repeat.arg_scheme = Type::prod({Type::u32(), Type::fun(Type::prod({a, bang_type(b)}), Type::boolean()),
                                  Type::fun(Type::prod({a, bang_type(b)}), a), a, bang_type(b)});
  repeat.ret_scheme = a;
  repeat.value_fn = repeat_v;
  repeat.update_fn = repeat_u;
  repeat.low_fn = repeat_low;
  repeat.shallow_fn = repeat_sh;
  repeat.deps = {"length", "get", "put", "fold", "mapAccum"};
  reg.register_entry(std::move(repeat));
}

// ---------------------------------------------------------------------------
// obligation checks

const char* clause_name(ObligationClause c) {
  switch (c) {
    case ObligationClause::BangV: return "bang_v";
    case ObligationClause::BangU: return "bang_u";
    case ObligationClause::NoAlias: return "no-alias";
    case ObligationClause::Valid: return "valid";
    case ObligationClause::Frame: return "frame";
    case ObligationClause::ReadOnly: return "read-only";
  }
  return "?";
}

bool ObligationReport::ok() const {
  for (const ClauseReport& c : clauses)
    if (c.failures) return false;
  return true;
}

std::string ObligationReport::to_json() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const ClauseReport& c : clauses) {
    nlohmann::json j = {{"clause", c.clause}, {"trials", c.trials}, {"failures", c.failures}};
    if (!c.counterexample.empty()) j["counterexample"] = c.counterexample;
    doc.push_back(std::move(j));
  }
  return doc.dump();
}

namespace {

Type random_elem(Rng& rng) {
  switch (rng.below(3)) {
    case 0: return Type::u8();
    case 1: return Type::boolean();
    default: return Type::u32();
  }
}

struct ObTrial {
  Store mu;
  Type wt;            // writable abstract type
  UAbs payload;
  VAbs vpayload;
  Result<Footprint> fp = Result<Footprint>::fail("unset");
};

bool setup_trial(const AbsTypeEntry& entry, Rng& rng, ObTrial& t) {
  Type elem = random_elem(rng);
  t.wt = Type::abs(entry.tag, {elem}, false);
  GenAbs g = entry.gen(rng, t.mu, t.wt);
  const ULoc* l = g.u.as<ULoc>();
  if (!l) return false;
  const UValue* cell = t.mu.get(l->loc);
  if (!cell) return false;
  const UAbs* ua = cell->as<UAbs>();
  if (!ua) return false;
  t.payload = *ua;
  const VAbs* va = g.v.as<VAbs>();
  if (!va) return false;
  t.vpayload = *va;
  t.fp = entry.vtype_u(t.payload, t.mu, t.wt);
  return true;
}

}  // namespace

ObligationReport check_abs_type_obligations(const AbsTypeEntry& entry, uint64_t seed,
                                            uint64_t trials) {
  ObligationReport rep;
  rep.tag = entry.tag;
  const ObligationClause clauses[] = {ObligationClause::BangV,   ObligationClause::BangU,
                                      ObligationClause::NoAlias, ObligationClause::Valid,
                                      ObligationClause::Frame,   ObligationClause::ReadOnly};
  for (size_t ci = 0; ci < 6; ++ci) {
    ObligationClause clause = clauses[ci];
    ClauseReport cr;
    cr.clause = clause_name(clause);
    cr.trials = trials;
    for (uint64_t i = 0; i < trials; ++i) {
      Rng rng = Rng(seed).fork(ci * 1000003 + i);
      ObTrial t;
      if (!setup_trial(entry, rng, t)) continue;
      std::string why;
      bool pass = true;
      switch (clause) {
        case ObligationClause::BangV: {
          if (!entry.vtype_v(t.vpayload, t.wt, nullptr)) break;  // hypothesis void
          pass = entry.vtype_v(t.vpayload, bang_type(t.wt), &why);
          break;
        }
        case ObligationClause::BangU: {
          if (!t.fp) break;
          Result<Footprint> banged = entry.vtype_u(t.payload, t.mu, bang_type(t.wt));
          pass = banged && banged->w.empty() && banged->r == t.fp->all();
          if (!pass) why = banged ? "banged footprint is not (r ∪ w, ∅)" : banged.reject;
          break;
        }
        case ObligationClause::NoAlias: {
          if (!t.fp) break;
          pass = t.fp->disjoint();
          if (!pass) why = "r and w overlap";
          break;
        }
        case ObligationClause::Valid: {
          if (!t.fp) break;
          for (Loc l : t.fp->all())
            if (!t.mu.get(l)) {
              pass = false;
              why = "footprint location " + std::to_string(l) + " is unmapped";
            }
          break;
        }
        case ObligationClause::Frame: {
          if (!t.fp) break;
          // Disturb the store outside the value's footprint and require the
          // typing (with the same footprint) to survive.
          Store out = t.mu;
          std::set<Loc> wi, wo;
          std::set<Loc> fp_all = t.fp->all();
          for (const auto& [l, _] : t.mu.cells) {
            if (fp_all.count(l)) continue;
            switch (rng.below(3)) {
              case 0: break;  // leave untouched
              case 1:  // overwrite
                out.put(l, UValue::u32(rng.u32()));
                wi.insert(l);
                wo.insert(l);
                break;
              case 2:  // free
                out.erase(l);
                wi.insert(l);
                break;
            }
          }
          uint64_t fresh = rng.below(3) + 1;
          for (uint64_t k = 0; k < fresh; ++k) wo.insert(out.alloc(UValue::u32(rng.u32())));
          if (!frame(wi, t.mu, wo, out)) {
            pass = false;
            why = "disturbance construction broke the frame relation";
            break;
          }
          Result<Footprint> after = entry.vtype_u(t.payload, out, t.wt);
          pass = after && *after == *t.fp;
          if (!pass) why = after ? "footprint changed" : after.reject;
          break;
        }
        case ObligationClause::ReadOnly: {
          Result<Footprint> ro = entry.vtype_u(t.payload, t.mu, bang_type(t.wt));
          if (!ro) break;  // hypothesis void
          pass = ro->w.empty();
          if (!pass) why = "read-only typing has writable locations";
          break;
        }
      }
      if (!pass) {
        cr.failures++;
        if (cr.counterexample.empty()) {
          cr.counterexample = "trial " + std::to_string(i) + ": " + why +
                              "; value " + to_string(UValue{t.payload}) + "; store " +
                              store_to_json(t.mu);
        }
      }
    }
    rep.clauses.push_back(std::move(cr));
  }
  return rep;
}

AbsTypeEntry make_faulty_array_abs_entry(ObligationClause which) {
  AbsTypeEntry e = make_array_abs_entry();
  switch (which) {
    case ObligationClause::BangV:
      // Read-only typing spuriously demands zeroed elements.
      e.vtype_v = [](const VAbs& a, const Type& t, std::string* why) {
        if (!array_vtype_v(a, t, why)) return false;
        if (!t.readonly) return true;
        for (const VValue& x : a.wa.xs) {
          const VU32* u = x.as<VU32>();
          const VU8* b = x.as<VU8>();
          const VBool* o = x.as<VBool>();
          if ((u && u->v) || (b && b->v) || (o && o->v)) {
            if (why) *why = "read-only arrays must be zeroed";
            return false;
          }
        }
        return true;
      };
      break;
    case ObligationClause::BangU:
      // Banged footprint forgets the first element location.
      e.vtype_u = [](const UAbs& a, const Store& mu, const Type& t) {
        Result<Footprint> r = array_vtype_u(a, mu, t);
        if (r && t.readonly && !r->r.empty()) r.val->r.erase(*r->r.begin());
        return r;
      };
      break;
    case ObligationClause::NoAlias:
      // The base location leaks into both sets.
      e.vtype_u = [](const UAbs& a, const Store& mu, const Type& t) {
        Result<Footprint> r = array_vtype_u(a, mu, t);
        if (r && !t.readonly && a.wa.len > 0) r.val->r.insert(a.wa.base);
        return r;
      };
      break;
    case ObligationClause::Valid:
      // Claims a footprint without checking the cells exist, over a generator
      // that drops one element cell.
      e.gen = [](Rng& rng, Store& mu, const Type& t) {
        GenAbs g = array_gen(rng, mu, t);
        const UAbs* ua = mu.get(g.u.as<ULoc>()->loc)->as<UAbs>();
        if (ua->wa.len > 0) mu.erase(ua->wa.base + rng.below(ua->wa.len));
        return g;
      };
      e.vtype_u = [](const UAbs& a, const Store&, const Type& t) {
        using R = Result<Footprint>;
        Footprint fp;
        std::set<Loc>& side = t.readonly ? fp.r : fp.w;
        for (uint32_t i = 0; i < a.wa.len; ++i) side.insert(a.wa.base + i);
        return R::ok(std::move(fp));
      };
      break;
    case ObligationClause::Frame:
      // Typing depends on unrelated parts of the store.
      e.vtype_u = [](const UAbs& a, const Store& mu, const Type& t) {
        Result<Footprint> r = array_vtype_u(a, mu, t);
        if (!r) return r;
        for (const auto& [l, _] : mu.cells)
          if (l > a.wa.base + a.wa.len)
            return Result<Footprint>::fail("store has cells this relation dislikes");
        return r;
      };
      break;
    case ObligationClause::ReadOnly:
      // Keeps a writable claim on the base even when banged.
      e.vtype_u = [](const UAbs& a, const Store& mu, const Type& t) {
        Result<Footprint> r = array_vtype_u(a, mu, t);
        if (r && t.readonly && a.wa.len > 0) {
          r.val->r.erase(a.wa.base);
          r.val->w.insert(a.wa.base);
        }
        return r;
      };
      break;
  }
  return e;
}

}  // namespace minicog
