#include <deque>
#include <set>

#include "minicog/refine.hpp"

namespace minicog {

namespace {

// Prefix-decodable flat spelling, so distinct instantiations cannot collide.
std::string flat(const Type& t) {
  switch (t.tag) {
    case TyTag::Unit: return "Unit";
    case TyTag::Bool: return "Bool";
    case TyTag::U8: return "U8";
    case TyTag::U32: return "U32";
    case TyTag::Var: return "v" + t.name;
    case TyTag::Bang: return "Ro" + flat(t.args[0]);
    case TyTag::Fun: return "Fn_" + flat(t.args[0]) + "_" + flat(t.args[1]) + "_e";
    case TyTag::Prod: {
      std::string out = "Tup";
      for (const Type& a : t.args) out += "_" + flat(a);
      return out + "_e";
    }
    case TyTag::Abs: {
      std::string out = t.readonly ? "Ro" + t.name : t.name;
      for (const Type& a : t.args) out += "_" + flat(a);
      return out + "_e";
    }
  }
  return "?";
}

std::string mangle(const std::vector<Type>& tyargs) {
  std::string out;
  for (const Type& t : tyargs) out += "'" + flat(t);
  return out;
}

void subst_expr_types(Expr& e, const std::vector<std::string>& vars,
                      const std::vector<Type>& args) {
  if (e.tag == ExTag::App)
    for (Type& t : e.tyargs) t = subst_type(t, vars, args);
  for (Expr& k : e.kids) subst_expr_types(k, vars, args);
}

}  // namespace

std::string NameMap::key(const std::string& name, const std::vector<Type>& tyargs) {
  return name + "|" + mangle(tyargs);
}

void NameMap::add(const std::string& name, const std::vector<Type>& tyargs, std::string mono) {
  for (const auto& [k, v] : m)
    if (v == mono && k != key(name, tyargs))
      throw MonoError("name map would not be injective at '" + mono + "'");
  m[key(name, tyargs)] = std::move(mono);
}

const std::string& NameMap::lookup(const std::string& name,
                                   const std::vector<Type>& tyargs) const {
  auto it = m.find(key(name, tyargs));
  if (it == m.end())
    throw MonoError("no monomorphic copy for '" + name + mangle(tyargs) + "'");
  return it->second;
}

bool NameMap::has(const std::string& name, const std::vector<Type>& tyargs) const {
  return m.count(key(name, tyargs)) != 0;
}

Expr mono_expr(const NameMap& n, const Expr& e) {
  Expr out = e;
  if (out.tag == ExTag::App) {
    for (const Type& t : out.tyargs)
      if (contains_var(t)) throw MonoError("type argument still polymorphic: " + to_string(t));
    out.name = n.lookup(out.name, out.tyargs);
    out.tyargs.clear();
  } else if (out.tag == ExTag::Var && n.has(out.name, {})) {
    out.name = n.lookup(out.name, {});
  }
  for (Expr& k : out.kids) k = mono_expr(n, k);
  return out;
}

VValue mono_value(const NameMap& n, const VValue& v) {
  if (const VFun* f = v.as<VFun>()) return VValue::fun(n.lookup(f->name, f->tyargs));
  if (const VProd* p = v.as<VProd>()) {
    std::vector<VValue> items;
    items.reserve(p->items.size());
    for (const VValue& x : p->items) items.push_back(mono_value(n, x));
    return VValue::prod(std::move(items));
  }
  if (const VAbs* a = v.as<VAbs>()) {
    std::vector<VValue> xs;
    xs.reserve(a->wa.xs.size());
    for (const VValue& x : a->wa.xs) xs.push_back(mono_value(n, x));
    return VValue::array(a->wa.elem, std::move(xs));
  }
  return v;
}

namespace {

struct Instantiation {
  std::string name;
  std::vector<Type> tyargs;
};

void collect_calls(const Expr& e, const std::vector<std::string>& vars,
                   const std::vector<Type>& args, const Program& prog,
                   std::vector<Instantiation>& out) {
  if (e.tag == ExTag::App) {
    std::vector<Type> tys;
    tys.reserve(e.tyargs.size());
    for (const Type& t : e.tyargs) tys.push_back(subst_type(t, vars, args));
    out.push_back({e.name, std::move(tys)});
  } else if (e.tag == ExTag::Var && prog.find(e.name)) {
    out.push_back({e.name, {}});
  }
  for (const Expr& k : e.kids) collect_calls(k, vars, args, prog, out);
}

}  // namespace

MonoProgram monomorphise(const TypedProgram& p) {
  MonoProgram out;
  out.prog.prog.typedefs = p.prog.typedefs;

  std::deque<Instantiation> work;
  std::set<std::string> seen;
  std::set<std::string> taken_names;
  for (const FunDef& f : p.prog.fundefs) taken_names.insert(f.name);

  auto enqueue = [&](const Instantiation& inst) {
    std::string k = NameMap::key(inst.name, inst.tyargs);
    if (!seen.insert(k).second) return;
    std::string mono = inst.tyargs.empty() ? inst.name : inst.name + mangle(inst.tyargs);
    while (!inst.tyargs.empty() && taken_names.count(mono)) mono += "_";
    taken_names.insert(mono);
    out.nmap.add(inst.name, inst.tyargs, mono);
    work.push_back(inst);
  };

  // Roots: the monomorphic defined functions.
  for (const FunDef& f : p.prog.fundefs)
    if (!f.foreign() && f.tyvars.empty()) enqueue({f.name, {}});

  // First pass: discover every instantiation transitively.
  for (size_t i = 0; i < work.size(); ++i) {
    Instantiation inst = work[i];
    const FunDef* f = p.prog.find(inst.name);
    if (!f) throw MonoError("unknown function '" + inst.name + "'");
    if (f->foreign()) continue;
    std::vector<Instantiation> calls;
    collect_calls(*f->body, f->tyvars, inst.tyargs, p.prog, calls);
    for (const Instantiation& c : calls) enqueue(c);
  }

  // Second pass: emit the specialised copies.
  for (const Instantiation& inst : work) {
    const FunDef* f = p.prog.find(inst.name);
    FunDef copy;
    copy.name = out.nmap.lookup(inst.name, inst.tyargs);
    copy.arg_type = subst_type(f->arg_type, f->tyvars, inst.tyargs);
    copy.ret_type = subst_type(f->ret_type, f->tyvars, inst.tyargs);
    if (f->foreign()) {
      copy.base_name = f->base_name;
      copy.base_tyargs = inst.tyargs;
    } else {
      copy.base_name = copy.name;
      copy.param = f->param;
      Expr body = *f->body;
      subst_expr_types(body, f->tyvars, inst.tyargs);
      copy.body = mono_expr(out.nmap, body);
    }
    out.prog.prog.fundefs.push_back(std::move(copy));
  }
  return out;
}

}  // namespace minicog
