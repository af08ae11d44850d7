#include "minicog/shallow.hpp"

#include <stdexcept>

namespace minicog {

std::string to_string(const SValue& v) {
  struct P {
    std::string operator()(const SUnit&) const { return "()"; }
    std::string operator()(const SBool& b) const { return b.v ? "True" : "False"; }
    std::string operator()(const SU8& x) const { return std::to_string(x.v); }
    std::string operator()(const SU32& x) const { return std::to_string(x.v); }
    std::string operator()(const STuple& t) const {
      std::string out = "(";
      for (size_t i = 0; i < t.items.size(); ++i) {
        if (i) out += ", ";
        out += to_string(t.items[i]);
      }
      return out + ")";
    }
    std::string operator()(const SList& l) const {
      std::string out = "[";
      for (size_t i = 0; i < l.xs.size(); ++i) {
        if (i) out += ", ";
        out += to_string(l.xs[i]);
      }
      return out + "]";
    }
    std::string operator()(const SFun& f) const { return "<fun " + f.name + ">"; }
  };
  return std::visit(P{}, v.v);
}

SValue ShallowCtx::apply(const SValue& fn, const SValue& arg) const {
  const SFun* f = fn.as<SFun>();
  if (!f) throw std::runtime_error("shallow application of a non-function");
  auto it = funs.find(f->name);
  if (it == funs.end()) throw std::runtime_error("no pure function registered as '" + f->name + "'");
  return it->second(*this, arg);
}

namespace {

const std::vector<SValue>& list_of(const SValue& v) {
  const SList* l = v.as<SList>();
  if (!l) throw std::runtime_error("expected a list, got " + to_string(v));
  return l->xs;
}

}  // namespace

SValue length_s(const SValue& xs) {
  return SValue::u32(static_cast<uint32_t>(list_of(xs).size()));
}

SValue get_s(const SValue& xs, uint32_t i, const SValue& d) {
  const auto& v = list_of(xs);
  if (i < v.size()) return v[i];
  return d;
}

SValue put_s(const SValue& xs, uint32_t i, const SValue& v) {
  std::vector<SValue> out = list_of(xs);
  if (i < out.size()) out[i] = v;
  return SValue::list(std::move(out));
}

SValue fold_s(const std::function<SValue(const SValue&, const SValue&, const SValue&)>& body,
              const SValue& acc0, const SValue& xs, uint32_t frm, uint32_t to,
              const SValue& obsv) {
  const auto& v = list_of(xs);
  size_t end = std::min<size_t>(to, v.size());
  SValue acc = acc0;
  for (size_t i = frm; i < end; ++i) acc = body(v[i], acc, obsv);
  return acc;
}

std::pair<SValue, SValue> mapaccum_s(
    const std::function<std::pair<SValue, SValue>(const SValue&, const SValue&, const SValue&)>&
        body,
    const SValue& acc0, const SValue& xs, uint32_t frm, uint32_t to, const SValue& obsv) {
  std::vector<SValue> out = list_of(xs);
  size_t end = std::min<size_t>(to, out.size());
  SValue acc = acc0;
  for (size_t i = frm; i < end; ++i) {
    auto [el, acc2] = body(out[i], acc, obsv);
    out[i] = el;
    acc = acc2;
  }
  return {SValue::list(std::move(out)), acc};
}

SValue repeat_s(uint64_t n, const std::function<bool(const SValue&, const SValue&)>& stop,
                const std::function<SValue(const SValue&, const SValue&)>& step,
                const SValue& acc, const SValue& obsv) {
  if (n == 0) return acc;
  if (stop(acc, obsv)) return acc;
  return repeat_s(n - 1, stop, step, step(acc, obsv), obsv);
}

uint32_t sum_s(const std::vector<uint32_t>& xs) {
  SValue list = SValue::list([&] {
    std::vector<SValue> out;
    out.reserve(xs.size());
    for (uint32_t x : xs) out.push_back(SValue::u32(x));
    return out;
  }());
  SValue r = fold_s(
      [](const SValue& el, const SValue& acc, const SValue&) {
        return SValue::u32(el.as<SU32>()->v + acc.as<SU32>()->v);
      },
      SValue::u32(0), list, 0, static_cast<uint32_t>(xs.size()), SValue::unit());
  return r.as<SU32>()->v;
}

uint32_t binary_search_s(const std::vector<uint32_t>& xs, uint32_t v, SearchStats* stats) {
  uint32_t len = static_cast<uint32_t>(xs.size());
  SValue list = SValue::list([&] {
    std::vector<SValue> out;
    out.reserve(xs.size());
    for (uint32_t x : xs) out.push_back(SValue::u32(x));
    return out;
  }());
  SValue obsv = SValue::tuple({list, SValue::u32(v)});
  auto stop = [stats](const SValue& acc, const SValue&) {
    if (stats) stats->stop_calls++;
    const auto& t = acc.as<STuple>()->items;
    return t[2].as<SBool>()->v || t[0].as<SU32>()->v >= t[1].as<SU32>()->v;
  };
  auto step = [stats](const SValue& acc, const SValue& obsv) {
    if (stats) stats->step_calls++;
    const auto& t = acc.as<STuple>()->items;
    uint32_t l = t[0].as<SU32>()->v, r = t[1].as<SU32>()->v;
    SValue b = t[2];
    const auto& ob = obsv.as<STuple>()->items;
    uint32_t target = ob[1].as<SU32>()->v;
    uint32_t m = l + (r - l) / 2;
    uint32_t x = get_s(ob[0], m, SValue::u32(0)).as<SU32>()->v;
    if (x < target) return SValue::tuple({SValue::u32(m + 1), SValue::u32(r), b});
    if (x > target) return SValue::tuple({SValue::u32(l), SValue::u32(m), b});
    return SValue::tuple({SValue::u32(m), SValue::u32(r), SValue::boolean(true)});
  };
  SValue init = SValue::tuple({SValue::u32(0), SValue::u32(len), SValue::boolean(false)});
  SValue fin = repeat_s(len, stop, step, init, obsv);
  const auto& t = fin.as<STuple>()->items;
  return t[2].as<SBool>()->v ? t[0].as<SU32>()->v : len;
}

bool rel_ps(const SValue& s, const VValue& p) {
  if (const VProd* vp = p.as<VProd>()) {
    const STuple* st = s.as<STuple>();
    if (!st || st->items.size() != vp->items.size()) return false;
    for (size_t i = 0; i < vp->items.size(); ++i)
      if (!rel_ps(st->items[i], vp->items[i])) return false;
    return true;
  }
  if (const VAbs* va = p.as<VAbs>()) {
    const SList* sl = s.as<SList>();
    if (!sl || sl->xs.size() != va->wa.xs.size()) return false;
    for (size_t i = 0; i < sl->xs.size(); ++i)
      if (!rel_ps(sl->xs[i], va->wa.xs[i])) return false;
    return true;
  }
  if (const VFun* vf = p.as<VFun>()) {
    const SFun* sf = s.as<SFun>();
    return sf && sf->name == vf->name;
  }
  if (p.as<VUnit>()) return s.as<SUnit>() != nullptr;
  if (const VBool* b = p.as<VBool>()) {
    const SBool* x = s.as<SBool>();
    return x && x->v == b->v;
  }
  if (const VU8* b = p.as<VU8>()) {
    const SU8* x = s.as<SU8>();
    return x && x->v == b->v;
  }
  if (const VU32* b = p.as<VU32>()) {
    const SU32* x = s.as<SU32>();
    return x && x->v == b->v;
  }
  return false;
}

}  // namespace minicog
