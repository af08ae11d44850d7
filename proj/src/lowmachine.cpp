#include "minicog/lowmachine.hpp"

#include <algorithm>

namespace minicog {

uint32_t size_of(const Type& t) {
  switch (t.tag) {
    case TyTag::U32: return 4;
    case TyTag::U8: return 1;
    case TyTag::Bool: return 1;
    default: return 0;
  }
}

bool has_layout(const Type& t) { return size_of(t) != 0; }

std::string to_string(const LowValue& v) {
  struct P {
    std::string operator()(const LUnit&) const { return "()"; }
    std::string operator()(const LBool& b) const { return b.v ? "True" : "False"; }
    std::string operator()(const LU8& x) const { return std::to_string(x.v); }
    std::string operator()(const LU32& x) const { return std::to_string(x.v); }
    std::string operator()(const LTuple& t) const {
      std::string out = "(";
      for (size_t i = 0; i < t.items.size(); ++i) {
        if (i) out += ", ";
        out += to_string(t.items[i]);
      }
      return out + ")";
    }
    std::string operator()(const LStructArray& a) const {
      return "{len=" + std::to_string(a.len) + ", vals=0x" + hex(a.vals) + "}";
    }
    std::string operator()(const LFunId& f) const { return "fid" + std::to_string(f.fid); }
    static std::string hex(uint32_t v) {
      static const char* digits = "0123456789abcdef";
      std::string s;
      for (int shift = 28; shift >= 0; shift -= 4) s += digits[(v >> shift) & 0xf];
      return s;
    }
  };
  return std::visit(P{}, v.v);
}

bool LowHeap::reserve(uint32_t base, uint32_t len, const Type& elem) {
  uint64_t end = static_cast<uint64_t>(base) + len;
  if (end > bytes.size()) return false;
  for (const Allocation& a : allocs) {
    uint64_t aend = static_cast<uint64_t>(a.base) + a.bytes;
    if (base < aend && a.base < end) return false;
  }
  allocs.push_back({base, len, elem});
  return true;
}

bool LowHeap::allocated(uint32_t addr, uint32_t len) const {
  if (len == 0) return true;
  uint64_t end = static_cast<uint64_t>(addr) + len;
  for (const Allocation& a : allocs) {
    if (addr >= a.base && end <= static_cast<uint64_t>(a.base) + a.bytes) return true;
  }
  return false;
}

std::string hex_dump(const LowHeap& h) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (uint32_t line = 0; line < h.size(); line += 16) {
    uint32_t n = std::min<uint32_t>(16, h.size() - line);
    bool all_zero = true;
    for (uint32_t i = 0; i < n; ++i)
      if (h.bytes[line + i]) all_zero = false;
    if (all_zero) continue;
    for (int shift = 28; shift >= 0; shift -= 4) out += digits[(line >> shift) & 0xf];
    out += ":";
    for (uint32_t i = 0; i < n; ++i) {
      uint8_t b = h.bytes[line + i];
      out += ' ';
      out += digits[b >> 4];
      out += digits[b & 0xf];
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// word access

LowResult read_word(const LowHeap& h, uint32_t addr) {
  if (addr % 4 != 0) return LowResult::failed("unaligned read at " + std::to_string(addr));
  if (!h.allocated(addr, 4)) return LowResult::failed("out-of-bounds read at " + std::to_string(addr));
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | h.bytes[addr + i];
  return LowResult::ok(LowValue::u32(v));
}

LowResult write_word(LowHeap& h, uint32_t addr, uint32_t val) {
  if (addr % 4 != 0) return LowResult::failed("unaligned write at " + std::to_string(addr));
  if (!h.allocated(addr, 4))
    return LowResult::failed("out-of-bounds write at " + std::to_string(addr));
  for (int i = 0; i < 4; ++i) h.bytes[addr + i] = static_cast<uint8_t>(val >> (8 * i));
  return LowResult::ok(LowValue::unit());
}

LowResult read_elem(const LowHeap& h, const Type& elem, uint32_t addr) {
  if (elem.tag == TyTag::U32) {
    LowResult r = read_word(h, addr);
    return r;
  }
  if (!h.allocated(addr, 1))
    return LowResult::failed("out-of-bounds read at " + std::to_string(addr));
  uint8_t b = h.bytes[addr];
  if (elem.tag == TyTag::U8) return LowResult::ok(LowValue::u8(b));
  if (elem.tag == TyTag::Bool) {
    if (b > 1) return LowResult::failed("corrupt boolean at " + std::to_string(addr));
    return LowResult::ok(LowValue::boolean(b != 0));
  }
  return LowResult::failed("type " + to_string(elem) + " has no machine layout");
}

LowResult write_elem(LowHeap& h, const Type& elem, uint32_t addr, const LowValue& v) {
  if (elem.tag == TyTag::U32) {
    const LU32* x = v.as<LU32>();
    if (!x) return LowResult::failed("element/value shape mismatch");
    return write_word(h, addr, x->v);
  }
  if (!h.allocated(addr, 1))
    return LowResult::failed("out-of-bounds write at " + std::to_string(addr));
  if (elem.tag == TyTag::U8) {
    const LU8* x = v.as<LU8>();
    if (!x) return LowResult::failed("element/value shape mismatch");
    h.bytes[addr] = x->v;
    return LowResult::ok(LowValue::unit());
  }
  if (elem.tag == TyTag::Bool) {
    const LBool* x = v.as<LBool>();
    if (!x) return LowResult::failed("element/value shape mismatch");
    h.bytes[addr] = x->v;
    return LowResult::ok(LowValue::unit());
  }
  return LowResult::failed("type " + to_string(elem) + " has no machine layout");
}

namespace {

// Address of element i, with checked 32-bit arithmetic.
LowResult elem_addr(const Type& elem, const LStructArray& arr, uint32_t i) {
  uint64_t a = static_cast<uint64_t>(arr.vals) + static_cast<uint64_t>(size_of(elem)) * i;
  if (a > 0xffffffffULL) return LowResult::failed("address arithmetic wraps");
  return LowResult::ok(LowValue::u32(static_cast<uint32_t>(a)));
}

bool array_region_ok(const LowHeap& h, const Type& elem, const LStructArray& arr) {
  uint64_t span = static_cast<uint64_t>(size_of(elem)) * arr.len;
  if (span > 0xffffffffULL) return false;
  if (static_cast<uint64_t>(arr.vals) + span > 0xffffffffULL) return false;
  if (elem.tag == TyTag::U32 && arr.vals % 4 != 0) return false;
  return h.allocated(arr.vals, static_cast<uint32_t>(span));
}

}  // namespace

LowResult FidTable::dispatch(uint32_t fid, LowHeap& heap, const LowValue& arg) const {
  auto it = fns.find(fid);
  if (it == fns.end()) return LowResult::failed("unknown function id " + std::to_string(fid));
  return it->second(*this, heap, arg);
}

// ---------------------------------------------------------------------------
// array library

ExecOutcome low_length(const LowHeap& h, const LStructArray& arr) {
  // Element width is unknown here; one byte per element is the weakest
  // in-bounds evidence every layout satisfies.
  if (!h.allocated(arr.vals, arr.len)) return ExecOutcome::failed("dangling array");
  return ExecOutcome::ok(LowValue::u32(arr.len), h);
}

ExecOutcome low_get(const LowHeap& h, const Type& elem, const LStructArray& arr, uint32_t i,
                    const LowValue& def) {
  if (!array_region_ok(h, elem, arr)) return ExecOutcome::failed("dangling array");
  if (i >= arr.len) return ExecOutcome::ok(def, h);
  LowResult a = elem_addr(elem, arr, i);
  if (!a.is_ok) return ExecOutcome::failed(a.failure);
  LowResult r = read_elem(h, elem, a.value.as<LU32>()->v);
  if (!r.is_ok) return ExecOutcome::failed(r.failure);
  return ExecOutcome::ok(r.value, h);
}

ExecOutcome low_put(const LowHeap& h, const Type& elem, const LStructArray& arr, uint32_t i,
                    const LowValue& v) {
  if (!array_region_ok(h, elem, arr)) return ExecOutcome::failed("dangling array");
  if (i >= arr.len) return ExecOutcome::ok(LowValue{LStructArray{arr}}, h);
  LowHeap out = h;
  LowResult a = elem_addr(elem, arr, i);
  if (!a.is_ok) return ExecOutcome::failed(a.failure);
  LowResult w = write_elem(out, elem, a.value.as<LU32>()->v, v);
  if (!w.is_ok) return ExecOutcome::failed(w.failure);
  return ExecOutcome::ok(LowValue{LStructArray{arr}}, std::move(out));
}

ExecOutcome low_fold(const LowHeap& h, const FidTable& tbl, uint32_t fid, const LowValue& acc0,
                     const Type& elem, const LStructArray& arr, uint32_t frm, uint32_t to,
                     const LowValue& obsv) {
  if (!array_region_ok(h, elem, arr)) return ExecOutcome::failed("dangling array");
  LowHeap heap = h;
  uint32_t end = arr.len;
  if (to < end) end = to;
  LowValue acc = acc0;
  for (uint32_t i = frm; i < end; ++i) {
    LowResult a = elem_addr(elem, arr, i);
    if (!a.is_ok) return ExecOutcome::failed(a.failure);
    LowResult el = read_elem(heap, elem, a.value.as<LU32>()->v);
    if (!el.is_ok) return ExecOutcome::failed(el.failure);
    LowResult step = tbl.dispatch(fid, heap, LowValue::tuple({el.value, acc, obsv}));
    if (!step.is_ok) return ExecOutcome::failed(step.failure);
    acc = step.value;
  }
  return ExecOutcome::ok(acc, std::move(heap));
}

ExecOutcome low_mapaccum(const LowHeap& h, const FidTable& tbl, uint32_t fid, const LowValue& acc0,
                         const Type& elem, const LStructArray& arr, uint32_t frm, uint32_t to,
                         const LowValue& obsv) {
  if (!array_region_ok(h, elem, arr)) return ExecOutcome::failed("dangling array");
  LowHeap heap = h;
  uint32_t end = arr.len;
  if (to < end) end = to;
  LowValue acc = acc0;
  for (uint32_t i = frm; i < end; ++i) {
    LowResult a = elem_addr(elem, arr, i);
    if (!a.is_ok) return ExecOutcome::failed(a.failure);
    uint32_t addr = a.value.as<LU32>()->v;
    LowResult el = read_elem(heap, elem, addr);
    if (!el.is_ok) return ExecOutcome::failed(el.failure);
    LowResult step = tbl.dispatch(fid, heap, LowValue::tuple({el.value, acc, obsv}));
    if (!step.is_ok) return ExecOutcome::failed(step.failure);
    const LTuple* ea = step.value.as<LTuple>();
    if (!ea || ea->items.size() != 2)
      return ExecOutcome::failed("mapAccum body must return (element, accumulator)");
    LowResult w = write_elem(heap, elem, addr, ea->items[0]);
    if (!w.is_ok) return ExecOutcome::failed(w.failure);
    acc = ea->items[1];
  }
  return ExecOutcome::ok(LowValue::tuple({LowValue{LStructArray{arr}}, acc}), std::move(heap));
}

ExecOutcome low_repeat(const LowHeap& h, const FidTable& tbl, uint32_t n, uint32_t fid_stop,
                       uint32_t fid_step, const LowValue& acc0, const LowValue& obsv) {
  LowHeap heap = h;
  LowValue acc = acc0;
  for (uint32_t i = 0; i < n; ++i) {
    LowResult stop = tbl.dispatch(fid_stop, heap, LowValue::tuple({acc, obsv}));
    if (!stop.is_ok) return ExecOutcome::failed(stop.failure);
    const LBool* b = stop.value.as<LBool>();
    if (!b) return ExecOutcome::failed("stop body must return a boolean");
    if (b->v) break;
    LowResult step = tbl.dispatch(fid_step, heap, LowValue::tuple({acc, obsv}));
    if (!step.is_ok) return ExecOutcome::failed(step.failure);
    acc = step.value;
  }
  return ExecOutcome::ok(acc, std::move(heap));
}

// ---------------------------------------------------------------------------
// relations

bool rel_vc(const LowValue& c, const UValue& u, const Store& mu, const AddrMap& amap,
            const std::map<std::string, uint32_t>& fids) {
  if (const ULoc* l = u.as<ULoc>()) {
    const UValue* pointee = mu.get(l->loc);
    if (!pointee) return false;
    return rel_vc(c, *pointee, mu, amap, fids);
  }
  if (const UAbs* a = u.as<UAbs>()) {
    const LStructArray* s = c.as<LStructArray>();
    if (!s) return false;
    if (s->len != a->wa.len) return false;
    auto it = amap.find(a->wa.base);
    return it != amap.end() && it->second == s->vals;
  }
  if (const UProd* p = u.as<UProd>()) {
    const LTuple* t = c.as<LTuple>();
    if (!t || t->items.size() != p->items.size()) return false;
    for (size_t i = 0; i < p->items.size(); ++i)
      if (!rel_vc(t->items[i], p->items[i], mu, amap, fids)) return false;
    return true;
  }
  if (const UFun* f = u.as<UFun>()) {
    const LFunId* id = c.as<LFunId>();
    if (!id) return false;
    auto it = fids.find(f->name);
    return it != fids.end() && it->second == id->fid;
  }
  if (u.as<UUnit>()) return c.as<LUnit>() != nullptr;
  if (const UBool* b = u.as<UBool>()) {
    const LBool* x = c.as<LBool>();
    return x && (x->v != 0) == b->v;
  }
  if (const UU8* b = u.as<UU8>()) {
    const LU8* x = c.as<LU8>();
    return x && x->v == b->v;
  }
  if (const UU32* b = u.as<UU32>()) {
    const LU32* x = c.as<LU32>();
    return x && x->v == b->v;
  }
  return false;
}

namespace {

// Byte extent of the encoding of one store cell.
uint32_t cell_bytes(const UValue& u) {
  if (u.as<UAbs>()) return 8;  // header: len word + vals word
  if (u.as<UU32>()) return 4;
  if (u.as<UU8>() || u.as<UBool>()) return 1;
  return 0;
}

bool decode_matches(const LowHeap& h, uint32_t addr, const UValue& u, const AddrMap& amap) {
  if (const UAbs* a = u.as<UAbs>()) {
    LowResult len = read_word(h, addr);
    LowResult vals = read_word(h, addr + 4);
    if (!len.is_ok || !vals.is_ok) return false;
    if (len.value.as<LU32>()->v != a->wa.len) return false;
    auto it = amap.find(a->wa.base);
    return it != amap.end() && vals.value.as<LU32>()->v == it->second;
  }
  if (const UU32* x = u.as<UU32>()) {
    LowResult r = read_word(h, addr);
    return r.is_ok && r.value.as<LU32>()->v == x->v;
  }
  if (const UU8* x = u.as<UU8>()) {
    return h.allocated(addr, 1) && h.bytes[addr] == x->v;
  }
  if (const UBool* x = u.as<UBool>()) {
    return h.allocated(addr, 1) && h.bytes[addr] == (x->v ? 1 : 0);
  }
  return false;  // tuples, functions and units are unboxed; they never sit in μ here
}

}  // namespace

bool rel_hc(const LowHeap& sigma, const Store& mu, const AddrMap& amap) {
  std::vector<std::pair<uint64_t, uint64_t>> covered;
  for (const auto& [loc, val] : mu.cells) {
    auto it = amap.find(loc);
    if (it == amap.end()) return false;
    if (!decode_matches(sigma, it->second, val, amap)) return false;
    uint32_t n = cell_bytes(val);
    if (n == 0) return false;
    covered.emplace_back(it->second, static_cast<uint64_t>(it->second) + n);
  }
  // Allocation regions must cover exactly the encoded bytes.
  std::vector<std::pair<uint64_t, uint64_t>> regions;
  for (const Allocation& a : sigma.allocs)
    if (a.bytes) regions.emplace_back(a.base, static_cast<uint64_t>(a.base) + a.bytes);
  auto normalize = [](std::vector<std::pair<uint64_t, uint64_t>>& v) {
    std::sort(v.begin(), v.end());
    std::vector<std::pair<uint64_t, uint64_t>> out;
    for (auto& iv : v) {
      if (!out.empty() && iv.first <= out.back().second)
        out.back().second = std::max(out.back().second, iv.second);
      else
        out.push_back(iv);
    }
    v = std::move(out);
  };
  normalize(covered);
  normalize(regions);
  return covered == regions;
}

}  // namespace minicog
