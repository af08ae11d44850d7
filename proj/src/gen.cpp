#include <algorithm>

#include "minicog/parser.hpp"
#include "minicog/refine.hpp"

namespace minicog {

// ---------------------------------------------------------------------------
// worlds and value bundles

uint32_t WorldBuilder::alloc_region(uint32_t bytes, const Type& elem) {
  uint32_t base = (cursor + 3u) & ~3u;
  if (static_cast<uint64_t>(base) + bytes > heap.size())
    throw std::runtime_error("machine heap exhausted; raise --heap-bytes");
  if (!heap.reserve(base, bytes, elem)) throw std::runtime_error("heap region overlap");
  cursor = base + bytes;
  return base;
}

namespace {

struct PrimBundle {
  SValue s;
  VValue v;
  UValue u;
  LowValue c;
};

PrimBundle prim_bundle(const Type& t, uint32_t bits) {
  switch (t.tag) {
    case TyTag::Unit:
      return {SValue::unit(), VValue::unit(), UValue::unit(), LowValue::unit()};
    case TyTag::Bool: {
      bool b = bits != 0;
      return {SValue::boolean(b), VValue::boolean(b), UValue::boolean(b), LowValue::boolean(b)};
    }
    case TyTag::U8: {
      uint8_t x = static_cast<uint8_t>(bits);
      return {SValue::u8(x), VValue::u8(x), UValue::u8(x), LowValue::u8(x)};
    }
    default:
      return {SValue::u32(bits), VValue::u32(bits), UValue::u32(bits), LowValue::u32(bits)};
  }
}

uint32_t random_prim_bits(Rng& rng, const Type& t) {
  switch (t.tag) {
    case TyTag::Bool: return rng.flip() ? 1 : 0;
    case TyTag::U8: return rng.u8();
    case TyTag::U32: return rng.flip() ? static_cast<uint32_t>(rng.below(64)) : rng.u32();
    default: return 0;
  }
}

ValueBundle array_bundle(WorldBuilder& w, const Type& t, const std::vector<uint32_t>& elems) {
  const Type& elem = t.args[0];
  uint32_t len = static_cast<uint32_t>(elems.size());
  uint32_t esz = size_of(elem);

  std::vector<SValue> ss;
  std::vector<VValue> vs;
  Loc base = w.store.next;
  for (uint32_t bits : elems) {
    PrimBundle p = prim_bundle(elem, bits);
    ss.push_back(p.s);
    vs.push_back(p.v);
    w.store.alloc(p.u);
  }
  if (len == 0) w.store.next++;  // keep the header id off the element block
  Loc header = w.store.alloc(UValue::array(elem, len, base));

  uint32_t data_addr = w.alloc_region(len * esz, elem);
  uint32_t header_addr = w.alloc_region(8, Type::u32());
  for (uint32_t i = 0; i < len; ++i) {
    PrimBundle p = prim_bundle(elem, elems[i]);
    LowResult r = write_elem(w.heap, elem, data_addr + i * esz, p.c);
    if (!r.is_ok) throw std::runtime_error("bundle construction: " + r.failure);
  }
  write_word(w.heap, header_addr, len);
  write_word(w.heap, header_addr + 4, data_addr);

  w.amap[header] = header_addr;
  w.amap[base] = data_addr;
  for (uint32_t i = 1; i < len; ++i) w.amap[base + i] = data_addr + i * esz;

  return {SValue::list(std::move(ss)), VValue::array(elem, std::move(vs)), UValue::loc(header),
          LowValue::arr(len, data_addr)};
}

}  // namespace

ValueBundle gen_value(Rng& rng, WorldBuilder& w, const Type& t, uint32_t array_len_max) {
  switch (t.tag) {
    case TyTag::Unit:
    case TyTag::Bool:
    case TyTag::U8:
    case TyTag::U32: {
      PrimBundle p = prim_bundle(t, random_prim_bits(rng, t));
      return {p.s, p.v, p.u, p.c};
    }
    case TyTag::Prod: {
      std::vector<SValue> ss;
      std::vector<VValue> vs;
      std::vector<UValue> us;
      std::vector<LowValue> cs;
      for (const Type& a : t.args) {
        ValueBundle b = gen_value(rng, w, a, array_len_max);
        ss.push_back(std::move(b.s));
        vs.push_back(std::move(b.v));
        us.push_back(std::move(b.u));
        cs.push_back(std::move(b.c));
      }
      return {SValue::tuple(std::move(ss)), VValue::prod(std::move(vs)),
              UValue::prod(std::move(us)), LowValue::tuple(std::move(cs))};
    }
    case TyTag::Abs: {
      uint32_t len = static_cast<uint32_t>(rng.below(array_len_max + 1));
      std::vector<uint32_t> elems;
      elems.reserve(len);
      for (uint32_t i = 0; i < len; ++i) elems.push_back(random_prim_bits(rng, t.args[0]));
      return array_bundle(w, t, elems);
    }
    default:
      throw std::runtime_error("cannot generate a value of type " + to_string(t));
  }
}

std::string bundle_violation(const EvalCtx& ctx, const WorldBuilder& w, const ValueBundle& b,
                             const Type& t) {
  Result<Footprint> c = corr(ctx, b.u, w.store, b.v, t);
  if (!c) return "corr: " + c.reject;
  if (!rel_ps(b.s, b.v)) return "rel_ps";
  if (!rel_vc(b.c, b.u, w.store, w.amap, ctx.reg.fids)) return "rel_vc";
  if (!rel_hc(w.heap, w.store, w.amap)) return "rel_hc";
  return {};
}

// ---------------------------------------------------------------------------
// literal arguments from the command line

namespace {

struct LitParser {
  const std::string& text;
  size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("argument literal: " + msg + " at offset " + std::to_string(pos));
  }

  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  uint64_t number() {
    skip();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected a number");
    uint64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos++] - '0');
      if (v > 0xffffffffULL) fail("number out of range");
    }
    return v;
  }

  bool word(const char* w) {
    skip();
    size_t n = std::string(w).size();
    if (text.compare(pos, n, w) == 0) {
      pos += n;
      return true;
    }
    return false;
  }

  ValueBundle parse(const Type& t, WorldBuilder& w) {
    skip();
    switch (t.tag) {
      case TyTag::Unit: {
        if (!(eat('(') && eat(')'))) fail("expected ()");
        PrimBundle p = prim_bundle(t, 0);
        return {p.s, p.v, p.u, p.c};
      }
      case TyTag::Bool: {
        uint32_t bits;
        if (word("True") || word("true")) bits = 1;
        else if (word("False") || word("false")) bits = 0;
        else fail("expected a boolean");
        PrimBundle p = prim_bundle(t, bits);
        return {p.s, p.v, p.u, p.c};
      }
      case TyTag::U8:
      case TyTag::U32: {
        uint64_t v = number();
        if (t.tag == TyTag::U8 && v > 0xff) fail("does not fit in U8");
        PrimBundle p = prim_bundle(t, static_cast<uint32_t>(v));
        return {p.s, p.v, p.u, p.c};
      }
      case TyTag::Prod: {
        if (!eat('(')) fail("expected (");
        std::vector<SValue> ss;
        std::vector<VValue> vs;
        std::vector<UValue> us;
        std::vector<LowValue> cs;
        for (size_t i = 0; i < t.args.size(); ++i) {
          if (i && !eat(',')) fail("expected ,");
          ValueBundle b = parse(t.args[i], w);
          ss.push_back(b.s);
          vs.push_back(b.v);
          us.push_back(b.u);
          cs.push_back(b.c);
        }
        if (!eat(')')) fail("expected )");
        return {SValue::tuple(std::move(ss)), VValue::prod(std::move(vs)),
                UValue::prod(std::move(us)), LowValue::tuple(std::move(cs))};
      }
      case TyTag::Abs: {
        if (t.args.size() != 1 || !has_layout(t.args[0]))
          fail("cannot build a value of type " + to_string(t));
        if (!eat('[')) fail("expected [");
        std::vector<uint32_t> elems;
        skip();
        if (!eat(']')) {
          for (;;) {
            if (t.args[0].tag == TyTag::Bool)
              elems.push_back(word("True") || word("true") ? 1
                              : (word("False") || word("false"))
                                  ? 0
                                  : (fail("expected a boolean"), 0));
            else
              elems.push_back(static_cast<uint32_t>(number()));
            if (eat(']')) break;
            if (!eat(',')) fail("expected , or ]");
          }
        }
        return array_bundle(w, t, elems);
      }
      default:
        fail("cannot build a value of type " + to_string(t));
    }
  }
};

}  // namespace

ValueBundle parse_value_literal(const std::string& text, const Type& t, WorldBuilder& w) {
  LitParser p{text};
  ValueBundle b = p.parse(t, w);
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return b;
}

// ---------------------------------------------------------------------------
// random well-typed programs

namespace {

struct GenVar {
  std::string name;
  Type type;
};

struct ArrVar {
  std::string name;
  Type elem;
  bool readonly;
};

struct ProgGen {
  Rng& rng;
  std::vector<GenVar> prims;
  std::vector<ArrVar> arrs;
  int counter = 0;
  std::string body;
  int indent = 1;

  std::string fresh(const char* stem) { return stem + std::to_string(counter++); }

  void line(const std::string& s) {
    body += "\n";
    body.append(static_cast<size_t>(indent) * 2, ' ');
    body += s;
  }

  std::vector<const GenVar*> prims_of(const Type& t) {
    std::vector<const GenVar*> out;
    for (const GenVar& v : prims)
      if (v.type == t) out.push_back(&v);
    return out;
  }

  // Synthesis-safe expressions: U8 expressions are rooted at a variable so a
  // provisional bottom-up pass types them without context.
  std::string u32_expr(int depth) {
    auto vars = prims_of(Type::u32());
    if (depth == 0 || rng.below(3) == 0) {
      if (!vars.empty() && rng.flip()) return vars[rng.below(vars.size())]->name;
      switch (rng.below(5)) {
        case 0: return "0";
        case 1: return "1";
        case 2: return "4294967295";
        default: return std::to_string(rng.below(100));
      }
    }
    if (rng.below(6) == 0)
      return "(if " + bool_expr(depth - 1) + " then " + u32_expr(depth - 1) + " else " +
             u32_expr(depth - 1) + ")";
    static const char* ops[] = {"+", "-", "*", "/"};
    return "(" + u32_expr(depth - 1) + " " + ops[rng.below(4)] + " " + u32_expr(depth - 1) + ")";
  }

  // Empty when no U8 variable is in scope.
  std::string u8_expr(int depth) {
    auto vars = prims_of(Type::u8());
    if (vars.empty()) return {};
    std::string root = vars[rng.below(vars.size())]->name;
    if (depth == 0 || rng.flip()) return root;
    static const char* ops[] = {"+", "-", "*"};
    std::string rhs = rng.flip() ? std::to_string(rng.below(256)) : u8_expr(depth - 1);
    if (rhs.empty()) return root;
    return "(" + root + " " + ops[rng.below(3)] + " " + rhs + ")";
  }

  std::string bool_expr(int depth) {
    auto vars = prims_of(Type::boolean());
    if (depth == 0 || rng.below(3) == 0) {
      if (!vars.empty() && rng.flip()) return vars[rng.below(vars.size())]->name;
      return rng.flip() ? "True" : "False";
    }
    switch (rng.below(3)) {
      case 0: {
        static const char* ops[] = {"<", ">", "<=", ">=", "==", "/="};
        return "(" + u32_expr(depth - 1) + " " + ops[rng.below(6)] + " " + u32_expr(depth - 1) +
               ")";
      }
      case 1:
        return "(" + bool_expr(depth - 1) + (rng.flip() ? " && " : " || ") + bool_expr(depth - 1) +
               ")";
      default:
        return "(" + bool_expr(depth - 1) + (rng.flip() ? " == " : " /= ") + bool_expr(depth - 1) +
               ")";
    }
  }

  std::string expr_of(const Type& t, int depth) {
    if (t.tag == TyTag::U8) {
      std::string e = u8_expr(depth);
      return e.empty() ? std::string() : e;
    }
    if (t.tag == TyTag::Bool) return bool_expr(depth);
    return u32_expr(depth);
  }

  // Accumulator seed for a fold: literal or variable, so inference from the
  // body function's signature can fill in the width.
  std::string acc_expr(const Type& t) {
    auto vars = prims_of(t);
    if (!vars.empty() && rng.flip()) return vars[rng.below(vars.size())]->name;
    if (t.tag == TyTag::Bool) return rng.flip() ? "True" : "False";
    return std::to_string(rng.below(10));
  }

  std::string index_expr() {
    switch (rng.below(4)) {
      case 0: return u32_expr(1);
      case 1: return std::to_string(64 + rng.below(8));  // past the end
      default: return std::to_string(rng.below(8));
    }
  }

  void step_prim() {
    Type t = rng.flip() ? Type::u32() : Type::boolean();
    std::string e = expr_of(t, 2);
    std::string name = fresh("p");
    line("let " + name + " = " + e + " in");
    prims.push_back({name, t});
  }

  void step_if() {
    std::string name = fresh("p");
    line("let " + name + " = (if " + bool_expr(1) + " then " + u32_expr(1) + " else " +
         u32_expr(1) + ") in");
    prims.push_back({name, Type::u32()});
  }

  void step_len() {
    if (arrs.empty()) return step_prim();
    const ArrVar& a = arrs[rng.below(arrs.size())];
    std::string name = fresh("p");
    if (a.readonly)
      line("let " + name + " = length " + a.name + " in");
    else
      line("let! (" + a.name + ") " + name + " = length " + a.name + " in");
    prims.push_back({name, Type::u32()});
  }

  void step_get() {
    if (arrs.empty()) return step_prim();
    const ArrVar& a = arrs[rng.below(arrs.size())];
    std::string def = a.elem.tag == TyTag::Bool ? (rng.flip() ? "True" : "False")
                                                : std::to_string(rng.below(10));
    std::string call = "get (" + a.name + ", " + index_expr() + ", " + def + ")";
    std::string name = fresh("p");
    if (a.readonly)
      line("let " + name + " = " + call + " in");
    else
      line("let! (" + a.name + ") " + name + " = " + call + " in");
    prims.push_back({name, a.elem});
  }

  void step_put() {
    std::vector<size_t> writable;
    for (size_t i = 0; i < arrs.size(); ++i)
      if (!arrs[i].readonly) writable.push_back(i);
    if (writable.empty()) return step_prim();
    size_t ix = writable[rng.below(writable.size())];
    std::string val = expr_of(arrs[ix].elem, 1);
    if (val.empty()) val = std::to_string(rng.below(256));  // literal; checked at the element width
    std::string name = fresh("a");
    bool explicit_tyargs = rng.flip();
    std::string head = explicit_tyargs ? "put[" + to_string(arrs[ix].elem) + "] " : "put ";
    line("let " + name + " = " + head + "(" + arrs[ix].name + ", " + index_expr() + ", " + val +
         ") in");
    arrs[ix].name = name;
  }

  void step_fold() {
    if (arrs.empty()) return step_prim();
    const ArrVar& a = arrs[rng.below(arrs.size())];
    std::string body, obs;
    Type acc_t = a.elem;
    if (a.elem.tag == TyTag::U8) {
      body = "add8";
      obs = "()";
    } else if (a.elem.tag == TyTag::Bool) {
      body = "orelem";
      obs = "()";
    } else if (rng.below(3) == 0) {
      body = "addobs";
      obs = u32_expr(1);
    } else {
      body = rng.flip() ? "add3" : "mul3";
      obs = "()";
    }
    std::string call = "fold (" + body + ", " + acc_expr(acc_t) + ", " + a.name + ", " +
                       index_expr() + ", " + index_expr() + ", " + obs + ")";
    std::string name = fresh("p");
    if (a.readonly)
      line("let " + name + " = " + call + " in");
    else
      line("let! (" + a.name + ") " + name + " = " + call + " in");
    prims.push_back({name, acc_t});
  }

  void step_mapaccum() {
    std::vector<size_t> writable;
    for (size_t i = 0; i < arrs.size(); ++i)
      if (!arrs[i].readonly && arrs[i].elem.tag != TyTag::Bool) writable.push_back(i);
    if (writable.empty()) return step_prim();
    size_t ix = writable[rng.below(writable.size())];
    std::string body, obs;
    if (arrs[ix].elem.tag == TyTag::U8) {
      body = "bump8";
      obs = "()";
    } else if (rng.flip()) {
      body = "swapacc";
      obs = u32_expr(1);
    } else {
      body = "bump1";
      obs = "()";
    }
    std::string arr_name = fresh("a");
    std::string acc_name = fresh("p");
    line("let (" + arr_name + ", " + acc_name + ") = mapAccum (" + body + ", " +
         acc_expr(arrs[ix].elem) + ", " + arrs[ix].name + ", " + index_expr() + ", " +
         index_expr() + ", " + obs + ") in");
    arrs[ix].name = arr_name;
    prims.push_back({acc_name, arrs[ix].elem});
  }

  void step_repeat() {
    std::string name = fresh("p");
    line("let " + name + " = repeat (" + std::to_string(rng.below(17)) + ", atlimit, step2, " +
         u32_expr(1) + ", " + u32_expr(1) + ") in");
    prims.push_back({name, Type::u32()});
  }

  void step() {
    switch (rng.below(8)) {
      case 0: return step_prim();
      case 1: return step_if();
      case 2: return step_len();
      case 3: return step_get();
      case 4: return step_put();
      case 5: return step_fold();
      case 6: return step_mapaccum();
      default: return step_repeat();
    }
  }
};

Type pick_elem(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return Type::u8();
    case 1: return Type::boolean();
    default: return Type::u32();
  }
}

}  // namespace

GeneratedProgram gen_program(uint64_t seed, uint32_t size) {
  Rng rng(seed);
  GeneratedProgram out;
  out.entry = "entry";

  ProgGen g{rng, {}, {}, 0, {}, 1};
  std::vector<std::string> pat_parts;
  std::vector<Type> arg_parts;

  if (size == 0) {
    out.arg_type = Type::unit();
    pat_parts.push_back("u0");
  } else {
    uint64_t n_arr = rng.below(3);
    uint64_t n_prim = rng.below(3);
    if (n_arr + n_prim == 0) n_prim = 1;
    for (uint64_t i = 0; i < n_arr; ++i) {
      Type elem = pick_elem(rng);
      bool ro = rng.below(3) == 0;
      Type t = array_of(elem, ro);
      std::string name = g.fresh("a");
      g.arrs.push_back({name, elem, ro});
      pat_parts.push_back(name);
      arg_parts.push_back(t);
    }
    for (uint64_t i = 0; i < n_prim; ++i) {
      Type t = pick_elem(rng);
      std::string name = g.fresh("x");
      g.prims.push_back({name, t});
      pat_parts.push_back(name);
      arg_parts.push_back(t);
    }
    out.arg_type = arg_parts.size() == 1 ? arg_parts[0] : Type::prod(arg_parts);
  }

  if (size > 0)
    for (uint32_t i = 0; i < size; ++i) g.step();

  // Result: every writable array still alive plus one primitive component.
  std::vector<std::string> ret_parts;
  std::vector<Type> ret_types;
  for (const ArrVar& a : g.arrs) {
    if (a.readonly) continue;
    ret_parts.push_back(a.name);
    ret_types.push_back(array_of(a.elem));
  }
  if (size == 0 || g.prims.empty()) {
    ret_parts.push_back(std::to_string(rng.below(100)));
    ret_types.push_back(Type::u32());
  } else {
    const GenVar& v = g.prims[rng.below(g.prims.size())];
    ret_parts.push_back(v.name);
    ret_types.push_back(v.type);
  }
  out.ret_type = ret_types.size() == 1 ? ret_types[0] : Type::prod(ret_types);

  auto joined = [](const std::vector<std::string>& parts) {
    if (parts.size() == 1) return parts[0];
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) s += ", ";
      s += parts[i];
    }
    return s + ")";
  };

  out.source = prelude_source();
  out.source += "\nfun entry (" + joined(pat_parts) + " : " + to_string(out.arg_type) + ") -> " +
                to_string(out.ret_type) + " =" + g.body + "\n  " + joined(ret_parts) + "\n";
  out.prog = parse_program(out.source);
  return out;
}

}  // namespace minicog
