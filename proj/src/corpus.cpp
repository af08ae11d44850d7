#include "minicog/corpus.hpp"

#include "minicog/dynsem.hpp"
#include "minicog/parser.hpp"
#include "minicog/shallow.hpp"

namespace minicog {

namespace {

const char* kPrelude = R"(abstract Array a

foreign length : (Array a)! -> U32
foreign get : ((Array a)!, U32, a!) -> a!
foreign put : (Array a, U32, a) -> Array a
foreign fold : ((a, b, c!) -> b, b, (Array a)!, U32, U32, c!) -> b
foreign mapAccum : ((a, b, c!) -> (a, b), b, Array a, U32, U32, c!) -> (Array a, b)
foreign repeat : (U32, (a, b!) -> Bool, (a, b!) -> a, a, b!) -> a

fun add3 ((el, acc, obs) : (U32, U32, Unit)) -> U32 =
  el + acc

fun mul3 ((el, acc, obs) : (U32, U32, Unit)) -> U32 =
  el * acc + 1

fun addobs ((el, acc, obs) : (U32, U32, U32)) -> U32 =
  el + acc + obs

fun add8 ((el, acc, obs) : (U8, U8, Unit)) -> U8 =
  el + acc

fun orelem ((el, acc, obs) : (Bool, Bool, Unit)) -> Bool =
  el || acc

fun bump1 ((el, acc, obs) : (U32, U32, Unit)) -> (U32, U32) =
  (el + 1, acc + el)

fun swapacc ((el, acc, obs) : (U32, U32, U32)) -> (U32, U32) =
  (acc + obs, el)

fun bump8 ((el, acc, obs) : (U8, U8, Unit)) -> (U8, U8) =
  (el + 1, acc + el)

fun atlimit ((acc, lim) : (U32, U32)) -> Bool =
  acc >= lim

fun step2 ((acc, lim) : (U32, U32)) -> U32 =
  acc + 2
)";

const char* kSum = R"(abstract Array a

foreign length : (Array a)! -> U32
foreign fold : ((a, b, c!) -> b, b, (Array a)!, U32, U32, c!) -> b

fun add ((x, y, z) : (U32, U32, Unit)) -> U32 =
  x + y

fun sum (arr : (Array U32)!) -> U32 =
  fold (add, 0, arr, 0, length arr, ())
)";

const char* kBinsearch = R"(abstract Array a

foreign length : (Array a)! -> U32
foreign get : ((Array a)!, U32, a!) -> a!
foreign repeat : (U32, (a, b!) -> Bool, (a, b!) -> a, a, b!) -> a

fun stop (((l, r, b), (arr, v)) : ((U32, U32, Bool), ((Array U32)!, U32))) -> Bool =
  b || l >= r

fun search (((l, r, b), (arr, v)) : ((U32, U32, Bool), ((Array U32)!, U32))) -> (U32, U32, Bool) =
  let m = l + (r - l) / 2 in
  let x = get (arr, m, 0) in
  if x < v then (m + 1, r, b) else if x > v then (l, m, b) else (m, r, True)

fun binary_search ((arr, v) : ((Array U32)!, U32)) -> U32 =
  let len = length arr in
  let (l, r, b) = repeat (len, stop, search, (0, len, False), (arr, v)) in
  if b then l else len
)";

const char* kBump = R"(abstract Array a

foreign get : ((Array a)!, U32, a!) -> a!
foreign put : (Array a, U32, a) -> Array a

fun bump (arr : Array U32) -> Array U32 =
  let! (arr) x = get (arr, 0, 0) in
  put (arr, 0, x + 1)
)";

const char* kPolyDemo = R"(fun ident a (x : a) -> a =
  x

fun swap a b ((x, y) : (a, b)) -> (b, a) =
  (y, x)

fun poly_demo ((p, q) : (U32, U8)) -> (U32, (U8, U32)) =
  let r = ident[U32] p in
  let s = swap[U32, U8] (p, q) in
  (r, s)
)";

// ---------------------------------------------------------------------------
// machine forms of corpus functions

uint32_t lu32(const LowValue& v) { return v.as<LU32>()->v; }
uint8_t lu8(const LowValue& v) { return v.as<LU8>()->v; }
bool lbool(const LowValue& v) { return v.as<LBool>()->v != 0; }

const std::vector<LowValue>& items(const LowValue& v) { return v.as<LTuple>()->items; }

LowResult add_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::u32(lu32(a[0]) + lu32(a[1])));
}

LowResult mul3_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::u32(lu32(a[0]) * lu32(a[1]) + 1));
}

LowResult addobs_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::u32(lu32(a[0]) + lu32(a[1]) + lu32(a[2])));
}

LowResult add8_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::u8(static_cast<uint8_t>(lu8(a[0]) + lu8(a[1]))));
}

LowResult orelem_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::boolean(lbool(a[0]) || lbool(a[1])));
}

LowResult bump1_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(
      LowValue::tuple({LowValue::u32(lu32(a[0]) + 1), LowValue::u32(lu32(a[1]) + lu32(a[0]))}));
}

LowResult swapacc_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(
      LowValue::tuple({LowValue::u32(lu32(a[1]) + lu32(a[2])), LowValue::u32(lu32(a[0]))}));
}

LowResult bump8_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::tuple({LowValue::u8(static_cast<uint8_t>(lu8(a[0]) + 1)),
                                        LowValue::u8(static_cast<uint8_t>(lu8(a[1]) + lu8(a[0])))}));
}

LowResult atlimit_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::boolean(lu32(a[0]) >= lu32(a[1])));
}

LowResult step2_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  return LowResult::ok(LowValue::u32(lu32(a[0]) + 2));
}

LowResult stop_low(const FidTable&, LowHeap&, const LowValue& arg) {
  const auto& a = items(arg);
  const auto& range = items(a[0]);
  return LowResult::ok(LowValue::boolean(lbool(range[2]) || lu32(range[0]) >= lu32(range[1])));
}

LowResult search_low(const FidTable&, LowHeap& h, const LowValue& arg) {
  const auto& a = items(arg);
  const auto& range = items(a[0]);
  const auto& obs = items(a[1]);
  uint32_t l = lu32(range[0]), r = lu32(range[1]);
  const LowValue& b = range[2];
  const LStructArray* arr = obs[0].as<LStructArray>();
  uint32_t v = lu32(obs[1]);
  uint32_t m = l + (r - l) / 2;
  ExecOutcome got = low_get(h, Type::u32(), *arr, m, LowValue::u32(0));
  if (!got.is_ok) return LowResult::failed(got.failure);
  uint32_t x = lu32(got.value);
  if (x < v)
    return LowResult::ok(LowValue::tuple({LowValue::u32(m + 1), LowValue::u32(r), b}));
  if (x > v) return LowResult::ok(LowValue::tuple({LowValue::u32(l), LowValue::u32(m), b}));
  return LowResult::ok(LowValue::tuple({LowValue::u32(m), LowValue::u32(r), LowValue::boolean(true)}));
}

LowFn make_sum_low(uint32_t fid_add) {
  return [fid_add](const FidTable& tbl, LowHeap& h, const LowValue& arg) -> LowResult {
    const LStructArray* arr = arg.as<LStructArray>();
    if (!arr) return LowResult::failed("sum: bad argument");
    ExecOutcome len = low_length(h, *arr);
    if (!len.is_ok) return LowResult::failed(len.failure);
    ExecOutcome out = low_fold(h, tbl, fid_add, LowValue::u32(0), Type::u32(), *arr, 0,
                               len.value.as<LU32>()->v, LowValue::unit());
    if (!out.is_ok) return LowResult::failed(out.failure);
    h = out.heap;
    return LowResult::ok(out.value);
  };
}

LowFn make_binary_search_low(uint32_t fid_stop, uint32_t fid_search) {
  return [fid_stop, fid_search](const FidTable& tbl, LowHeap& h,
                                const LowValue& arg) -> LowResult {
    const auto& a = items(arg);
    const LStructArray* arr = a[0].as<LStructArray>();
    if (!arr) return LowResult::failed("binary_search: bad argument");
    ExecOutcome len = low_length(h, *arr);
    if (!len.is_ok) return LowResult::failed(len.failure);
    uint32_t n = len.value.as<LU32>()->v;
    LowValue init =
        LowValue::tuple({LowValue::u32(0), LowValue::u32(n), LowValue::boolean(false)});
    ExecOutcome out = low_repeat(h, tbl, n, fid_stop, fid_search, init,
                                 LowValue::tuple({a[0], a[1]}));
    if (!out.is_ok) return LowResult::failed(out.failure);
    h = out.heap;
    const auto& fin = items(out.value);
    return LowResult::ok(lbool(fin[2]) ? fin[0] : LowValue::u32(n));
  };
}

// ---------------------------------------------------------------------------
// shallow forms

uint32_t su32(const SValue& v) { return v.as<SU32>()->v; }
uint8_t su8(const SValue& v) { return v.as<SU8>()->v; }
bool sbool(const SValue& v) { return v.as<SBool>()->v; }

const std::vector<SValue>& sitems(const SValue& v) { return v.as<STuple>()->items; }

SValue add_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::u32(su32(a[0]) + su32(a[1]));
}

SValue mul3_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::u32(su32(a[0]) * su32(a[1]) + 1);
}

SValue addobs_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::u32(su32(a[0]) + su32(a[1]) + su32(a[2]));
}

SValue add8_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::u8(static_cast<uint8_t>(su8(a[0]) + su8(a[1])));
}

SValue orelem_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::boolean(sbool(a[0]) || sbool(a[1]));
}

SValue bump1_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::tuple({SValue::u32(su32(a[0]) + 1), SValue::u32(su32(a[1]) + su32(a[0]))});
}

SValue swapacc_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::tuple({SValue::u32(su32(a[1]) + su32(a[2])), SValue::u32(su32(a[0]))});
}

SValue bump8_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::tuple({SValue::u8(static_cast<uint8_t>(su8(a[0]) + 1)),
                        SValue::u8(static_cast<uint8_t>(su8(a[1]) + su8(a[0])))});
}

SValue atlimit_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::boolean(su32(a[0]) >= su32(a[1]));
}

SValue step2_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  return SValue::u32(su32(a[0]) + 2);
}

SValue stop_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  const auto& range = sitems(a[0]);
  return SValue::boolean(sbool(range[2]) || su32(range[0]) >= su32(range[1]));
}

SValue search_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  const auto& range = sitems(a[0]);
  const auto& obs = sitems(a[1]);
  uint32_t l = su32(range[0]), r = su32(range[1]);
  SValue b = range[2];
  uint32_t v = su32(obs[1]);
  uint32_t m = l + (r - l) / 2;
  uint32_t x = su32(get_s(obs[0], m, SValue::u32(0)));
  if (x < v) return SValue::tuple({SValue::u32(m + 1), SValue::u32(r), b});
  if (x > v) return SValue::tuple({SValue::u32(l), SValue::u32(m), b});
  return SValue::tuple({SValue::u32(m), SValue::u32(r), SValue::boolean(true)});
}

SValue sum_sh(const ShallowCtx&, const SValue& arg) {
  std::vector<uint32_t> xs;
  for (const SValue& x : arg.as<SList>()->xs) xs.push_back(su32(x));
  return SValue::u32(sum_s(xs));
}

SValue binary_search_sh(const ShallowCtx&, const SValue& arg) {
  const auto& a = sitems(arg);
  std::vector<uint32_t> xs;
  for (const SValue& x : a[0].as<SList>()->xs) xs.push_back(su32(x));
  return SValue::u32(binary_search_s(xs, su32(a[1])));
}

}  // namespace

Registry make_standard_registry() {
  Registry reg;
  register_array_library(reg);

  // Combinator bodies shared with generated programs.
  reg.register_program_fun("add3", 1, {}, add_low, add_sh);
  reg.register_program_fun("mul3", 1, {}, mul3_low, mul3_sh);
  reg.register_program_fun("addobs", 1, {}, addobs_low, addobs_sh);
  reg.register_program_fun("add8", 1, {}, add8_low, add8_sh);
  reg.register_program_fun("orelem", 1, {}, orelem_low, orelem_sh);
  reg.register_program_fun("bump1", 1, {}, bump1_low, bump1_sh);
  reg.register_program_fun("swapacc", 1, {}, swapacc_low, swapacc_sh);
  reg.register_program_fun("bump8", 1, {}, bump8_low, bump8_sh);
  reg.register_program_fun("atlimit", 1, {}, atlimit_low, atlimit_sh);
  reg.register_program_fun("step2", 1, {}, step2_low, step2_sh);

  // The example programs.
  reg.register_program_fun("add", 1, {}, add_low, add_sh);
  reg.register_program_fun("sum", 3, {"length", "fold", "add"}, make_sum_low(reg.fid_of("add")),
                           sum_sh);
  reg.register_program_fun("stop", 1, {}, stop_low, stop_sh);
  reg.register_program_fun("search", 2, {"get"}, search_low, search_sh);
  reg.register_program_fun(
      "binary_search", 4, {"length", "repeat", "stop", "search"},
      make_binary_search_low(reg.fid_of("stop"), reg.fid_of("search")), binary_search_sh);

  reg.register_program_fun("bump", 2, {"get", "put"}, nullptr, nullptr);
  reg.register_program_fun("poly_demo", 1, {}, nullptr, nullptr);
  return reg;
}

const std::string& prelude_source() {
  static const std::string src = kPrelude;
  return src;
}

const std::vector<CorpusProgram>& corpus_programs() {
  static const std::vector<CorpusProgram> programs = [] {
    std::vector<CorpusProgram> out;
    auto add_prog = [&](const char* name, const char* entry, const char* src) {
      CorpusProgram cp;
      cp.name = name;
      cp.entry = entry;
      cp.source = src;
      cp.prog = typecheck_program(parse_program(src));
      out.push_back(std::move(cp));
    };
    add_prog("sum", "sum", kSum);
    add_prog("binsearch", "binary_search", kBinsearch);
    add_prog("bump", "bump", kBump);
    add_prog("poly_demo", "poly_demo", kPolyDemo);
    return out;
  }();
  return programs;
}

const CorpusProgram& corpus_program(const std::string& name) {
  for (const CorpusProgram& p : corpus_programs())
    if (p.name == name) return p;
  throw std::runtime_error("unknown corpus program '" + name + "'");
}

}  // namespace minicog
