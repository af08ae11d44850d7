#include <doctest.h>

#include "minicog/corpus.hpp"
#include "minicog/refine.hpp"
#include "oracles.hpp"

using namespace minicog;

namespace {

// Heap with one u32 array laid out at a fixed spot.
struct ArrWorld {
  LowHeap heap{1u << 12};
  LStructArray arr;

  explicit ArrWorld(const std::vector<uint32_t>& xs, uint32_t base = 0x100) {
    arr.len = static_cast<uint32_t>(xs.size());
    arr.vals = base;
    REQUIRE(heap.reserve(base, arr.len * 4, Type::u32()));
    for (uint32_t i = 0; i < arr.len; ++i)
      REQUIRE(write_word(heap, base + 4 * i, xs[i]).is_ok);
  }

  std::vector<uint32_t> bytes_as_words() const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < arr.len; ++i)
      out.push_back(read_word(heap, arr.vals + 4 * i).value.as<LU32>()->v);
    return out;
  }
};

uint32_t fid_of(const Registry& reg, const char* name) { return reg.fids.at(name); }

}  // namespace

TEST_SUITE("lowmachine") {

TEST_CASE("write then read returns the written word, little-endian") {
  LowHeap h(256);
  REQUIRE(h.reserve(8, 8, Type::u32()));
  CHECK(write_word(h, 8, 0x11223344).is_ok);
  CHECK(read_word(h, 8).value == LowValue::u32(0x11223344));
  CHECK(h.bytes[8] == 0x44);  // low byte first
  CHECK(h.bytes[11] == 0x11);
}

TEST_CASE("reads and writes outside allocations or unaligned fail") {
  LowHeap h(64);
  REQUIRE(h.reserve(0, 16, Type::u32()));
  CHECK(!read_word(h, 64).is_ok);
  CHECK(!read_word(h, 60).is_ok);  // in range, not allocated
  LowResult r = write_word(h, 5, 1);
  CHECK(!r.is_ok);
  CHECK(r.failure.find("unaligned") != std::string::npos);
}

TEST_CASE("regions must be disjoint and in bounds") {
  LowHeap h(64);
  CHECK(h.reserve(0, 16, Type::u32()));
  CHECK(!h.reserve(12, 8, Type::u32()));
  CHECK(!h.reserve(60, 8, Type::u32()));
}

TEST_CASE("length returns the stored length") {
  CHECK(low_length(ArrWorld({5, 6, 7}).heap, ArrWorld({5, 6, 7}).arr).value == LowValue::u32(3));
  ArrWorld empty({});
  CHECK(low_length(empty.heap, empty.arr).value == LowValue::u32(0));
  LowHeap bare(64);
  LStructArray dangling{4, 0x20};
  CHECK(!low_length(bare, dangling).is_ok);
}

TEST_CASE("get returns the element in bounds and the default otherwise") {
  std::vector<uint32_t> xs = {10, 20, 30};
  ArrWorld w(xs);
  CHECK(low_get(w.heap, Type::u32(), w.arr, 1, LowValue::u32(0)).value ==
        LowValue::u32(oracles::list_get(xs, 1, 0)));
  CHECK(low_get(w.heap, Type::u32(), w.arr, 1, LowValue::u32(0)).value == LowValue::u32(20));

  ArrWorld empty({});
  CHECK(low_get(empty.heap, Type::u32(), empty.arr, 5, LowValue::u32(42)).value ==
        LowValue::u32(42));

  ArrWorld one({10});
  CHECK(low_get(one.heap, Type::u32(), one.arr, 0, LowValue::u32(9)).value ==
        LowValue::u32(oracles::list_get({10}, 0, 9)));
}

TEST_CASE("put writes exactly the addressed element") {
  std::vector<uint32_t> xs = {0, 0};
  ArrWorld w(xs);
  ExecOutcome out = low_put(w.heap, Type::u32(), w.arr, 1, LowValue::u32(7));
  REQUIRE(out.is_ok);
  CHECK(out.value == LowValue{LStructArray{w.arr}});

  auto expect = oracles::list_put(xs, 1, 7);
  ArrWorld check_world(expect);
  CHECK(out.heap.bytes == check_world.heap.bytes);

  // bounds guard: heap unchanged at i == len
  ExecOutcome oob = low_put(w.heap, Type::u32(), w.arr, 2, LowValue::u32(9));
  REQUIRE(oob.is_ok);
  CHECK(oob.heap.bytes == w.heap.bytes);

  // last write wins
  ExecOutcome first = low_put(w.heap, Type::u32(), w.arr, 0, LowValue::u32(1));
  ExecOutcome second = low_put(first.heap, Type::u32(), w.arr, 0, LowValue::u32(2));
  CHECK(read_word(second.heap, w.arr.vals).value == LowValue::u32(2));
}

TEST_CASE("put at an in-bounds index changes exactly the element's bytes") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    uint32_t len = 1 + static_cast<uint32_t>(rng.below(16));
    std::vector<uint32_t> xs;
    for (uint32_t i = 0; i < len; ++i) xs.push_back(rng.u32());
    ArrWorld w(xs);
    uint32_t i = static_cast<uint32_t>(rng.below(len));
    ExecOutcome out = low_put(w.heap, Type::u32(), w.arr, i, LowValue::u32(rng.u32()));
    REQUIRE(out.is_ok);
    for (uint32_t b = 0; b < w.heap.size(); ++b) {
      bool inside = b >= w.arr.vals + 4 * i && b < w.arr.vals + 4 * (i + 1);
      if (!inside) CHECK(out.heap.bytes[b] == w.heap.bytes[b]);
    }
  }
}

TEST_CASE("fold over a slice matches the pure slice fold, and clamps") {
  Registry reg = make_standard_registry();
  std::vector<uint32_t> xs = {1, 2, 3};
  ArrWorld w(xs);
  uint32_t add = fid_of(reg, "add");

  ExecOutcome full = low_fold(w.heap, reg.fid_table, add, LowValue::u32(0), Type::u32(), w.arr, 0,
                              3, LowValue::unit());
  REQUIRE(full.is_ok);
  CHECK(full.value == LowValue::u32(oracles::list_sum(xs)));
  CHECK(full.value == LowValue::u32(6));

  // empty range
  ExecOutcome empty = low_fold(w.heap, reg.fid_table, add, LowValue::u32(5), Type::u32(), w.arr,
                               3, 1, LowValue::unit());
  CHECK(empty.value == LowValue::u32(5));

  // clamped range
  ExecOutcome clamped = low_fold(w.heap, reg.fid_table, add, LowValue::u32(0), Type::u32(),
                                 w.arr, 0, 99, LowValue::unit());
  CHECK(clamped.value == LowValue::u32(6));

  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    uint32_t len = static_cast<uint32_t>(rng.below(20));
    std::vector<uint32_t> ys;
    for (uint32_t i = 0; i < len; ++i) ys.push_back(rng.u32());
    ArrWorld world(ys);
    uint32_t frm = static_cast<uint32_t>(rng.below(len + 4));
    uint32_t to = static_cast<uint32_t>(rng.below(len + 4));
    ExecOutcome out = low_fold(world.heap, reg.fid_table, add, LowValue::u32(0), Type::u32(),
                               world.arr, frm, to, LowValue::unit());
    REQUIRE(out.is_ok);
    uint32_t expect =
        oracles::slice_fold(ys, frm, to, 0, [](uint32_t el, uint32_t acc) { return el + acc; });
    CHECK(out.value == LowValue::u32(expect));
  }
}

TEST_CASE("mapAccum rewrites the slice and threads the accumulator") {
  Registry reg = make_standard_registry();
  uint32_t body = fid_of(reg, "bump1");
  std::vector<uint32_t> xs = {1, 2};
  ArrWorld w(xs);

  ExecOutcome out = low_mapaccum(w.heap, reg.fid_table, body, LowValue::u32(0), Type::u32(),
                                 w.arr, 0, 2, LowValue::unit());
  REQUIRE(out.is_ok);
  auto [exp_xs, exp_acc] = oracles::slice_mapaccum(
      xs, 0, 2, 0, [](uint32_t el, uint32_t acc) { return std::make_pair(el + 1, acc + el); });
  CHECK(exp_xs == std::vector<uint32_t>{2, 3});
  CHECK(exp_acc == 3);
  const auto& pair = out.value.as<LTuple>()->items;
  CHECK(pair[0] == LowValue{LStructArray{w.arr}});
  CHECK(pair[1] == LowValue::u32(exp_acc));
  ArrWorld expect_world(exp_xs);
  CHECK(out.heap.bytes == expect_world.heap.bytes);

  // empty range leaves everything alone
  ExecOutcome idle = low_mapaccum(w.heap, reg.fid_table, body, LowValue::u32(4), Type::u32(),
                                  w.arr, 2, 2, LowValue::unit());
  REQUIRE(idle.is_ok);
  CHECK(idle.heap.bytes == w.heap.bytes);
  CHECK(idle.value.as<LTuple>()->items[1] == LowValue::u32(4));

  // partial range [1, 2) over [5, 6]
  ArrWorld slice_world({5, 6});
  ExecOutcome part = low_mapaccum(slice_world.heap, reg.fid_table, body, LowValue::u32(0),
                                  Type::u32(), slice_world.arr, 1, 2, LowValue::unit());
  REQUIRE(part.is_ok);
  auto [exp2_xs, exp2_acc] = oracles::slice_mapaccum(
      {5, 6}, 1, 2, 0, [](uint32_t el, uint32_t acc) { return std::make_pair(el + 1, acc + el); });
  CHECK(exp2_xs == std::vector<uint32_t>{5, 7});
  CHECK(exp2_acc == 6);
  ArrWorld expect2(exp2_xs);
  CHECK(part.heap.bytes == expect2.heap.bytes);
  CHECK(part.value.as<LTuple>()->items[1] == LowValue::u32(exp2_acc));
}

TEST_CASE("repeat: fuel, early exit, and stepping") {
  Registry reg = make_standard_registry();
  LowHeap h(64);
  uint32_t stop = fid_of(reg, "atlimit");
  uint32_t step = fid_of(reg, "step2");

  // n = 0 yields the accumulator untouched
  ExecOutcome none = low_repeat(h, reg.fid_table, 0, stop, step, LowValue::u32(3),
                                LowValue::u32(100));
  CHECK(none.value == LowValue::u32(3));

  // stop immediately true
  ExecOutcome early = low_repeat(h, reg.fid_table, 9, stop, step, LowValue::u32(50),
                                 LowValue::u32(10));
  CHECK(early.value == LowValue::u32(50));

  // five full steps of +2 starting from 0 (limit out of reach)
  ExecOutcome five = low_repeat(h, reg.fid_table, 5, stop, step, LowValue::u32(0),
                                LowValue::u32(1000));
  uint32_t expect = oracles::repeat_unroll(
      5, 0, [](uint32_t acc) { return acc >= 1000; }, [](uint32_t acc) { return acc + 2; });
  CHECK(five.value == LowValue::u32(expect));
  CHECK(five.value == LowValue::u32(10));
}

TEST_CASE("dispatch: unknown function ids fail, registered ones apply") {
  Registry reg = make_standard_registry();
  LowHeap h(64);
  LowResult bad = reg.fid_table.dispatch(999999, h, LowValue::unit());
  CHECK(!bad.is_ok);
  CHECK(bad.failure.find("unknown function id") != std::string::npos);

  LowValue arg = LowValue::tuple({LowValue::u32(2), LowValue::u32(3), LowValue::unit()});
  LowHeap before = h;
  LowResult ok = reg.fid_table.dispatch(fid_of(reg, "add"), h, arg);
  REQUIRE(ok.is_ok);
  CHECK(ok.value == LowValue::u32(5));
  CHECK(h == before);  // a pure body leaves the heap alone through dispatch
}

TEST_CASE("hex dump format: offset prefix, sixteen bytes per line") {
  LowHeap h(64);
  REQUIRE(h.reserve(16, 8, Type::u32()));
  REQUIRE(write_word(h, 16, 0x00000403).is_ok);
  std::string dump = hex_dump(h);
  CHECK(dump == "00000010: 03 04 00 00 00 00 00 00 00 00 00 00 00 00 00 00\n");
}

TEST_CASE("rel_vc: arrays relate through the allocation map") {
  Store mu;
  Loc l0 = mu.alloc(UValue::u32(1));
  mu.alloc(UValue::u32(2));
  Loc la = mu.alloc(UValue::array(Type::u32(), 2, l0));
  AddrMap amap = {{l0, 0x100}, {l0 + 1, 0x104}, {la, 0x10}};
  std::map<std::string, uint32_t> fids;

  CHECK(rel_vc(LowValue::arr(2, 0x100), *mu.get(la), mu, amap, fids));
  CHECK(rel_vc(LowValue::arr(2, 0x100), UValue::loc(la), mu, amap, fids));
  CHECK(!rel_vc(LowValue::arr(3, 0x100), *mu.get(la), mu, amap, fids));  // length mismatch
  CHECK(!rel_vc(LowValue::arr(2, 0x200), *mu.get(la), mu, amap, fids));  // address mismatch
  CHECK(rel_vc(LowValue::u32(5), UValue::u32(5), mu, amap, fids));
  CHECK(!rel_vc(LowValue::u32(5), UValue::u32(6), mu, amap, fids));
}

TEST_CASE("rel_hc: encode/decode correspondence with exact coverage") {
  // empty on empty
  CHECK(rel_hc(LowHeap(64), Store{}, AddrMap{}));

  // a single u32 cell
  Store mu;
  Loc l = mu.alloc(UValue::u32(7));
  LowHeap h(64);
  REQUIRE(h.reserve(8, 4, Type::u32()));
  REQUIRE(write_word(h, 8, 7).is_ok);
  AddrMap amap = {{l, 8}};
  CHECK(rel_hc(h, mu, amap));

  // a flipped byte breaks it
  LowHeap bad = h;
  bad.bytes[8] ^= 1;
  CHECK(!rel_hc(bad, mu, amap));

  // an allocation with no matching store cell breaks coverage
  LowHeap wide = h;
  REQUIRE(wide.reserve(16, 4, Type::u32()));
  CHECK(!rel_hc(wide, mu, amap));
}

TEST_CASE("generated worlds satisfy both machine relations") {
  Registry reg = make_standard_registry();
  const CorpusProgram& cp = corpus_program("sum");
  EvalCtx ctx{cp.prog.prog, reg};
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    WorldBuilder w(1u << 12);
    Type t = Type::prod({array_of(Type::u32()), array_of(Type::u8(), true), Type::u32()});
    ValueBundle b = gen_value(rng, w, t, 16);
    CHECK(bundle_violation(ctx, w, b, t).empty());
  }
}

}  // TEST_SUITE
