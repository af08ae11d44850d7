#include <doctest.h>

#include "minicog/corpus.hpp"
#include "minicog/parser.hpp"
#include "minicog/refine.hpp"
#include "oracles.hpp"

using namespace minicog;

namespace {

struct World {
  Registry reg = make_standard_registry();
  const CorpusProgram* prog = nullptr;
  WorldBuilder w;

  explicit World(const char* name = "sum") : prog(&corpus_program(name)), w(1u << 12) {}

  EvalCtx ctx() const { return EvalCtx{prog->prog.prog, reg}; }
};

// Spec-shaped store: a header cell pointing at two element cells.
struct TwoCellArray {
  Store mu;
  Loc l0 = 0, la = 0;

  TwoCellArray(uint32_t a, uint32_t b) {
    l0 = mu.alloc(UValue::u32(a));
    mu.alloc(UValue::u32(b));
    la = mu.alloc(UValue::array(Type::u32(), 2, l0));
  }
};

}  // namespace

TEST_SUITE("dynsem") {

TEST_CASE("literals evaluate to themselves") {
  World world;
  EvalCtx ctx = world.ctx();
  CHECK(eval_v(ctx, {}, Expr::lit_u32(5)) == VValue::u32(5));
  Store mu;
  CHECK(eval_u(ctx, {}, mu, Expr::lit_u32(5)) == UValue::u32(5));
  CHECK(mu.cells.empty());
}

TEST_CASE("add applied to (3, 4) gives 7") {
  World world;
  EvalCtx ctx = world.ctx();
  VValue r = run_fun_v(ctx, "add",
                       VValue::prod({VValue::u32(3), VValue::u32(4), VValue::unit()}));
  CHECK(r == VValue::u32(7));
}

TEST_CASE("sum over [1,2,3] equals the list-fold oracle at both levels") {
  std::vector<uint32_t> xs = {1, 2, 3};
  uint32_t expect = oracles::list_sum(xs);
  CHECK(expect == 6);

  World world;
  EvalCtx ctx = world.ctx();
  Rng rng(1);
  ValueBundle arr = gen_value(rng, world.w, array_of(Type::u32(), true), 0);
  // replace the generated array with the exact one we want
  world.w = WorldBuilder(1u << 12);
  arr = parse_value_literal("[1, 2, 3]", array_of(Type::u32(), true), world.w);

  CHECK(run_fun_v(ctx, "sum", arr.v) == VValue::u32(expect));

  Store mu = world.w.store;
  Store before = mu;
  UValue u = run_fun_u(ctx, mu, "sum", arr.u);
  CHECK(u == UValue::u32(expect));
  CHECK(mu.same_cells(before));  // fold over a read-only array leaves μ unchanged
}

TEST_CASE("update-level put writes exactly the addressed cell") {
  // μ = {ℓa ↦ UWA U32 2 ℓ0, ℓ0 ↦ 0, ℓ0+1 ↦ 0}; put (arr, 1, 7)
  TwoCellArray t(0, 0);
  World world("bump");
  EvalCtx ctx = world.ctx();
  UValue arg = UValue::prod({UValue::loc(t.la), UValue::u32(1), UValue::u32(7)});
  UValue r = world.reg.env_u.fns.at("put").fn(ctx, t.mu, {Type::u32()}, arg);

  auto expect = oracles::list_put({0, 0}, 1, 7);
  CHECK(r == UValue::loc(t.la));
  CHECK(*t.mu.get(t.l0) == UValue::u32(expect[0]));
  CHECK(*t.mu.get(t.l0 + 1) == UValue::u32(expect[1]));
}

TEST_CASE("bump reads then writes its array through an App chain") {
  World world("bump");
  EvalCtx ctx = world.ctx();
  ValueBundle arr = parse_value_literal("[5, 9]", array_of(Type::u32()), world.w);
  Store mu = world.w.store;
  UValue r = run_fun_u(ctx, mu, "bump", arr.u);
  CHECK(r == arr.u);  // same header pointer comes back
  const UWArray& wa = mu.get(arr.u.as<ULoc>()->loc)->as<UAbs>()->wa;
  CHECK(*mu.get(wa.base) == UValue::u32(6));
  CHECK(*mu.get(wa.base + 1) == UValue::u32(9));

  VValue v = run_fun_v(ctx, "bump", arr.v);
  CHECK(v == VValue::array(Type::u32(), {VValue::u32(6), VValue::u32(9)}));
}

TEST_CASE("value typing, value semantics") {
  World world;
  EvalCtx ctx = world.ctx();
  CHECK(vtyping_v(ctx, VValue::u32(7), Type::u32()));
  CHECK(!vtyping_v(ctx, VValue::boolean(true), Type::u32()));
  CHECK(vtyping_v(ctx, VValue::array(Type::u32(), {VValue::u32(1), VValue::u32(2)}),
                  array_of(Type::u32())));
  CHECK(!vtyping_v(ctx, VValue::array(Type::u32(), {VValue::boolean(false)}),
                   array_of(Type::u32())));
}

TEST_CASE("value typing, update semantics: canonical footprints") {
  World world;
  EvalCtx ctx = world.ctx();
  Store mu;
  CHECK(*vtyping_u(ctx, UValue::u32(7), mu, Type::u32()) == Footprint{});

  TwoCellArray t(1, 2);
  // the bare header value: element locations only
  UValue bare = *t.mu.get(t.la);
  Result<Footprint> wfp = vtyping_u(ctx, bare, t.mu, array_of(Type::u32()));
  REQUIRE(wfp);
  CHECK(wfp->w == std::set<Loc>{t.l0, t.l0 + 1});
  CHECK(wfp->r.empty());

  Result<Footprint> rfp = vtyping_u(ctx, bare, t.mu, array_of(Type::u32(), true));
  REQUIRE(rfp);
  CHECK(rfp->r == std::set<Loc>{t.l0, t.l0 + 1});
  CHECK(rfp->w.empty());

  // a pointer to the header also owns the header cell
  Result<Footprint> boxed = vtyping_u(ctx, UValue::loc(t.la), t.mu, array_of(Type::u32()));
  REQUIRE(boxed);
  CHECK(boxed->w == std::set<Loc>{t.l0, t.l0 + 1, t.la});

  // footprints of accepted typings are disjoint
  CHECK(boxed->disjoint());

  // dangling element
  t.mu.erase(t.l0 + 1);
  Result<Footprint> bad = vtyping_u(ctx, bare, t.mu, array_of(Type::u32()));
  CHECK(!bad);
  CHECK(bad.reject.find("dangling") != std::string::npos);
}

TEST_CASE("aliasing writable arrays is rejected by environment typing") {
  World world;
  EvalCtx ctx = world.ctx();
  TwoCellArray t(1, 2);
  // two headers sharing one element block
  Loc lb = t.mu.alloc(UValue::array(Type::u32(), 2, t.l0));
  Type arr = array_of(Type::u32());
  UValue pair = UValue::prod({UValue::loc(t.la), UValue::loc(lb)});
  Result<Footprint> fp = vtyping_u(ctx, pair, t.mu, Type::prod({arr, arr}));
  CHECK(!fp);
  CHECK(fp.reject.find("aliasing") != std::string::npos);
}

TEST_CASE("frame relation: the three clauses") {
  Store mu;
  Loc l = mu.alloc(UValue::u32(9));

  // identity
  CHECK(frame({}, mu, {}, mu));

  // leak freedom: dropping a writable location must unmap it
  CHECK(!frame({l}, mu, {}, mu));
  Store erased = mu;
  erased.erase(l);
  CHECK(frame({l}, mu, {}, erased));

  // fresh allocation: locations entering the frame must have been unmapped
  Store mo = mu;
  CHECK(!frame({}, mu, {l}, mo));

  // inertia: untouched locations keep their values
  Store changed = mu;
  changed.put(l, UValue::u32(10));
  CHECK(!frame({}, mu, {}, changed));
  CHECK(frame({l}, mu, {l}, changed));
}

TEST_CASE("corr: primitives, arrays, and rejection") {
  World world;
  EvalCtx ctx = world.ctx();
  Store mu;
  CHECK(*corr(ctx, UValue::u32(5), mu, VValue::u32(5), Type::u32()) == Footprint{});
  CHECK(!corr(ctx, UValue::u32(5), mu, VValue::u32(6), Type::u32()));

  TwoCellArray t(1, 2);
  UValue bare = *t.mu.get(t.la);
  VValue va = VValue::array(Type::u32(), {VValue::u32(1), VValue::u32(2)});
  Result<Footprint> fp = corr(ctx, bare, t.mu, va, array_of(Type::u32()));
  REQUIRE(fp);
  CHECK(fp->w == std::set<Loc>{t.l0, t.l0 + 1});
  CHECK(fp->r.empty());

  VValue wrong = VValue::array(Type::u32(), {VValue::u32(1), VValue::u32(3)});
  CHECK(!corr(ctx, bare, t.mu, wrong, array_of(Type::u32())));

  VValue shorter = VValue::array(Type::u32(), {VValue::u32(1)});
  CHECK(!corr(ctx, bare, t.mu, shorter, array_of(Type::u32())));
}

TEST_CASE("function values relate by name and instantiation") {
  World world;
  EvalCtx ctx = world.ctx();
  Store mu;
  const FunDef* add = world.prog->prog.prog.find("add");
  REQUIRE(add);
  Type ft = add->fun_type();
  CHECK(corr(ctx, UValue::fun("add"), mu, VValue::fun("add"), ft));
  CHECK(!corr(ctx, UValue::fun("add"), mu, VValue::fun("sum"), ft));
}

TEST_CASE("evaluation is deterministic") {
  Rng rng(1234);
  for (int i = 0; i < 30; ++i) {
    GeneratedProgram gp = gen_program(rng.next(), static_cast<uint32_t>(rng.below(6)));
    TypedProgram tp = typecheck_program(gp.prog);
    Registry reg = make_standard_registry();
    EvalCtx ctx{tp.prog, reg};

    Rng vr(99);
    WorldBuilder w1(1u << 12);
    ValueBundle a1 = gen_value(vr, w1, gp.arg_type, 8);
    Rng vr2(99);
    WorldBuilder w2(1u << 12);
    ValueBundle a2 = gen_value(vr2, w2, gp.arg_type, 8);

    CHECK(run_fun_v(ctx, "entry", a1.v) == run_fun_v(ctx, "entry", a2.v));
    Store m1 = w1.store, m2 = w2.store;
    CHECK(run_fun_u(ctx, m1, "entry", a1.u) == run_fun_u(ctx, m2, "entry", a2.u));
    CHECK(m1.same_cells(m2));
  }
}

TEST_CASE("store snapshots serialize to canonical JSON sorted by location") {
  TwoCellArray t(1, 2);
  std::string json = store_to_json(t.mu);
  CHECK(json ==
        R"({"cells":[[1,{"t":"u32","v":1}],[2,{"t":"u32","v":2}],[3,{"base":1,"elem":"U32","len":2,"t":"wa"}]],"next":4})");
}

TEST_CASE("stuck evaluation reports instead of proceeding") {
  World world;
  EvalCtx ctx = world.ctx();
  // applying a number
  CHECK_THROWS_AS(apply_fun_v(ctx, VValue::u32(3), VValue::unit()), EvalError);
  // dangling array argument to a library entry
  Store mu;
  UValue arg = UValue::prod({UValue::loc(77), UValue::u32(0), UValue::u32(0)});
  CHECK_THROWS_AS(world.reg.env_u.fns.at("get").fn(ctx, mu, {Type::u32()}, arg), EvalError);
}

}  // TEST_SUITE
