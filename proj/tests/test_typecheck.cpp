#include <doctest.h>

#include "minicog/corpus.hpp"
#include "minicog/parser.hpp"
#include "minicog/refine.hpp"

using namespace minicog;

namespace {

// Random closed types over the runtime fragment.
Type random_type(Rng& rng, int depth) {
  if (depth == 0) {
    switch (rng.below(4)) {
      case 0: return Type::unit();
      case 1: return Type::boolean();
      case 2: return Type::u8();
      default: return Type::u32();
    }
  }
  switch (rng.below(4)) {
    case 0: {
      std::vector<Type> parts;
      size_t n = 2 + rng.below(2);
      for (size_t i = 0; i < n; ++i) parts.push_back(random_type(rng, depth - 1));
      return Type::prod(std::move(parts));
    }
    case 1: return array_of(random_type(rng, 0), rng.flip());
    default: return random_type(rng, depth - 1);
  }
}

}  // namespace

TEST_SUITE("typecheck") {

TEST_CASE("kind_of on primitives and arrays") {
  TyVarCtx empty;
  CHECK(kind_of(empty, Type::u32()) == Kind::Shareable);
  CHECK(kind_of(empty, array_of(Type::u32(), false)) == Kind::Linear);
  CHECK(kind_of(empty, array_of(Type::u32(), true)) == Kind::Shareable);
  CHECK(kind_of(empty, Type::prod({Type::u32(), array_of(Type::u8())})) == Kind::Linear);
  CHECK(kind_of(empty, Type::prod({Type::u32(), Type::boolean()})) == Kind::Shareable);
  CHECK_THROWS_AS(kind_of(empty, Type::var("a")), TypeError);

  TyVarCtx a = TyVarCtx::all_linear({"a"});
  CHECK(kind_of(a, Type::var("a")) == Kind::Linear);
  CHECK(kind_of(a, bang_type(Type::var("a"))) == Kind::Shareable);
}

TEST_CASE("bang is identity on prims, flips arrays, and is idempotent") {
  CHECK(bang_type(Type::u32()) == Type::u32());
  CHECK(bang_type(array_of(Type::u32())) == array_of(Type::u32(), true));

  Rng rng(7);
  TyVarCtx empty;
  for (int i = 0; i < 300; ++i) {
    Type t = random_type(rng, 3);
    Type once = bang_type(t);
    CHECK(bang_type(once) == once);
    CHECK(kind_of(empty, once) == Kind::Shareable);
  }
}

TEST_CASE("a linear variable used twice is rejected") {
  CHECK_THROWS_WITH_AS(
      typecheck_program(parse_program("abstract Array a\n"
                                      "fun f (x : Array U32) -> (Array U32, Array U32) = (x, x)")),
      doctest::Contains("consumed"), TypeError);
}

TEST_CASE("a linear variable silently dropped is rejected") {
  CHECK_THROWS_WITH_AS(typecheck_program(parse_program("abstract Array a\n"
                                                       "fun f (x : Array U32) -> U32 = 0")),
                       doctest::Contains("never used"), TypeError);
}

TEST_CASE("branches consuming different linear variables are rejected") {
  Program p = parse_program("abstract Array a\nforeign noop : U32 -> U32");
  TyVarCtx empty;
  TypingCtx g;
  g.push("x", array_of(Type::u32()));
  g.push("y", array_of(Type::u32()));
  g.push("b", Type::boolean());
  Expr e = Expr::cond(Expr::variable("b"), Expr::variable("x"), Expr::variable("y"));
  CHECK_THROWS_WITH_AS(typecheck_expr(p, empty, g, e), doctest::Contains("different sets"),
                       TypeError);

  // consuming the same variable in both branches is fine
  TypingCtx g2;
  g2.push("x", array_of(Type::u32()));
  g2.push("b", Type::boolean());
  Expr ok = Expr::cond(Expr::variable("b"), Expr::variable("x"), Expr::variable("x"));
  CHECK(typecheck_expr(p, empty, g2, ok) == array_of(Type::u32()));
}

TEST_CASE("consumption through a nested let inside one branch still balances") {
  const char* src =
      "abstract Array a\n"
      "foreign put : (Array a, U32, a) -> Array a\n"
      "fun f ((x, b) : (Array U32, Bool)) -> Array U32 =\n"
      "  if b then (let y = put (x, 0, 1) in y) else x";
  CHECK_NOTHROW(typecheck_program(parse_program(src)));
}

TEST_CASE("use after consumption is rejected") {
  CHECK_THROWS_AS(typecheck_program(parse_program(
                      "abstract Array a\n"
                      "foreign put : (Array a, U32, a) -> Array a\n"
                      "fun f (x : Array U32) -> (Array U32, Array U32) = (put (x, 0, 1), x)")),
                  TypeError);
}

TEST_CASE("the corpus typechecks") {
  for (const CorpusProgram& cp : corpus_programs()) {
    CAPTURE(cp.name);
    CHECK_NOTHROW(typecheck_program(parse_program(cp.source)));
  }
}

TEST_CASE("sum body has type U32 and search body has the range type") {
  const CorpusProgram& sum = corpus_program("sum");
  CHECK(sum.prog.prog.find("sum")->ret_type == Type::u32());
  const CorpusProgram& bs = corpus_program("binsearch");
  CHECK(bs.prog.prog.find("search")->ret_type ==
        Type::prod({Type::u32(), Type::u32(), Type::boolean()}));
}

TEST_CASE("let! region: result must be shareable") {
  const char* escaping =
      "abstract Array a\n"
      "foreign put : (Array a, U32, a) -> Array a\n"
      "fun f ((x, y) : (Array U32, Array U32)) -> (Array U32, Array U32) =\n"
      "  let! (x) z = put (y, 0, 1) in (x, z)";
  CHECK_THROWS_WITH_AS(typecheck_program(parse_program(escaping)),
                       doctest::Contains("shareable"), TypeError);
}

TEST_CASE("let! region: observed variable is readable inside, restored after") {
  const CorpusProgram& cp = corpus_program("bump");
  CHECK_NOTHROW(typecheck_program(parse_program(cp.source)));
}

TEST_CASE("a name repeated in the let! list does not stay banged afterwards") {
  const char* src =
      "abstract Array a\n"
      "foreign length : (Array a)! -> U32\n"
      "fun f (x : Array U32) -> U32 =\n"
      "  let! (x x) n = length x in n";
  // x is restored to its writable (linear) type after the region, so the
  // body drops it and must be rejected
  CHECK_THROWS_WITH_AS(typecheck_program(parse_program(src)), doctest::Contains("never used"),
                       TypeError);
}

TEST_CASE("writable array cannot be written inside its own let! region") {
  const char* src =
      "abstract Array a\n"
      "foreign put : (Array a, U32, a) -> Array a\n"
      "fun f (x : Array U32) -> Array U32 =\n"
      "  let! (x) y = put (x, 0, 1) in y";
  CHECK_THROWS_AS(typecheck_program(parse_program(src)), TypeError);
}

TEST_CASE("literals adapt to U8 positions") {
  const char* src =
      "fun f (x : U8) -> U8 = x + 200\n"
      "fun g (x : U8) -> U8 = f x";
  CHECK_NOTHROW(typecheck_program(parse_program(src)));
  CHECK_THROWS_AS(typecheck_program(parse_program("fun f (x : U8) -> U8 = x + 300")), TypeError);
}

TEST_CASE("weakening: an unused shareable binding never changes the verdict") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    GeneratedProgram gp = gen_program(rng.next(), static_cast<uint32_t>(rng.below(5)));
    TypedProgram tp = typecheck_program(gp.prog);
    const FunDef* entry = tp.prog.find("entry");

    TyVarCtx empty;
    TypingCtx g1, g2;
    g1.push("arg", entry->arg_type);
    g2.push("arg", entry->arg_type);
    g2.push("weakly_held", Type::u32());  // shareable, never used

    Expr body1 = Expr::let(entry->param, Expr::variable("arg"), *entry->body);
    Expr body2 = body1;
    Type t1 = typecheck_expr(tp.prog, empty, g1, body1);
    Type t2 = typecheck_expr(tp.prog, empty, g2, body2);
    CHECK(t1 == t2);
  }
}

TEST_CASE("generator soundness: generated programs typecheck, 1000 seeds") {
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    GeneratedProgram gp = gen_program(seed * 7919 + 1, static_cast<uint32_t>(seed % 7));
    CAPTURE(gp.source);
    CHECK_NOTHROW(typecheck_program(gp.prog));
  }
}

TEST_CASE("foreign order ranks are visible through defined bodies") {
  Registry reg = make_standard_registry();
  const CorpusProgram& bs = corpus_program("binsearch");
  EvalCtx ctx{bs.prog.prog, reg};
  CHECK(ffi_order_of(ctx, "stop") == 0);    // touches no foreign entries
  CHECK(ffi_order_of(ctx, "search") == 1);  // reaches get
  CHECK(ffi_order_of(ctx, "binary_search") == 3);  // reaches repeat
}

}  // TEST_SUITE
