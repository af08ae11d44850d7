#include <doctest.h>

#include "minicog/parser.hpp"
#include "minicog/refine.hpp"
#include "oracles.hpp"

using namespace minicog;

TEST_SUITE("refine") {

TEST_CASE("monomorphising the sum program specialises fold and length") {
  const CorpusProgram& cp = corpus_program("sum");
  MonoProgram mp = monomorphise(cp.prog);

  // sum keeps its name; the foreign instantiations gain specialised copies
  CHECK(mp.nmap.lookup("sum", {}) == "sum");
  std::vector<Type> fold_inst = {Type::u32(), Type::u32(), Type::unit()};
  std::string fold_mono = mp.nmap.lookup("fold", fold_inst);
  CHECK(fold_mono != "fold");
  const FunDef* copy = mp.prog.prog.find(fold_mono);
  REQUIRE(copy);
  CHECK(copy->foreign());
  CHECK(copy->base_name == "fold");
  CHECK(copy->base_tyargs == fold_inst);
  CHECK(!contains_var(copy->arg_type));

  // the rewritten sum body calls the specialised copies without tyargs
  const FunDef* sum = mp.prog.prog.find("sum");
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.tag == ExTag::App) {
      CHECK(e.tyargs.empty());
      CHECK(mp.prog.prog.find(e.name) != nullptr);
    }
    for (const Expr& k : e.kids) walk(k);
  };
  walk(*sum->body);
}

TEST_CASE("mono_expr is the identity on a monomorphic program") {
  Program p = parse_program("fun f (x : U32) -> U32 = f2 x\nfun f2 (y : U32) -> U32 = y + 1");
  TypedProgram tp = typecheck_program(p);
  MonoProgram mp = monomorphise(tp);
  CHECK(same_program(mp.prog.prog, tp.prog));
}

TEST_CASE("mono_value rewrites only function names") {
  NameMap n;
  n.add("f", {Type::u32()}, "f_u32");
  n.add("g", {}, "g");
  CHECK(mono_value(n, VValue::u32(5)) == VValue::u32(5));
  CHECK(mono_value(n, VValue::fun("f", {Type::u32()})) == VValue::fun("f_u32"));
  VValue nested = VValue::prod({VValue::fun("g"), VValue::u32(1)});
  CHECK(mono_value(n, nested) == VValue::prod({VValue::fun("g"), VValue::u32(1)}));
  CHECK_THROWS_AS(mono_value(n, VValue::fun("h")), MonoError);
}

TEST_CASE("the name map refuses non-injective additions") {
  NameMap n;
  n.add("f", {Type::u32()}, "spec");
  CHECK_THROWS_AS(n.add("f", {Type::u8()}, "spec"), MonoError);
}

TEST_CASE("a corrupted name map is caught by the theorem-4 equality") {
  const CorpusProgram& cp = corpus_program("poly_demo");
  MonoProgram mp = monomorphise(cp.prog);
  Registry reg = make_standard_registry();
  EvalCtx pctx{cp.prog.prog, reg};
  EvalCtx mctx{mp.prog.prog, reg};

  WorldBuilder w;
  Rng rng(5);
  ValueBundle arg = gen_value(rng, w, cp.prog.prog.find("poly_demo")->arg_type, 8);
  VValue v_p = run_fun_v(pctx, "poly_demo", arg.v);
  VValue v_m = run_fun_v(mctx, "poly_demo", arg.v);
  CHECK(v_m == mono_value(mp.nmap, v_p));

  // reroute ident[U32] to swap's copy: evaluation now disagrees or gets stuck
  MonoProgram broken = mp;
  std::string ident_key = NameMap::key("ident", {Type::u32()});
  REQUIRE(broken.nmap.m.count(ident_key));
  broken.nmap.m[ident_key] = broken.nmap.lookup("swap", {Type::u32(), Type::u8()});
  Expr body = *cp.prog.prog.find("poly_demo")->body;
  bool diverged = false;
  try {
    Expr rewritten = mono_expr(broken.nmap, body);
    Program hacked = mp.prog.prog;
    for (FunDef& f : hacked.fundefs)
      if (f.name == "poly_demo") f.body = rewritten;
    EvalCtx hctx{hacked, reg};
    VValue out = run_fun_v(hctx, "poly_demo", arg.v);
    diverged = !(out == mono_value(mp.nmap, v_p));
  } catch (const EvalError&) {
    diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("gen_value produces related representations by construction") {
  Registry reg = make_standard_registry();
  const CorpusProgram& cp = corpus_program("sum");
  EvalCtx ctx{cp.prog.prog, reg};
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    WorldBuilder w(1u << 12);
    Type t;
    switch (rng.below(4)) {
      case 0: t = array_of(Type::u32()); break;
      case 1: t = Type::prod({array_of(Type::u8(), true), Type::boolean()}); break;
      case 2: t = Type::prod({array_of(Type::u32()), array_of(Type::boolean())}); break;
      default: t = Type::prod({Type::u32(), Type::u8()}); break;
    }
    ValueBundle b = gen_value(rng, w, t, 16);
    CAPTURE(to_string(t));
    CHECK(bundle_violation(ctx, w, b, t).empty());
  }
}

TEST_CASE("gen_value of a prim gives numerically equal representations") {
  Rng rng(4);
  WorldBuilder w;
  ValueBundle b = gen_value(rng, w, Type::u32(), 0);
  uint32_t x = b.v.as<VU32>()->v;
  CHECK(b.s == SValue::u32(x));
  CHECK(b.u == UValue::u32(x));
  CHECK(b.c == LowValue::u32(x));
}

TEST_CASE("gen_program with size zero is a single-literal entry") {
  GeneratedProgram gp = gen_program(7, 0);
  const FunDef* entry = gp.prog.find("entry");
  REQUIRE(entry);
  CHECK(entry->arg_type == Type::unit());
  CHECK(entry->body->tag == ExTag::Lit);
  CHECK_NOTHROW(typecheck_program(gp.prog));
}

TEST_CASE("checker smoke runs are clean at small scale") {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.seed = 20251108;
  cfg.trials = 60;
  cfg.array_len_max = 16;
  CHECK(check_thm1(reg, cfg).ok());
  CHECK(check_thm2(reg, cfg).ok());
  CHECK(check_thm3(reg, cfg).ok());
  CHECK(check_thm4(reg, cfg).ok());
  CHECK(check_thm5(reg, cfg).ok());
  for (const char* op : {"length", "get", "put", "fold", "mapAccum", "repeat"}) {
    CAPTURE(op);
    CHECK(check_thm_corres(reg, op, cfg).ok());
  }
  CHECK(check_combined(reg, "sum", cfg).ok());
  CHECK(check_combined(reg, "binsearch", cfg).ok());
}

TEST_CASE("planted semantic faults are detected within 200 trials") {
  CheckConfig cfg;
  cfg.seed = 42;
  cfg.trials = 200;
  {
    Registry r = make_registry_with_fault(SemFault::IllTypedLength);
    CHECK(check_thm1(r, cfg).failures > 0);
  }
  {
    Registry r = make_registry_with_fault(SemFault::LeakyPut);
    CHECK(check_thm2(r, cfg).failures > 0);
  }
  {
    Registry r = make_registry_with_fault(SemFault::StrayWritePut);
    CHECK(check_thm2(r, cfg).failures > 0);
  }
  {
    Registry r = make_registry_with_fault(SemFault::DivergentPut);
    CHECK(check_thm3(r, cfg).failures > 0);
    CHECK(check_thm_corres(r, "put", cfg).failures > 0);
  }
  {
    // a skewed shallow embedding breaks both thm5 and the combined tower
    Registry r = make_standard_registry();
    auto real = r.shallow.funs.at("sum");
    r.shallow.funs["sum"] = [real](const ShallowCtx& ctx, const SValue& arg) {
      SValue out = real(ctx, arg);
      return SValue::u32(out.as<SU32>()->v + 1);
    };
    CHECK(check_thm5(r, cfg).failures > 0);
    CHECK(check_combined(r, "sum", cfg).failures > 0);
  }
}

TEST_CASE("failed checks carry a counterexample with both sides") {
  Registry r = make_registry_with_fault(SemFault::DivergentPut);
  CheckConfig cfg;
  cfg.seed = 42;
  cfg.trials = 200;
  CheckReport rep = check_thm3(r, cfg);
  REQUIRE(rep.failures > 0);
  CHECK(rep.counterexample.find("program:") != std::string::npos);
  CHECK(rep.counterexample.find("argument:") != std::string::npos);
}

TEST_CASE("zero trials is a clean pass") {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.trials = 0;
  CheckReport r = check_thm1(reg, cfg);
  CHECK(r.ok());
  CHECK(r.trials == 0);
  CHECK(r.failures == 0);
}

TEST_CASE("reports are reproducible byte for byte from the seed") {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.seed = 11;
  cfg.trials = 40;
  CheckReport a = check_thm3(reg, cfg);
  CheckReport b = check_thm3(reg, cfg);
  CHECK(a.to_json(false) == b.to_json(false));
}

}  // TEST_SUITE
