// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit when
// anything fails. Trial counts and tolerances are fixed here, not flags.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

#include "minicog/parser.hpp"
#include "minicog/refine.hpp"
#include "oracles.hpp"

using namespace minicog;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) failures++;
}

std::string run_cli_capture(const std::string& args, int* exit_code) {
  std::string cmd = std::string(MINICOGENT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return {};
  }
  std::string out;
  char buf[8192];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// 1. type preservation and frame over 1000 generated programs, ≤ 60 s
void criterion1() {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.seed = 42;
  cfg.trials = 1000;
  cfg.array_len_max = 64;
  cfg.size_max = 6;
  Timer t;
  CheckReport r1 = check_thm1(reg, cfg);
  CheckReport r2 = check_thm2(reg, cfg);
  double elapsed = t.secs();
  bool ok = r1.ok() && r2.ok() && elapsed <= 60.0;
  report(1, "type preservation + frame, 1000 generated programs", ok,
         std::to_string(r1.failures) + "+" + std::to_string(r2.failures) + " failures, " +
             std::to_string(elapsed).substr(0, 5) + " s" +
             (r1.ok() ? "" : "; " + r1.counterexample) + (r2.ok() ? "" : "; " + r2.counterexample));
}

// 2. update-evaluation success implies related value evaluation
void criterion2() {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.seed = 43;
  cfg.trials = 1000;
  cfg.array_len_max = 64;
  cfg.size_max = 6;
  CheckReport r = check_thm3(reg, cfg);
  report(2, "value/update correspondence, 1000 generated programs", r.ok(),
         std::to_string(r.failures) + " failures" + (r.ok() ? "" : "; " + r.counterexample));
}

// 3. the six value-typing obligations, 500 trials per clause, plus mutants
void criterion3() {
  ObligationReport clean = check_abs_type_obligations(make_array_abs_entry(), 42, 500);
  bool ok = clean.ok();
  std::string detail;
  for (const ClauseReport& c : clean.clauses)
    if (c.failures) detail += c.clause + " failed; ";
  for (auto clause :
       {ObligationClause::BangV, ObligationClause::BangU, ObligationClause::NoAlias,
        ObligationClause::Valid, ObligationClause::Frame, ObligationClause::ReadOnly}) {
    ObligationReport rep =
        check_abs_type_obligations(make_faulty_array_abs_entry(clause), 42, 200);
    bool caught = false;
    for (const ClauseReport& c : rep.clauses)
      if (c.clause == clause_name(clause) && c.failures > 0) caught = true;
    if (!caught) {
      ok = false;
      detail += std::string("mutant for ") + clause_name(clause) + " not caught; ";
    }
  }
  report(3, "abstract-type obligations (500/clause) + planted mutants", ok, detail);
}

// 4. per-operation refinement, 500 related-input trials per op per boundary
void criterion4() {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.seed = 44;
  cfg.trials = 500;
  cfg.array_len_max = 64;
  bool ok = true;
  std::string detail;
  for (const char* op : {"length", "get", "put", "fold", "mapAccum", "repeat"}) {
    CheckReport r = check_thm_corres(reg, op, cfg);
    if (!r.ok()) {
      ok = false;
      detail += r.id + ": " + std::to_string(r.failures) + " failures; ";
    }
  }
  report(4, "per-op refinement across all three boundaries, 500 trials/op", ok, detail);
}

// 5. monomorphisation: mono result equals M_v of the poly result, exactly
void criterion5() {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.seed = 45;
  cfg.trials = 500;
  cfg.array_len_max = 64;
  CheckReport r = check_thm4(reg, cfg);
  report(5, "monomorphisation equality on sum/binary-search, 500 inputs", r.ok(),
         std::to_string(r.failures) + " failures" + (r.ok() ? "" : "; " + r.counterexample));
}

// 6. binary search end to end on sorted arrays: oracle agreement at the low
//    layer, heap bytes of the array unchanged, heap still valid; ≤ 30 s
void criterion6() {
  Registry reg = make_standard_registry();
  Timer t;
  Rng rng(46);
  uint64_t bad = 0;
  std::string detail;
  for (int trial = 0; trial < 1000; ++trial) {
    uint32_t len = static_cast<uint32_t>(rng.below(1u << 12) + 1);
    std::vector<uint32_t> xs;
    uint32_t v = static_cast<uint32_t>(rng.below(4));
    for (uint32_t i = 0; i < len; ++i) {
      xs.push_back(v);
      v += static_cast<uint32_t>(rng.below(4));
    }
    uint32_t target = rng.flip() ? xs[rng.below(len)] : rng.u32();

    WorldBuilder w(1u << 16);
    ValueBundle arr = [&] {
      // build the exact array through the literal builder to keep all layers
      std::string lit = "[";
      for (size_t i = 0; i < xs.size(); ++i) {
        if (i) lit += ",";
        lit += std::to_string(xs[i]);
      }
      lit += "]";
      return parse_value_literal(lit, array_of(Type::u32(), true), w);
    }();

    LowHeap h = w.heap;
    LowResult r = reg.fid_table.dispatch(reg.fid_of("binary_search"), h,
                                         LowValue::tuple({arr.c, LowValue::u32(target)}));
    if (!r.is_ok) {
      bad++;
      if (detail.empty()) detail = "machine failure: " + r.failure;
      continue;
    }
    uint32_t i = r.value.as<LU32>() ? r.value.as<LU32>()->v : 0xffffffff;
    bool index_ok = i < xs.size() ? xs[i] == target : (i == xs.size() && !oracles::contains(xs, target));
    bool heap_same = h.bytes == w.heap.bytes;
    bool heap_valid = h.allocs == w.heap.allocs;
    if (!(index_ok && heap_same && heap_valid)) {
      bad++;
      if (detail.empty())
        detail = "len=" + std::to_string(len) + " target=" + std::to_string(target) +
                 (index_ok ? "" : " wrong index") + (heap_same ? "" : " heap changed") +
                 (heap_valid ? "" : " heap invalid");
    }
  }
  double elapsed = t.secs();
  bool ok = bad == 0 && elapsed <= 30.0;
  report(6, "binary search end-to-end, 1000 sorted arrays ≤ 4096", ok,
         std::to_string(bad) + " failures, " + std::to_string(elapsed).substr(0, 5) + " s" +
             (detail.empty() ? "" : "; " + detail));
}

// 7. sum end to end: all five layers return the mod-2^32 sum, all relations hold
void criterion7() {
  Registry reg = make_standard_registry();
  CheckConfig cfg;
  cfg.seed = 47;
  cfg.trials = 1000;
  cfg.array_len_max = 64;
  CheckReport r = check_combined(reg, "sum", cfg);

  // also pin the result against the list-sum oracle at every layer
  uint64_t oracle_bad = 0;
  Rng rng(470);
  const CorpusProgram& cp = corpus_program("sum");
  EvalCtx ctx{cp.prog.prog, reg};
  for (int trial = 0; trial < 200; ++trial) {
    uint32_t len = static_cast<uint32_t>(rng.below(65));
    std::vector<uint32_t> xs;
    for (uint32_t i = 0; i < len; ++i) xs.push_back(rng.u32());
    std::string lit = "[";
    for (size_t i = 0; i < xs.size(); ++i) lit += (i ? "," : "") + std::to_string(xs[i]);
    lit += "]";
    WorldBuilder w(1u << 12);
    ValueBundle arr = parse_value_literal(lit, array_of(Type::u32(), true), w);
    uint32_t expect = oracles::list_sum(xs);

    SValue s = reg.shallow.funs.at("sum")(reg.shallow, arr.s);
    VValue v = run_fun_v(ctx, "sum", arr.v);
    Store mu = w.store;
    UValue u = run_fun_u(ctx, mu, "sum", arr.u);
    LowHeap h = w.heap;
    LowResult c = reg.fid_table.dispatch(reg.fid_of("sum"), h, arr.c);
    bool all = s == SValue::u32(expect) && v == VValue::u32(expect) &&
               u == UValue::u32(expect) && c.is_ok && c.value == LowValue::u32(expect);
    if (!all) oracle_bad++;
  }
  bool ok = r.ok() && oracle_bad == 0;
  report(7, "sum end-to-end over all five layers, 1000 arrays", ok,
         std::to_string(r.failures) + " relation failures, " + std::to_string(oracle_bad) +
             " oracle mismatches" + (r.ok() ? "" : "; " + r.counterexample));
}

// 8. early exit: ≤ ⌈log2 n⌉ + 1 step-body calls despite fuel n
void criterion8() {
  Rng rng(48);
  bool ok = true;
  std::string detail;
  for (uint32_t n = 1; n <= 4096 && ok; n *= 2) {
    uint64_t bound = static_cast<uint64_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
    for (int rep = 0; rep < 25 && ok; ++rep) {
      std::vector<uint32_t> xs;
      uint32_t v = static_cast<uint32_t>(rng.below(4));
      for (uint32_t i = 0; i < n; ++i) {
        xs.push_back(v);
        v += static_cast<uint32_t>(rng.below(4));
      }
      uint32_t target = rng.flip() ? xs[rng.below(n)] : rng.u32();
      SearchStats stats;
      binary_search_s(xs, target, &stats);
      if (stats.step_calls > bound) {
        ok = false;
        detail = "n=" + std::to_string(n) + ": " + std::to_string(stats.step_calls) +
                 " step calls > bound " + std::to_string(bound);
      }
    }
  }
  report(8, "binary search step calls within ceil(log2 n) + 1 for n in {1..4096}", ok, detail);
}

// 9. determinism of the full CLI suite under a pinned seed
void criterion9() {
  int ec1 = 0, ec2 = 0;
  std::string a = run_cli_capture("check all --seed 42 --format json --no-timestamp", &ec1);
  std::string b = run_cli_capture("check all --seed 42 --format json --no-timestamp", &ec2);
  bool ok = ec1 == 0 && ec2 == 0 && !a.empty() && a == b;
  report(9, "check all --seed 42 twice is byte-identical (timestamps off)", ok,
         ok ? "" : "exit codes " + std::to_string(ec1) + "/" + std::to_string(ec2));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
