// Command-line front end: typecheck programs, run them at any semantic
// layer, execute the differential check suites, and walk through the shipped
// examples layer by layer.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "minicog/corpus.hpp"
#include "minicog/dynsem.hpp"
#include "minicog/parser.hpp"
#include "minicog/refine.hpp"

using namespace minicog;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

uint64_t default_seed() {
  if (const char* env = std::getenv("MINICOGENT_SEED")) {
    char* end = nullptr;
    uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 42;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (int shift = 60; shift >= 0; shift -= 4) out += digits[(v >> shift) & 0xf];
  return out;
}

struct Options {
  uint64_t seed = default_seed();
  uint64_t trials = 1000;
  uint32_t heap_bytes = 1u << 20;
  uint32_t array_len_max = 64;
  std::string layer = "value";
  std::string format = "text";
  bool no_timestamp = false;

  CheckConfig check_config() const {
    CheckConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.array_len_max = array_len_max;
    cfg.heap_bytes = heap_bytes;
    return cfg;
  }
};

int cmd_typecheck(const std::string& path) {
  std::string text;
  try {
    text = slurp(path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  try {
    typecheck_program(parse_program(text));
  } catch (const std::exception& ex) {
    std::cout << ex.what() << "\n";
    return kExitFailure;
  }
  std::cout << "ok\n";
  return kExitOk;
}

int cmd_run(const Options& opt, const std::string& path, const std::string& entry,
            const std::string& input) {
  std::string text;
  try {
    text = slurp(path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  Registry reg = make_standard_registry();
  try {
    TypedProgram tp = typecheck_program(parse_program(text));
    const FunDef* f = tp.prog.find(entry);
    if (!f || f->foreign()) {
      std::cerr << "error: no defined function '" << entry << "'\n";
      return kExitUsage;
    }
    EvalCtx ctx{tp.prog, reg};
    validate_foreigns(ctx);

    std::string literal = input.empty() ? "()" : input;
    WorldBuilder w(opt.heap_bytes);
    ValueBundle arg = parse_value_literal(literal, f->arg_type, w);

    std::string result, digest_name, digest;
    if (opt.layer == "shallow") {
      auto it = reg.shallow.funs.find(entry);
      if (it == reg.shallow.funs.end()) {
        std::cerr << "error: no shallow embedding registered for '" << entry << "'\n";
        return kExitFailure;
      }
      result = to_string(it->second(reg.shallow, arg.s));
    } else if (opt.layer == "value") {
      result = to_string(run_fun_v(ctx, entry, arg.v));
    } else if (opt.layer == "update") {
      Store mu = w.store;
      result = to_string(run_fun_u(ctx, mu, entry, arg.u));
      digest_name = "store digest";
      digest = hex64(fnv1a(store_to_json(mu)));
    } else if (opt.layer == "low") {
      auto it = reg.fids.find(entry);
      if (it == reg.fids.end() || !reg.fid_table.fns.count(it->second)) {
        std::cerr << "error: no machine implementation registered for '" << entry << "'\n";
        return kExitFailure;
      }
      LowHeap h = w.heap;
      LowResult r = reg.fid_table.dispatch(it->second, h, arg.c);
      if (!r.is_ok) {
        std::cerr << "machine execution failed: " << r.failure << "\n";
        return kExitFailure;
      }
      result = to_string(r.value);
      digest_name = "heap digest";
      digest = hex64(fnv1a(hex_dump(h)));
    } else {
      std::cerr << "error: unknown layer '" << opt.layer
                << "' (expected shallow|value|update|low)\n";
      return kExitUsage;
    }
    if (opt.format == "json") {
      nlohmann::json doc = {{"command", "run"}, {"entry", entry}, {"layer", opt.layer},
                            {"result", result}};
      if (!digest.empty()) doc[digest_name == "store digest" ? "store_digest" : "heap_digest"] =
          digest;
      std::cout << doc.dump() << "\n";
    } else {
      std::cout << result << "\n";
      if (!digest.empty()) std::cout << digest_name << ": " << digest << "\n";
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_check(const Options& opt, const std::string& suite) {
  Registry reg = make_standard_registry();
  CheckConfig cfg = opt.check_config();
  std::vector<CheckReport> reports;
  nlohmann::json obligations_json;
  bool ran_obligations = false;
  bool obligations_ok = true;

  auto want = [&](const char* name) { return suite == name || suite == "all"; };

  try {
    if (want("thm1")) reports.push_back(check_thm1(reg, cfg));
    if (want("thm2")) reports.push_back(check_thm2(reg, cfg));
    if (want("thm3")) reports.push_back(check_thm3(reg, cfg));
    if (want("thm4")) reports.push_back(check_thm4(reg, cfg));
    if (want("thm5")) reports.push_back(check_thm5(reg, cfg));
    if (want("corres"))
      for (const char* op : {"length", "get", "put", "fold", "mapAccum", "repeat"})
        reports.push_back(check_thm_corres(reg, op, cfg));
    if (want("combined")) {
      reports.push_back(check_combined(reg, "sum", cfg));
      reports.push_back(check_combined(reg, "binsearch", cfg));
    }
    if (want("obligations")) {
      ObligationReport rep = check_abs_type_obligations(make_array_abs_entry(), cfg.seed,
                                                        cfg.trials);
      ran_obligations = true;
      obligations_ok = rep.ok();
      obligations_json = nlohmann::json::parse(rep.to_json());
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  if (reports.empty() && !ran_obligations) {
    std::cerr << "error: unknown suite '" << suite
              << "' (expected thm1|thm2|thm3|thm4|thm5|corres|combined|obligations|all)\n";
    return kExitUsage;
  }

  bool ok = obligations_ok;
  for (const CheckReport& r : reports) ok = ok && r.ok();

  if (opt.format == "json") {
    nlohmann::json doc;
    doc["command"] = "check";
    doc["suite"] = suite;
    doc["seed"] = opt.seed;
    doc["reports"] = nlohmann::json::array();
    for (const CheckReport& r : reports)
      doc["reports"].push_back(nlohmann::json::parse(r.to_json(!opt.no_timestamp)));
    if (ran_obligations) doc["obligations"] = obligations_json;
    if (!opt.no_timestamp) doc["timestamp"] = static_cast<uint64_t>(std::time(nullptr));
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const CheckReport& r : reports) {
      std::cout << (r.ok() ? "PASS " : "FAIL ") << r.id << ": " << r.failures << "/" << r.trials
                << " failures";
      if (!opt.no_timestamp) std::cout << " (" << static_cast<uint64_t>(r.elapsed_ms) << " ms)";
      std::cout << "\n";
      if (!r.ok()) std::cout << "  counterexample: " << r.counterexample << "\n";
    }
    if (ran_obligations) {
      std::cout << (obligations_ok ? "PASS" : "FAIL") << " obligations/Array:\n";
      for (const auto& c : obligations_json)
        std::cout << "  " << c["clause"].get<std::string>() << ": "
                  << c["failures"].get<uint64_t>() << "/" << c["trials"].get<uint64_t>()
                  << " failures\n";
    }
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_demo(const Options& opt, const std::string& name) {
  if (name != "sum" && name != "binsearch") {
    std::cerr << "error: unknown demo '" << name << "' (expected sum|binsearch)\n";
    return kExitUsage;
  }
  Registry reg = make_standard_registry();
  const CorpusProgram& cp = corpus_program(name);
  MonoProgram mp = monomorphise(cp.prog);
  EvalCtx pctx{cp.prog.prog, reg};
  EvalCtx mctx{mp.prog.prog, reg};

  WorldBuilder w(opt.heap_bytes);
  ValueBundle arg;
  if (name == "sum") {
    arg = parse_value_literal("[1, 2, 3]", cp.prog.prog.find(cp.entry)->arg_type, w);
  } else {
    arg = parse_value_literal("([1, 3, 5, 7], 5)", cp.prog.prog.find(cp.entry)->arg_type, w);
  }
  std::cout << "input: " << to_string(arg.v) << "\n\n";

  try {
    SValue s_r = reg.shallow.funs.at(cp.entry)(reg.shallow, arg.s);
    std::cout << "shallow             " << to_string(s_r) << "\n";
    VValue v_p = run_fun_v(pctx, cp.entry, arg.v);
    std::cout << "value (polymorphic) " << to_string(v_p) << "   rel shallow<->poly: "
              << (rel_ps(s_r, v_p) ? "holds" : "FAILS") << "\n";
    std::string mono_entry = mp.nmap.lookup(cp.entry, {});
    VValue v_m = run_fun_v(mctx, mono_entry, mono_value(mp.nmap, arg.v));
    std::cout << "value (monomorphic) " << to_string(v_m) << "   rel poly<->mono: "
              << (v_m == mono_value(mp.nmap, v_p) ? "holds" : "FAILS") << "\n";
    Store mu = w.store;
    UValue u_r = run_fun_u(mctx, mu, mono_entry, arg.u);
    const FunDef* m_entry = mp.prog.prog.find(mono_entry);
    Result<Footprint> c = corr(mctx, u_r, mu, v_m, m_entry->ret_type);
    std::cout << "update              " << to_string(u_r)
              << "   rel mono<->update: " << (c ? "holds" : "FAILS (" + c.reject + ")") << "\n";
    LowHeap h = w.heap;
    LowResult c_r = reg.fid_table.dispatch(reg.fid_of(cp.entry), h, arg.c);
    if (!c_r.is_ok) {
      std::cout << "machine             FAILED: " << c_r.failure << "\n";
      return kExitFailure;
    }
    bool vc = rel_vc(c_r.value, u_r, mu, w.amap, reg.fids);
    bool hc = rel_hc(h, mu, w.amap);
    std::cout << "machine             " << to_string(c_r.value)
              << "   rel update<->machine: " << (vc && hc ? "holds" : "FAILS") << "\n";
    if (name == "binsearch") {
      bool same = w.heap.bytes == h.bytes;
      std::cout << "\narray heap bytes unchanged by the search: " << (same ? "yes" : "NO") << "\n";
      if (!same) return kExitFailure;
    }
    if (!(c && vc && hc)) return kExitFailure;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minicogent: a uniqueness-typed mini language with differential semantics checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--seed", opt.seed, "random seed (or env MINICOGENT_SEED)");
  app.add_option("--trials", opt.trials, "trials per check suite");
  app.add_option("--heap-bytes", opt.heap_bytes, "machine heap size in bytes");
  app.add_option("--array-len-max", opt.array_len_max, "largest generated array");
  app.add_option("--layer", opt.layer, "semantic layer: shallow|value|update|low");
  app.add_option("--format", opt.format, "output format: text|json");
  app.add_flag("--no-timestamp", opt.no_timestamp, "suppress timing fields in reports");

  std::string path, entry, suite, demo_name, run_input;

  CLI::App* tc = app.add_subcommand("typecheck", "parse and typecheck a program");
  tc->add_option("path", path)->required();

  CLI::App* run = app.add_subcommand("run", "run an entry function at a semantic layer");
  run->add_option("path", path)->required();
  run->add_option("entry", entry)->required();
  run->add_option("input", run_input,
                  "argument literal: ints, True/False, (), tuples in parens, arrays in brackets");

  CLI::App* check = app.add_subcommand("check", "run a differential check suite");
  check->add_option("suite", suite)->required();

  CLI::App* demo = app.add_subcommand("demo", "five-layer walkthrough of a shipped example");
  demo->add_option("name", demo_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (tc->parsed()) return cmd_typecheck(path);
  if (run->parsed()) return cmd_run(opt, path, entry, run_input);
  if (check->parsed()) return cmd_check(opt, suite);
  if (demo->parsed()) return cmd_demo(opt, demo_name);
  return kExitUsage;
}
