#include <chrono>
#include <functional>

#include <json.hpp>

#include "minicog/parser.hpp"
#include "minicog/refine.hpp"

namespace minicog {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// Host program for per-operation trials: the shared prelude plus the search
// bodies, so repeat can be driven with store-reading argument functions.
const TypedProgram& host_program() {
  static const TypedProgram tp = [] {
    std::string src = prelude_source();
    src += R"(
fun stop (((l, r, b), (arr, v)) : ((U32, U32, Bool), ((Array U32)!, U32))) -> Bool =
  b || l >= r

fun search (((l, r, b), (arr, v)) : ((U32, U32, Bool), ((Array U32)!, U32))) -> (U32, U32, Bool) =
  let m = l + (r - l) / 2 in
  let x = get (arr, m, 0) in
  if x < v then (m + 1, r, b) else if x > v then (l, m, b) else (m, r, True)
)";
    return typecheck_program(parse_program(src));
  }();
  return tp;
}

struct TrialFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void trial_fail(const std::string& what) { throw TrialFailure(what); }

void need(bool cond, const std::string& what) {
  if (!cond) trial_fail(what);
}

template <class T>
const T& need_ok(const Result<T>& r, const std::string& what) {
  if (!r) trial_fail(what + ": " + r.reject);
  return *r;
}

using TrialFn = std::function<void(uint64_t, Rng&)>;

CheckReport run_trials(const char* id, const CheckConfig& cfg, const TrialFn& trial) {
  Timer timer;
  CheckReport rep;
  rep.id = id;
  rep.seed = cfg.seed;
  rep.trials = cfg.trials;
  for (uint64_t i = 0; i < cfg.trials; ++i) {
    Rng rng = Rng(cfg.seed).fork(i);
    try {
      trial(i, rng);
    } catch (const std::exception& ex) {
      rep.failures++;
      if (rep.counterexample.empty())
        rep.counterexample = "trial " + std::to_string(i) + ": " + ex.what();
    }
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// theorem 1/2/3 shapes over generated programs

enum class DiffKind { Preservation, PreservationFrame, ValueUpdate };

CheckReport run_program_suite(const Registry& reg, const CheckConfig& cfg, DiffKind kind,
                              const char* id) {
  return run_trials(id, cfg, [&](uint64_t, Rng& rng) {
    GeneratedProgram gp = gen_program(rng.next(), static_cast<uint32_t>(rng.below(cfg.size_max + 1)));
    TypedProgram tp = typecheck_program(gp.prog);
    EvalCtx ctx{tp.prog, reg};
    validate_foreigns(ctx);
    const FunDef* entry = tp.prog.find(gp.entry);
    need(entry != nullptr, "generated program lacks its entry");

    WorldBuilder w(cfg.heap_bytes);
    ValueBundle arg = gen_value(rng, w, gp.arg_type, cfg.array_len_max);

    auto describe = [&](const std::string& why) {
      return why + "\nprogram:\n" + gp.source + "argument: " + to_string(arg.v);
    };

    try {
      switch (kind) {
        case DiffKind::Preservation: {
          VValue v = run_fun_v(ctx, gp.entry, arg.v);
          std::string why;
          if (!vtyping_v(ctx, v, entry->ret_type, &why))
            trial_fail(describe("value result ill-typed: " + why));
          Store mu = w.store;
          UValue u = run_fun_u(ctx, mu, gp.entry, arg.u);
          Result<Footprint> fp = vtyping_u(ctx, u, mu, entry->ret_type);
          if (!fp) trial_fail(describe("update result ill-typed: " + fp.reject));
          break;
        }
        case DiffKind::PreservationFrame: {
          Result<Footprint> in_fp = vtyping_u(ctx, arg.u, w.store, gp.arg_type);
          if (!in_fp) trial_fail(describe("generated input ill-typed: " + in_fp.reject));
          Store mu = w.store;
          UValue u = run_fun_u(ctx, mu, gp.entry, arg.u);
          Result<Footprint> out_fp = vtyping_u(ctx, u, mu, entry->ret_type);
          if (!out_fp) trial_fail(describe("update result ill-typed: " + out_fp.reject));
          if (!subset(out_fp->r, in_fp->r))
            trial_fail(describe("read footprint grew across evaluation"));
          if (!frame(in_fp->w, w.store, out_fp->w, mu))
            trial_fail(describe("frame relation violated"));
          break;
        }
        case DiffKind::ValueUpdate: {
          Result<Footprint> in_fp = corr(ctx, arg.u, w.store, arg.v, gp.arg_type);
          if (!in_fp) trial_fail(describe("generated inputs unrelated: " + in_fp.reject));
          Store mu = w.store;
          UValue u = run_fun_u(ctx, mu, gp.entry, arg.u);
          VValue v = run_fun_v(ctx, gp.entry, arg.v);
          Result<Footprint> out_fp = corr(ctx, u, mu, v, entry->ret_type);
          if (!out_fp) trial_fail(describe("results unrelated: " + out_fp.reject));
          if (!subset(out_fp->r, in_fp->r))
            trial_fail(describe("read footprint grew across evaluation"));
          if (!frame(in_fp->w, w.store, out_fp->w, mu))
            trial_fail(describe("frame relation violated"));
          break;
        }
      }
    } catch (const TrialFailure&) {
      throw;
    } catch (const std::exception& ex) {
      trial_fail(describe(std::string("stuck: ") + ex.what()));
    }
  });
}

}  // namespace

CheckReport check_thm1(const Registry& reg, const CheckConfig& cfg) {
  return run_program_suite(reg, cfg, DiffKind::Preservation, "thm1");
}

CheckReport check_thm2(const Registry& reg, const CheckConfig& cfg) {
  return run_program_suite(reg, cfg, DiffKind::PreservationFrame, "thm2");
}

CheckReport check_thm3(const Registry& reg, const CheckConfig& cfg) {
  return run_program_suite(reg, cfg, DiffKind::ValueUpdate, "thm3");
}

// ---------------------------------------------------------------------------
// theorem 4: polymorphic ⇒ monomorphic

CheckReport check_thm4(const Registry& reg, const CheckConfig& cfg) {
  struct Prepared {
    const CorpusProgram* cp;
    MonoProgram mono;
  };
  std::vector<Prepared> progs;
  for (const char* name : {"sum", "binsearch", "poly_demo"}) {
    const CorpusProgram& cp = corpus_program(name);
    progs.push_back({&cp, monomorphise(cp.prog)});
  }
  return run_trials("thm4", cfg, [&, progs](uint64_t i, Rng& rng) {
    const Prepared& p = progs[i % progs.size()];
    EvalCtx poly_ctx{p.cp->prog.prog, reg};
    EvalCtx mono_ctx{p.mono.prog.prog, reg};
    WorldBuilder w(cfg.heap_bytes);
    const FunDef* entry = p.cp->prog.prog.find(p.cp->entry);
    ValueBundle arg = gen_value(rng, w, entry->arg_type, cfg.array_len_max);

    VValue v_p = run_fun_v(poly_ctx, p.cp->entry, arg.v);
    VValue a_m = mono_value(p.mono.nmap, arg.v);
    VValue v_m = run_fun_v(mono_ctx, p.mono.nmap.lookup(p.cp->entry, {}), a_m);
    need(v_m == mono_value(p.mono.nmap, v_p),
         p.cp->name + ": monomorphic run differs: " + to_string(v_m) + " vs M_v(" +
             to_string(v_p) + ")");
  });
}

// ---------------------------------------------------------------------------
// theorem 5: shallow ⇒ polymorphic

CheckReport check_thm5(const Registry& reg, const CheckConfig& cfg) {
  struct Case {
    const CorpusProgram* cp;
    std::string fun;  // entry whose shallow embedding is registered
  };
  std::vector<Case> cases = {{&corpus_program("sum"), "sum"},
                             {&corpus_program("binsearch"), "binary_search"},
                             {&corpus_program("sum"), "add"}};
  return run_trials("thm5", cfg, [&, cases](uint64_t i, Rng& rng) {
    const Case& c = cases[i % cases.size()];
    EvalCtx ctx{c.cp->prog.prog, reg};
    const FunDef* f = c.cp->prog.prog.find(c.fun);
    WorldBuilder w(cfg.heap_bytes);
    ValueBundle arg = gen_value(rng, w, f->arg_type, cfg.array_len_max);
    SValue s_r = reg.shallow.funs.at(c.fun)(reg.shallow, arg.s);
    VValue v_r = run_fun_v(ctx, c.fun, arg.v);
    need(rel_ps(s_r, v_r), c.fun + ": shallow and polymorphic results unrelated: " +
                               to_string(s_r) + " vs " + to_string(v_r));
  });
}

// ---------------------------------------------------------------------------
// per-operation refinement across the three layer boundaries

namespace {

struct OpTrial {
  Type arg_type;
  Type ret_type;
  std::vector<Type> tyargs;
  UValue u_arg;
  VValue v_arg;
  std::function<ExecOutcome(const LowHeap&)> low_run;
  std::function<SValue()> shallow_run;
};

Type pick_corres_elem(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return Type::u8();
    case 1: return Type::boolean();
    default: return Type::u32();
  }
}

uint32_t mixed_index(Rng& rng, uint32_t len) {
  switch (rng.below(4)) {
    case 0: return static_cast<uint32_t>(len + rng.below(5));  // past the end
    case 1: return rng.u32();                                  // anywhere
    default: return static_cast<uint32_t>(rng.below(len + 1));
  }
}

}  // namespace

CheckReport check_thm_corres(const Registry& reg, const std::string& op, const CheckConfig& cfg) {
  const EvalCtx ctx{host_program().prog, reg};
  std::string id = "corres/" + op;
  return run_trials(id.c_str(), cfg, [&, op](uint64_t, Rng& rng) {
    WorldBuilder w(cfg.heap_bytes);
    OpTrial t;

    if (op == "length" || op == "get" || op == "put") {
      Type elem = pick_corres_elem(rng);
      bool writable = op == "put";
      Type arr_t = array_of(elem, !writable);
      ValueBundle arr = gen_value(rng, w, arr_t, cfg.array_len_max);
      const LStructArray sa = *arr.c.as<LStructArray>();
      uint32_t i = mixed_index(rng, sa.len);
      t.tyargs = {elem};
      if (op == "length") {
        t.arg_type = arr_t;
        t.ret_type = Type::u32();
        t.u_arg = arr.u;
        t.v_arg = arr.v;
        t.low_run = [sa](const LowHeap& h) { return low_length(h, sa); };
        t.shallow_run = [arr] { return length_s(arr.s); };
      } else if (op == "get") {
        ValueBundle def = gen_value(rng, w, elem, 0);
        t.arg_type = Type::prod({arr_t, Type::u32(), elem});
        t.ret_type = elem;
        t.u_arg = UValue::prod({arr.u, UValue::u32(i), def.u});
        t.v_arg = VValue::prod({arr.v, VValue::u32(i), def.v});
        LowValue def_c = def.c;
        t.low_run = [sa, i, elem, def_c](const LowHeap& h) {
          return low_get(h, elem, sa, i, def_c);
        };
        t.shallow_run = [arr, i, def] { return get_s(arr.s, i, def.s); };
      } else {
        ValueBundle val = gen_value(rng, w, elem, 0);
        t.arg_type = Type::prod({arr_t, Type::u32(), elem});
        t.ret_type = arr_t;
        t.u_arg = UValue::prod({arr.u, UValue::u32(i), val.u});
        t.v_arg = VValue::prod({arr.v, VValue::u32(i), val.v});
        LowValue val_c = val.c;
        t.low_run = [sa, i, elem, val_c](const LowHeap& h) {
          return low_put(h, elem, sa, i, val_c);
        };
        t.shallow_run = [arr, i, val] { return put_s(arr.s, i, val.s); };
      }
    } else if (op == "fold" || op == "mapAccum") {
      bool is_fold = op == "fold";
      Type elem = is_fold ? pick_corres_elem(rng)
                          : (rng.below(3) == 0 ? Type::u8() : Type::u32());
      std::string body;
      Type obs_t = Type::unit();
      if (is_fold) {
        if (elem.tag == TyTag::U8) body = "add8";
        else if (elem.tag == TyTag::Bool) body = "orelem";
        else if (rng.below(3) == 0) { body = "addobs"; obs_t = Type::u32(); }
        else body = rng.flip() ? "add3" : "mul3";
      } else {
        if (elem.tag == TyTag::U8) body = "bump8";
        else if (rng.flip()) { body = "swapacc"; obs_t = Type::u32(); }
        else body = "bump1";
      }
      Type arr_t = array_of(elem, is_fold);
      ValueBundle arr = gen_value(rng, w, arr_t, cfg.array_len_max);
      ValueBundle acc = gen_value(rng, w, elem, 0);
      ValueBundle obs = gen_value(rng, w, obs_t, 0);
      const LStructArray sa = *arr.c.as<LStructArray>();
      uint32_t frm = mixed_index(rng, sa.len);
      uint32_t to = mixed_index(rng, sa.len);
      Type body_ret = is_fold ? elem : Type::prod({elem, elem});
      Type body_t = Type::fun(Type::prod({elem, elem, obs_t}), body_ret);
      t.tyargs = {elem, elem, obs_t};
      t.arg_type = Type::prod({body_t, elem, arr_t, Type::u32(), Type::u32(), obs_t});
      t.ret_type = is_fold ? elem : Type::prod({array_of(elem), elem});
      t.u_arg = UValue::prod(
          {UValue::fun(body), acc.u, arr.u, UValue::u32(frm), UValue::u32(to), obs.u});
      t.v_arg = VValue::prod(
          {VValue::fun(body), acc.v, arr.v, VValue::u32(frm), VValue::u32(to), obs.v});
      uint32_t fid = reg.fid_of(body);
      LowValue acc_c = acc.c, obs_c = obs.c;
      const FidTable& tbl = reg.fid_table;
      if (is_fold) {
        t.low_run = [&tbl, fid, acc_c, elem, sa, frm, to, obs_c](const LowHeap& h) {
          return low_fold(h, tbl, fid, acc_c, elem, sa, frm, to, obs_c);
        };
      } else {
        t.low_run = [&tbl, fid, acc_c, elem, sa, frm, to, obs_c](const LowHeap& h) {
          return low_mapaccum(h, tbl, fid, acc_c, elem, sa, frm, to, obs_c);
        };
      }
      const ShallowCtx& sh = reg.shallow;
      SValue body_s = SValue::fun(body);
      t.shallow_run = [&sh, is_fold, body_s, acc, arr, frm, to, obs] {
        if (is_fold)
          return fold_s(
              [&](const SValue& el, const SValue& a, const SValue& o) {
                return sh.apply(body_s, SValue::tuple({el, a, o}));
              },
              acc.s, arr.s, frm, to, obs.s);
        auto [xs, a2] = mapaccum_s(
            [&](const SValue& el, const SValue& a, const SValue& o) {
              SValue out = sh.apply(body_s, SValue::tuple({el, a, o}));
              const auto& p = out.as<STuple>()->items;
              return std::make_pair(p[0], p[1]);
            },
            acc.s, arr.s, frm, to, obs.s);
        return SValue::tuple({xs, a2});
      };
    } else if (op == "repeat") {
      bool search_shape = rng.flip();
      if (!search_shape) {
        uint32_t n = static_cast<uint32_t>(rng.below(33));
        ValueBundle acc = gen_value(rng, w, Type::u32(), 0);
        ValueBundle lim = gen_value(rng, w, Type::u32(), 0);
        Type acc_t = Type::u32();
        t.tyargs = {acc_t, Type::u32()};
        t.arg_type = Type::prod({Type::u32(), Type::fun(Type::prod({acc_t, Type::u32()}), Type::boolean()),
                                 Type::fun(Type::prod({acc_t, Type::u32()}), acc_t), acc_t, Type::u32()});
        t.ret_type = acc_t;
        t.u_arg = UValue::prod({UValue::u32(n), UValue::fun("atlimit"), UValue::fun("step2"),
                                acc.u, lim.u});
        t.v_arg = VValue::prod({VValue::u32(n), VValue::fun("atlimit"), VValue::fun("step2"),
                                acc.v, lim.v});
        uint32_t fs = reg.fid_of("atlimit"), fg = reg.fid_of("step2");
        LowValue acc_c = acc.c, lim_c = lim.c;
        const FidTable& tbl = reg.fid_table;
        t.low_run = [&tbl, n, fs, fg, acc_c, lim_c](const LowHeap& h) {
          return low_repeat(h, tbl, n, fs, fg, acc_c, lim_c);
        };
        const ShallowCtx& sh = reg.shallow;
        t.shallow_run = [&sh, n, acc, lim] {
          return repeat_s(
              n,
              [&](const SValue& a, const SValue& o) {
                return sh.apply(SValue::fun("atlimit"), SValue::tuple({a, o})).as<SBool>()->v;
              },
              [&](const SValue& a, const SValue& o) {
                return sh.apply(SValue::fun("step2"), SValue::tuple({a, o}));
              },
              acc.s, lim.s);
        };
      } else {
        Type arr_t = array_of(Type::u32(), true);
        ValueBundle arr = gen_value(rng, w, arr_t, cfg.array_len_max);
        ValueBundle target = gen_value(rng, w, Type::u32(), 0);
        const LStructArray sa = *arr.c.as<LStructArray>();
        uint32_t n = sa.len;
        Type range_t = Type::prod({Type::u32(), Type::u32(), Type::boolean()});
        Type obs_t = Type::prod({arr_t, Type::u32()});
        t.tyargs = {range_t, obs_t};
        t.arg_type = Type::prod({Type::u32(), Type::fun(Type::prod({range_t, obs_t}), Type::boolean()),
                                 Type::fun(Type::prod({range_t, obs_t}), range_t), range_t, obs_t});
        t.ret_type = range_t;
        UValue init_u = UValue::prod({UValue::u32(0), UValue::u32(n), UValue::boolean(false)});
        VValue init_v = VValue::prod({VValue::u32(0), VValue::u32(n), VValue::boolean(false)});
        t.u_arg = UValue::prod({UValue::u32(n), UValue::fun("stop"), UValue::fun("search"), init_u,
                                UValue::prod({arr.u, target.u})});
        t.v_arg = VValue::prod({VValue::u32(n), VValue::fun("stop"), VValue::fun("search"), init_v,
                                VValue::prod({arr.v, target.v})});
        uint32_t fs = reg.fid_of("stop"), fg = reg.fid_of("search");
        LowValue obs_c = LowValue::tuple({arr.c, target.c});
        LowValue init_c =
            LowValue::tuple({LowValue::u32(0), LowValue::u32(n), LowValue::boolean(false)});
        const FidTable& tbl = reg.fid_table;
        t.low_run = [&tbl, n, fs, fg, init_c, obs_c](const LowHeap& h) {
          return low_repeat(h, tbl, n, fs, fg, init_c, obs_c);
        };
        const ShallowCtx& sh = reg.shallow;
        SValue init_s = SValue::tuple({SValue::u32(0), SValue::u32(n), SValue::boolean(false)});
        SValue obs_s = SValue::tuple({arr.s, target.s});
        t.shallow_run = [&sh, n, init_s, obs_s] {
          return repeat_s(
              n,
              [&](const SValue& a, const SValue& o) {
                return sh.apply(SValue::fun("stop"), SValue::tuple({a, o})).as<SBool>()->v;
              },
              [&](const SValue& a, const SValue& o) {
                return sh.apply(SValue::fun("search"), SValue::tuple({a, o}));
              },
              init_s, obs_s);
        };
      }
    } else {
      trial_fail("unknown operation '" + op + "'");
    }

    // machine level: library ops must not fail on well-formed inputs
    ExecOutcome oc = t.low_run(w.heap);
    need(oc.is_ok, "machine op failed: " + oc.failure);

    // machine ↔ update
    Store mu = w.store;
    const UFfiFun& ufn = reg.env_u.fns.at(op).fn;
    UValue u_r = ufn(ctx, mu, t.tyargs, t.u_arg);
    need(rel_vc(oc.value, u_r, mu, w.amap, reg.fids), "rel_vc fails on results");
    need(rel_hc(oc.heap, mu, w.amap), "rel_hc fails on heaps");

    // update ↔ value
    Footprint in_fp = need_ok(vtyping_u(ctx, t.u_arg, w.store, t.arg_type), "input typing");
    const VFfiFun& vfn = reg.env_v.fns.at(op).fn;
    VValue v_r = vfn(ctx, t.tyargs, t.v_arg);
    Footprint out_fp = need_ok(corr(ctx, u_r, mu, v_r, t.ret_type), "result correspondence");
    need(subset(out_fp.r, in_fp.r), "read footprint grew");
    need(frame(in_fp.w, w.store, out_fp.w, mu), "frame relation violated");

    // value ↔ shallow
    SValue s_r = t.shallow_run();
    need(rel_ps(s_r, v_r), "rel_ps fails on results: " + to_string(s_r) + " vs " + to_string(v_r));
  });
}

// ---------------------------------------------------------------------------
// combined five-layer run

CheckReport check_combined(const Registry& reg, const std::string& program,
                           const CheckConfig& cfg) {
  const CorpusProgram& cp = corpus_program(program);
  MonoProgram mp = monomorphise(cp.prog);
  std::string id = "combined/" + program;
  return run_trials(id.c_str(), cfg, [&, mp](uint64_t, Rng& rng) {
    EvalCtx poly_ctx{cp.prog.prog, reg};
    EvalCtx mono_ctx{mp.prog.prog, reg};
    const FunDef* entry = cp.prog.prog.find(cp.entry);
    const std::string mono_entry = mp.nmap.lookup(cp.entry, {});
    const FunDef* m_entry = mp.prog.prog.find(mono_entry);

    WorldBuilder w(cfg.heap_bytes);
    ValueBundle arg = gen_value(rng, w, entry->arg_type, cfg.array_len_max);
    std::string gen_bad = bundle_violation(mono_ctx, w, arg, entry->arg_type);
    need(gen_bad.empty(), "generated bundle violates " + gen_bad);

    // shallow
    SValue s_r = reg.shallow.funs.at(cp.entry)(reg.shallow, arg.s);
    // polymorphic value
    VValue v_p = run_fun_v(poly_ctx, cp.entry, arg.v);
    need(rel_ps(s_r, v_p), "rel_ps fails: " + to_string(s_r) + " vs " + to_string(v_p));
    // monomorphic value
    VValue v_m = run_fun_v(mono_ctx, mono_entry, mono_value(mp.nmap, arg.v));
    need(v_m == mono_value(mp.nmap, v_p), "monomorphisation relation fails");
    // update
    Footprint in_fp =
        need_ok(vtyping_u(mono_ctx, arg.u, w.store, m_entry->arg_type), "input typing");
    Store mu = w.store;
    UValue u_r = run_fun_u(mono_ctx, mu, mono_entry, arg.u);
    Footprint out_fp =
        need_ok(corr(mono_ctx, u_r, mu, v_m, m_entry->ret_type), "update/value correspondence");
    need(subset(out_fp.r, in_fp.r), "read footprint grew");
    need(frame(in_fp.w, w.store, out_fp.w, mu), "frame relation violated");
    // machine
    LowHeap h = w.heap;
    LowResult c_r = reg.fid_table.dispatch(reg.fid_of(cp.entry), h, arg.c);
    need(c_r.is_ok, "machine run failed: " + c_r.failure);
    need(rel_vc(c_r.value, u_r, mu, w.amap, reg.fids), "rel_vc fails on results");
    need(rel_hc(h, mu, w.amap), "rel_hc fails on heaps");
  });
}

// ---------------------------------------------------------------------------
// planted faults

Registry make_registry_with_fault(SemFault fault) {
  Registry reg = make_standard_registry();
  switch (fault) {
    case SemFault::IllTypedLength:
      reg.env_v.fns["length"].fn = [](const EvalCtx&, const std::vector<Type>&,
                                      const VValue&) { return VValue::boolean(true); };
      break;
    case SemFault::LeakyPut: {
      reg.env_u.fns["put"].fn = [](const EvalCtx&, Store& mu, const std::vector<Type>&,
                                   const UValue& arg) {
        const auto& a = arg.as<UProd>()->items;
        const ULoc* l = a[0].as<ULoc>();
        const UAbs* hd = mu.get(l->loc)->as<UAbs>();
        uint32_t i = a[1].as<UU32>()->v;
        if (i < hd->wa.len) mu.erase(hd->wa.base + i);
        return a[0];
      };
      break;
    }
    case SemFault::StrayWritePut: {
      UFfiFun real = reg.env_u.fns["put"].fn;
      reg.env_u.fns["put"].fn = [real](const EvalCtx& ctx, Store& mu, const std::vector<Type>& tys,
                                       const UValue& arg) {
        UValue r = real(ctx, mu, tys, arg);
        mu.alloc(UValue::u32(0xdead));
        return r;
      };
      break;
    }
    case SemFault::DivergentPut: {
      UFfiFun real = reg.env_u.fns["put"].fn;
      reg.env_u.fns["put"].fn = [real](const EvalCtx& ctx, Store& mu, const std::vector<Type>& tys,
                                       const UValue& arg) {
        UValue skewed = arg;
        auto& items = std::get<UProd>(skewed.v).items;
        if (const UU32* x = items[2].as<UU32>()) items[2] = UValue::u32(x->v + 1);
        else if (const UU8* x = items[2].as<UU8>())
          items[2] = UValue::u8(static_cast<uint8_t>(x->v + 1));
        else if (const UBool* x = items[2].as<UBool>()) items[2] = UValue::boolean(!x->v);
        return real(ctx, mu, tys, skewed);
      };
      break;
    }
  }
  return reg;
}

// ---------------------------------------------------------------------------
// reports

std::string CheckReport::to_json(bool with_timing) const {
  nlohmann::json j = {{"check", id},
                      {"seed", seed},
                      {"trials", trials},
                      {"failures", failures},
                      {"counterexample", counterexample.empty()
                                             ? nlohmann::json(nullptr)
                                             : nlohmann::json(counterexample)}};
  if (with_timing) j["elapsed_ms"] = elapsed_ms;
  return j.dump();
}

}  // namespace minicog
