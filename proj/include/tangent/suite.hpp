#pragma once

// The verification suites behind the command-line front end, each producing
// one report; `run_all` aggregates them.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tangent/coherence.hpp"
#include "tangent/tangent_api.hpp"
#include "tangent/tangent_w.hpp"
#include "tangent/tmod.hpp"

namespace tangent::suite {

using weil::RigHom;
using weil::WeilObject;

inline constexpr int kSchema = 1;

struct Config {
  int max_factors = 2;
  int max_width = 2;
  unsigned coeff_bound = 2;
  int depth = 6;
  unsigned jobs = 1;
  /// Parsed --truncation file, if any: {"C": [[widths]...], "W": [[widths]...],
  /// "coeff_bound": n, "element_cap": n}.
  std::optional<json> truncation;
};

/// Objects of 𝒲 for a truncation file entry; a missing key keeps `fallback`.
inline std::vector<WeilObject> objects_from(const json& j, const char* key, std::vector<WeilObject> fallback) {
  if (!j.contains(key)) return fallback;
  std::vector<WeilObject> out;
  for (const auto& w : j.at(key)) out.push_back(WeilObject(w.get<std::vector<int>>()));
  return out;
}

// ---------------------------------------------------------------------------
// verify tangent

/// Objects whose chosen limits are checked for universality.
inline std::vector<WeilObject> universality_objects() { return {WeilObject{}, WeilObject{1}}; }

inline Report run_tangent(const Config& cfg) {
  weil_tangent::AxiomOptions opt;
  opt.max_factors = cfg.max_factors;
  opt.max_width = cfg.max_width;
  opt.coeff_bound = cfg.coeff_bound;
  opt.jobs = cfg.jobs;
  Report r = weil_tangent::verify_axioms(opt);
  const auto objs = universality_objects();
  auto per = parallel_map(objs.size(), cfg.jobs, [&](std::size_t i) {
    return weil_tangent::verify_universality(objs[i], 3, cfg.coeff_bound);
  });
  json uni = json::array();
  for (const auto& u : per) {
    r.append(u);
    uni.push_back(u.truncation);
  }
  r.truncation["universality"] = uni;
  r.sort();
  return r;
}

// ---------------------------------------------------------------------------
// verify functor

inline bool is_limit_item(const std::string& id) {
  return id.rfind("functor.preserves_", 0) == 0 || id == "functor.phi_invertible";
}

inline Report run_functor(const Config& cfg) {
  weil_tangent::AxiomOptions bounds;
  bounds.max_factors = cfg.max_factors;
  bounds.max_width = cfg.max_width;
  bounds.coeff_bound = std::min(cfg.coeff_bound, 1u);
  const api::WeilInstance w(bounds);
  api::FunctorCheckOptions<api::WeilInstance, api::WeilInstance> opt;
  opt.limit_objects = {WeilObject{}, WeilObject{1}};
  opt.apexes = {WeilObject{}, WeilObject{1}};
  opt.jobs = cfg.jobs;

  Report r;
  r.check = "verify functor";
  r.truncation = json{{"max_factors", bounds.max_factors}, {"max_width", bounds.max_width},
                      {"coeff_bound", bounds.coeff_bound}, {"limit_objects", json{"N", "W"}},
                      {"apexes", json{"N", "W"}}};
  for (const auto& F : {api::identity_functor(), api::tangent_functor()}) {
    Report sub = api::check_tangent_functor(F, w, w, opt);
    for (auto& item : sub.items) {
      item.object = F.name + " @ " + item.object;
      r.add(std::move(item));
    }
  }
  // the non-example must fail, and only at the strong (limit) conditions
  const auto F = api::collapsing_functor();
  const Report sub = api::check_tangent_functor(F, w, w, opt);
  std::set<std::string> failed;
  for (const auto* item : sub.failures()) failed.insert(item->id);
  bool limits_fail = false, only_limits = true;
  for (const auto& id : failed) {
    if (id.rfind("functor.preserves_", 0) == 0) limits_fail = true;
    if (!is_limit_item(id)) only_limits = false;
  }
  r.add(CheckItem{"nonexample.collapse", F.name, limits_fail && only_limits, nullptr,
                  json{{"failed", failed}}});
  r.sort();
  return r;
}

// ---------------------------------------------------------------------------
// coherence

/// Objects with at most `max_total` factors in dom and cod together.
inline std::vector<std::pair<WeilObject, WeilObject>> small_pairs(int max_total, int max_width) {
  std::vector<std::pair<WeilObject, WeilObject>> out;
  const auto objs = weil::objects_up_to(max_total, max_width);
  for (const auto& a : objs) {
    for (const auto& b : objs) {
      if (a.factors() + b.factors() <= max_total) out.emplace_back(a, b);
    }
  }
  return out;
}

inline Report run_coherence(const Config& cfg) {
  Report r;
  r.check = "coherence";
  coherence::ExpressOptions eopt;
  eopt.max_depth = cfg.depth;
  r.truncation = json{{"max_total_factors", 2}, {"max_width", 2}, {"coeff_bound", 1}, {"depth", cfg.depth}};

  const auto& s = weil_tangent::structural_homs();
  const std::vector<std::pair<std::string, RigHom>> generators = {
      {"p", s.p}, {"e", s.e}, {"m", s.m}, {"l", s.ell}, {"c", s.c},
      {"rho_1(2)", s.rho(2, 1)}, {"rho_2(2)", s.rho(2, 2)},
      {"rho_1(3)", s.rho(3, 1)}, {"rho_2(3)", s.rho(3, 2)}, {"rho_3(3)", s.rho(3, 3)}};
  for (const auto& [name, g] : generators) {
    const auto res = coherence::express(g, eopt);
    r.add(CheckItem{"coherence.generator", name,
                    res.depth == 1 && coherence::eval(*res.term, api::WeilInstance{}, WeilObject{}) == g, nullptr,
                    json{{"term", coherence::to_string(res.term)}, {"depth", res.depth}}});
  }

  // completeness with exact round trip and naturality of the evaluated term
  const auto pairs = small_pairs(2, 2);
  weil_tangent::AxiomOptions nb;
  nb.coeff_bound = 1;
  const api::WeilInstance inst(nb);
  const std::vector<WeilObject> probe = {WeilObject{}, WeilObject{1}};
  std::vector<RigHom> probe_homs;
  for (const auto& x : probe) {
    for (const auto& y : probe) {
      for (auto& f : weil::enumerate_homs(x, y, 1)) probe_homs.push_back(std::move(f));
    }
  }
  auto per = parallel_map(pairs.size(), cfg.jobs, [&](std::size_t k) {
    const auto& [a, b] = pairs[k];
    const std::string label = a.to_string() + " → " + b.to_string();
    CheckItem item{"coherence.express", label, true, nullptr, nullptr};
    CheckItem nat{"coherence.term_natural", label, true, nullptr, nullptr};
    int max_depth = 0;
    const auto homs = weil::enumerate_homs(a, b, 1);
    for (const auto& f : homs) {
      const auto res = coherence::express(f, eopt);
      max_depth = std::max(max_depth, res.depth);
      if (!(coherence::eval(*res.term, inst, WeilObject{}) == f) && item.pass) {
        item.pass = false;
        item.counterexample = json{{"hom", f}, {"term", coherence::to_string(res.term)}};
      }
      const auto ty = coherence::type_of(res.term);
      for (const auto& g : probe_homs) {
        const auto lhs = inst.compose(coherence::eval(*res.term, inst, g.cod()), coherence::shape_hom(inst, ty.src, g));
        const auto rhs = inst.compose(coherence::shape_hom(inst, ty.tgt, g), coherence::eval(*res.term, inst, g.dom()));
        if (!(lhs == rhs) && nat.pass) {
          nat.pass = false;
          nat.counterexample = json{{"term", coherence::to_string(res.term)}, {"hom", g}};
        }
      }
    }
    item.detail = json{{"homs", homs.size()}, {"max_depth", max_depth}};
    nat.detail = json{{"homs", homs.size()}, {"probe_homs", probe_homs.size()}};
    return std::vector<CheckItem>{item, nat};
  });
  for (auto& items : per) {
    for (auto& item : items) r.add(std::move(item));
  }

  Report mono = coherence::check_strong_monoidality(cfg.max_factors, cfg.max_width, 1, probe);
  r.append(mono);
  r.truncation["monoidality"] = mono.truncation;
  r.sort();
  return r;
}

// ---------------------------------------------------------------------------
// verify module

using Inst = api::WeilInstance;

inline tmod::Truncation<Inst> module_truncation(const Config& cfg) {
  auto t = tmod::standard_truncation();
  if (cfg.truncation) {
    const json& j = *cfg.truncation;
    t.c_objects = objects_from(j, "C", t.c_objects);
    t.w_objects = objects_from(j, "W", t.w_objects);
    t.limit_objects = objects_from(j, "limit_objects", t.limit_objects);
    t.coeff_bound = j.value("coeff_bound", t.coeff_bound);
    t.element_cap = j.value("element_cap", t.element_cap);
  }
  return t;
}

inline std::vector<tmod::Module<Inst>> suite_modules() {
  using namespace tmod;
  const auto yn = yoneda_object<Inst>(WeilObject{}), yw = yoneda_object<Inst>(WeilObject{1});
  const auto dd = delta_module<Inst>();
  const auto prod = product_module<Inst>({yn, dd});
  return {yn, yw, dd, terminal_module<Inst>(), prod, product_module<Inst>({yw, dd}),
          T_module(yn), T_module(yw), T_module(dd), T_module(prod), T_module(yn, 2)};
}

inline Report run_module(const Config& cfg) {
  using namespace tmod;
  const auto tr = module_truncation(cfg);
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  Report r;
  r.check = "verify module";
  r.truncation = truncation_json(inst, tr);
  json excluded = json::object();
  for (const auto& m : suite_modules()) {
    const Report sub = verify_module(ctx, m, cfg.jobs);
    r.append(sub);
    if (!sub.truncation["excluded_windows"].empty()) excluded[m.name(inst)] = sub.truncation["excluded_windows"];
  }
  r.notes.clear();
  if (!excluded.empty()) {
    r.notes.push_back("windows with more than " + std::to_string(tr.element_cap) +
                      " elements were left out; see truncation.excluded_windows");
  }
  r.truncation["excluded_windows"] = excluded;

  // the checker must reject T(X) with the c postcomposition dropped
  for (const auto& base : {yoneda_object<Inst>(WeilObject{}), delta_module<Inst>()}) {
    const auto bad = mutated_T_module(base);
    const Report sub = verify_module(ctx, bad, cfg.jobs);
    const auto* c = sub.find("module.c_square");
    std::set<std::string> failed;
    for (const auto* item : sub.failures()) failed.insert(item->id);
    r.add(CheckItem{"module.mutation_detected", bad.name(inst), c && !c->pass, nullptr, json{{"failed", failed}}});
  }
  r.sort();
  return r;
}

// ---------------------------------------------------------------------------
// verify embedding / representability

inline Report run_embedding(const Config& cfg) {
  tmod::EmbeddingOptions opt;
  opt.jobs = cfg.jobs;
  if (cfg.truncation) {
    const json& j = *cfg.truncation;
    opt.window.c_objects = objects_from(j, "C", opt.window.c_objects);
    opt.window.w_objects = objects_from(j, "W", opt.window.w_objects);
    opt.window.coeff_bound = j.value("coeff_bound", opt.window.coeff_bound);
    opt.fullness_c = objects_from(j, "fullness_C", opt.fullness_c);
    opt.fullness_w = objects_from(j, "fullness_W", opt.fullness_w);
  }
  return tmod::check_embedding(opt);
}

inline Report run_representability(const Config& cfg) {
  tmod::RepresentabilityOptions opt;
  if (cfg.truncation) {
    const json& j = *cfg.truncation;
    opt.c_objects = objects_from(j, "C", opt.c_objects);
    opt.w_objects = objects_from(j, "W", opt.w_objects);
    opt.coeff_bound = j.value("coeff_bound", opt.coeff_bound);
  }
  return tmod::check_representability(opt);
}

// ---------------------------------------------------------------------------
// report

inline json with_schema(const Report& r) {
  json j = r.to_json();
  j["schema"] = kSchema;
  return j;
}

/// Every suite, in a fixed order. Budget errors propagate.
inline json run_all(const Config& cfg) {
  const std::vector<Report> reports = {run_tangent(cfg),  run_functor(cfg),   run_coherence(cfg),
                                       run_module(cfg),   run_embedding(cfg), run_representability(cfg)};
  json arr = json::array();
  bool pass = true;
  for (const auto& r : reports) {
    arr.push_back(r.to_json());
    pass = pass && r.pass();
  }
  return json{{"schema", kSchema}, {"check", "report"}, {"pass", pass}, {"reports", arr}};
}

}  // namespace tangent::suite
