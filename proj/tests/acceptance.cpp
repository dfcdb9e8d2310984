// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include "tangent/suite.hpp"

using namespace tangent;
using weil::WeilElement;
using weil::WeilObject;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

std::size_t count_ids(const Report& r, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& item : r.items) n += item.id.rfind(prefix, 0) == 0;
  return n;
}

std::string first_failure(const Report& r) {
  const auto f = r.failures();
  if (f.empty()) return "";
  return "; first failure " + f[0]->id + " at " + f[0]->object;
}

Outcome axioms() {
  suite::Config cfg;
  cfg.max_factors = 3;
  cfg.max_width = 3;
  cfg.coeff_bound = 2;
  cfg.jobs = workers();
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = suite::run_tangent(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::vector<std::string> ids = {
      "D2.1.iii.assoc", "D2.1.iii.comm", "D2.1.iii.e_section", "D2.1.iii.m_over_base", "D2.1.iii.unit_left",
      "D2.1.iii.unit_right", "D2.1.iv.sq1", "D2.1.iv.sq2", "D2.1.iv.sq3", "D2.1.v.sq1", "D2.1.v.sq2",
      "D2.1.v.sq3", "D2.1.vi.c_squared", "D2.1.vi.c_ell", "D2.1.vi.hex1", "D2.1.vi.hex2", "D2.1.vi.hex3"};
  const std::size_t objects = weil::objects_up_to(3, 3).size();
  bool complete = true;
  for (const auto& id : ids) complete = complete && count_ids(r, id) == objects;
  const bool ok = r.pass() && complete && secs < 120;
  return {ok, std::to_string(r.items.size()) + " items over " + std::to_string(objects) + " objects in " +
                  std::to_string(static_cast<int>(secs)) + " s" + (complete ? "" : "; missing diagrams") +
                  first_failure(r)};
}

Outcome equaliser() {
  weil_tangent::AxiomOptions opt;
  opt.max_factors = 3;
  opt.max_width = 3;
  opt.coeff_bound = 1;
  opt.jobs = workers();
  const Report ax = weil_tangent::verify_axioms(opt);
  const std::size_t objects = weil::objects_up_to(3, 3).size();
  bool ok = count_ids(ax, "D2.1.vii.equalising") == objects;
  for (const auto& item : ax.items) {
    if (item.id == "D2.1.vii.equalising") ok = ok && item.pass;
  }
  std::size_t universal = 0;
  for (const auto& a : suite::universality_objects()) {
    const Report u = weil_tangent::verify_universality(a, 3, 2);
    for (const auto& item : u.items) {
      if (item.id == "D2.1.vii.equaliser_universal" || item.id.rfind("D2.1.i.pullback.n", 0) == 0) {
        ok = ok && item.pass;
        ++universal;
      }
    }
  }
  // two objects, two apexes, the equaliser and n = 1, 2, 3
  ok = ok && universal == 2 * 2 * 4;
  return {ok, "equalising at " + std::to_string(objects) + " objects; " + std::to_string(universal) +
                  " universality items with coefficients <= 2"};
}

Outcome spot_checks() {
  using weil::Monomial;
  const WeilObject n{}, w{1}, w2{2}, ww{1, 1};
  auto x = [](const WeilObject& a, int f, int g, int c) { return WeilElement::generator(a, f, g, c); };
  auto k = [](const WeilObject& a, int c) { return WeilElement::constant(a, c); };
  auto xy = [&](int c) { return WeilElement::monomial(ww, Monomial{}.with_pick(0, 1).with_pick(1, 1), c); };
  auto at = [](const char* name, const WeilElement& u) {
    return weil::apply_hom(weil_tangent::component(name, WeilObject{}), u);
  };
  int passed = 0;
  passed += at("p", k(w, 11) + x(w, 0, 1, 4)) == k(n, 11);
  passed += at("m", k(w2, 3) + x(w2, 0, 1, 2) + x(w2, 0, 2, 5)) == k(w, 3) + x(w, 0, 1, 7);
  passed += at("l", k(w, 4) + x(w, 0, 1, 9)) == k(ww, 4) + xy(9);
  passed += at("c", k(ww, 5) + x(ww, 0, 1, 2) + x(ww, 1, 1, 3) + xy(7)) ==
            k(ww, 5) + x(ww, 0, 1, 3) + x(ww, 1, 1, 2) + xy(7);
  passed += at("e", k(n, 8)) == k(w, 8);
  const WeilObject tt = weil_tangent::T_obj(weil_tangent::T_obj(n));
  std::set<std::string> names;
  for (auto m : weil::basis(tt)) names.insert(weil::monomial_name(tt, m));
  passed += names == std::set<std::string>{"1", "x", "y", "xy"};
  return {passed == 6, std::to_string(passed) + "/6 formulas"};
}

Outcome coherence_suite() {
  suite::Config cfg;
  cfg.jobs = workers();
  const Report r = suite::run_coherence(cfg);
  std::size_t homs = 0;
  int depth = 0;
  for (const auto& item : r.items) {
    if (item.id != "coherence.express") continue;
    homs += item.detail["homs"].get<std::size_t>();
    depth = std::max(depth, item.detail["max_depth"].get<int>());
  }
  const bool ok = r.pass() && count_ids(r, "coherence.generator") == 10 && count_ids(r, "monoidal.") > 0;
  return {ok, std::to_string(homs) + " homs expressed, max depth " + std::to_string(depth) + first_failure(r)};
}

Outcome functor_suite() {
  suite::Config cfg;
  cfg.jobs = workers();
  const Report r = suite::run_functor(cfg);
  const auto* collapse = r.find("nonexample.collapse");
  const bool ok = r.pass() && collapse != nullptr;
  return {ok, std::to_string(r.items.size()) + " items; collapse fails at " +
                  (collapse ? collapse->detail["failed"].dump() : "?") + first_failure(r)};
}

Outcome module_suite() {
  suite::Config cfg;
  cfg.jobs = workers();
  const Report r = suite::run_module(cfg);
  const bool ok = r.pass() && count_ids(r, "module.mutation_detected") == 2;
  return {ok, std::to_string(suite::suite_modules().size()) + " modules, " + std::to_string(r.items.size()) +
                  " items, mutation detected" + first_failure(r)};
}

Outcome embedding() {
  suite::Config cfg;
  cfg.jobs = workers();
  const Report r = suite::run_embedding(cfg);
  std::ifstream in(std::string(TANGENT_ORACLE_DIR) + "/v1/fullness_counts.json");
  if (!in) return {false, "golden file missing"};
  const json g = json::parse(in);
  bool golden = true;
  std::size_t compared = 0;
  for (const auto& [id, window] : {std::pair{"embedding.families", "literal"}, std::pair{"embedding.full", "closed"}}) {
    for (const auto& [arrow, count] : g["windows"][window]["families"].items()) {
      const auto* item = r.find(id, arrow);
      golden = golden && item != nullptr && item->detail["families"] == count;
      ++compared;
    }
  }
  const bool iso = count_ids(r, "embedding.T_iso.") == 8;
  return {r.pass() && golden && iso, std::to_string(r.items.size()) + " items; " + std::to_string(compared) +
                                         " golden family counts " + (golden ? "match" : "differ") + first_failure(r)};
}

Outcome representability() {
  const Report r = suite::run_representability(suite::Config{});
  const bool ok = r.pass() && count_ids(r, "representability.bijection") == 4 &&
                  count_ids(r, "representability.natural_in_Z") > 0;
  return {ok, std::to_string(r.items.size()) + " items" + first_failure(r)};
}

Outcome determinism() {
  suite::Config one, many;
  one.jobs = 1;
  many.jobs = 8;
  const std::string a = suite::run_all(one).dump(2), b = suite::run_all(many).dump(2);
  return {a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"axiom suite on objects with <= 3 factors of width <= 3", axioms},
      {"equaliser and pullback universality", equaliser},
      {"element formulas for p, m, l, c, e and the basis of T^2 N", spot_checks},
      {"coherence: generators, completeness, naturality, monoidality", coherence_suite},
      {"tangent functors (Id, id), (T, c) and the collapsing non-example", functor_suite},
      {"module suite and the mutation test", module_suite},
      {"Yoneda embedding: functorial, faithful, full, T(YC) = Y(TC)", embedding},
      {"representability of the tangent functor on modules", representability},
      {"determinism of the full report across --jobs 1 and --jobs 8", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
  }
  return all ? 0 : 1;
}
