#include <fstream>
#include <map>

#include "catch_amalgamated.hpp"
#include "oracle.hpp"
#include "tangent/tmod.hpp"

using namespace tangent;
using namespace tangent::tmod;
using weil::RigHom;
using weil::WeilObject;
using Inst = api::WeilInstance;

namespace {

const WeilObject N{}, W{1};

RigHom hom_of(const WeilObject& a, const WeilObject& b, const std::vector<oracle::Poly>& images) {
  std::vector<std::vector<weil::WeilElement>> rows;
  std::size_t k = 0;
  for (int i = 0; i < a.factors(); ++i) {
    rows.emplace_back();
    for (int j = 0; j < a.width(i); ++j) rows.back().push_back(oracle::to(b, images[k++]));
  }
  return weil::mk_hom(a, b, rows);
}

std::vector<RigHom> brute_homs(const WeilObject& a, const WeilObject& b) {
  std::vector<RigHom> out;
  for (const auto& images : oracle::brute_force_homs(a.widths(), b.widths(), 1)) out.push_back(hom_of(a, b, images));
  return out;
}

Truncation<Inst> tiny() {
  Truncation<Inst> t;
  t.c_objects = {N, W};
  t.w_objects = {N, W};
  t.coeff_bound = 1;
  return t;
}

json golden() {
  std::ifstream in(std::string(TANGENT_ORACLE_DIR) + "/v1/fullness_counts.json");
  REQUIRE(in);
  return json::parse(in);
}

// Families YC → YC' over a window, as plain constraint data built from
// brute-force hom sets: node = (window, source element), value = index into
// the target set, and every constraint says value[v] = table[value[u]].
struct FamilyOracle {
  struct Constraint {
    std::size_t u, v;
    std::vector<int> table;
  };
  std::vector<std::size_t> domain;  // target-set size per node
  std::vector<Constraint> constraints;

  FamilyOracle(const WeilObject& c, const WeilObject& c2, const std::vector<WeilObject>& cs,
               const std::vector<WeilObject>& ws) {
    struct Win {
      WeilObject d, a;
      std::vector<RigHom> src, tgt;
      std::size_t first;
    };
    std::vector<Win> wins;
    std::size_t nodes = 0;
    for (const auto& d : cs) {
      for (const auto& a : ws) {
        Win w{d, a, brute_homs(d, weil::tensor_obj(a, c)), brute_homs(d, weil::tensor_obj(a, c2)), nodes};
        nodes += w.src.size();
        for (std::size_t k = 0; k < w.src.size(); ++k) domain.push_back(w.tgt.size());
        wins.push_back(std::move(w));
      }
    }
    auto index = [](const std::vector<RigHom>& xs, const RigHom& x) -> int {
      for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k] == x) return static_cast<int>(k);
      }
      return -1;
    };
    auto relate = [&](const Win& from, const Win& to, const std::function<RigHom(const RigHom&, bool)>& act) {
      for (std::size_t k = 0; k < from.src.size(); ++k) {
        const int j = index(to.src, act(from.src[k], true));
        if (j < 0) continue;
        Constraint con{from.first + k, to.first + static_cast<std::size_t>(j), {}};
        for (const auto& y : from.tgt) con.table.push_back(index(to.tgt, act(y, false)));
        constraints.push_back(std::move(con));
      }
    };
    for (const auto& from : wins) {
      for (const auto& to : wins) {
        if (to.a == from.a) {
          for (const auto& g : brute_homs(to.d, from.d)) {
            relate(from, to, [&](const RigHom& x, bool) { return weil::compose(x, g); });
          }
        }
        if (to.d == from.d) {
          for (const auto& h : brute_homs(from.a, to.a)) {
            relate(from, to, [&](const RigHom& x, bool src) {
              return weil::compose(weil::tensor_hom(h, weil::identity(src ? c : c2)), x);
            });
          }
        }
        if (to.d == weil_tangent::T_obj(from.d) && to.a == weil_tangent::T_obj(from.a)) {
          relate(from, to, [&](const RigHom& x, bool) { return weil_tangent::T_hom(x); });
        }
      }
    }
  }

  bool holds(const std::vector<int>& f, const Constraint& con) const { return con.table[f[con.u]] == f[con.v]; }

  /// Every point of the product space, checked against every constraint.
  std::size_t count_exhaustive() const {
    std::vector<int> f(domain.size(), 0);
    std::size_t count = 0;
    while (true) {
      bool ok = true;
      for (const auto& con : constraints) {
        if (!holds(f, con)) {
          ok = false;
          break;
        }
      }
      count += ok;
      std::size_t k = 0;
      while (k < f.size() && ++f[k] == static_cast<int>(domain[k])) f[k++] = 0;
      if (k == f.size()) return count;
    }
  }

  /// Backtracking in node order, checking a constraint once both ends are set.
  std::size_t count_backtracking() const {
    std::vector<std::vector<const Constraint*>> closing(domain.size());
    for (const auto& con : constraints) closing[std::max(con.u, con.v)].push_back(&con);
    std::vector<int> f(domain.size(), 0);
    std::size_t count = 0;
    auto rec = [&](auto&& self, std::size_t n) -> void {
      if (n == domain.size()) {
        ++count;
        return;
      }
      for (int v = 0; v < static_cast<int>(domain[n]); ++v) {
        f[n] = v;
        bool ok = true;
        for (const auto* con : closing[n]) ok = ok && holds(f, *con);
        if (ok) self(self, n + 1);
      }
    };
    rec(rec, 0);
    return count;
  }

  double space() const {
    double s = 1;
    for (auto d : domain) s *= static_cast<double>(d);
    return s;
  }
};

std::string arrow(const WeilObject& a, const WeilObject& b) { return a.to_string() + " → " + b.to_string(); }

}  // namespace

TEST_CASE("element sets of the basic modules") {
  auto tr = standard_truncation();
  tr.coeff_bound = 2;
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  const auto yn = yoneda_object<Inst>(N), yw = yoneda_object<Inst>(W);
  const auto dd = delta_module<Inst>();

  // x ↦ 0, x, 2x
  CHECK(ctx.elements(yn, W, W)->size() == 3);
  CHECK(ctx.elements(yn, W, W)->size() == oracle::brute_force_homs({1}, {1}, 2).size());
  CHECK(ctx.elements(dd, N, N)->size() == 1);
  CHECK(ctx.elements(dd, W, N)->size() == 1);
  CHECK(ctx.elements(yw, N, N)->size() == 1);
  CHECK(ctx.elements(yw, W, N)->size() == 3);
}

TEST_CASE("representable modules agree with hom enumeration") {
  const auto tr = standard_truncation();
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  for (const auto& c : {N, W}) {
    const auto yc = yoneda_object<Inst>(c);
    for (const auto& d : tr.c_objects) {
      for (const auto& a : tr.w_objects) {
        INFO(yc.name(inst) << " at " << d.to_string() << ", " << a.to_string());
        const auto els = ctx.elements(yc, d, a);
        std::set<RigHom> mine, ref;
        for (const auto& e : *els) mine.insert(e.chom);
        for (const auto& h : brute_homs(d, weil::tensor_obj(a, c))) ref.insert(h);
        CHECK(mine == ref);
        CHECK(std::is_sorted(els->begin(), els->end()));
      }
    }
  }
}

TEST_CASE("products, terminal and T-applications") {
  const auto tr = standard_truncation();
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  const auto yn = yoneda_object<Inst>(N);
  const auto dd = delta_module<Inst>();
  const auto prod = product_module<Inst>({yn, dd});
  const auto one = terminal_module<Inst>();

  // 𝒲(ℕ, W) × 𝒲(W, W) at bound 1 has 1 × 2 elements; at D = W it is 2 × 2
  CHECK(ctx.elements(prod, N, W)->size() == 2);
  CHECK(ctx.elements(prod, W, W)->size() == 4);
  CHECK(prod.name(inst) == "(Y(N) × ΔD)");

  for (const auto& d : {N, W}) {
    for (const auto& a : {N, W}) {
      CHECK(ctx.elements(one, d, a)->size() == 1);
      CHECK(ctx.elements(T_module(one), d, a)->size() == 1);
      // T(Yℕ)(D, A) = 𝒲(D, W ⊗ A)
      CHECK(*ctx.elements(T_module(yn), d, a) == *ctx.elements(yn, d, weil_tangent::T_obj(a)));
      CHECK(ctx.elements(T_module(prod), d, a)->size() ==
            ctx.elements(T_module(yn), d, a)->size() * ctx.elements(T_module(dd), d, a)->size());
    }
  }
  CHECK(T_module(yn, 2).name(inst) == "T(T(Y(N)))");
  CHECK(mutated_T_module(dd).name(inst) == "T'(ΔD)");
}

TEST_CASE("T operator of ΔD is postcomposition with the inclusion") {
  const auto tr = standard_truncation();
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  const auto dd = delta_module<Inst>();
  Element<Inst> x;
  x.whom = weil::identity(W);
  const auto tx = ctx.T_op(dd, W, x);
  // x ↦ x(2,1): the generator of the old factor, now second
  CHECK(tx.whom.dom() == W);
  CHECK(tx.whom.cod() == WeilObject({1, 1}));
  CHECK(tx.whom.image(0, 1) == weil::WeilElement::generator(WeilObject({1, 1}), 1, 1));
}

TEST_CASE("module suite passes on a small truncation") {
  const auto tr = tiny();
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  const auto yn = yoneda_object<Inst>(N), yw = yoneda_object<Inst>(W);
  const auto dd = delta_module<Inst>();
  for (const auto& m : {yn, yw, dd, terminal_module<Inst>(), product_module<Inst>({yn, dd}), T_module(yn),
                        T_module(dd), T_module(yn, 2)}) {
    const Report r = verify_module(ctx, m, 2);
    INFO(m.name(inst) << "\n" << r.to_json().dump(1));
    CHECK(r.pass());
    CHECK(r.find("module.c_square") != nullptr);
    CHECK(r.find("module.preserves_equaliser") != nullptr);
  }
}

TEST_CASE("dropping c from the T operator is caught") {
  const auto tr = tiny();
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  for (const auto& base : {yoneda_object<Inst>(N), delta_module<Inst>()}) {
    const Report r = verify_module(ctx, mutated_T_module(base), 1);
    INFO(r.to_json().dump(1));
    const auto* c = r.find("module.c_square");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
  }
}

TEST_CASE("verify_module is deterministic under jobs") {
  const auto tr = tiny();
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  const auto m = T_module(product_module<Inst>({yoneda_object<Inst>(N), delta_module<Inst>()}));
  CHECK(verify_module(ctx, m, 1).to_json().dump() == verify_module(ctx, m, 4).to_json().dump());
}

TEST_CASE("fullness counts on the plain window by exhaustive search") {
  const json g = golden()["windows"]["literal"];
  const Inst inst = instance_for(tiny());
  const ModuleContext<Inst> ctx(inst, tiny());
  for (const auto& c : {N, W}) {
    for (const auto& c2 : {N, W}) {
      const FamilyOracle oracle(c, c2, {N, W}, {N, W});
      INFO(arrow(c, c2) << ", product space " << oracle.space());
      const std::size_t expected = g["families"][arrow(c, c2)].get<std::size_t>();
      CHECK(oracle.count_exhaustive() == expected);
      CHECK(fullness_count(ctx, c, c2, {N, W}, {N, W}, 100'000).families == expected);
    }
  }
  CHECK(FamilyOracle(W, W, {N, W}, {N, W}).space() == 186624);
}

TEST_CASE("fullness counts on the closed window by backtracking") {
  const json g = golden();
  const std::vector<WeilObject> cs = {N, W, WeilObject{1, 1}};
  const Inst inst = instance_for(tiny());
  const ModuleContext<Inst> ctx(inst, tiny());
  for (const auto& c : {N, W}) {
    for (const auto& c2 : {N, W}) {
      INFO(arrow(c, c2));
      const std::size_t expected = g["windows"]["closed"]["families"][arrow(c, c2)].get<std::size_t>();
      CHECK(FamilyOracle(c, c2, cs, {N, W}).count_backtracking() == expected);
      const auto r = fullness_count(ctx, c, c2, cs, {N, W}, 100'000);
      CHECK(r.families == expected);
      // every family is some Yg, and distinct g give distinct families
      CHECK(r.matched == r.families);
      CHECK(r.homs == g["homs"][arrow(c, c2)].get<std::size_t>());
    }
  }
}

TEST_CASE("family enumeration respects its cap") {
  const Inst inst = instance_for(tiny());
  const ModuleContext<Inst> ctx(inst, tiny());
  FamilySpace<Inst> space(ctx, yoneda_object<Inst>(W), yoneda_object<Inst>(W), {N, W}, {N, W});
  CHECK(space.enumerate().size() == 96);
  CHECK_THROWS_AS(space.enumerate(10), TruncationTooLarge);
  for (const auto& f : space.enumerate()) CHECK(space.valid(f));
}

TEST_CASE("embedding checks") {
  EmbeddingOptions opt;
  opt.jobs = 2;
  const Report r = check_embedding(opt);
  INFO(r.to_json().dump(1));
  CHECK(r.pass());
  for (const char* id : {"embedding.functorial", "embedding.faithful", "embedding.module_map", "embedding.full",
                         "embedding.T_iso.bijective", "embedding.T_iso.natural", "embedding.T_iso.T_compatible",
                         "embedding.T_iso.p_e_compatible"}) {
    INFO(id);
    CHECK(r.find(id) != nullptr);
  }
  const auto* full = r.find("embedding.full", "W → W");
  REQUIRE(full != nullptr);
  CHECK(full->detail["families"] == 2);
}

TEST_CASE("representability") {
  const Report r = check_representability();
  INFO(r.to_json().dump(1));
  CHECK(r.pass());
  std::size_t bijections = 0;
  for (const auto& item : r.items) {
    if (item.id != "representability.bijection") continue;
    ++bijections;
    CHECK(item.detail["lhs_families"] == item.detail["rhs_families"]);
  }
  CHECK(bijections == 4);
  CHECK(r.find("representability.natural_in_Z") != nullptr);
}

TEST_CASE("modules over a trivial instance") {
  const auto t = api::TrivialInstance::load(std::string(TANGENT_DATA_DIR) + "/arrow.json");
  using TI = api::TrivialInstance;
  Truncation<TI> tr;
  tr.c_objects = t.objects();
  tr.w_objects = {N, W};
  const ModuleContext<TI> ctx(t, tr);
  const auto yb = yoneda_object<TI>(TI::Object{1});
  // Y(b)(a, A) = {f}
  CHECK(ctx.elements(yb, TI::Object{0}, W)->size() == 1);
  CHECK(ctx.elements(yb, TI::Object{1}, N)->size() == 1);
  for (const auto& m : {yb, delta_module<TI>(), T_module(yb)}) {
    const Report r = verify_module(ctx, m, 1);
    INFO(m.name(t) << "\n" << r.to_json().dump(1));
    CHECK(r.pass());
  }
}
