#include "catch_amalgamated.hpp"
#include "oracle.hpp"
#include "tangent/coherence.hpp"

using namespace tangent;
using namespace tangent::coherence;
using weil::RigHom;
using weil::WeilObject;

namespace {

const api::WeilInstance kInst;

RigHom hom_of(const WeilObject& a, const WeilObject& b, const std::vector<oracle::Poly>& images) {
  std::vector<weil::WeilElement> flat;
  for (const auto& p : images) flat.push_back(oracle::to(b, p));
  std::vector<std::vector<weil::WeilElement>> rows;
  std::size_t k = 0;
  for (int i = 0; i < a.factors(); ++i) {
    rows.emplace_back();
    for (int j = 0; j < a.width(i); ++j) rows.back().push_back(flat[k++]);
  }
  return weil::mk_hom(a, b, rows);
}

}  // namespace

TEST_CASE("generators are found at depth 1") {
  const auto& s = weil_tangent::structural_homs();
  const std::vector<std::pair<RigHom, std::string>> cases = {
      {s.p, "P"}, {s.e, "E"}, {s.m, "M"}, {s.ell, "L"}, {s.c, "C"},
      {s.rho(2, 1), "Proj(2, 1)"}, {s.rho(2, 2), "Proj(2, 2)"}, {s.rho(3, 3), "Proj(3, 3)"}};
  for (const auto& [g, name] : cases) {
    const auto r = express(g, 1);
    CHECK(r.depth == 1);
    CHECK(to_string(r.term) == name);
    CHECK(eval(r.term, kInst, WeilObject{}) == g);
  }
}

TEST_CASE("c after l is l") {
  const auto& s = weil_tangent::structural_homs();
  const auto r = express(weil::compose(s.c, s.ell), 4);
  CHECK(to_string(r.term) == "L");
  CHECK(r.depth == 1);
}

TEST_CASE("identity and T p") {
  CHECK(to_string(express(weil::identity(WeilObject{1}), 3).term) == "Id([1])");
  const auto tp = weil_tangent::T_hom(weil_tangent::component("p", WeilObject{}));
  const auto r = express(tp, 3);
  CHECK(r.depth == 2);
  CHECK(eval(r.term, kInst, WeilObject{}) == tp);
  CHECK_THROWS_AS(express(tp, 1), ExpressBudgetExceeded);
}

TEST_CASE("parse and print round trip") {
  for (const char* text : {"VComp(WhiskerLeft(1, P), L)", "Pair(0, Proj(2, 1), Proj(2, 2))", "WhiskerRight(C, [2,1])",
                           "Id([])", "VComp(C, VComp(C, C))", "WhiskerLeft(2, E)"}) {
    INFO(text);
    CHECK(to_string(parse_term(text)) == text);
  }
  CHECK(to_string(parse_term("  VComp ( WhiskerLeft( 1 ,P ) ,L )")) == "VComp(WhiskerLeft(1, P), L)");
  for (const char* bad : {"", "VComp(P)", "Q", "Proj(2,", "P extra", "Id([1,)"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_term(bad), ParseError);
  }
}

TEST_CASE("typing") {
  CHECK(type_of(parse_term("VComp(WhiskerLeft(1, P), L)")) == Typing{{1}, {1}});
  CHECK(type_of(parse_term("WhiskerRight(M, [1])")) == Typing{{2, 1}, {1, 1}});
  CHECK(type_of(parse_term("Pair(0, Proj(2, 1), Proj(2, 2))")) == Typing{{2}, {2}});
  CHECK_THROWS_AS(type_of(parse_term("VComp(P, P)")), IllTyped);
  CHECK_THROWS_AS(type_of(parse_term("Proj(2, 3)")), IllTyped);
  CHECK_THROWS_AS(type_of(parse_term("Pair(0, P)")), IllTyped);
  CHECK_THROWS_AS(type_of(parse_term("Pair(0, Proj(2, 1), VComp(E, P))")), IllTyped);
  // legs x ↦ x and x ↦ 0 over different bases: E after P is not over the identity
  CHECK_THROWS_AS(type_of(parse_term("Pair(0, Id([1]), L)")), IllTyped);
  CHECK_THROWS_AS(eval(parse_term("VComp(M, C)"), kInst, WeilObject{}), IllTyped);
}

TEST_CASE("evaluation at objects") {
  const WeilObject a{1};
  CHECK(eval(parse_term("WhiskerLeft(1, P)"), kInst, a) ==
        weil_tangent::T_hom(weil_tangent::component("p", a)));
  CHECK(eval(parse_term("WhiskerRight(P, [1])"), kInst, a) == weil_tangent::component("p", weil_tangent::T_obj(a)));
  CHECK(eval(parse_term("VComp(C, C)"), kInst, a) == weil::identity(WeilObject({1, 1, 1})));
  // the generic path agrees with the instance on a trivial category
  const auto t = api::TrivialInstance::load(std::string(TANGENT_DATA_DIR) + "/arrow.json");
  for (const auto& x : t.objects()) {
    CHECK(eval(parse_term("VComp(WhiskerLeft(1, P), L)"), t, x) == t.id(x));
  }
}

TEST_CASE("phi_hom tabulates the components") {
  const auto& s = weil_tangent::structural_homs();
  const std::vector<WeilObject> objs = {WeilObject{}, WeilObject{1}, WeilObject{2}, WeilObject{1, 1}};
  for (const auto& [name, g] : std::vector<std::pair<std::string, RigHom>>{{"p", s.p}, {"l", s.ell}, {"c", s.c}}) {
    for (const auto& [x, h] : phi_hom(g, kInst, objs)) {
      INFO(name << " at " << x.to_string());
      CHECK(h == weil_tangent::component(name, x));
    }
  }
  CHECK(phi_object(WeilObject{2, 1}) == Shape{2, 1});
}

TEST_CASE("every small hom is expressed soundly") {
  // homs from the independent brute-force enumeration
  const std::vector<std::pair<WeilObject, WeilObject>> pairs = {
      {WeilObject{}, WeilObject{1}}, {WeilObject{1}, WeilObject{}},      {WeilObject{1}, WeilObject{1}},
      {WeilObject{2}, WeilObject{1}}, {WeilObject{1}, WeilObject{2}},    {WeilObject{1, 1}, WeilObject{}},
      {WeilObject{}, WeilObject{1, 1}}, {WeilObject{2}, WeilObject{2}}};
  std::size_t total = 0;
  for (const auto& [a, b] : pairs) {
    for (const auto& images : oracle::brute_force_homs(a.widths(), b.widths(), 1)) {
      const RigHom f = hom_of(a, b, images);
      INFO(f.to_string());
      const auto r = express(f, 6);
      CHECK(eval(r.term, kInst, WeilObject{}) == f);
      CHECK(depth(*r.term) == r.depth);
      CHECK(type_of(r.term) == Typing{a.widths(), b.widths()});
      ++total;
    }
  }
  CHECK(total > 20);
}

TEST_CASE("express is deterministic") {
  const auto hs = weil::enumerate_homs(WeilObject{2}, WeilObject{1}, 1);
  for (const auto& f : hs) CHECK(to_string(express(f, 6).term) == to_string(express(f, 6).term));
}

TEST_CASE("expressed terms are natural") {
  const auto f = weil::enumerate_homs(WeilObject{1}, WeilObject{1, 1}, 1).back();
  const auto r = express(f, 6);
  const auto ty = type_of(r.term);
  for (const auto& g : weil::enumerate_homs(WeilObject{1}, WeilObject{1}, 2)) {
    CHECK(kInst.compose(eval(r.term, kInst, g.cod()), shape_hom(kInst, ty.src, g)) ==
          kInst.compose(shape_hom(kInst, ty.tgt, g), eval(r.term, kInst, g.dom())));
  }
}

TEST_CASE("strong monoidality") {
  const Report r = check_strong_monoidality(2, 2, 1, {WeilObject{}, WeilObject{1}});
  CHECK(r.pass());
  CHECK(r.find("monoidal.homs", "W⊗W2 ⊗ W") != nullptr);
}
