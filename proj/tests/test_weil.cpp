#include <set>

#include "catch_amalgamated.hpp"
#include "oracle.hpp"
#include "tangent/weil.hpp"

using namespace tangent;
using namespace tangent::weil;

namespace {

WeilElement el(const WeilObject& a, std::initializer_list<std::pair<std::vector<int>, int>> terms) {
  oracle::Poly p;
  for (const auto& [picks, c] : terms) p[picks] += static_cast<std::uint64_t>(c);
  return oracle::to(a, p);
}

std::set<std::vector<oracle::Poly>> as_tables(const std::vector<RigHom>& hs) {
  std::set<std::vector<oracle::Poly>> out;
  for (const auto& f : hs) out.insert(oracle::images_of(f));
  return out;
}

}  // namespace

TEST_CASE("objects display and order") {
  CHECK(WeilObject{}.to_string() == "N");
  CHECK(WeilObject{1}.to_string() == "W");
  CHECK(WeilObject{1, 2}.to_string() == "W⊗W2");
  CHECK(WeilObject{2, 1}.basis_size() == 6);
  CHECK(WeilObject{} < WeilObject{3});
  CHECK(WeilObject{3} < WeilObject{1, 1});
  CHECK_THROWS_AS(WeilObject{0}, Error);
  CHECK_THROWS_AS(WeilObject{16}, Error);
  CHECK(objects_up_to(2, 2).size() == 7);
  CHECK(tensor_obj(WeilObject{1}, WeilObject{2}) == WeilObject({1, 2}));
}

TEST_CASE("basis matches the pick-vector oracle") {
  for (const auto& a : oracle::objects(3, 3)) {
    const auto mons = basis(a);
    REQUIRE(mons.size() == a.basis_size());
    std::set<oracle::Picks> mine;
    for (auto m : mons) mine.insert(m.picks(a));
    const auto ref = oracle::basis(a.widths());
    CHECK(mine == std::set<oracle::Picks>(ref.begin(), ref.end()));
  }
}

TEST_CASE("T²ℕ has basis 1, x, y, xy") {
  const WeilObject tt{1, 1};
  std::vector<std::string> names;
  for (auto m : basis(tt)) names.push_back(monomial_name(tt, m));
  CHECK(names == std::vector<std::string>{"1", "y", "x", "xy"});
}

TEST_CASE("arithmetic agrees with the oracle on random elements") {
  oracle::SplitMix rng{7};
  for (const auto& a : oracle::objects(2, 3)) {
    const auto mons = oracle::basis(a.widths());
    for (int trial = 0; trial < 30; ++trial) {
      oracle::Poly p, q;
      for (const auto& m : mons) {
        if (rng.below(2)) p[m] = rng.below(5);
        if (rng.below(2)) q[m] = rng.below(5);
      }
      const auto u = oracle::to(a, p), v = oracle::to(a, q);
      CHECK(oracle::from(u * v) == oracle::from(oracle::to(a, oracle::mul(p, q))));
      CHECK(u + v == oracle::to(a, oracle::add(p, q)));
      CHECK(u * v == v * u);
    }
  }
}

TEST_CASE("square-zero elements match brute force") {
  for (const auto& b : oracle::objects(2, 2)) {
    for (unsigned bound : {1u, 2u}) {
      auto mons = oracle::basis(b.widths());
      mons.erase(mons.begin());
      std::size_t expected = 0;
      std::vector<unsigned> coef(mons.size(), 0);
      while (true) {
        oracle::Poly p;
        for (std::size_t k = 0; k < mons.size(); ++k) {
          if (coef[k]) p[mons[k]] = coef[k];
        }
        expected += oracle::is_zero(oracle::mul(p, p));
        std::size_t k = 0;
        while (k < coef.size() && ++coef[k] > bound) coef[k++] = 0;
        if (k == coef.size()) break;
      }
      INFO(b.to_string() << " bound " << bound);
      const auto got = square_zero_elements(b, bound);
      CHECK(got.size() == expected);
      for (const auto& u : got) CHECK((u * u).is_zero());
    }
  }
}

TEST_CASE("enumerate_homs matches brute force") {
  for (const auto& a : oracle::objects(2, 2)) {
    for (const auto& b : oracle::objects(2, 2)) {
      if (a.generator_count() > 2) continue;
      INFO(a.to_string() << " -> " << b.to_string());
      const auto hs = enumerate_homs(a, b, 1);
      const auto ref = oracle::brute_force_homs(a.widths(), b.widths(), 1);
      CHECK(hs.size() == ref.size());
      CHECK(as_tables(hs) == std::set<std::vector<oracle::Poly>>(ref.begin(), ref.end()));
      CHECK(std::is_sorted(hs.begin(), hs.end()));
      CHECK(count_homs(a, b, 1, 1'000'000) == hs.size());
    }
  }
}

TEST_CASE("small hom counts") {
  // x ↦ 0, x, 2x
  CHECK(enumerate_homs(WeilObject{1}, WeilObject{1}, 2).size() == 3);
  CHECK(enumerate_homs(WeilObject{1}, WeilObject{1, 1}, 1).size() == 6);
  CHECK(enumerate_homs(WeilObject{}, WeilObject{2, 2}, 3).size() == 1);
  CHECK_THROWS_AS(enumerate_homs(WeilObject{2, 2}, WeilObject{2, 2}, 2, 100), BudgetExceeded);
  CHECK_FALSE(count_homs(WeilObject{2, 2}, WeilObject{2, 2}, 2, 100).has_value());
}

TEST_CASE("apply_hom agrees with oracle substitution") {
  oracle::SplitMix rng{11};
  const auto objs = oracle::objects(2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& a = objs[rng.below(objs.size())];
    const auto& b = objs[rng.below(objs.size())];
    const auto f = random_hom(a, b, 3, rng);
    oracle::Poly p;
    for (const auto& m : oracle::basis(a.widths())) p[m] = rng.below(4);
    const auto u = oracle::to(a, p);
    CHECK(oracle::from(apply_hom(f, u)) ==
          oracle::from(oracle::to(b, oracle::apply(a.widths(), static_cast<std::size_t>(b.factors()),
                                                    oracle::images_of(f), p))));
  }
}

TEST_CASE("composition laws on random homs") {
  oracle::SplitMix rng{0x1234};
  const auto objs = oracle::objects(2, 2);
  for (int trial = 0; trial < 150; ++trial) {
    const auto& a = objs[rng.below(objs.size())];
    const auto& b = objs[rng.below(objs.size())];
    const auto& c = objs[rng.below(objs.size())];
    const auto& d = objs[rng.below(objs.size())];
    const auto f = random_hom(a, b, 2, rng), g = random_hom(b, c, 2, rng), h = random_hom(c, d, 2, rng);
    CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
    CHECK(compose(identity(b), f) == f);
    CHECK(compose(f, identity(a)) == f);

    oracle::Poly p, q;
    for (const auto& m : oracle::basis(a.widths())) {
      p[m] = rng.below(3);
      q[m] = rng.below(3);
    }
    const auto u = oracle::to(a, p), v = oracle::to(a, q);
    CHECK(apply_hom(f, u * v) == apply_hom(f, u) * apply_hom(f, v));
    CHECK(apply_hom(f, u + v) == apply_hom(f, u) + apply_hom(f, v));
    CHECK(apply_hom(compose(g, f), u) == apply_hom(g, apply_hom(f, u)));
  }
}

TEST_CASE("tensor of homs is bifunctorial") {
  oracle::SplitMix rng{99};
  const auto objs = oracle::objects(1, 2);
  for (int trial = 0; trial < 60; ++trial) {
    const auto& a = objs[rng.below(objs.size())];
    const auto& b = objs[rng.below(objs.size())];
    const auto& c = objs[rng.below(objs.size())];
    const auto f = random_hom(a, b, 2, rng), g = random_hom(b, c, 2, rng);
    const auto k = random_hom(c, a, 2, rng);
    CHECK(tensor_hom(compose(g, f), identity(c)) == compose(tensor_hom(g, identity(c)), tensor_hom(f, identity(c))));
    CHECK(tensor_hom(f, k) == compose(tensor_hom(identity(b), k), tensor_hom(f, identity(c))));
  }
}

TEST_CASE("mk_hom validation") {
  const WeilObject w{1}, w2{2}, ww{1, 1};
  SECTION("constant part") {
    CHECK_THROWS_AS(mk_hom(w, w, {{el(w, {{{0}, 1}, {{1}, 1}})}}), ConstantPartNonzero);
  }
  SECTION("relation inside a factor") {
    // x_1 ↦ x, x_2 ↦ y multiply to xy ≠ 0
    try {
      mk_hom(w2, ww, {{el(ww, {{{1, 0}, 1}}), el(ww, {{{0, 1}, 1}})}});
      FAIL("expected RelationViolation");
    } catch (const RelationViolation& e) {
      CHECK(e.factor() == 1);
      CHECK(e.first() == 1);
      CHECK(e.second() == 2);
    }
  }
  SECTION("square not zero") {
    CHECK_THROWS_AS(mk_hom(w, ww, {{el(ww, {{{1, 0}, 1}, {{0, 1}, 1}})}}), RelationViolation);
  }
  SECTION("shape") {
    CHECK_THROWS_AS(mk_hom(w, w, {}), ObjectMismatch);
    CHECK_THROWS_AS(mk_hom(w, w, {{el(ww, {{{1, 0}, 1}})}}), ObjectMismatch);
  }
  SECTION("across factors is fine") {
    CHECK_NOTHROW(mk_hom(ww, ww, {{el(ww, {{{0, 1}, 1}})}, {el(ww, {{{1, 0}, 1}})}}));
  }
  CHECK_THROWS_AS(compose(identity(w), identity(ww)), ObjectMismatch);
  CHECK_THROWS_AS(apply_hom(identity(w), WeilElement::one(ww)), ObjectMismatch);
}

TEST_CASE("big coefficients do not overflow") {
  const WeilObject w{1};
  auto u = WeilElement::constant(w, Natural(1) << 80) + WeilElement::generator(w, 0, 1, Natural(1) << 70);
  const auto v = u * u;
  CHECK(v.constant_term() == Natural(1) << 160);
  CHECK(v.coefficient(Monomial{}.with_pick(0, 1)) == Natural(1) << 151);
}

TEST_CASE("json round trip") {
  oracle::SplitMix rng{5};
  const auto objs = oracle::objects(2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const auto& a = objs[rng.below(objs.size())];
    const auto& b = objs[rng.below(objs.size())];
    const auto f = random_hom(a, b, 3, rng);
    const json j = f;
    CHECK(hom_from_json(json::parse(j.dump())) == f);
    const auto u = apply_hom(f, oracle::to(a, {{oracle::Picks(a.factors(), 0), 2}}));
    CHECK(element_from_json(element_to_json(u), b) == u);
  }
  CHECK(element_from_json(json::parse(R"([[[1], 4], [[0], "3"]])"), WeilObject{1}).to_string() == "3 + 4x");
  CHECK_THROWS_AS(element_from_json(json::parse(R"([[[1], "-1"]])"), WeilObject{1}), ParseError);
  CHECK_THROWS_AS(element_from_json(json::parse(R"([[[2], "1"]])"), WeilObject{1}), ParseError);
  CHECK_THROWS_AS(element_from_json(json::parse(R"([[[1, 0], "1"]])"), WeilObject{1}), ParseError);
  CHECK_THROWS_AS(hom_from_json(json::parse(R"({"dom": [1]})")), ParseError);
}

TEST_CASE("element display") {
  const WeilObject ww{1, 1};
  CHECK(el(ww, {{{0, 0}, 5}, {{1, 0}, 2}, {{0, 1}, 3}, {{1, 1}, 7}}).to_string() == "5 + 3y + 2x + 7xy");
  CHECK(WeilElement::zero(ww).to_string() == "0");
  const WeilObject big{3};
  CHECK(WeilElement::generator(big, 0, 2).to_string() == "x(1,2)");
}
