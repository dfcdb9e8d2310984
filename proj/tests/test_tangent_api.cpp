#include <fstream>

#include "catch_amalgamated.hpp"
#include "oracle.hpp"
#include "tangent/tangent_api.hpp"

using namespace tangent;
using namespace tangent::api;
using weil::WeilObject;

namespace {

std::string data(const char* name) { return std::string(TANGENT_DATA_DIR) + "/" + name; }

// The Weil instance with c replaced by the identity.
struct FlatFlip : WeilInstance {
  using WeilInstance::WeilInstance;
  Hom c(const Object& x) const { return id(T(T(x))); }
};

std::set<std::pair<std::string, std::string>> failing(const Report& r) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto* item : r.failures()) out.emplace(item->id, item->object);
  return out;
}

}  // namespace

TEST_CASE("star on the Weil instance is the tensor") {
  const WeilInstance w;
  CHECK(star(w, WeilObject{2}, WeilObject{1}) == WeilObject({2, 1}));
  CHECK(star(w, WeilObject{}, WeilObject{1}) == WeilObject{1});
  CHECK(star(w, WeilObject{1, 3}, WeilObject{}) == WeilObject({1, 3}));
  CHECK(T_power(w, 2, WeilObject{}) == WeilObject({1, 1}));
}

TEST_CASE("star on a trivial instance is the identity") {
  const auto t = TrivialInstance::load(data("arrow.json"));
  for (const auto& x : t.objects()) CHECK(star(t, WeilObject{1, 2}, x) == x);
  CHECK(t.all_homs({0}, {1}).size() == 1);
  CHECK(t.all_homs({1}, {0}).empty());
  CHECK(t.hom_string(t.all_homs({0}, {1})[0]) == "f");
}

TEST_CASE("trivial instances from presentations") {
  for (const char* f : {"terminal.json", "arrow.json", "idempotent.json"}) {
    INFO(f);
    const auto t = TrivialInstance::load(data(f));
    const Report r = verify_instance(t);
    CHECK(r.pass());
    CHECK_FALSE(r.items.empty());
  }
  const auto idem = TrivialInstance::load(data("idempotent.json"));
  const auto s = idem.all_homs({0}, {0});
  REQUIRE(s.size() == 2);
  CHECK(idem.compose(s[1], s[1]) == s[1]);
}

TEST_CASE("bad presentations") {
  CHECK_THROWS_AS(TrivialInstance::load(data("not_closed.json")), InvalidPresentation);
  CHECK_THROWS_AS(TrivialInstance::load(data("missing.json")), InvalidPresentation);
  CHECK_THROWS_AS(TrivialInstance::load(data("bad_json.json")), ParseError);
  CHECK_THROWS_AS(instance_trivial(json{{"objects", json::array()}, {"arrows", json::array()}}), InvalidPresentation);
  CHECK_THROWS_AS(instance_trivial(json::parse(R"({"objects": ["a", "a"], "arrows": [], "relations": []})")),
                  InvalidPresentation);
  CHECK_THROWS_AS(instance_trivial(json::parse(
                      R"({"objects": ["a"], "arrows": [{"name": "f", "src": "a", "dst": "z"}], "relations": []})")),
                  InvalidPresentation);
}

TEST_CASE("trivial pairing needs equal legs") {
  const auto t = TrivialInstance::load(data("arrow.json"));
  const TrivialInstance::Hom same[] = {{2}, {2}}, differ[] = {{2}, {0}};
  CHECK(t.pair({}, 2, {0}, same) == TrivialInstance::Hom{2});
  CHECK_THROWS_AS(t.pair({}, 2, {0}, differ), NotACone);
  CHECK_THROWS_AS(t.pair({}, 1, {0}, same), NotACone);
}

TEST_CASE("generic checker agrees with the Weil-specific one") {
  weil_tangent::AxiomOptions opt;
  opt.max_factors = 2;
  opt.max_width = 1;
  opt.coeff_bound = 1;
  const Report generic = verify_instance(WeilInstance(opt));
  const Report specific = weil_tangent::verify_axioms(opt);
  CHECK(generic.pass());
  CHECK(specific.pass());
  // every diagram the generic checker names is also checked by the specific one
  for (const auto& item : generic.items) {
    if (item.id.rfind("D2.1", 0) != 0) continue;
    INFO(item.id << " at " << item.object);
    const auto* other = specific.find(item.id, item.object);
    REQUIRE(other != nullptr);
    CHECK(other->pass == item.pass);
  }
}

TEST_CASE("generic checker rejects a broken flip") {
  weil_tangent::AxiomOptions opt;
  opt.max_factors = 1;
  opt.max_width = 1;
  opt.coeff_bound = 1;
  const Report r = verify_instance(FlatFlip(opt));
  CHECK_FALSE(r.pass());
  const auto bad = failing(r);
  CHECK(bad.count({"D2.1.v.sq1", "N"}) == 1);
  // c = id still squares to the identity and fixes ℓ
  CHECK(bad.count({"D2.1.vi.c_squared", "N"}) == 0);
  CHECK(bad.count({"D2.1.vi.c_ell", "N"}) == 0);
}

TEST_CASE("tangent functors on the Weil instance") {
  weil_tangent::AxiomOptions bounds;
  bounds.max_factors = 1;
  bounds.max_width = 2;
  bounds.coeff_bound = 1;
  const WeilInstance w(bounds);
  FunctorCheckOptions<WeilInstance, WeilInstance> opt;
  opt.limit_objects = {WeilObject{}, WeilObject{1}};
  opt.apexes = {WeilObject{}, WeilObject{1}};

  const Report id = check_tangent_functor(identity_functor(), w, w, opt);
  CHECK(id.pass());
  const Report t = check_tangent_functor(tangent_functor(), w, w, opt);
  CHECK(t.pass());

  const Report collapse = check_tangent_functor(collapsing_functor(), w, w, opt);
  CHECK_FALSE(collapse.pass());
  bool limit_failure = false;
  for (const auto* item : collapse.failures()) {
    INFO(item->id);
    CHECK((item->id.rfind("functor.preserves_", 0) == 0 || item->id == "functor.phi_invertible"));
    limit_failure = limit_failure || item->id.rfind("functor.preserves_", 0) == 0;
  }
  CHECK(limit_failure);
}

TEST_CASE("a lax functor with a wrong phi fails a compatibility diagram") {
  weil_tangent::AxiomOptions bounds;
  bounds.max_factors = 1;
  bounds.max_width = 1;
  bounds.coeff_bound = 1;
  const WeilInstance w(bounds);
  auto F = tangent_functor();
  F.name = "T with phi = id";
  F.phi = [](const WeilObject& x) { return weil::identity(weil_tangent::T_obj(weil_tangent::T_obj(x))); };
  F.phi_inverse = F.phi;
  const Report r = check_tangent_functor(F, w, w, {});
  CHECK_FALSE(r.pass());
  bool compat = false;
  for (const auto* item : r.failures()) compat = compat || item->id.rfind("functor.preserves_", 0) != 0;
  CHECK(compat);
}
