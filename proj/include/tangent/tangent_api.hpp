#pragma once

// A uniform interface for finitely presented tangent categories with chosen
// tangent limits, two instances (Weil rigs, and the trivial structure on a
// finite category), a generic axiom checker written only against the
// interface, and a checker for (lax or strong) tangent functors.

#include <concepts>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tangent/parallel.hpp"
#include "tangent/report.hpp"
#include "tangent/tangent_w.hpp"
#include "tangent/weil.hpp"

namespace tangent::api {

using weil::RigHom;
using weil::WeilObject;

/// What a tangent category instance must provide. Objects and homs are
/// values; homs are totally ordered so that checkers can index them.
template <class I>
concept TangentInstance = requires(const I& c, const typename I::Object& x,
                                   const typename I::Hom& f, std::span<const typename I::Hom> legs) {
  { c.id(x) } -> std::same_as<typename I::Hom>;
  { c.compose(f, f) } -> std::same_as<typename I::Hom>;  // compose(g, f) = g ∘ f
  { c.dom(f) } -> std::same_as<typename I::Object>;
  { c.cod(f) } -> std::same_as<typename I::Object>;
  { c.T(x) } -> std::same_as<typename I::Object>;
  { c.T(f) } -> std::same_as<typename I::Hom>;
  { c.p(x) } -> std::same_as<typename I::Hom>;
  { c.e(x) } -> std::same_as<typename I::Hom>;
  { c.m(x) } -> std::same_as<typename I::Hom>;
  { c.ell(x) } -> std::same_as<typename I::Hom>;
  { c.c(x) } -> std::same_as<typename I::Hom>;
  { c.w(x) } -> std::same_as<typename I::Hom>;  // T_2 X → T²X
  { c.Tn(1, x) } -> std::same_as<typename I::Object>;
  { c.Tn_hom(1, f) } -> std::same_as<typename I::Hom>;
  { c.proj(1, 1, x) } -> std::same_as<typename I::Hom>;
  // Pairing into F(T_n X) for F the functor of the prefix shape, whose
  // projections are F(π_i).
  { c.pair(std::vector<int>{}, 1, x, legs) } -> std::same_as<typename I::Hom>;
  { c.objects() } -> std::same_as<std::vector<typename I::Object>>;
  // homs used for naturality; all_homs is the complete bounded hom set
  { c.homs(x, x) } -> std::same_as<std::vector<typename I::Hom>>;
  { c.all_homs(x, x) } -> std::same_as<std::vector<typename I::Hom>>;
  { c.max_proj_n() } -> std::convertible_to<int>;
  { c.name(x) } -> std::convertible_to<std::string>;
  { c.hom_string(f) } -> std::convertible_to<std::string>;
  { f == f } -> std::convertible_to<bool>;
  { f < f } -> std::convertible_to<bool>;
};

// ---------------------------------------------------------------------------
// Weil rigs

class WeilInstance {
 public:
  using Object = WeilObject;
  using Hom = RigHom;

  explicit WeilInstance(weil_tangent::AxiomOptions bounds = {}) : bounds_(bounds) {}

  const weil_tangent::AxiomOptions& bounds() const { return bounds_; }

  Hom id(const Object& x) const { return weil::identity(x); }
  Hom compose(const Hom& g, const Hom& f) const { return weil::compose(g, f); }
  Object dom(const Hom& f) const { return f.dom(); }
  Object cod(const Hom& f) const { return f.cod(); }

  Object T(const Object& x) const { return weil_tangent::T_obj(x); }
  Hom T(const Hom& f) const { return weil_tangent::T_hom(f); }
  Hom p(const Object& x) const { return comp(weil_tangent::Structure::p, x); }
  Hom e(const Object& x) const { return comp(weil_tangent::Structure::e, x); }
  Hom m(const Object& x) const { return comp(weil_tangent::Structure::m, x); }
  Hom ell(const Object& x) const { return comp(weil_tangent::Structure::ell, x); }
  Hom c(const Object& x) const { return comp(weil_tangent::Structure::c, x); }
  Hom w(const Object& x) const { return weil_tangent::w_composite(x); }

  Object Tn(int n, const Object& x) const { return weil_tangent::T_n_obj(n, x); }
  Hom Tn_hom(int n, const Hom& f) const { return weil_tangent::T_n_hom(n, f); }
  Hom proj(int n, int i, const Object& x) const {
    return weil_tangent::component(weil_tangent::ComponentName{weil_tangent::Structure::proj, n, i}, x);
  }
  Hom pair(const std::vector<int>& prefix, int n, const Object&, std::span<const Hom> legs) const {
    if (static_cast<int>(legs.size()) != n) throw NotACone("pair: expected " + std::to_string(n) + " legs");
    return weil_tangent::pairing_at(static_cast<int>(prefix.size()), legs);
  }

  std::vector<Object> objects() const {
    return weil::objects_up_to(bounds_.max_factors, bounds_.max_width);
  }
  std::vector<Hom> homs(const Object& a, const Object& b) const {
    bool exhaustive = false;
    return weil_tangent::naturality_homs(a, b, bounds_, exhaustive);
  }
  std::vector<Hom> all_homs(const Object& a, const Object& b) const {
    return weil::enumerate_homs(a, b, bounds_.coeff_bound);
  }
  int max_proj_n() const { return std::max(bounds_.max_width, 3); }

  std::string name(const Object& x) const { return x.to_string(); }
  std::string hom_string(const Hom& f) const { return f.to_string(); }

  // The action of 𝒲 on itself, A ∗ C = A ⊗ C.
  Object star(const WeilObject& a, const Object& c) const { return weil::tensor_obj(a, c); }
  Hom star_hom(const RigHom& f, const Object& c) const { return weil::tensor_hom(f, weil::identity(c)); }

 private:
  static Hom comp(weil_tangent::Structure s, const Object& x) {
    return weil_tangent::component(weil_tangent::ComponentName{s}, x);
  }

  weil_tangent::AxiomOptions bounds_;
};

// ---------------------------------------------------------------------------
// Finite categories with the trivial tangent structure

/// A finite category given by its full composition table. Objects are
/// 0..n-1; homs are indices where 0..n-1 are the identities and the listed
/// arrows follow in file order.
class FiniteCategory {
 public:
  /// Builds from a JSON presentation
  ///   {"objects": [names], "arrows": [{"name", "src", "dst"}],
  ///    "relations": [[word, word], ...]}
  /// where a word is a list of arrow names in diagrammatic order (first
  /// arrow applied first) and [] is an identity. The arrows must list every
  /// non-identity morphism, and the relations must fix the composite of
  /// each composable pair as a word of length ≤ 1.
  static FiniteCategory from_json(const json& j) {
    FiniteCategory cat;
    try {
      for (const auto& o : j.at("objects")) cat.object_names_.push_back(o.get<std::string>());
      std::map<std::string, int> obj_index;
      for (std::size_t i = 0; i < cat.object_names_.size(); ++i) {
        if (!obj_index.emplace(cat.object_names_[i], static_cast<int>(i)).second) {
          throw InvalidPresentation("duplicate object '" + cat.object_names_[i] + "'");
        }
      }
      const int n = static_cast<int>(cat.object_names_.size());
      if (n == 0) throw InvalidPresentation("a presentation needs at least one object");
      for (int i = 0; i < n; ++i) {
        cat.hom_names_.push_back("id_" + cat.object_names_[static_cast<std::size_t>(i)]);
        cat.src_.push_back(i);
        cat.dst_.push_back(i);
      }
      std::map<std::string, int> arrow_index;
      for (const auto& a : j.value("arrows", json::array())) {
        const auto name = a.at("name").get<std::string>();
        const auto src = a.at("src").get<std::string>();
        const auto dst = a.at("dst").get<std::string>();
        if (!obj_index.count(src) || !obj_index.count(dst)) {
          throw InvalidPresentation("arrow '" + name + "' has an unknown endpoint");
        }
        if (!arrow_index.emplace(name, static_cast<int>(cat.hom_names_.size())).second) {
          throw InvalidPresentation("duplicate arrow '" + name + "'");
        }
        cat.hom_names_.push_back(name);
        cat.src_.push_back(obj_index[src]);
        cat.dst_.push_back(obj_index[dst]);
      }
      const std::size_t h = cat.hom_names_.size();
      cat.table_.assign(h * h, -1);
      for (std::size_t f = 0; f < h; ++f) {
        cat.set(static_cast<int>(f), cat.dst_[f], static_cast<int>(f));
        cat.set(cat.src_[f], static_cast<int>(f), static_cast<int>(f));
      }

      auto parse_word = [&](const json& w) {
        std::vector<int> out;
        for (const auto& a : w) {
          const auto name = a.get<std::string>();
          auto it = arrow_index.find(name);
          if (it == arrow_index.end()) throw InvalidPresentation("relation mentions unknown arrow '" + name + "'");
          out.push_back(it->second);
        }
        return out;
      };
      std::vector<std::pair<std::vector<int>, std::vector<int>>> relations;
      for (const auto& r : j.value("relations", json::array())) {
        if (!r.is_array() || r.size() != 2) throw InvalidPresentation("a relation is a pair of words");
        relations.emplace_back(parse_word(r[0]), parse_word(r[1]));
      }
      // composites of length-2 words fixed by relations against words of length ≤ 1
      for (const auto& [l, r] : relations) {
        for (const auto& [two, short_word] : {std::pair{l, r}, std::pair{r, l}}) {
          if (two.size() != 2 || short_word.size() > 1) continue;
          const int f = two[0], g = two[1];
          if (cat.dst_[static_cast<std::size_t>(f)] != cat.src_[static_cast<std::size_t>(g)]) {
            throw InvalidPresentation("relation composes non-composable arrows");
          }
          const int value = short_word.empty() ? cat.src_[static_cast<std::size_t>(f)] : short_word[0];
          if (cat.src_[static_cast<std::size_t>(value)] != cat.src_[static_cast<std::size_t>(f)] ||
              cat.dst_[static_cast<std::size_t>(value)] != cat.dst_[static_cast<std::size_t>(g)]) {
            throw InvalidPresentation("relation equates homs of different types");
          }
          const int prev = cat.table_[static_cast<std::size_t>(f) * h + static_cast<std::size_t>(g)];
          if (prev >= 0 && prev != value) {
            throw InvalidPresentation("conflicting composites for " + cat.hom_names_[static_cast<std::size_t>(f)] +
                                      ";" + cat.hom_names_[static_cast<std::size_t>(g)]);
          }
          cat.table_[static_cast<std::size_t>(f) * h + static_cast<std::size_t>(g)] = value;
        }
      }
      // closed
      for (std::size_t f = 0; f < h; ++f) {
        for (std::size_t g = 0; g < h; ++g) {
          if (cat.dst_[f] == cat.src_[g] && cat.table_[f * h + g] < 0) {
            throw InvalidPresentation("composite " + cat.hom_names_[f] + ";" + cat.hom_names_[g] +
                                      " is not determined by the relations");
          }
        }
      }
      // associative
      for (std::size_t f = 0; f < h; ++f) {
        for (std::size_t g = 0; g < h; ++g) {
          if (cat.dst_[f] != cat.src_[g]) continue;
          for (std::size_t k = 0; k < h; ++k) {
            if (cat.dst_[g] != cat.src_[k]) continue;
            const int fg = cat.then(static_cast<int>(f), static_cast<int>(g));
            const int gk = cat.then(static_cast<int>(g), static_cast<int>(k));
            if (cat.then(fg, static_cast<int>(k)) != cat.then(static_cast<int>(f), gk)) {
              throw InvalidPresentation("composition is not associative at " + cat.hom_names_[f] + ";" +
                                        cat.hom_names_[g] + ";" + cat.hom_names_[k]);
            }
          }
        }
      }
      // every relation holds
      for (const auto& [l, r] : relations) {
        if (l.empty() && r.empty()) continue;
        const int lv = l.empty() ? cat.src_[static_cast<std::size_t>(r[0])] : cat.evaluate(l);
        const int rv = r.empty() ? cat.src_[static_cast<std::size_t>(l[0])] : cat.evaluate(r);
        if (lv != rv) throw InvalidPresentation("a relation fails in the composition table");
      }
    } catch (const json::exception& e) {
      throw InvalidPresentation(std::string("presentation: ") + e.what());
    }
    return cat;
  }

  static FiniteCategory load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidPresentation("cannot open " + path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
    return from_json(j);
  }

  int object_count() const { return static_cast<int>(object_names_.size()); }
  int hom_count() const { return static_cast<int>(hom_names_.size()); }
  int src(int f) const { return src_[static_cast<std::size_t>(f)]; }
  int dst(int f) const { return dst_[static_cast<std::size_t>(f)]; }
  const std::string& object_name(int x) const { return object_names_[static_cast<std::size_t>(x)]; }
  const std::string& hom_name(int f) const { return hom_names_[static_cast<std::size_t>(f)]; }

  /// f then g.
  int then(int f, int g) const {
    if (dst(f) != src(g)) throw ObjectMismatch("compose: " + hom_name(f) + " and " + hom_name(g) + " do not compose");
    return table_[static_cast<std::size_t>(f) * hom_names_.size() + static_cast<std::size_t>(g)];
  }

  /// Composite of a nonempty word.
  int evaluate(const std::vector<int>& word) const {
    int acc = word[0];
    for (std::size_t i = 1; i < word.size(); ++i) acc = then(acc, word[i]);
    return acc;
  }

 private:
  void set(int f, int g, int value) {
    table_[static_cast<std::size_t>(f) * hom_names_.size() + static_cast<std::size_t>(g)] = value;
  }

  std::vector<std::string> object_names_, hom_names_;
  std::vector<int> src_, dst_;
  std::vector<int> table_;  // table_[f*h + g] = f ; g, or -1
};

/// T = Id with every structure map the identity. Every chosen tangent limit
/// is the object itself and a cone must have equal legs.
class TrivialInstance {
 public:
  struct Object {
    int v = 0;
    friend bool operator==(Object, Object) = default;
    friend auto operator<=>(Object, Object) = default;
  };
  struct Hom {
    int v = 0;
    friend bool operator==(Hom, Hom) = default;
    friend auto operator<=>(Hom, Hom) = default;
  };

  explicit TrivialInstance(FiniteCategory cat) : cat_(std::move(cat)) {}
  static TrivialInstance from_json(const json& j) { return TrivialInstance(FiniteCategory::from_json(j)); }
  static TrivialInstance load(const std::string& path) { return TrivialInstance(FiniteCategory::load(path)); }

  const FiniteCategory& category() const { return cat_; }

  Hom id(Object x) const { return {x.v}; }
  Hom compose(Hom g, Hom f) const { return {cat_.then(f.v, g.v)}; }
  Object dom(Hom f) const { return {cat_.src(f.v)}; }
  Object cod(Hom f) const { return {cat_.dst(f.v)}; }

  Object T(Object x) const { return x; }
  Hom T(Hom f) const { return f; }
  Hom p(Object x) const { return id(x); }
  Hom e(Object x) const { return id(x); }
  Hom m(Object x) const { return id(x); }
  Hom ell(Object x) const { return id(x); }
  Hom c(Object x) const { return id(x); }
  Hom w(Object x) const { return id(x); }
  Object Tn(int, Object x) const { return x; }
  Hom Tn_hom(int, Hom f) const { return f; }
  Hom proj(int, int, Object x) const { return id(x); }
  Hom pair(const std::vector<int>&, int n, Object, std::span<const Hom> legs) const {
    if (static_cast<int>(legs.size()) != n || legs.empty()) throw NotACone("pair: wrong number of legs");
    for (Hom g : legs) {
      if (g != legs[0]) throw NotACone("pair: legs differ over the base");
    }
    return legs[0];
  }

  std::vector<Object> objects() const {
    std::vector<Object> out;
    for (int x = 0; x < cat_.object_count(); ++x) out.push_back({x});
    return out;
  }
  std::vector<Hom> homs(Object a, Object b) const { return all_homs(a, b); }
  std::vector<Hom> all_homs(Object a, Object b) const {
    std::vector<Hom> out;
    for (int f = 0; f < cat_.hom_count(); ++f) {
      if (cat_.src(f) == a.v && cat_.dst(f) == b.v) out.push_back({f});
    }
    return out;
  }
  int max_proj_n() const { return 3; }

  std::string name(Object x) const { return cat_.object_name(x.v); }
  std::string hom_string(Hom f) const { return cat_.hom_name(f.v); }

  Object star(const WeilObject&, Object c) const { return c; }
  Hom star_hom(const RigHom&, Object c) const { return id(c); }

 private:
  FiniteCategory cat_;
};

static_assert(TangentInstance<WeilInstance>);
static_assert(TangentInstance<TrivialInstance>);

inline WeilInstance instance_weil(weil_tangent::AxiomOptions bounds = {}) { return WeilInstance(bounds); }
inline TrivialInstance instance_trivial(const json& presentation) { return TrivialInstance::from_json(presentation); }

/// T^k X.
template <TangentInstance I>
typename I::Object T_power(const I& c, int k, typename I::Object x) {
  for (int i = 0; i < k; ++i) x = c.T(x);
  return x;
}

/// A ∗ C = T_{n_1}(T_{n_2}(... T_{n_k}(C))), the innermost functor coming
/// from the last factor.
template <TangentInstance I>
typename I::Object star(const I& c, const WeilObject& a, const typename I::Object& x) {
  if constexpr (requires { c.star(a, x); }) {
    return c.star(a, x);
  } else {
    auto out = x;
    for (int i = a.factors() - 1; i >= 0; --i) out = c.Tn(a.width(i), out);
    return out;
  }
}

// ---------------------------------------------------------------------------
// Generic axiom checker

namespace detail {

template <TangentInstance I>
CheckItem diagram(const I& c, std::string id, const typename I::Object& x, const typename I::Hom& lhs,
                  const typename I::Hom& rhs) {
  CheckItem item{std::move(id), c.name(x), lhs == rhs, nullptr, nullptr};
  if (!item.pass) item.counterexample = json{{"lhs", c.hom_string(lhs)}, {"rhs", c.hom_string(rhs)}};
  return item;
}

// A diagram whose sides need pairings; legs that fail to form a cone make
// the diagram fail rather than abort the sweep.
template <TangentInstance I, class Sides>
CheckItem paired_diagram(const I& c, std::string id, const typename I::Object& x, Sides sides) {
  try {
    const auto [lhs, rhs] = sides();
    return diagram(c, std::move(id), x, lhs, rhs);
  } catch (const NotACone& e) {
    return CheckItem{std::move(id), c.name(x), false, json{{"not_a_cone", e.what()}}, nullptr};
  }
}

template <TangentInstance I>
typename I::Hom pair2(const I& c, int prefix, const typename I::Object& x, const typename I::Hom& a,
                      const typename I::Hom& b) {
  const typename I::Hom legs[] = {a, b};
  return c.pair(std::vector<int>(static_cast<std::size_t>(prefix), 1), 2, x, legs);
}

}  // namespace detail

/// The tangent-category diagrams at X, built only through the interface.
template <TangentInstance I>
std::vector<CheckItem> generic_diagrams_at(const I& c, const typename I::Object& x) {
  using detail::diagram;
  using detail::pair2;
  using detail::paired_diagram;
  const auto tx = c.T(x);
  const auto p = c.p(x), e = c.e(x), m = c.m(x), l = c.ell(x), cc = c.c(x);
  const auto pi21 = c.proj(2, 1, x), pi22 = c.proj(2, 2, x);
  const auto pi31 = c.proj(3, 1, x), pi32 = c.proj(3, 2, x), pi33 = c.proj(3, 3, x);
  auto o = [&](const auto& g, const auto& f) { return c.compose(g, f); };

  std::vector<CheckItem> out;
  out.push_back(diagram(c, "D2.1.iii.e_section", x, o(p, e), c.id(x)));
  out.push_back(diagram(c, "D2.1.iii.m_over_base", x, o(p, m), o(p, pi21)));
  out.push_back(paired_diagram(c, "D2.1.iii.unit_left", x, [&] {
    return std::pair{o(m, pair2(c, 0, x, o(e, p), c.id(tx))), c.id(tx)};
  }));
  out.push_back(paired_diagram(c, "D2.1.iii.unit_right", x, [&] {
    return std::pair{o(m, pair2(c, 0, x, c.id(tx), o(e, p))), c.id(tx)};
  }));
  out.push_back(paired_diagram(c, "D2.1.iii.assoc", x, [&] {
    const auto m12 = o(m, pair2(c, 0, x, pi31, pi32));
    const auto m23 = o(m, pair2(c, 0, x, pi32, pi33));
    return std::pair{o(m, pair2(c, 0, x, m12, pi33)), o(m, pair2(c, 0, x, pi31, m23))};
  }));
  out.push_back(paired_diagram(c, "D2.1.iii.comm", x, [&] { return std::pair{o(m, pair2(c, 0, x, pi22, pi21)), m}; }));

  out.push_back(diagram(c, "D2.1.iv.sq1", x, o(c.T(p), l), o(e, p)));
  out.push_back(diagram(c, "D2.1.iv.sq2", x, o(c.T(e), e), o(l, e)));
  out.push_back(paired_diagram(c, "D2.1.iv.sq3", x, [&] {
    return std::pair{o(c.T(m), pair2(c, 1, x, o(l, pi21), o(l, pi22))), o(l, m)};
  }));

  out.push_back(diagram(c, "D2.1.v.sq1", x, o(c.p(tx), cc), c.T(p)));
  out.push_back(diagram(c, "D2.1.v.sq2", x, o(cc, c.T(e)), c.e(tx)));
  out.push_back(paired_diagram(c, "D2.1.v.sq3", x, [&] {
    return std::pair{o(c.m(tx), pair2(c, 0, tx, o(cc, c.T(pi21)), o(cc, c.T(pi22)))), o(cc, c.T(m))};
  }));

  out.push_back(diagram(c, "D2.1.vi.c_squared", x, o(cc, cc), c.id(c.T(tx))));
  out.push_back(diagram(c, "D2.1.vi.c_ell", x, o(cc, l), l));
  out.push_back(diagram(c, "D2.1.vi.hex1", x, o(c.T(l), l), o(c.ell(tx), l)));
  const auto cT = c.c(tx), Tc = c.T(cc);
  out.push_back(diagram(c, "D2.1.vi.hex2", x, o(cT, o(Tc, cT)), o(Tc, o(cT, Tc))));
  out.push_back(diagram(c, "D2.1.vi.hex3", x, o(cT, o(Tc, c.ell(tx))), o(c.T(l), cc)));

  const auto w = c.w(x);
  out.push_back(diagram(c, "D2.1.vii.equalising", x, o(c.T(p), w), o(e, o(p, o(c.p(tx), w)))));
  return out;
}

/// Naturality of p, e, m, l, c, w and every projection at X against the
/// instance's naturality homs X → Y.
template <TangentInstance I>
std::vector<CheckItem> generic_naturality_at(const I& c, const typename I::Object& x) {
  using Hom = typename I::Hom;
  using Object = typename I::Object;
  struct Entry {
    std::string id;
    // component at an object, source functor on homs, target functor on homs
    std::function<Hom(const Object&)> theta;
    std::function<Hom(const Hom&)> src, tgt;
  };
  auto T = [&](const Hom& f) { return c.T(f); };
  auto TT = [&](const Hom& f) { return c.T(c.T(f)); };
  auto I1 = [](const Hom& f) { return f; };
  std::vector<Entry> entries = {
      {"nat.p", [&](const Object& y) { return c.p(y); }, T, I1},
      {"nat.e", [&](const Object& y) { return c.e(y); }, I1, T},
      {"nat.m", [&](const Object& y) { return c.m(y); }, [&](const Hom& f) { return c.Tn_hom(2, f); }, T},
      {"nat.l", [&](const Object& y) { return c.ell(y); }, T, TT},
      {"nat.c", [&](const Object& y) { return c.c(y); }, TT, TT},
      {"nat.w", [&](const Object& y) { return c.w(y); }, [&](const Hom& f) { return c.Tn_hom(2, f); }, TT},
  };
  for (int n = 1; n <= c.max_proj_n(); ++n) {
    for (int i = 1; i <= n; ++i) {
      entries.push_back({"nat.pi_" + std::to_string(i) + "(" + std::to_string(n) + ")",
                         [&c, n, i](const Object& y) { return c.proj(n, i, y); },
                         [&c, n](const Hom& f) { return c.Tn_hom(n, f); }, T});
    }
  }
  std::vector<CheckItem> out;
  for (const auto& en : entries) out.push_back(CheckItem{en.id, c.name(x), true, nullptr, nullptr});
  std::vector<std::size_t> checked(entries.size(), 0);
  std::vector<Hom> theta_x;
  for (const auto& en : entries) theta_x.push_back(en.theta(x));
  for (const auto& y : c.objects()) {
    const auto fs = c.homs(x, y);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Hom theta_y = entries[k].theta(y);
      for (const auto& f : fs) {
        ++checked[k];
        if (!out[k].pass) continue;
        const Hom lhs = c.compose(theta_y, entries[k].src(f));
        const Hom rhs = c.compose(entries[k].tgt(f), theta_x[k]);
        if (!(lhs == rhs)) {
          out[k].pass = false;
          out[k].counterexample = json{{"hom", c.hom_string(f)}, {"lhs", c.hom_string(lhs)}, {"rhs", c.hom_string(rhs)}};
        }
      }
    }
  }
  for (std::size_t k = 0; k < entries.size(); ++k) out[k].detail = json{{"homs_checked", checked[k]}};
  return out;
}

/// Every tangent-category diagram and naturality square over the
/// instance's object universe.
template <TangentInstance I>
Report verify_instance(const I& c, unsigned jobs = 1) {
  const auto objects = c.objects();
  auto per = parallel_map(objects.size(), jobs, [&](std::size_t i) {
    auto items = generic_diagrams_at(c, objects[i]);
    auto nat = generic_naturality_at(c, objects[i]);
    items.insert(items.end(), nat.begin(), nat.end());
    return items;
  });
  Report r;
  r.check = "verify instance";
  json names = json::array();
  for (const auto& x : objects) names.push_back(c.name(x));
  r.truncation = json{{"objects", names}};
  for (auto& items : per) {
    for (auto& item : items) r.add(std::move(item));
  }
  r.sort();
  return r;
}

// ---------------------------------------------------------------------------
// Tangent functors

/// H : D → C with φ_X : H(TX) → T(HX). A lax functor needs only the
/// compatibility diagrams; a strong one additionally needs φ invertible and
/// the chosen tangent limits carried to tangent limits.
template <TangentInstance D, TangentInstance C>
struct TangentFunctorData {
  std::string name;
  std::function<typename C::Object(const typename D::Object&)> on_object;
  std::function<typename C::Hom(const typename D::Hom&)> on_hom;
  std::function<typename C::Hom(const typename D::Object&)> phi;
  // optional; when absent a strong check searches the bounded hom set
  std::function<typename C::Hom(const typename D::Object&)> phi_inverse;
  bool strong = false;
};

template <TangentInstance D, TangentInstance C>
struct FunctorCheckOptions {
  std::vector<typename D::Object> objects;        // default: dom.objects()
  std::vector<typename D::Object> limit_objects;  // objects whose limits are checked
  std::vector<typename C::Object> apexes;         // cone apexes in the codomain
  int max_n = 2;
  unsigned jobs = 1;
};

namespace detail {

// Are the maps q_i : L → T(Y) a fibre product of n copies of p_Y, against
// every cone from an apex in `apexes` built from the bounded hom sets?
template <TangentInstance C>
CheckItem is_pullback(const C& c, std::string id, const std::string& label, const typename C::Object& y,
                      const typename C::Object& l, const std::vector<typename C::Hom>& q,
                      const std::vector<typename C::Object>& apexes) {
  using Hom = typename C::Hom;
  CheckItem item{std::move(id), label, true, nullptr, nullptr};
  const auto ty = c.T(y);
  const Hom py = c.p(y);
  std::size_t cones = 0;
  for (const auto& z : apexes) {
    const auto pool = c.all_homs(z, ty);
    const auto candidates = c.all_homs(z, l);
    std::map<std::vector<Hom>, std::size_t> by_projections;
    for (const auto& k : candidates) {
      std::vector<Hom> key;
      for (const auto& qi : q) key.push_back(c.compose(qi, k));
      ++by_projections[key];
    }
    std::map<Hom, std::vector<std::size_t>> by_base;
    for (std::size_t k = 0; k < pool.size(); ++k) by_base[c.compose(py, pool[k])].push_back(k);
    for (const auto& [base, members] : by_base) {
      std::vector<std::size_t> idx(q.size(), 0);
      for (bool more = true; more;) {
        std::vector<Hom> legs;
        for (auto k : idx) legs.push_back(pool[members[k]]);
        ++cones;
        auto it = by_projections.find(legs);
        const std::size_t fac = it == by_projections.end() ? 0 : it->second;
        if (fac != 1 && item.pass) {
          item.pass = false;
          json jl = json::array();
          for (const auto& g : legs) jl.push_back(c.hom_string(g));
          item.counterexample = json{{"apex", c.name(z)}, {"legs", jl}, {"factorizations", fac}};
        }
        more = false;
        for (std::size_t d = idx.size(); d-- > 0;) {
          if (++idx[d] < members.size()) {
            more = true;
            break;
          }
          idx[d] = 0;
        }
      }
    }
  }
  item.detail = json{{"cones", cones}};
  return item;
}

// Is u : E → T²Y an equaliser of T(p_Y) and e∘p∘p_T against bounded homs?
template <TangentInstance C>
CheckItem is_equaliser(const C& c, std::string id, const std::string& label, const typename C::Object& y,
                       const typename C::Object& e_obj, const typename C::Hom& u,
                       const std::vector<typename C::Object>& apexes) {
  using Hom = typename C::Hom;
  CheckItem item{std::move(id), label, true, nullptr, nullptr};
  const auto tty = c.T(c.T(y));
  const Hom f1 = c.T(c.p(y));
  const Hom f2 = c.compose(c.e(y), c.compose(c.p(y), c.p(c.T(y))));
  std::size_t checked = 0;
  for (const auto& z : apexes) {
    const auto hs = c.all_homs(z, tty);
    const auto ks = c.all_homs(z, e_obj);
    std::map<Hom, std::size_t> by_image;
    for (const auto& k : ks) ++by_image[c.compose(u, k)];
    for (const auto& h : hs) {
      ++checked;
      const bool eq = c.compose(f1, h) == c.compose(f2, h);
      auto it = by_image.find(h);
      const std::size_t fac = it == by_image.end() ? 0 : it->second;
      if ((eq ? fac != 1 : fac != 0) && item.pass) {
        item.pass = false;
        item.counterexample = json{{"apex", c.name(z)}, {"hom", c.hom_string(h)}, {"equalises", eq}, {"factorizations", fac}};
      }
    }
  }
  item.detail = json{{"homs", checked}};
  return item;
}

}  // namespace detail

/// Checks the compatibility diagrams of (H, φ) componentwise, naturality of
/// φ, and for strong data the invertibility of φ and the preservation of the
/// chosen tangent limits in the φ-transported sense.
template <TangentInstance D, TangentInstance C>
Report check_tangent_functor(const TangentFunctorData<D, C>& F, const D& dom, const C& cod,
                             FunctorCheckOptions<D, C> opt = {}) {
  using CHom = typename C::Hom;
  using DObject = typename D::Object;
  if (opt.objects.empty()) opt.objects = dom.objects();
  if (opt.apexes.empty()) opt.apexes = cod.objects();
  auto H = [&](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, typename D::Hom>) return F.on_hom(v);
    else return F.on_object(v);
  };
  auto o = [&](const CHom& g, const CHom& f) { return cod.compose(g, f); };

  auto per = parallel_map(opt.objects.size(), opt.jobs, [&](std::size_t idx) {
    const DObject& x = opt.objects[idx];
    const auto hx = H(x);
    const std::string label = dom.name(x);
    const CHom phi = F.phi(x);
    const CHom phiT = F.phi(dom.T(x));
    std::vector<CheckItem> items;
    auto add = [&](std::string id, const CHom& lhs, const CHom& rhs) {
      CheckItem item{std::move(id), label, lhs == rhs, nullptr, nullptr};
      if (!item.pass) item.counterexample = json{{"lhs", cod.hom_string(lhs)}, {"rhs", cod.hom_string(rhs)}};
      items.push_back(std::move(item));
    };
    add("functor.identity", H(dom.id(x)), cod.id(hx));
    add("functor.phi_e", o(phi, H(dom.e(x))), cod.e(hx));
    add("functor.phi_p", o(cod.p(hx), phi), H(dom.p(x)));
    try {
      const CHom legs[] = {o(phi, H(dom.proj(2, 1, x))), o(phi, H(dom.proj(2, 2, x)))};
      add("functor.phi_m", o(cod.m(hx), cod.pair({}, 2, hx, legs)), o(phi, H(dom.m(x))));
    } catch (const NotACone& e) {
      items.push_back(CheckItem{"functor.phi_m", label, false, json{{"not_a_cone", e.what()}}, nullptr});
    }
    const CHom lift = o(cod.T(phi), phiT);  // H(T²X) → T²(HX)
    add("functor.phi_l", o(cod.ell(hx), phi), o(lift, H(dom.ell(x))));
    add("functor.phi_c", o(cod.c(hx), lift), o(lift, H(dom.c(x))));

    CheckItem nat{"functor.phi_natural", label, true, nullptr, nullptr};
    std::size_t homs = 0;
    for (const auto& y : opt.objects) {
      const CHom phiy = F.phi(y);
      for (const auto& f : dom.homs(x, y)) {
        ++homs;
        if (!nat.pass) continue;
        const CHom lhs = o(cod.T(H(f)), phi), rhs = o(phiy, H(dom.T(f)));
        if (!(lhs == rhs)) {
          nat.pass = false;
          nat.counterexample = json{{"hom", dom.hom_string(f)}, {"lhs", cod.hom_string(lhs)}, {"rhs", cod.hom_string(rhs)}};
        }
      }
    }
    nat.detail = json{{"homs_checked", homs}};
    items.push_back(std::move(nat));

    if (F.strong) {
      CheckItem inv{"functor.phi_invertible", label, false, nullptr, nullptr};
      const auto src = H(dom.T(x)), tgt = cod.T(hx);
      auto is_inverse = [&](const CHom& psi) {
        return cod.dom(psi) == tgt && cod.cod(psi) == src && o(psi, phi) == cod.id(src) && o(phi, psi) == cod.id(tgt);
      };
      if (F.phi_inverse) {
        inv.pass = is_inverse(F.phi_inverse(x));
        inv.detail = json{{"inverse", "supplied"}};
      } else {
        const auto candidates = cod.all_homs(tgt, src);
        inv.pass = std::any_of(candidates.begin(), candidates.end(), is_inverse);
        inv.detail = json{{"inverse", "searched"}, {"candidates", candidates.size()}};
      }
      if (!inv.pass) inv.counterexample = json{{"phi", cod.hom_string(phi)}};
      items.push_back(std::move(inv));
    }
    return items;
  });

  Report r;
  r.check = "verify functor";
  json objs = json::array(), lims = json::array(), apx = json::array();
  for (const auto& x : opt.objects) objs.push_back(dom.name(x));
  for (const auto& x : opt.limit_objects) lims.push_back(dom.name(x));
  for (const auto& z : opt.apexes) apx.push_back(cod.name(z));
  r.truncation = json{{"functor", F.name}, {"strong", F.strong}, {"objects", objs},
                      {"limit_objects", lims}, {"apexes", apx}, {"max_n", opt.max_n}};
  for (auto& items : per) {
    for (auto& item : items) r.add(std::move(item));
  }

  if (F.strong) {
    for (const auto& x : opt.limit_objects) {
      const auto hx = H(x);
      const std::string label = dom.name(x);
      const CHom phi = F.phi(x);
      for (int n = 1; n <= opt.max_n; ++n) {
        std::vector<CHom> q;
        for (int i = 1; i <= n; ++i) q.push_back(o(phi, H(dom.proj(n, i, x))));
        r.add(detail::is_pullback(cod, "functor.preserves_pullback.n" + std::to_string(n), label, hx,
                                  H(dom.Tn(n, x)), q, opt.apexes));
      }
      const CHom u = o(o(cod.T(phi), F.phi(dom.T(x))), H(dom.w(x)));
      r.add(detail::is_equaliser(cod, "functor.preserves_equaliser", label, hx, H(dom.Tn(2, x)), u, opt.apexes));
    }
  }
  r.sort();
  return r;
}

// Ready-made functors on the Weil instance.

/// (Id, id).
inline TangentFunctorData<WeilInstance, WeilInstance> identity_functor() {
  return {"identity",
          [](const WeilObject& x) { return x; },
          [](const RigHom& f) { return f; },
          [](const WeilObject& x) { return weil::identity(weil_tangent::T_obj(x)); },
          [](const WeilObject& x) { return weil::identity(weil_tangent::T_obj(x)); },
          true};
}

/// (T, c): T is itself a tangent functor with φ = c.
inline TangentFunctorData<WeilInstance, WeilInstance> tangent_functor() {
  auto c = [](const WeilObject& x) {
    return weil_tangent::component(weil_tangent::ComponentName{weil_tangent::Structure::c}, x);
  };
  return {"T",
          [](const WeilObject& x) { return weil_tangent::T_obj(x); },
          [](const RigHom& f) { return weil_tangent::T_hom(f); },
          c, c, true};
}

/// Everything sent to ℕ, with φ the only hom ℕ → W. The compatibility
/// diagrams hold; φ is not invertible and the limits are not preserved.
inline TangentFunctorData<WeilInstance, WeilInstance> collapsing_functor() {
  return {"collapse",
          [](const WeilObject&) { return WeilObject{}; },
          [](const RigHom&) { return weil::identity(WeilObject{}); },
          [](const WeilObject&) { return RigHom::from_unit(weil_tangent::kW); },
          nullptr,
          true};
}

}  // namespace tangent::api
