#pragma once

// Structural terms: a small language for the natural transformations built
// from the tangent structure, their evaluation in any instance, and a
// bounded search that expresses a Weil-rig hom as the ℕ-component of such a
// term.
//
// A shape [a_1, ..., a_j] denotes the functor T_{a_1} ∘ ... ∘ T_{a_j}; at an
// object X of 𝒲 it is W_{a_1} ⊗ ... ⊗ W_{a_j} ⊗ X, so the shapes are exactly
// the width lists of Weil objects.

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tangent/report.hpp"
#include "tangent/tangent_api.hpp"
#include "tangent/tangent_w.hpp"
#include "tangent/weil.hpp"

namespace tangent::coherence {

using weil::RigHom;
using weil::WeilObject;

using Shape = std::vector<int>;

inline std::string shape_to_string(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

inline Shape concat(Shape a, const Shape& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

enum class Kind { Id, P, E, M, L, C, Proj, Pair, VComp, WhiskerLeft, WhiskerRight };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable AST node. `shape` is the Id shape or the right-whiskering
/// shape; `n`/`i` hold Proj(n, i), the left-whiskering width, or the Pair
/// prefix length; `args` are VComp(t2, t1), the whiskered term, or the legs.
struct Term {
  Kind kind = Kind::Id;
  Shape shape;
  int n = 0;
  int i = 0;
  std::vector<TermPtr> args;
};

inline TermPtr Id(Shape s) { return std::make_shared<Term>(Term{Kind::Id, std::move(s), 0, 0, {}}); }
inline TermPtr P() { return std::make_shared<Term>(Term{Kind::P, {}, 0, 0, {}}); }
inline TermPtr E() { return std::make_shared<Term>(Term{Kind::E, {}, 0, 0, {}}); }
inline TermPtr M() { return std::make_shared<Term>(Term{Kind::M, {}, 0, 0, {}}); }
inline TermPtr L() { return std::make_shared<Term>(Term{Kind::L, {}, 0, 0, {}}); }
inline TermPtr C() { return std::make_shared<Term>(Term{Kind::C, {}, 0, 0, {}}); }
inline TermPtr Proj(int n, int i) { return std::make_shared<Term>(Term{Kind::Proj, {}, n, i, {}}); }
inline TermPtr VComp(TermPtr t2, TermPtr t1) {
  return std::make_shared<Term>(Term{Kind::VComp, {}, 0, 0, {std::move(t2), std::move(t1)}});
}
inline TermPtr WhiskerLeft(int m, TermPtr t) {
  return std::make_shared<Term>(Term{Kind::WhiskerLeft, {}, m, 0, {std::move(t)}});
}
inline TermPtr WhiskerRight(TermPtr t, Shape r) {
  return std::make_shared<Term>(Term{Kind::WhiskerRight, std::move(r), 0, 0, {std::move(t)}});
}
/// Pairing into the fibre product at prefix position k.
inline TermPtr Pair(int k, std::vector<TermPtr> legs) {
  return std::make_shared<Term>(Term{Kind::Pair, {}, k, 0, std::move(legs)});
}

inline int depth(const Term& t) {
  int d = 0;
  for (const auto& a : t.args) d = std::max(d, depth(*a));
  return d + 1;
}

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case Kind::Id: return "Id(" + shape_to_string(t.shape) + ")";
    case Kind::P: return "P";
    case Kind::E: return "E";
    case Kind::M: return "M";
    case Kind::L: return "L";
    case Kind::C: return "C";
    case Kind::Proj: return "Proj(" + std::to_string(t.n) + ", " + std::to_string(t.i) + ")";
    case Kind::VComp: return "VComp(" + to_string(*t.args[0]) + ", " + to_string(*t.args[1]) + ")";
    case Kind::WhiskerLeft: return "WhiskerLeft(" + std::to_string(t.n) + ", " + to_string(*t.args[0]) + ")";
    case Kind::WhiskerRight: return "WhiskerRight(" + to_string(*t.args[0]) + ", " + shape_to_string(t.shape) + ")";
    case Kind::Pair: {
      std::string s = "Pair(" + std::to_string(t.n);
      for (const auto& a : t.args) s += ", " + to_string(*a);
      return s + ")";
    }
  }
  return "?";
}

inline std::string to_string(const TermPtr& t) { return to_string(*t); }

// ---------------------------------------------------------------------------
// Parsing the text form

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  TermPtr parse_all() {
    TermPtr t = term();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("term: " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a constructor name");
    return std::string(s_.substr(start, pos_ - start));
  }
  int number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 4) fail("expected a small natural number");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }
  Shape shape() {
    expect('[');
    Shape out;
    if (eat(']')) return out;
    do out.push_back(number());
    while (eat(','));
    expect(']');
    return out;
  }

  TermPtr term() {
    const std::string name = ident();
    if (name == "P") return P();
    if (name == "E") return E();
    if (name == "M") return M();
    if (name == "L") return L();
    if (name == "C") return C();
    expect('(');
    TermPtr out;
    if (name == "Id") {
      out = Id(shape());
    } else if (name == "Proj") {
      const int n = number();
      expect(',');
      out = Proj(n, number());
    } else if (name == "VComp") {
      TermPtr t2 = term();
      expect(',');
      out = VComp(t2, term());
    } else if (name == "WhiskerLeft") {
      const int m = number();
      expect(',');
      out = WhiskerLeft(m, term());
    } else if (name == "WhiskerRight") {
      TermPtr t = term();
      expect(',');
      out = WhiskerRight(t, shape());
    } else if (name == "Pair") {
      const int k = number();
      std::vector<TermPtr> legs;
      while (eat(',')) legs.push_back(term());
      out = Pair(k, std::move(legs));
    } else {
      fail("unknown constructor '" + name + "'");
    }
    expect(')');
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline TermPtr parse_term(std::string_view text) { return detail::Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Typing and evaluation

/// Source and target shapes.
struct Typing {
  Shape src, tgt;
  friend bool operator==(const Typing&, const Typing&) = default;
};

/// Evaluates at an object of any instance by structural recursion.
template <api::TangentInstance I>
typename I::Hom eval(const Term& t, const I& inst, const typename I::Object& x);

template <api::TangentInstance I>
typename I::Object shape_object(const I& inst, const Shape& s, typename I::Object x) {
  for (auto it = s.rbegin(); it != s.rend(); ++it) x = inst.Tn(*it, x);
  return x;
}

template <api::TangentInstance I>
typename I::Hom shape_hom(const I& inst, const Shape& s, typename I::Hom f) {
  for (auto it = s.rbegin(); it != s.rend(); ++it) f = inst.Tn_hom(*it, f);
  return f;
}

/// Source/target shapes; throws IllTyped (including for pairings whose legs
/// do not agree over the base).
inline Typing type_of(const Term& t) {
  switch (t.kind) {
    case Kind::Id: return {t.shape, t.shape};
    case Kind::P: return {{1}, {}};
    case Kind::E: return {{}, {1}};
    case Kind::M: return {{2}, {1}};
    case Kind::L: return {{1}, {1, 1}};
    case Kind::C: return {{1, 1}, {1, 1}};
    case Kind::Proj:
      if (t.n < 1 || t.i < 1 || t.i > t.n || t.n > WeilObject::kMaxWidth) {
        throw IllTyped("Proj(" + std::to_string(t.n) + ", " + std::to_string(t.i) + ") is out of range");
      }
      return {{t.n}, {1}};
    case Kind::VComp: {
      const Typing t2 = type_of(*t.args[0]), t1 = type_of(*t.args[1]);
      if (t1.tgt != t2.src) {
        throw IllTyped("VComp: " + shape_to_string(t1.tgt) + " does not match " + shape_to_string(t2.src));
      }
      return {t1.src, t2.tgt};
    }
    case Kind::WhiskerLeft: {
      if (t.n < 1 || t.n > WeilObject::kMaxWidth) throw IllTyped("WhiskerLeft: width out of range");
      const Typing in = type_of(*t.args[0]);
      return {concat({t.n}, in.src), concat({t.n}, in.tgt)};
    }
    case Kind::WhiskerRight: {
      const Typing in = type_of(*t.args[0]);
      return {concat(in.src, t.shape), concat(in.tgt, t.shape)};
    }
    case Kind::Pair: {
      if (t.args.empty()) throw IllTyped("Pair: needs at least one leg");
      const Typing first = type_of(*t.args[0]);
      const auto k = static_cast<std::size_t>(t.n);
      if (t.n < 0 || k >= first.tgt.size() || first.tgt[k] != 1) {
        throw IllTyped("Pair: legs must have T at position " + std::to_string(t.n) + " of their target");
      }
      std::vector<RigHom> legs;
      const api::WeilInstance w;
      for (const auto& a : t.args) {
        if (type_of(*a) != first) throw IllTyped("Pair: legs have different types");
        legs.push_back(eval(*a, w, WeilObject{}));
      }
      // cone condition, decided on ℕ-components (which determine the
      // transformations in 𝒲)
      const RigHom q = weil_tangent::collapse_factor(legs[0].cod(), t.n);
      for (const auto& g : legs) {
        if (weil::compose(q, g) != weil::compose(q, legs[0])) throw IllTyped("Pair: legs disagree over the base");
      }
      Shape tgt = first.tgt;
      tgt[k] = static_cast<int>(t.args.size());
      return {first.src, tgt};
    }
  }
  throw IllTyped("unknown term");
}

inline Typing type_of(const TermPtr& t) { return type_of(*t); }

template <api::TangentInstance I>
typename I::Hom eval(const Term& t, const I& inst, const typename I::Object& x) {
  switch (t.kind) {
    case Kind::Id: return inst.id(shape_object(inst, t.shape, x));
    case Kind::P: return inst.p(x);
    case Kind::E: return inst.e(x);
    case Kind::M: return inst.m(x);
    case Kind::L: return inst.ell(x);
    case Kind::C: return inst.c(x);
    case Kind::Proj: return inst.proj(t.n, t.i, x);
    case Kind::VComp: return inst.compose(eval(*t.args[0], inst, x), eval(*t.args[1], inst, x));
    case Kind::WhiskerLeft: return inst.Tn_hom(t.n, eval(*t.args[0], inst, x));
    case Kind::WhiskerRight: return eval(*t.args[0], inst, shape_object(inst, t.shape, x));
    case Kind::Pair: {
      const Typing ty = type_of(*t.args[0]);
      const auto k = static_cast<std::size_t>(t.n);
      const Shape prefix(ty.tgt.begin(), ty.tgt.begin() + static_cast<std::ptrdiff_t>(k));
      const Shape suffix(ty.tgt.begin() + static_cast<std::ptrdiff_t>(k) + 1, ty.tgt.end());
      std::vector<typename I::Hom> legs;
      for (const auto& a : t.args) legs.push_back(eval(*a, inst, x));
      return inst.pair(prefix, static_cast<int>(legs.size()), shape_object(inst, suffix, x), legs);
    }
  }
  throw IllTyped("unknown term");
}

template <api::TangentInstance I>
typename I::Hom eval(const TermPtr& t, const I& inst, const typename I::Object& x) {
  type_of(*t);
  return eval(*t, inst, x);
}

// ---------------------------------------------------------------------------
// Expressing Weil-rig homs

struct ExpressResult {
  TermPtr term;
  int depth = 0;
  RigHom target;
};

struct ExpressOptions {
  int max_depth = 6;
  /// Allow intermediate shapes with one extra T layer inserted.
  bool extra_layer = true;
  /// Stop (with ExpressBudgetExceeded) once this many distinct homs are known.
  std::size_t max_terms = 400'000;
};

/// All subsequences of the given shapes, plus [] and [1], optionally with a
/// single 1 inserted anywhere or one entry widened by 1 (the target of a
/// pairing that is then summed away by M).
inline std::vector<Shape> shape_universe(const Shape& src, const Shape& tgt, bool extra_layer) {
  std::set<Shape> out{Shape{}, Shape{1}};
  for (const Shape* s : {&src, &tgt}) {
    const std::size_t n = s->size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Shape sub;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) sub.push_back((*s)[i]);
      }
      out.insert(sub);
    }
  }
  if (extra_layer) {
    const std::vector<Shape> base(out.begin(), out.end());
    for (const auto& s : base) {
      for (std::size_t pos = 0; pos <= s.size(); ++pos) {
        Shape t = s;
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(pos), 1);
        out.insert(t);
      }
      for (std::size_t pos = 0; pos < s.size(); ++pos) {
        if (s[pos] >= WeilObject::kMaxWidth) continue;
        Shape t = s;
        ++t[pos];
        out.insert(t);
      }
    }
  }
  return {out.begin(), out.end()};
}

/// Iterative-deepening enumeration of structural terms over a fixed shape
/// universe, memoized by ℕ-component. Levels are built in a fixed order, so
/// the term recorded for a hom is the first minimal-depth one found, no
/// matter which homs are queried or in what order.
class ExpressSearch {
 public:
  ExpressSearch(std::vector<Shape> universe, weil::Natural coeff_bound, ExpressOptions opt = {})
      : universe_(std::move(universe)), bound_(std::move(coeff_bound)), opt_(opt) {
    for (const auto& s : universe_) {
      allowed_.insert(s);
      for (int a : s) max_width_ = std::max(max_width_, a);
    }
  }

  /// Minimal-depth term for f, or nullopt if none within max_depth.
  std::optional<ExpressResult> find(const RigHom& f) {
    while (true) {
      if (auto it = memo_.find(f); it != memo_.end()) {
        const auto& en = entries_[it->second];
        return ExpressResult{en.term, en.depth, f};
      }
      if (built_ >= opt_.max_depth) return std::nullopt;
      build_level(built_ + 1);
    }
  }

  int built_depth() const { return built_; }
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    TermPtr term;
    int depth;
    RigHom hom;
  };

  bool admissible(const RigHom& h) const {
    if (!allowed_.count(h.dom().widths()) || !allowed_.count(h.cod().widths())) return false;
    for (const auto& u : h.flat_images()) {
      if (u.max_coefficient() > bound_) return false;
    }
    return true;
  }

  void offer(TermPtr t, int d, RigHom h) {
    if (!admissible(h) || memo_.count(h)) return;
    if (entries_.size() >= opt_.max_terms) {
      throw ExpressBudgetExceeded("express: more than " + std::to_string(opt_.max_terms) +
                                  " distinct homs at depth " + std::to_string(d));
    }
    memo_.emplace(h, entries_.size());
    entries_.push_back({std::move(t), d, std::move(h)});
  }

  void build_level(int d) {
    const api::WeilInstance w;
    const WeilObject unit{};
    const std::size_t before = entries_.size();
    if (d == 1) {
      for (const auto& s : universe_) offer(Id(s), 1, weil::identity(WeilObject(s)));
      for (auto leaf : {P(), E(), M(), L(), C()}) offer(leaf, 1, eval(*leaf, w, unit));
      for (int n = 1; n <= max_width_; ++n) {
        for (int i = 1; i <= n; ++i) offer(Proj(n, i), 1, eval(*Proj(n, i), w, unit));
      }
      built_ = 1;
      return;
    }
    const std::size_t prev_begin = level_begin_.back();  // first entry of depth d-1
    const std::size_t prev_end = before;
    level_begin_.push_back(before);

    // index all entries of depth < d by domain and codomain
    std::map<WeilObject, std::vector<std::size_t>> by_dom, by_cod;
    for (std::size_t k = 0; k < prev_end; ++k) {
      by_dom[entries_[k].hom.dom()].push_back(k);
      by_cod[entries_[k].hom.cod()].push_back(k);
    }

    // Pair, with at least one leg of depth d-1
    std::map<std::pair<WeilObject, WeilObject>, std::vector<std::size_t>> by_type;
    for (std::size_t k = 0; k < prev_end; ++k) {
      by_type[{entries_[k].hom.dom(), entries_[k].hom.cod()}].push_back(k);
    }
    for (const auto& [type, members] : by_type) {
      const WeilObject& cod = type.second;
      for (int pos = 0; pos < cod.factors(); ++pos) {
        if (cod.width(pos) != 1) continue;
        const RigHom q = weil_tangent::collapse_factor(cod, pos);
        std::map<RigHom, std::vector<std::size_t>> by_base;
        for (auto k : members) by_base[weil::compose(q, entries_[k].hom)].push_back(k);
        for (const auto& [base, group] : by_base) {
          for (int n = 2; n <= max_width_; ++n) pair_tuples(group, pos, n, d, prev_begin);
        }
      }
    }
    // VComp(t2, t1)
    for (const auto& [mid, ins] : by_cod) {
      auto outs = by_dom.find(mid);
      if (outs == by_dom.end()) continue;
      for (auto k1 : ins) {
        for (auto k2 : outs->second) {
          if (k1 < prev_begin && k2 < prev_begin) continue;
          if (entries_[k1].term->kind == Kind::Id || entries_[k2].term->kind == Kind::Id) continue;
          offer(VComp(entries_[k2].term, entries_[k1].term), d,
                weil::compose(entries_[k2].hom, entries_[k1].hom));
        }
      }
    }
    // whiskering
    for (std::size_t k = prev_begin; k < prev_end; ++k) {
      if (entries_[k].term->kind == Kind::Id) continue;
      for (int m = 1; m <= max_width_; ++m) {
        offer(WhiskerLeft(m, entries_[k].term), d,
              weil::tensor_hom(weil::identity(WeilObject::W(m)), entries_[k].hom));
      }
      for (const auto& r : universe_) {
        if (r.empty()) continue;
        offer(WhiskerRight(entries_[k].term, r), d, weil::tensor_hom(entries_[k].hom, weil::identity(WeilObject(r))));
      }
    }
    built_ = d;
  }

  void pair_tuples(const std::vector<std::size_t>& group, int pos, int n, int d, std::size_t prev_begin) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (bool more = true; more;) {
      bool fresh = false;
      for (auto k : idx) fresh = fresh || group[k] >= prev_begin;
      if (fresh) {
        std::vector<RigHom> legs;
        std::vector<TermPtr> terms;
        for (auto k : idx) {
          legs.push_back(entries_[group[k]].hom);
          terms.push_back(entries_[group[k]].term);
        }
        offer(Pair(pos, std::move(terms)), d, weil_tangent::pairing_at(pos, legs));
      }
      more = false;
      for (std::size_t q = idx.size(); q-- > 0;) {
        if (++idx[q] < group.size()) {
          more = true;
          break;
        }
        idx[q] = 0;
      }
    }
  }

  std::vector<Shape> universe_;
  std::set<Shape> allowed_;
  weil::Natural bound_;
  ExpressOptions opt_;
  int max_width_ = 1;
  int built_ = 0;
  std::vector<std::size_t> level_begin_{0};
  std::vector<Entry> entries_;
  std::map<RigHom, std::size_t> memo_;
};

namespace detail {

inline weil::Natural coefficient_bound(const RigHom& f) {
  weil::Natural b = 1;
  for (const auto& u : f.flat_images()) b = std::max(b, u.max_coefficient());
  return b;
}

}  // namespace detail

/// A minimal-depth structural term whose ℕ-component is f. Failure within
/// the budget raises ExpressBudgetExceeded, which says nothing about whether
/// a deeper term exists.
inline ExpressResult express(const RigHom& f, const ExpressOptions& opt = {}) {
  ExpressSearch search(shape_universe(f.dom().widths(), f.cod().widths(), opt.extra_layer),
                       detail::coefficient_bound(f), opt);
  if (auto r = search.find(f)) return *r;
  throw ExpressBudgetExceeded("express: no term of depth ≤ " + std::to_string(opt.max_depth) + " for " +
                              f.to_string());
}

inline ExpressResult express(const RigHom& f, int max_depth) {
  ExpressOptions opt;
  opt.max_depth = max_depth;
  return express(f, opt);
}

/// The functor shape of a Weil object.
inline Shape phi_object(const WeilObject& v) { return v.widths(); }

/// The transformation of f, tabulated at each given object.
template <api::TangentInstance I>
std::vector<std::pair<typename I::Object, typename I::Hom>> phi_hom(const RigHom& f, const I& inst,
                                                                     const std::vector<typename I::Object>& objects,
                                                                     const ExpressOptions& opt = {}) {
  const ExpressResult r = express(f, opt);
  std::vector<std::pair<typename I::Object, typename I::Hom>> out;
  for (const auto& x : objects) out.emplace_back(x, eval(*r.term, inst, x));
  return out;
}

/// f ∗ C: the instance fast path when there is one, otherwise the
/// evaluation of an expressing term at C.
template <api::TangentInstance I>
typename I::Hom star_hom(const I& inst, const RigHom& f, const typename I::Object& c,
                         const ExpressOptions& opt = {}) {
  if constexpr (requires { inst.star_hom(f, c); }) {
    return inst.star_hom(f, c);
  } else {
    return eval(*express(f, opt).term, inst, c);
  }
}

/// Φ(A ⊗ B) = Φ(A) ∘ Φ(B): shapes concatenate, and the evaluated functors
/// agree on every bounded object and on the bounded homs between them.
inline Report check_strong_monoidality(int max_factors, int max_width, unsigned coeff_bound,
                                       const std::vector<WeilObject>& test_objects) {
  const api::WeilInstance w;
  const auto objects = weil::objects_up_to(max_factors, max_width);
  Report r;
  r.check = "strong monoidality";
  json tn = json::array();
  for (const auto& x : test_objects) tn.push_back(x.to_string());
  r.truncation = json{{"max_factors", max_factors}, {"max_width", max_width},
                      {"coeff_bound", coeff_bound}, {"test_objects", tn}};
  std::vector<RigHom> homs;
  for (const auto& x : test_objects) {
    for (const auto& y : test_objects) {
      auto hs = weil::enumerate_homs(x, y, coeff_bound);
      homs.insert(homs.end(), hs.begin(), hs.end());
    }
  }
  for (const auto& a : objects) {
    for (const auto& b : objects) {
      if (a.factors() + b.factors() > WeilObject::kMaxFactors) continue;
      const std::string label = a.to_string() + " ⊗ " + b.to_string();
      const WeilObject ab = weil::tensor_obj(a, b);
      const Shape sa = phi_object(a), sb = phi_object(b);
      CheckItem shape{"monoidal.shape", label, phi_object(ab) == concat(sa, sb), nullptr, nullptr};
      if (!shape.pass) shape.counterexample = json{{"shape", phi_object(ab)}};
      r.add(std::move(shape));

      CheckItem obj{"monoidal.objects", label, true, nullptr, nullptr};
      for (const auto& x : test_objects) {
        const auto lhs = shape_object(w, phi_object(ab), x);
        const auto rhs = shape_object(w, sa, shape_object(w, sb, x));
        if (lhs != rhs || lhs != api::star(w, ab, x)) {
          obj.pass = false;
          obj.counterexample = json{{"object", x.to_string()}, {"lhs", lhs.to_string()}, {"rhs", rhs.to_string()}};
          break;
        }
      }
      r.add(std::move(obj));

      CheckItem hom{"monoidal.homs", label, true, nullptr, json{{"homs", homs.size()}}};
      for (const auto& f : homs) {
        const auto lhs = shape_hom(w, phi_object(ab), f);
        const auto rhs = shape_hom(w, sa, shape_hom(w, sb, f));
        if (lhs != rhs || lhs != weil::tensor_hom(weil::identity(ab), f)) {
          hom.pass = false;
          hom.counterexample = json{{"hom", f}, {"lhs", lhs.to_string()}, {"rhs", rhs.to_string()}};
          break;
        }
      }
      r.add(std::move(hom));
    }
  }
  r.sort();
  return r;
}

}  // namespace tangent::coherence
