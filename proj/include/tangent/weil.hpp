#pragma once

// Exact arithmetic in Weil rigs W_{n_1} ⊗ ... ⊗ W_{n_k}, where
// W_n = N[x_1..x_n] / (x_i x_j), and the rig homomorphisms between them.
//
// Objects and monomials are packed four bits per factor into a 64-bit word,
// factor 0 in the most significant nibble. That caps objects at 16 factors of
// width at most 15, far beyond anything the verification sweeps touch, and
// makes the lexicographic order on pick vectors coincide with integer order.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "tangent/errors.hpp"

namespace tangent::weil {

using Natural = boost::multiprecision::cpp_int;
using json = nlohmann::json;

namespace detail {

inline constexpr int kNibbleBits = 4;
inline constexpr int kMaxSlots = 16;

constexpr int shift_of(int i) { return 60 - kNibbleBits * i; }

constexpr std::uint64_t get_nibble(std::uint64_t word, int i) {
  return (word >> shift_of(i)) & 0xFu;
}

constexpr std::uint64_t set_nibble(std::uint64_t word, int i, std::uint64_t v) {
  const std::uint64_t mask = std::uint64_t{0xF} << shift_of(i);
  return (word & ~mask) | (v << shift_of(i));
}

// One bit per nonzero nibble.
constexpr std::uint64_t occupied(std::uint64_t word) {
  return (word | (word >> 1) | (word >> 2) | (word >> 3)) & 0x1111111111111111ULL;
}

}  // namespace detail

/// W_{n_1} ⊗ ... ⊗ W_{n_k}, stored as its width list. The empty list is ℕ,
/// which makes ⊗ strictly associative and unital.
class WeilObject {
 public:
  static constexpr int kMaxFactors = detail::kMaxSlots;
  static constexpr int kMaxWidth = 15;

  WeilObject() = default;

  WeilObject(std::initializer_list<int> widths)
      : WeilObject(std::span<const int>(widths.begin(), widths.size())) {}

  explicit WeilObject(std::span<const int> widths) {
    if (widths.size() > static_cast<std::size_t>(kMaxFactors)) {
      throw Error("WeilObject: more than 16 factors");
    }
    for (std::size_t i = 0; i < widths.size(); ++i) {
      if (widths[i] < 1 || widths[i] > kMaxWidth) {
        throw Error("WeilObject: factor widths must lie in 1..15");
      }
      packed_ = detail::set_nibble(packed_, static_cast<int>(i),
                                   static_cast<std::uint64_t>(widths[i]));
    }
    factors_ = static_cast<std::uint8_t>(widths.size());
  }

  explicit WeilObject(const std::vector<int>& widths)
      : WeilObject(std::span<const int>(widths)) {}

  static WeilObject unit() { return {}; }
  static WeilObject W(int n = 1) { return WeilObject{n}; }

  int factors() const noexcept { return factors_; }
  int width(int i) const noexcept {
    return static_cast<int>(detail::get_nibble(packed_, i));
  }
  bool is_unit() const noexcept { return factors_ == 0; }
  std::uint64_t packed() const noexcept { return packed_; }

  std::vector<int> widths() const {
    std::vector<int> out;
    out.reserve(factors_);
    for (int i = 0; i < factors_; ++i) out.push_back(width(i));
    return out;
  }

  int generator_count() const noexcept {
    int n = 0;
    for (int i = 0; i < factors_; ++i) n += width(i);
    return n;
  }

  /// ∏ (n_i + 1).
  std::uint64_t basis_size() const noexcept {
    std::uint64_t n = 1;
    for (int i = 0; i < factors_; ++i) n *= static_cast<std::uint64_t>(width(i) + 1);
    return n;
  }

  /// "N", "W", "W2", "W⊗W2", ...
  std::string to_string() const {
    if (factors_ == 0) return "N";
    std::string s;
    for (int i = 0; i < factors_; ++i) {
      if (i) s += "⊗";
      s += "W";
      if (width(i) != 1) s += std::to_string(width(i));
    }
    return s;
  }

  friend bool operator==(const WeilObject&, const WeilObject&) = default;
  friend auto operator<=>(const WeilObject& a, const WeilObject& b) {
    if (auto c = a.factors_ <=> b.factors_; c != 0) return c;
    return a.packed_ <=> b.packed_;
  }

 private:
  std::uint8_t factors_ = 0;
  std::uint64_t packed_ = 0;
};

inline WeilObject tensor_obj(const WeilObject& a, const WeilObject& b) {
  if (a.factors() + b.factors() > WeilObject::kMaxFactors) {
    throw Error("tensor_obj: more than 16 factors");
  }
  auto w = a.widths();
  auto v = b.widths();
  w.insert(w.end(), v.begin(), v.end());
  return WeilObject(w);
}

/// All objects with at most `max_factors` factors each of width at most
/// `max_width`, ordered by factor count and then lexicographically.
inline std::vector<WeilObject> objects_up_to(int max_factors, int max_width) {
  std::vector<WeilObject> out{WeilObject{}};
  std::vector<std::vector<int>> layer{{}};
  for (int k = 1; k <= max_factors; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& ws : layer) {
      for (int n = 1; n <= max_width; ++n) {
        auto w = ws;
        w.push_back(n);
        next.push_back(std::move(w));
      }
    }
    std::sort(next.begin(), next.end());
    for (const auto& ws : next) out.emplace_back(ws);
    layer = std::move(next);
  }
  return out;
}

/// A canonical basis monomial: one pick per factor, 0 meaning the factor
/// contributes 1 and j ≥ 1 meaning the generator x_j of that factor.
struct Monomial {
  std::uint64_t bits = 0;

  static Monomial unit() { return {}; }

  int pick(int i) const noexcept {
    return static_cast<int>(detail::get_nibble(bits, i));
  }
  Monomial with_pick(int i, int v) const {
    return {detail::set_nibble(bits, i, static_cast<std::uint64_t>(v))};
  }
  bool is_unit() const noexcept { return bits == 0; }
  std::uint64_t support() const noexcept { return detail::occupied(bits); }

  std::vector<int> picks(const WeilObject& a) const {
    std::vector<int> out;
    for (int i = 0; i < a.factors(); ++i) out.push_back(pick(i));
    return out;
  }

  friend bool operator==(Monomial, Monomial) = default;
  friend auto operator<=>(Monomial, Monomial) = default;
};

/// Product of basis monomials; empty when some factor is hit twice.
inline std::optional<Monomial> monomial_mul(Monomial a, Monomial b) {
  if (a.support() & b.support()) return std::nullopt;
  return Monomial{a.bits | b.bits};
}

inline bool is_valid_monomial(const WeilObject& a, Monomial m) {
  for (int i = 0; i < WeilObject::kMaxFactors; ++i) {
    const int p = m.pick(i);
    if (i >= a.factors()) {
      if (p != 0) return false;
    } else if (p > a.width(i)) {
      return false;
    }
  }
  return true;
}

/// Every basis monomial of `a` in lexicographic pick order (unit first).
inline std::vector<Monomial> basis(const WeilObject& a) {
  std::vector<Monomial> out{Monomial::unit()};
  for (int i = 0; i < a.factors(); ++i) {
    std::vector<Monomial> next;
    next.reserve(out.size() * static_cast<std::size_t>(a.width(i) + 1));
    for (Monomial m : out) {
      for (int j = 0; j <= a.width(i); ++j) next.push_back(m.with_pick(i, j));
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Display name of a generator: x, y, x_1, x_2, ... when the object is small
// enough for the two-letter aliases, otherwise x(i,j) with 1-based indices.
inline std::string generator_name(const WeilObject& a, int factor, int gen) {
  bool aliases = a.factors() <= 2;
  for (int i = 0; i < a.factors(); ++i) aliases = aliases && a.width(i) <= 2;
  if (aliases) {
    std::string s(1, factor == 0 ? 'x' : 'y');
    if (a.width(factor) > 1) s += "_" + std::to_string(gen);
    return s;
  }
  return "x(" + std::to_string(factor + 1) + "," + std::to_string(gen) + ")";
}

inline std::string monomial_name(const WeilObject& a, Monomial m) {
  if (m.is_unit()) return "1";
  std::string s;
  for (int i = 0; i < a.factors(); ++i) {
    if (m.pick(i)) s += generator_name(a, i, m.pick(i));
  }
  return s;
}

/// An element of a Weil object: a finitely supported ℕ-combination of basis
/// monomials, kept sorted by monomial with zero coefficients stripped.
class WeilElement {
 public:
  using Term = std::pair<Monomial, Natural>;

  WeilElement() = default;
  explicit WeilElement(WeilObject object) : object_(object) {}

  /// Canonicalizes an arbitrary list of terms (duplicates summed, zeros
  /// dropped). Every monomial must belong to `object`.
  WeilElement(WeilObject object, std::vector<Term> terms) : object_(object) {
    for (const auto& [m, c] : terms) {
      if (!is_valid_monomial(object, m)) {
        throw ObjectMismatch("WeilElement: monomial outside " + object.to_string());
      }
    }
    terms_ = std::move(terms);
    canonicalize();
  }

  static WeilElement zero(const WeilObject& a) { return WeilElement(a); }
  static WeilElement one(const WeilObject& a) { return constant(a, 1); }
  static WeilElement constant(const WeilObject& a, const Natural& c) {
    return monomial(a, Monomial::unit(), c);
  }
  static WeilElement monomial(const WeilObject& a, Monomial m, const Natural& c = 1) {
    WeilElement u(a);
    if (!is_valid_monomial(a, m)) throw ObjectMismatch("monomial outside object");
    if (c != 0) u.terms_.emplace_back(m, c);
    return u;
  }
  /// The generator x_{gen} of factor `factor` (0-based factor, 1-based gen).
  static WeilElement generator(const WeilObject& a, int factor, int gen,
                               const Natural& c = 1) {
    if (factor < 0 || factor >= a.factors() || gen < 1 || gen > a.width(factor)) {
      throw ObjectMismatch("generator index outside " + a.to_string());
    }
    return monomial(a, Monomial{}.with_pick(factor, gen), c);
  }

  const WeilObject& object() const noexcept { return object_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Natural coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial k) { return t.first < k; });
    if (it != terms_.end() && it->first == m) return it->second;
    return 0;
  }
  Natural constant_term() const { return coefficient(Monomial::unit()); }

  /// Largest coefficient, 0 for the zero element.
  Natural max_coefficient() const {
    Natural best = 0;
    for (const auto& t : terms_) best = std::max(best, t.second);
    return best;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      if (m.is_unit()) {
        os << c;
      } else {
        if (c != 1) os << c;
        os << monomial_name(object_, m);
      }
    }
    return os.str();
  }

  friend bool operator==(const WeilElement& a, const WeilElement& b) {
    return a.object_ == b.object_ && a.terms_ == b.terms_;
  }

  // Objects first, then the dense coefficient vectors over the basis compared
  // lexicographically in monomial order.
  friend bool operator<(const WeilElement& a, const WeilElement& b) {
    if (a.object_ != b.object_) return a.object_ < b.object_;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() ||
          (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        return false;  // a has a positive coefficient where b has 0
      }
      if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        return true;
      }
      if (a.terms_[i].second != b.terms_[j].second) {
        return a.terms_[i].second < b.terms_[j].second;
      }
      ++i;
      ++j;
    }
    return false;
  }

  // Trusted construction from already-canonical terms.
  static WeilElement from_canonical(WeilObject object, std::vector<Term> terms) {
    WeilElement u(object);
    u.terms_ = std::move(terms);
    return u;
  }

 private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second += t.second;
      } else {
        out.push_back(std::move(t));
      }
    }
    std::erase_if(out, [](const Term& t) { return t.second == 0; });
    terms_ = std::move(out);
  }

  WeilObject object_;
  std::vector<Term> terms_;
};

namespace detail {

inline void require_same(const WeilElement& u, const WeilElement& v, const char* op) {
  if (u.object() != v.object()) {
    throw ObjectMismatch(std::string(op) + ": " + u.object().to_string() + " vs " +
                         v.object().to_string());
  }
}

}  // namespace detail

inline WeilElement operator+(const WeilElement& u, const WeilElement& v) {
  detail::require_same(u, v, "add");
  std::vector<WeilElement::Term> terms;
  terms.reserve(u.terms().size() + v.terms().size());
  std::size_t i = 0, j = 0;
  const auto& a = u.terms();
  const auto& b = v.terms();
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      terms.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      terms.push_back(b[j++]);
    } else {
      terms.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return WeilElement::from_canonical(u.object(), std::move(terms));
}

inline WeilElement operator*(const WeilElement& u, const WeilElement& v) {
  detail::require_same(u, v, "mul");
  std::vector<WeilElement::Term> terms;
  for (const auto& [m1, c1] : u.terms()) {
    for (const auto& [m2, c2] : v.terms()) {
      if (auto m = monomial_mul(m1, m2)) terms.emplace_back(*m, c1 * c2);
    }
  }
  return WeilElement(u.object(), std::move(terms));
}

inline WeilElement scale(const WeilElement& u, const Natural& c) {
  if (c == 0) return WeilElement::zero(u.object());
  auto terms = u.terms();
  for (auto& t : terms) t.second *= c;
  return WeilElement::from_canonical(u.object(), std::move(terms));
}

inline WeilElement add(const WeilObject& a, const WeilElement& u, const WeilElement& v) {
  if (u.object() != a) throw ObjectMismatch("add: element not in " + a.to_string());
  return u + v;
}

inline WeilElement mul(const WeilObject& a, const WeilElement& u, const WeilElement& v) {
  if (u.object() != a) throw ObjectMismatch("mul: element not in " + a.to_string());
  return u * v;
}

/// Re-reads `u` inside `target`, shifting its factors right by `offset`.
/// `target` must carry u's factors at positions offset.. (unchecked).
inline WeilElement embed(const WeilElement& u, const WeilObject& target, int offset) {
  auto terms = u.terms();
  for (auto& t : terms) t.first.bits >>= detail::kNibbleBits * offset;
  return WeilElement::from_canonical(target, std::move(terms));
}

/// A rig homomorphism between Weil objects, presented by the images of the
/// generators. Since ⊗ is the coproduct of commutative rigs, a hom out of a
/// tensor is one hom per factor.
class RigHom {
 public:
  RigHom() = default;

  /// Validating constructor (mk_hom).
  RigHom(WeilObject dom, WeilObject cod, const std::vector<std::vector<WeilElement>>& images)
      : dom_(dom), cod_(cod) {
    if (static_cast<int>(images.size()) != dom.factors()) {
      throw ObjectMismatch("mk_hom: image table has wrong number of factors");
    }
    for (int i = 0; i < dom.factors(); ++i) {
      if (static_cast<int>(images[i].size()) != dom.width(i)) {
        throw ObjectMismatch("mk_hom: image table has wrong width at factor " +
                             std::to_string(i + 1));
      }
      for (const auto& u : images[i]) {
        if (u.object() != cod) throw ObjectMismatch("mk_hom: image not in codomain");
        images_.push_back(u);
      }
    }
    for (int i = 0; i < dom.factors(); ++i) {
      for (int j = 1; j <= dom.width(i); ++j) {
        if (image(i, j).constant_term() != 0) {
          throw ConstantPartNonzero("mk_hom: image of " + generator_name(dom, i, j) +
                                    " has constant part " +
                                    image(i, j).constant_term().str());
        }
      }
    }
    for (int i = 0; i < dom.factors(); ++i) {
      for (int j = 1; j <= dom.width(i); ++j) {
        for (int j2 = j; j2 <= dom.width(i); ++j2) {
          if (!(image(i, j) * image(i, j2)).is_zero()) {
            throw RelationViolation(
                i + 1, j, j2,
                "mk_hom: images of " + generator_name(dom, i, j) + " and " +
                    generator_name(dom, i, j2) + " have nonzero product");
          }
        }
      }
    }
  }

  // Trusted construction from a flat, already valid image list.
  static RigHom from_valid(WeilObject dom, WeilObject cod, std::vector<WeilElement> flat) {
    RigHom f;
    f.dom_ = dom;
    f.cod_ = cod;
    f.images_ = std::move(flat);
    return f;
  }

  static RigHom identity(const WeilObject& a) {
    std::vector<WeilElement> flat;
    for (int i = 0; i < a.factors(); ++i) {
      for (int j = 1; j <= a.width(i); ++j) flat.push_back(WeilElement::generator(a, i, j));
    }
    return from_valid(a, a, std::move(flat));
  }

  /// The unique hom out of ℕ.
  static RigHom from_unit(const WeilObject& b) { return from_valid({}, b, {}); }

  const WeilObject& dom() const noexcept { return dom_; }
  const WeilObject& cod() const noexcept { return cod_; }

  /// Image of generator x_gen (1-based) of factor `factor` (0-based).
  const WeilElement& image(int factor, int gen) const {
    int off = 0;
    for (int i = 0; i < factor; ++i) off += dom_.width(i);
    return images_[static_cast<std::size_t>(off + gen - 1)];
  }
  const std::vector<WeilElement>& flat_images() const noexcept { return images_; }

  std::vector<std::vector<WeilElement>> images() const {
    std::vector<std::vector<WeilElement>> out(static_cast<std::size_t>(dom_.factors()));
    std::size_t k = 0;
    for (int i = 0; i < dom_.factors(); ++i) {
      for (int j = 0; j < dom_.width(i); ++j) out[i].push_back(images_[k++]);
    }
    return out;
  }

  bool is_identity() const { return dom_ == cod_ && *this == identity(dom_); }

  std::string to_string() const {
    std::ostringstream os;
    os << dom_.to_string() << " → " << cod_.to_string() << " {";
    bool first = true;
    for (int i = 0; i < dom_.factors(); ++i) {
      for (int j = 1; j <= dom_.width(i); ++j) {
        os << (first ? " " : ", ") << generator_name(dom_, i, j) << " ↦ "
           << image(i, j).to_string();
        first = false;
      }
    }
    os << (first ? "}" : " }");
    return os.str();
  }

  friend bool operator==(const RigHom& a, const RigHom& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.images_ == b.images_;
  }
  friend bool operator<(const RigHom& a, const RigHom& b) {
    if (a.dom_ != b.dom_) return a.dom_ < b.dom_;
    if (a.cod_ != b.cod_) return a.cod_ < b.cod_;
    return std::lexicographical_compare(a.images_.begin(), a.images_.end(),
                                        b.images_.begin(), b.images_.end());
  }

 private:
  WeilObject dom_, cod_;
  std::vector<WeilElement> images_;
};

inline RigHom mk_hom(const WeilObject& dom, const WeilObject& cod,
                     const std::vector<std::vector<WeilElement>>& images) {
  return RigHom(dom, cod, images);
}

/// f(u): substitute generator images into u's monomials and multiply out.
inline WeilElement apply_hom(const RigHom& f, const WeilElement& u) {
  if (u.object() != f.dom()) {
    throw ObjectMismatch("apply_hom: element of " + u.object().to_string() +
                         " given to a hom out of " + f.dom().to_string());
  }
  const WeilObject& b = f.cod();
  std::vector<WeilElement::Term> terms;
  for (const auto& [m, c] : u.terms()) {
    WeilElement value = WeilElement::constant(b, c);
    for (int i = 0; i < f.dom().factors() && !value.is_zero(); ++i) {
      if (m.pick(i)) value = value * f.image(i, m.pick(i));
    }
    for (auto& t : value.terms()) terms.push_back(t);
  }
  return WeilElement(b, std::move(terms));
}

/// g ∘ f, f applied first.
inline RigHom compose(const RigHom& g, const RigHom& f) {
  if (f.cod() != g.dom()) {
    throw ObjectMismatch("compose: " + f.cod().to_string() + " ≠ " + g.dom().to_string());
  }
  std::vector<WeilElement> flat;
  flat.reserve(f.flat_images().size());
  for (const auto& u : f.flat_images()) flat.push_back(apply_hom(g, u));
  return RigHom::from_valid(f.dom(), g.cod(), std::move(flat));
}

/// f ⊗ g, acting factorwise.
inline RigHom tensor_hom(const RigHom& f, const RigHom& g) {
  const WeilObject dom = tensor_obj(f.dom(), g.dom());
  const WeilObject cod = tensor_obj(f.cod(), g.cod());
  std::vector<WeilElement> flat;
  for (const auto& u : f.flat_images()) flat.push_back(embed(u, cod, 0));
  for (const auto& u : g.flat_images()) flat.push_back(embed(u, cod, f.cod().factors()));
  return RigHom::from_valid(dom, cod, std::move(flat));
}

inline RigHom tensor_hom(std::initializer_list<RigHom> homs) {
  RigHom out = RigHom::identity({});
  for (const auto& h : homs) out = tensor_hom(out, h);
  return out;
}

inline RigHom identity(const WeilObject& a) { return RigHom::identity(a); }

// ---------------------------------------------------------------------------
// Bounded enumeration

/// Every u in `b` with u·u = 0 and all coefficients ≤ coeff_bound, ordered
/// lexicographically by coefficient vector. Over ℕ no cancellation occurs, so
/// u² = 0 exactly when no two support monomials have disjoint supports (and
/// u has no constant term).
inline std::vector<WeilElement> square_zero_elements(const WeilObject& b, unsigned coeff_bound,
                                                     std::size_t cap = 1'000'000) {
  std::vector<Monomial> monos = basis(b);
  monos.erase(monos.begin());  // unit
  std::vector<WeilElement> out;
  std::vector<WeilElement::Term> chosen;

  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == monos.size()) {
      if (out.size() >= cap) {
        throw BudgetExceeded("square_zero_elements: more than " + std::to_string(cap) +
                             " elements in " + b.to_string());
      }
      out.push_back(WeilElement::from_canonical(b, chosen));
      return;
    }
    self(self, idx + 1);
    const Monomial m = monos[idx];
    for (const auto& t : chosen) {
      if (!(t.first.support() & m.support())) return;
    }
    for (unsigned c = 1; c <= coeff_bound; ++c) {
      chosen.emplace_back(m, c);
      self(self, idx + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

namespace detail {

// All n-tuples from `pool` with pairwise (and self) products zero.
inline std::vector<std::vector<std::size_t>> compatible_tuples(
    const std::vector<WeilElement>& pool, int n, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  // pool elements are already square-zero; pairwise compatibility table is
  // computed lazily because pools can be large while n is tiny.
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == n) {
      if (out.size() >= cap) throw BudgetExceeded("enumerate_homs: tuple budget exceeded");
      out.push_back(cur);
      return;
    }
    for (std::size_t k = 0; k < pool.size(); ++k) {
      bool ok = true;
      for (std::size_t prev : cur) {
        if (!(pool[prev] * pool[k]).is_zero()) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      cur.push_back(k);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace detail

/// Every valid hom a → b whose image coefficients are all ≤ coeff_bound,
/// ordered lexicographically by (factor, generator, image). Complete within
/// the bound only: hom-sets of 𝒲 are infinite.
inline std::vector<RigHom> enumerate_homs(const WeilObject& a, const WeilObject& b,
                                          unsigned coeff_bound, std::size_t cap = 200'000) {
  if (a.is_unit()) return {RigHom::from_unit(b)};
  const auto pool = square_zero_elements(b, coeff_bound, cap);
  std::vector<std::vector<std::vector<std::size_t>>> per_factor;
  std::size_t total = 1;
  for (int i = 0; i < a.factors(); ++i) {
    per_factor.push_back(detail::compatible_tuples(pool, a.width(i), cap));
    total *= per_factor.back().size();
    if (total > cap) {
      throw BudgetExceeded("enumerate_homs: more than " + std::to_string(cap) + " homs " +
                           a.to_string() + " → " + b.to_string());
    }
  }
  std::vector<RigHom> out;
  out.reserve(total);
  std::vector<std::size_t> pos(per_factor.size(), 0);
  while (true) {
    std::vector<WeilElement> flat;
    for (std::size_t i = 0; i < per_factor.size(); ++i) {
      for (std::size_t k : per_factor[i][pos[i]]) flat.push_back(pool[k]);
    }
    out.push_back(RigHom::from_valid(a, b, std::move(flat)));
    // odometer, last factor fastest
    std::size_t i = per_factor.size();
    while (i > 0) {
      --i;
      if (++pos[i] < per_factor[i].size()) break;
      pos[i] = 0;
      if (i == 0) return out;
    }
    if (per_factor.empty()) return out;
  }
}

/// Size of the bounded hom set without materializing it; nullopt when some
/// intermediate count passes `cap`.
inline std::optional<std::size_t> count_homs(const WeilObject& a, const WeilObject& b,
                                             unsigned coeff_bound, std::size_t cap) {
  if (a.is_unit()) return 1;
  try {
    const auto pool = square_zero_elements(b, coeff_bound, cap);
    std::size_t total = 1;
    for (int i = 0; i < a.factors(); ++i) {
      total *= detail::compatible_tuples(pool, a.width(i), cap).size();
      if (total > cap) return std::nullopt;
    }
    return total;
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

/// A valid hom a → b with coefficients ≤ coeff_bound drawn from `next`, a
/// source of uniform 64-bit words. Each factor's images are grown greedily
/// over a shuffled monomial order, keeping the union of supports pairwise
/// overlapping, which is exactly the relation check.
template <class Rng>
RigHom random_hom(const WeilObject& a, const WeilObject& b, unsigned coeff_bound, Rng& next) {
  std::vector<Monomial> monos = basis(b);
  monos.erase(monos.begin());
  std::vector<WeilElement> flat;
  for (int i = 0; i < a.factors(); ++i) {
    std::vector<Monomial> used;
    for (int j = 1; j <= a.width(i); ++j) {
      std::vector<Monomial> order = monos;
      for (std::size_t k = order.size(); k > 1; --k) {
        std::swap(order[k - 1], order[next() % k]);
      }
      std::vector<WeilElement::Term> terms;
      if (coeff_bound > 0) {
        for (Monomial m : order) {
          if (next() % 3 != 0) continue;
          bool ok = true;
          for (Monomial u : used) ok = ok && (u.support() & m.support());
          for (const auto& t : terms) ok = ok && (t.first.support() & m.support());
          if (!ok) continue;
          terms.emplace_back(m, 1 + next() % coeff_bound);
        }
      }
      for (const auto& t : terms) used.push_back(t.first);
      flat.emplace_back(b, std::move(terms));
    }
  }
  return RigHom::from_valid(a, b, std::move(flat));
}

// ---------------------------------------------------------------------------
// JSON: object = widths; monomial = picks; element = [[picks, "coef"], ...]
// in monomial order; hom = {dom, cod, images: [[element, ...], ...]}.

inline void to_json(json& j, const WeilObject& a) { j = a.widths(); }
inline void from_json(const json& j, WeilObject& a) { a = WeilObject(j.get<std::vector<int>>()); }

inline json element_to_json(const WeilElement& u) {
  json arr = json::array();
  for (const auto& [m, c] : u.terms()) arr.push_back(json::array({m.picks(u.object()), c.str()}));
  return arr;
}

inline WeilElement element_from_json(const json& j, const WeilObject& a) {
  if (!j.is_array()) throw ParseError("element: expected an array of [monomial, coefficient]");
  std::vector<WeilElement::Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2) throw ParseError("element: malformed term");
    const auto picks = t[0].get<std::vector<int>>();
    if (static_cast<int>(picks.size()) != a.factors()) {
      throw ParseError("element: monomial length does not match " + a.to_string());
    }
    Monomial m;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      if (picks[i] < 0 || picks[i] > a.width(static_cast<int>(i))) {
        throw ParseError("element: pick out of range");
      }
      m = m.with_pick(static_cast<int>(i), picks[i]);
    }
    Natural c;
    if (t[1].is_string()) {
      const auto s = t[1].get<std::string>();
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
        throw ParseError("element: coefficient must be a decimal natural");
      }
      c = Natural(s);
    } else if (t[1].is_number_unsigned()) {
      c = t[1].get<std::uint64_t>();
    } else {
      throw ParseError("element: coefficient must be a decimal string");
    }
    terms.emplace_back(m, c);
  }
  return WeilElement(a, std::move(terms));
}

inline void to_json(json& j, const RigHom& f) {
  json images = json::array();
  for (const auto& row : f.images()) {
    json r = json::array();
    for (const auto& u : row) r.push_back(element_to_json(u));
    images.push_back(std::move(r));
  }
  j = json{{"dom", f.dom()}, {"cod", f.cod()}, {"images", std::move(images)}};
}

inline RigHom hom_from_json(const json& j) {
  try {
    const auto dom = j.at("dom").get<WeilObject>();
    const auto cod = j.at("cod").get<WeilObject>();
    std::vector<std::vector<WeilElement>> images;
    for (const auto& row : j.at("images")) {
      std::vector<WeilElement> r;
      for (const auto& u : row) r.push_back(element_from_json(u, cod));
      images.push_back(std::move(r));
    }
    return mk_hom(dom, cod, images);
  } catch (const json::exception& e) {
    throw ParseError(std::string("hom: ") + e.what());
  }
}

inline void from_json(const json& j, RigHom& f) { f = hom_from_json(j); }

}  // namespace tangent::weil
