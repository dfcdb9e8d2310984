#pragma once

// Test-side reference arithmetic for Weil rigs. Elements are maps from pick
// vectors (one entry per factor, 0 = unit, j = x_j) to coefficients; nothing
// here touches the library's packed monomials except at the conversion
// boundary.

#include <cstdint>
#include <map>
#include <vector>

#include "tangent/weil.hpp"

namespace oracle {

using Picks = std::vector<int>;
using Poly = std::map<Picks, std::uint64_t>;

struct SplitMix {
  std::uint64_t state;
  std::uint64_t operator()() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return (*this)() % n; }
};

inline std::vector<Picks> basis(const std::vector<int>& widths) {
  std::vector<Picks> out{Picks(widths.size(), 0)};
  for (std::size_t i = 0; i < widths.size(); ++i) {
    std::vector<Picks> next;
    for (const auto& p : out) {
      for (int j = 0; j <= widths[i]; ++j) {
        auto q = p;
        q[i] = j;
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [pa, ca] : a) {
    for (const auto& [pb, cb] : b) {
      Picks p(pa.size());
      bool zero = false;
      for (std::size_t i = 0; i < pa.size(); ++i) {
        if (pa[i] && pb[i]) zero = true;
        p[i] = pa[i] + pb[i];
      }
      if (!zero) out[p] += ca * cb;
    }
  }
  return out;
}

inline Poly add(Poly a, const Poly& b) {
  for (const auto& [p, c] : b) a[p] += c;
  return a;
}

inline Poly constant(std::size_t factors, std::uint64_t c) { return c ? Poly{{Picks(factors, 0), c}} : Poly{}; }

inline Poly from(const tangent::weil::WeilElement& u) {
  Poly out;
  for (const auto& [m, c] : u.terms()) out[m.picks(u.object())] = static_cast<std::uint64_t>(c);
  return out;
}

inline tangent::weil::WeilElement to(const tangent::weil::WeilObject& a, const Poly& p) {
  std::vector<tangent::weil::WeilElement::Term> terms;
  for (const auto& [picks, c] : p) {
    tangent::weil::Monomial m;
    for (std::size_t i = 0; i < picks.size(); ++i) m = m.with_pick(static_cast<int>(i), picks[i]);
    terms.emplace_back(m, c);
  }
  return tangent::weil::WeilElement(a, terms);
}

/// f given by generator images (flat, factor-major) applied to u.
inline Poly apply(const std::vector<int>& dom, std::size_t cod_factors, const std::vector<Poly>& images,
                  const Poly& u) {
  Poly out;
  for (const auto& [picks, c] : u) {
    Poly term = constant(cod_factors, c);
    std::size_t off = 0;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (picks[i]) term = mul(term, images[off + static_cast<std::size_t>(picks[i]) - 1]);
      off += static_cast<std::size_t>(dom[i]);
    }
    out = add(out, term);
  }
  return out;
}

inline std::vector<Poly> images_of(const tangent::weil::RigHom& f) {
  std::vector<Poly> out;
  for (const auto& u : f.flat_images()) out.push_back(from(u));
  return out;
}

inline bool is_zero(const Poly& p) {
  for (const auto& [k, c] : p) {
    if (c) return false;
  }
  return true;
}

/// Every hom dom → cod with coefficients ≤ bound: all image tables over the
/// non-unit basis, kept when x_j x_j' = 0 holds inside each factor.
inline std::vector<std::vector<Poly>> brute_force_homs(const std::vector<int>& dom, const std::vector<int>& cod,
                                                       std::uint64_t bound) {
  auto mons = basis(cod);
  mons.erase(mons.begin());
  std::vector<Poly> candidates;
  std::vector<std::uint64_t> coef(mons.size(), 0);
  while (true) {
    Poly p;
    for (std::size_t k = 0; k < mons.size(); ++k) {
      if (coef[k]) p[mons[k]] = coef[k];
    }
    if (is_zero(mul(p, p))) candidates.push_back(p);
    std::size_t k = 0;
    while (k < coef.size() && ++coef[k] > bound) coef[k++] = 0;
    if (k == coef.size()) break;
  }
  std::size_t gens = 0;
  for (int w : dom) gens += static_cast<std::size_t>(w);
  std::vector<std::vector<Poly>> out;
  std::vector<Poly> cur;
  auto rec = [&](auto&& self, std::size_t factor, int j) -> void {
    if (cur.size() == gens) {
      out.push_back(cur);
      return;
    }
    if (j > dom[factor]) {
      self(self, factor + 1, 1);
      return;
    }
    const std::size_t first = cur.size() - static_cast<std::size_t>(j - 1);
    for (const auto& p : candidates) {
      bool ok = true;
      for (std::size_t k = first; k < cur.size() && ok; ++k) ok = is_zero(mul(cur[k], p));
      if (!ok) continue;
      cur.push_back(p);
      self(self, factor, j + 1);
      cur.pop_back();
    }
  };
  if (gens == 0) return {{}};
  rec(rec, 0, 1);
  return out;
}

inline std::vector<tangent::weil::WeilObject> objects(int max_factors, int max_width) {
  return tangent::weil::objects_up_to(max_factors, max_width);
}

}  // namespace oracle
