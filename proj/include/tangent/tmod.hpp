#pragma once

// Tangent modules from an instance 𝒞 to Weil rigs: set-valued functors
// X : 𝒞^op × 𝒲 → Set that preserve tangent limits in the second variable,
// with an operator T_X : X(D, A) → X(TD, TA). Modules are symbolic
// descriptors whose element sets are enumerated on demand over a finite
// truncation.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tangent/coherence.hpp"
#include "tangent/parallel.hpp"
#include "tangent/report.hpp"
#include "tangent/tangent_api.hpp"
#include "tangent/tangent_w.hpp"
#include "tangent/weil.hpp"

namespace tangent::tmod {

using weil::RigHom;
using weil::WeilObject;

/// Finite window over which every module quantifier ranges.
template <api::TangentInstance I>
struct Truncation {
  std::vector<typename I::Object> c_objects;
  std::vector<WeilObject> w_objects;
  unsigned coeff_bound = 1;
  /// Second-variable objects at which limit preservation is checked.
  std::vector<WeilObject> limit_objects = {WeilObject{}, WeilObject{1}};
  int max_n = 2;
  /// Windows (D, A) with more elements than this are left out of sweeps and
  /// listed in the report.
  std::size_t element_cap = 5000;
  /// Functoriality and naturality use at most this many elements per
  /// window (a fixed stride through the sorted set) and the instance's
  /// naturality homs.
  std::size_t naturality_elements = 64;
};

/// The standard truncation: 𝒞-objects ℕ and W; 𝒲-objects with ≤ 2
/// factors of width ≤ 2; coefficients ≤ 1.
inline Truncation<api::WeilInstance> standard_truncation() {
  Truncation<api::WeilInstance> t;
  t.c_objects = {WeilObject{}, WeilObject{1}};
  t.w_objects = weil::objects_up_to(2, 2);
  t.coeff_bound = 1;
  return t;
}

/// The Weil instance whose enumeration bounds match a truncation.
inline api::WeilInstance instance_for(const Truncation<api::WeilInstance>& t) {
  weil_tangent::AxiomOptions o;
  o.coeff_bound = t.coeff_bound;
  o.max_factors = 0;
  o.max_width = 1;
  for (const auto& x : t.c_objects) {
    o.max_factors = std::max(o.max_factors, x.factors());
    for (int w : x.widths()) o.max_width = std::max(o.max_width, w);
  }
  return api::WeilInstance(o);
}

template <api::TangentInstance I>
struct Module {
  enum class Kind { Representable, Delta, Product, TApplied };
  Kind kind = Kind::Delta;
  typename I::Object c{};
  std::vector<Module> parts;
  /// Mutation used to test the checker: T_{TX} without the c postcomposition.
  bool drop_c = false;

  std::string name(const I& inst) const {
    switch (kind) {
      case Kind::Representable: return "Y(" + inst.name(c) + ")";
      case Kind::Delta: return "ΔD";
      case Kind::Product: {
        if (parts.empty()) return "1";
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " × " : "") + parts[i].name(inst);
        return parts.size() > 1 ? "(" + s + ")" : s;
      }
      case Kind::TApplied: return std::string(drop_c ? "T'" : "T") + "(" + parts[0].name(inst) + ")";
    }
    return "?";
  }
};

template <api::TangentInstance I>
Module<I> yoneda_object(const typename I::Object& c) {
  return {Module<I>::Kind::Representable, c, {}, false};
}
template <api::TangentInstance I>
Module<I> delta_module() {
  return {Module<I>::Kind::Delta, {}, {}, false};
}
template <api::TangentInstance I>
Module<I> product_module(std::vector<Module<I>> parts) {
  return {Module<I>::Kind::Product, {}, std::move(parts), false};
}
template <api::TangentInstance I>
Module<I> terminal_module() {
  return product_module<I>({});
}
template <api::TangentInstance I>
Module<I> T_module(const Module<I>& x, int k = 1) {
  Module<I> out = x;
  for (int i = 0; i < k; ++i) out = {Module<I>::Kind::TApplied, {}, {out}, false};
  return out;
}
/// T(X) with the c postcomposition dropped from its operator.
template <api::TangentInstance I>
Module<I> mutated_T_module(const Module<I>& x) {
  return {Module<I>::Kind::TApplied, {}, {x}, true};
}

/// An element of some X(D, A): a 𝒞-hom for representables, a 𝒲-hom W → A
/// for ΔD, a tuple for products; T-applied modules reuse the underlying
/// module's elements.
template <api::TangentInstance I>
struct Element {
  typename I::Hom chom{};
  RigHom whom{};
  std::vector<Element> parts;

  friend bool operator==(const Element& a, const Element& b) {
    return a.chom == b.chom && a.whom == b.whom && a.parts == b.parts;
  }
  friend bool operator<(const Element& a, const Element& b) {
    if (a.chom < b.chom) return true;
    if (b.chom < a.chom) return false;
    if (a.whom < b.whom) return true;
    if (b.whom < a.whom) return false;
    return std::lexicographical_compare(a.parts.begin(), a.parts.end(), b.parts.begin(), b.parts.end());
  }
};

/// Element sets, actions and T operators of modules over one instance and
/// truncation. Element sets are cached; the cache is safe to share between
/// worker threads.
template <api::TangentInstance I>
class ModuleContext {
 public:
  using Object = typename I::Object;
  using Hom = typename I::Hom;
  using Elem = Element<I>;
  using Mod = Module<I>;

  ModuleContext(const I& inst, Truncation<I> trunc) : inst_(inst), trunc_(std::move(trunc)) {}

  const I& instance() const { return inst_; }
  const Truncation<I>& truncation() const { return trunc_; }

  /// X(D, A), sorted; throws BudgetExceeded past `cap`.
  std::shared_ptr<const std::vector<Elem>> elements(const Mod& x, const Object& d, const WeilObject& a,
                                                    std::size_t cap = 200'000) const {
    const auto key = std::make_tuple(x.name(inst_), d, a);
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto computed = std::make_shared<const std::vector<Elem>>(compute(x, d, a, cap));
    std::lock_guard lock(mutex_);
    return cache_.emplace(key, std::move(computed)).first->second;
  }

  /// x · g for g : D' → D.
  Elem act_C(const Mod& x, const Hom& g, const Elem& e) const {
    switch (x.kind) {
      case Mod::Kind::Representable: return {inst_.compose(e.chom, g), {}, {}};
      case Mod::Kind::Delta: return e;
      case Mod::Kind::Product: {
        Elem out;
        for (std::size_t i = 0; i < x.parts.size(); ++i) out.parts.push_back(act_C(x.parts[i], g, e.parts[i]));
        return out;
      }
      case Mod::Kind::TApplied: return act_C(x.parts[0], g, e);
    }
    return e;
  }

  /// f · x for f : A → B.
  Elem act_W(const Mod& x, const RigHom& f, const Elem& e) const {
    switch (x.kind) {
      case Mod::Kind::Representable:
        return {inst_.compose(coherence::star_hom(inst_, f, x.c), e.chom), {}, {}};
      case Mod::Kind::Delta: return {{}, weil::compose(f, e.whom), {}};
      case Mod::Kind::Product: {
        Elem out;
        for (std::size_t i = 0; i < x.parts.size(); ++i) out.parts.push_back(act_W(x.parts[i], f, e.parts[i]));
        return out;
      }
      case Mod::Kind::TApplied: return act_W(x.parts[0], weil_tangent::T_hom(f), e);
    }
    return e;
  }

  /// T_X : X(D, A) → X(TD, TA).
  Elem T_op(const Mod& x, const WeilObject& a, const Elem& e) const {
    switch (x.kind) {
      case Mod::Kind::Representable: return {inst_.T(e.chom), {}, {}};
      case Mod::Kind::Delta: return {{}, weil::compose(weil_tangent::StructuralHomTable::iota2(a), e.whom), {}};
      case Mod::Kind::Product: {
        Elem out;
        for (std::size_t i = 0; i < x.parts.size(); ++i) out.parts.push_back(T_op(x.parts[i], a, e.parts[i]));
        return out;
      }
      case Mod::Kind::TApplied: {
        const WeilObject ta = weil_tangent::T_obj(a);
        Elem inner = T_op(x.parts[0], ta, e);
        if (x.drop_c) return inner;
        return act_W(x.parts[0], weil_tangent::component("c", a), inner);
      }
    }
    return e;
  }

  /// The element of X(D, P ∗ T_n A) whose projections are the legs in
  /// X(D, P ∗ T A): the inverse of X's comparison map for the fibre product.
  Elem pair_second(const Mod& x, const std::vector<int>& prefix, const WeilObject& a,
                   const std::vector<Elem>& legs) const {
    switch (x.kind) {
      case Mod::Kind::Representable: {
        std::vector<Hom> hs;
        for (const auto& l : legs) hs.push_back(l.chom);
        return {inst_.pair(prefix, static_cast<int>(hs.size()), api::star(inst_, a, x.c), hs), {}, {}};
      }
      case Mod::Kind::Delta: {
        std::vector<RigHom> hs;
        for (const auto& l : legs) hs.push_back(l.whom);
        return {{}, weil_tangent::pairing_at(static_cast<int>(prefix.size()), hs), {}};
      }
      case Mod::Kind::Product: {
        Elem out;
        for (std::size_t i = 0; i < x.parts.size(); ++i) {
          std::vector<Elem> sub;
          for (const auto& l : legs) sub.push_back(l.parts[i]);
          out.parts.push_back(pair_second(x.parts[i], prefix, a, sub));
        }
        return out;
      }
      case Mod::Kind::TApplied: {
        std::vector<int> p{1};
        p.insert(p.end(), prefix.begin(), prefix.end());
        return pair_second(x.parts[0], p, a, legs);
      }
    }
    return legs.at(0);
  }

  std::string element_string(const Mod& x, const Elem& e) const {
    switch (x.kind) {
      case Mod::Kind::Representable: return inst_.hom_string(e.chom);
      case Mod::Kind::Delta: return e.whom.to_string();
      case Mod::Kind::Product: {
        std::string s = "(";
        for (std::size_t i = 0; i < x.parts.size(); ++i) s += (i ? ", " : "") + element_string(x.parts[i], e.parts[i]);
        return s + ")";
      }
      case Mod::Kind::TApplied: return element_string(x.parts[0], e);
    }
    return "?";
  }

 private:
  std::vector<Elem> compute(const Mod& x, const Object& d, const WeilObject& a, std::size_t cap) const {
    std::vector<Elem> out;
    switch (x.kind) {
      case Mod::Kind::Representable: {
        const auto target = api::star(inst_, a, x.c);
        for (auto& h : inst_.all_homs(d, target)) out.push_back({std::move(h), {}, {}});
        if (out.size() > cap) throw BudgetExceeded("element set larger than " + std::to_string(cap));
        break;
      }
      case Mod::Kind::Delta:
        for (auto& h : weil::enumerate_homs(weil_tangent::kW, a, trunc_.coeff_bound, cap)) out.push_back({{}, std::move(h), {}});
        break;
      case Mod::Kind::Product: {
        out.push_back(Elem{});
        for (const auto& part : x.parts) {
          const auto sub = elements(part, d, a, cap);
          std::vector<Elem> next;
          for (const auto& prefix : out) {
            for (const auto& s : *sub) {
              if (next.size() >= cap) throw BudgetExceeded("element set larger than " + std::to_string(cap));
              Elem e = prefix;
              e.parts.push_back(s);
              next.push_back(std::move(e));
            }
          }
          out = std::move(next);
        }
        break;
      }
      case Mod::Kind::TApplied: {
        const auto sub = elements(x.parts[0], d, weil_tangent::T_obj(a), cap);
        out = *sub;
        break;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const I& inst_;
  Truncation<I> trunc_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<std::string, Object, WeilObject>, std::shared_ptr<const std::vector<Elem>>> cache_;
};

template <api::TangentInstance I>
json truncation_json(const I& inst, const Truncation<I>& t) {
  json c = json::array(), w = json::array(), l = json::array();
  for (const auto& x : t.c_objects) c.push_back(inst.name(x));
  for (const auto& x : t.w_objects) w.push_back(x.to_string());
  for (const auto& x : t.limit_objects) l.push_back(x.to_string());
  return json{{"objects", json{{"C", c}, {"W", w}}},
              {"coeff_bound", t.coeff_bound},
              {"limit_objects", l},
              {"max_n", t.max_n},
              {"element_cap", t.element_cap},
              {"naturality_elements", t.naturality_elements}};
}

namespace detail {

template <class T>
std::vector<T> stride_sample(const std::vector<T>& xs, std::size_t k) {
  if (xs.size() <= k) return xs;
  std::vector<T> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(xs[i * xs.size() / k]);
  return out;
}

// Accumulates one check item over many elements, keeping the first witness.
struct Tally {
  CheckItem item;
  std::size_t checked = 0;

  void record(bool ok, const std::function<json()>& witness) {
    ++checked;
    if (!ok && item.pass) {
      item.pass = false;
      item.counterexample = witness();
    }
  }
};

}  // namespace detail

/// Second-variable preservation of the tangent limits: X(D, T_n A) is the
/// n-fold fibre product of X(D, TA) over X(D, A), and X(D, W_2 ⊗ A) is the
/// equaliser of X(D, Tp) and X(D, e∘p∘p_T) through X(D, w). Windows whose
/// element sets pass the cap are appended to `excluded`.
template <api::TangentInstance I>
std::vector<CheckItem> limit_preservation(const ModuleContext<I>& ctx, const Module<I>& x, json& excluded) {
  using Elem = Element<I>;
  const I& inst = ctx.instance();
  const auto& tr = ctx.truncation();
  const std::string name = x.name(inst);
  std::vector<CheckItem> out;
  auto fetch = [&](const typename I::Object& d, const WeilObject& a) -> std::shared_ptr<const std::vector<Elem>> {
    try {
      return ctx.elements(x, d, a, tr.element_cap);
    } catch (const BudgetExceeded&) {
      excluded.push_back(inst.name(d) + " | " + a.to_string());
      return nullptr;
    }
  };

  for (int n = 1; n <= tr.max_n; ++n) {
    CheckItem item{"module.preserves_pullback.n" + std::to_string(n), name, true, nullptr, nullptr};
    std::size_t windows = 0;
    for (const auto& d : tr.c_objects) {
      for (const auto& a : tr.limit_objects) {
        const WeilObject tna = weil_tangent::T_n_obj(n, a);
        const auto base = fetch(d, a), fibre = fetch(d, weil_tangent::T_obj(a)), power = fetch(d, tna);
        if (!base || !fibre || !power) continue;
        ++windows;
        const RigHom p_a = weil_tangent::component("p", a);
        std::map<Elem, std::size_t> over;
        for (const auto& s : *fibre) ++over[ctx.act_W(x, p_a, s)];
        std::size_t cones = 0;
        for (const auto& [b, k] : over) {
          std::size_t t = 1;
          for (int i = 0; i < n; ++i) t *= k;
          cones += t;
        }
        std::set<std::vector<Elem>> seen;
        auto fail = [&](json why) {
          if (item.pass) {
            item.pass = false;
            item.counterexample = json{{"window", inst.name(d) + " | " + tna.to_string()}, {"reason", std::move(why)}};
          }
        };
        for (const auto& s : *power) {
          std::vector<Elem> legs;
          for (int i = 1; i <= n; ++i) {
            const RigHom pi = weil_tangent::component("pi_" + std::to_string(i) + "(" + std::to_string(n) + ")", a);
            legs.push_back(ctx.act_W(x, pi, s));
          }
          if (!seen.insert(legs).second) fail("two elements with the same projections: " + ctx.element_string(x, s));
          if (!(ctx.pair_second(x, {}, a, legs) == s)) fail("pairing does not recover " + ctx.element_string(x, s));
        }
        if (power->size() != cones) {
          fail("|X(D, T_n A)| = " + std::to_string(power->size()) + " but there are " + std::to_string(cones) + " cones");
        }
      }
    }
    item.detail = json{{"windows", windows}};
    out.push_back(std::move(item));
  }

  CheckItem eq{"module.preserves_equaliser", name, true, nullptr, nullptr};
  std::size_t windows = 0;
  for (const auto& d : tr.c_objects) {
    for (const auto& a : tr.limit_objects) {
      const WeilObject tta = weil_tangent::T_obj(weil_tangent::T_obj(a));
      const auto src = fetch(d, weil_tangent::T_n_obj(2, a)), tgt = fetch(d, tta);
      if (!src || !tgt) continue;
      ++windows;
      const RigHom w = weil_tangent::w_composite(a);
      const RigHom tp = weil_tangent::T_hom(weil_tangent::component("p", a));
      const RigHom epp = weil::compose(weil_tangent::component("e", a),
                                       weil::compose(weil_tangent::component("p", a),
                                                     weil_tangent::component("p", weil_tangent::T_obj(a))));
      auto fail = [&](json why) {
        if (eq.pass) {
          eq.pass = false;
          eq.counterexample = json{{"window", inst.name(d) + " | " + a.to_string()}, {"reason", std::move(why)}};
        }
      };
      std::set<Elem> image;
      for (const auto& s : *src) {
        const Elem y = ctx.act_W(x, w, s);
        if (!image.insert(y).second) fail("X(D, w) identifies two elements");
        if (!(ctx.act_W(x, tp, y) == ctx.act_W(x, epp, y))) fail("image of " + ctx.element_string(x, s) + " does not equalise");
      }
      for (const auto& y : *tgt) {
        const bool equalises = ctx.act_W(x, tp, y) == ctx.act_W(x, epp, y);
        if (equalises && !image.count(y)) fail("equalising element " + ctx.element_string(x, y) + " is not in the image");
      }
    }
  }
  eq.detail = json{{"windows", windows}};
  out.push_back(std::move(eq));
  return out;
}

/// Checks functoriality of both actions, naturality of T_X, the three
/// compatibility diagrams for every element of every window, and
/// second-variable preservation of the tangent limits.
template <api::TangentInstance I>
Report verify_module(const ModuleContext<I>& ctx, const Module<I>& x, unsigned jobs = 1) {
  using Elem = Element<I>;
  const I& inst = ctx.instance();
  const auto& tr = ctx.truncation();
  const std::string name = x.name(inst);
  weil_tangent::AxiomOptions nat_opt;
  nat_opt.coeff_bound = tr.coeff_bound;

  struct Window {
    typename I::Object d;
    WeilObject a;
  };
  std::vector<Window> windows;
  for (const auto& d : tr.c_objects) {
    for (const auto& a : tr.w_objects) windows.push_back({d, a});
  }
  std::map<std::pair<WeilObject, WeilObject>, std::vector<RigHom>> nat_homs;
  for (const auto& a : tr.w_objects) {
    for (const auto& b : tr.w_objects) {
      bool exhaustive = false;
      nat_homs[{a, b}] = weil_tangent::naturality_homs(a, b, nat_opt, exhaustive);
    }
  }

  const std::vector<std::string> ids = {"module.act_C_functorial", "module.act_W_functorial", "module.actions_commute",
                                        "module.T_natural_C", "module.T_natural_W", "module.e_square",
                                        "module.p_square", "module.m_square", "module.l_square", "module.c_square"};
  struct WindowResult {
    std::vector<detail::Tally> tallies;
    bool skipped = false;
    std::string label;
  };
  auto per = parallel_map(windows.size(), jobs, [&](std::size_t wi) {
    const auto& [d, a] = windows[wi];
    WindowResult res;
    res.label = inst.name(d) + " | " + a.to_string();
    for (const auto& id : ids) res.tallies.push_back({CheckItem{id, name, true, nullptr, nullptr}, 0});
    std::shared_ptr<const std::vector<Elem>> els;
    try {
      els = ctx.elements(x, d, a, tr.element_cap);
    } catch (const BudgetExceeded&) {
      res.skipped = true;
      return res;
    }
    auto witness = [&](const Elem& e, const Elem& lhs, const Elem& rhs) {
      return [&, e, lhs, rhs] {
        return json{{"window", res.label}, {"element", ctx.element_string(x, e)},
                    {"lhs", ctx.element_string(x, lhs)}, {"rhs", ctx.element_string(x, rhs)}};
      };
    };
    auto& t = res.tallies;
    const auto e_d = inst.e(d), p_d = inst.p(d), m_d = inst.m(d), l_d = inst.ell(d), c_d = inst.c(d);
    const auto pi1 = inst.proj(2, 1, d), pi2 = inst.proj(2, 2, d);
    const RigHom e_a = weil_tangent::component("e", a), p_a = weil_tangent::component("p", a);
    const RigHom m_a = weil_tangent::component("m", a), l_a = weil_tangent::component("l", a);
    const RigHom c_a = weil_tangent::component("c", a);
    const WeilObject ta = weil_tangent::T_obj(a);

    // the compatibility diagrams, for every element
    for (const auto& e : *els) {
      const Elem tx = ctx.T_op(x, a, e);
      {
        const Elem lhs = ctx.act_C(x, e_d, tx), rhs = ctx.act_W(x, e_a, e);
        t[5].record(lhs == rhs, witness(e, lhs, rhs));
      }
      {
        const Elem lhs = ctx.act_W(x, p_a, tx), rhs = ctx.act_C(x, p_d, e);
        t[6].record(lhs == rhs, witness(e, lhs, rhs));
      }
      try {
        const Elem z = ctx.pair_second(x, {}, a, {ctx.act_C(x, pi1, tx), ctx.act_C(x, pi2, tx)});
        const Elem lhs = ctx.act_W(x, m_a, z), rhs = ctx.act_C(x, m_d, tx);
        t[7].record(lhs == rhs, witness(e, lhs, rhs));
      } catch (const NotACone& err) {
        const std::string why = err.what();
        t[7].record(false, [&, why] {
          return json{{"window", res.label}, {"element", ctx.element_string(x, e)}, {"reason", why}};
        });
      }
      const Elem ttx = ctx.T_op(x, ta, tx);
      {
        const Elem lhs = ctx.act_W(x, l_a, tx), rhs = ctx.act_C(x, l_d, ttx);
        t[8].record(lhs == rhs, witness(e, lhs, rhs));
      }
      {
        const Elem lhs = ctx.act_W(x, c_a, ttx), rhs = ctx.act_C(x, c_d, ttx);
        t[9].record(lhs == rhs, witness(e, lhs, rhs));
      }
    }

    // functoriality and naturality on a sample
    const auto sample = detail::stride_sample(*els, tr.naturality_elements);
    for (const auto& e : sample) {
      t[0].record(ctx.act_C(x, inst.id(d), e) == e, witness(e, e, e));
      t[1].record(ctx.act_W(x, weil::identity(a), e) == e, witness(e, e, e));
      const Elem te = ctx.T_op(x, a, e);
      for (const auto& d2 : tr.c_objects) {
        const auto gs = inst.homs(d2, d);
        for (const auto& g : gs) {
          const Elem eg = ctx.act_C(x, g, e);
          {
            const Elem lhs = ctx.T_op(x, a, eg), rhs = ctx.act_C(x, inst.T(g), te);
            t[3].record(lhs == rhs, witness(e, lhs, rhs));
          }
          for (const auto& d3 : tr.c_objects) {
            for (const auto& h : detail::stride_sample(inst.homs(d3, d2), 4)) {
              const Elem lhs = ctx.act_C(x, h, eg), rhs = ctx.act_C(x, inst.compose(g, h), e);
              t[0].record(lhs == rhs, witness(e, lhs, rhs));
            }
          }
        }
      }
      for (const auto& b : tr.w_objects) {
        for (const auto& f : detail::stride_sample(nat_homs.at({a, b}), 8)) {
          const Elem fe = ctx.act_W(x, f, e);
          {
            const Elem lhs = ctx.T_op(x, b, fe), rhs = ctx.act_W(x, weil_tangent::T_hom(f), te);
            t[4].record(lhs == rhs, witness(e, lhs, rhs));
          }
          for (const auto& b2 : tr.w_objects) {
            for (const auto& f2 : detail::stride_sample(nat_homs.at({b, b2}), 2)) {
              const Elem lhs = ctx.act_W(x, f2, fe), rhs = ctx.act_W(x, weil::compose(f2, f), e);
              t[1].record(lhs == rhs, witness(e, lhs, rhs));
            }
          }
          for (const auto& d2 : tr.c_objects) {
            for (const auto& g : detail::stride_sample(inst.homs(d2, d), 4)) {
              const Elem lhs = ctx.act_C(x, g, fe), rhs = ctx.act_W(x, f, ctx.act_C(x, g, e));
              t[2].record(lhs == rhs, witness(e, lhs, rhs));
            }
          }
        }
      }
    }
    return res;
  });

  Report r;
  r.check = "verify module";
  r.truncation = truncation_json(inst, tr);
  r.truncation["module"] = name;
  json skipped = json::array();
  std::vector<detail::Tally> total;
  for (const auto& id : ids) total.push_back({CheckItem{id, name, true, nullptr, nullptr}, 0});
  for (const auto& res : per) {
    if (res.skipped) {
      skipped.push_back(res.label);
      continue;
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
      total[k].checked += res.tallies[k].checked;
      if (!res.tallies[k].item.pass && total[k].item.pass) {
        total[k].item.pass = false;
        total[k].item.counterexample = res.tallies[k].item.counterexample;
      }
    }
  }
  json limit_excluded = json::array();
  for (auto& item : limit_preservation(ctx, x, limit_excluded)) r.add(std::move(item));
  std::set<std::string> all_excluded;
  for (const auto& s : skipped) all_excluded.insert(s.get<std::string>());
  for (const auto& s : limit_excluded) all_excluded.insert(s.get<std::string>());
  r.truncation["excluded_windows"] = all_excluded;
  for (auto& t : total) {
    t.item.detail = json{{"checked", t.checked}};
    r.add(std::move(t.item));
  }
  if (!all_excluded.empty()) {
    r.notes.push_back("windows with more than " + std::to_string(tr.element_cap) +
                      " elements were left out; see truncation.excluded_windows");
  }
  r.sort();
  return r;
}

// ---------------------------------------------------------------------------
// Maps of tangent modules

/// All families f_{D,A} : X(D, A) → Y(D, A) over a finite window that are
/// natural in D (against every 𝒞-hom between window objects), natural in A
/// (against every bounded 𝒲-hom between window objects) and commute with
/// the T operators whenever (TD, TA) is again in the window. Constraints
/// that leave the window are not imposed, so the count can exceed the
/// number of genuine module maps.
template <api::TangentInstance I>
class FamilySpace {
 public:
  using Object = typename I::Object;
  using Elem = Element<I>;
  using Family = std::vector<int>;  // value index per node

  struct Window {
    Object d;
    WeilObject a;
  };

  FamilySpace(const ModuleContext<I>& ctx, Module<I> src, Module<I> tgt, std::vector<Object> c_objects,
              std::vector<WeilObject> w_objects)
      : ctx_(ctx), src_(std::move(src)), tgt_(std::move(tgt)) {
    for (const auto& d : c_objects) {
      for (const auto& a : w_objects) windows_.push_back({d, a});
    }
    for (std::size_t w = 0; w < windows_.size(); ++w) {
      src_els_.push_back(ctx_.elements(src_, windows_[w].d, windows_[w].a));
      tgt_els_.push_back(ctx_.elements(tgt_, windows_[w].d, windows_[w].a));
      first_node_.push_back(nodes_.size());
      for (std::size_t k = 0; k < src_els_[w]->size(); ++k) nodes_.push_back({w, k});
    }
    first_node_.push_back(nodes_.size());
    build_edges();
  }

  std::size_t node_count() const { return nodes_.size(); }
  const Module<I>& source_module() const { return src_; }
  const Module<I>& target_module() const { return tgt_; }
  const std::vector<Window>& windows() const { return windows_; }

  std::optional<std::size_t> window_index(const Object& d, const WeilObject& a) const {
    for (std::size_t w = 0; w < windows_.size(); ++w) {
      if (windows_[w].d == d && windows_[w].a == a) return w;
    }
    return std::nullopt;
  }
  /// The node of element x ∈ X(D, A), if (D, A) is in the window.
  std::optional<std::size_t> node_of(const Object& d, const WeilObject& a, const Elem& x) const {
    const auto w = window_index(d, a);
    if (!w) return std::nullopt;
    const auto k = find(*src_els_[*w], x);
    if (!k) return std::nullopt;
    return first_node_[*w] + *k;
  }
  const Elem& source_element(std::size_t node) const { return (*src_els_[nodes_[node].first])[nodes_[node].second]; }
  const Window& window_of(std::size_t node) const { return windows_[nodes_[node].first]; }
  const Elem& value(const Family& f, std::size_t node) const {
    return (*tgt_els_[nodes_[node].first])[static_cast<std::size_t>(f[node])];
  }

  /// Encodes a family given pointwise; nullopt if some value lies outside Y.
  std::optional<Family> encode(const std::function<Elem(std::size_t node)>& fn) const {
    Family f(nodes_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const auto k = find(*tgt_els_[nodes_[n].first], fn(n));
      if (!k) return std::nullopt;
      f[n] = static_cast<int>(*k);
    }
    return f;
  }

  /// Whether a family satisfies every constraint.
  bool valid(const Family& f) const {
    for (std::size_t u = 0; u < nodes_.size(); ++u) {
      for (const auto& e : edges_[u]) {
        if (e.table[static_cast<std::size_t>(f[u])] != f[e.to]) return false;
      }
    }
    return true;
  }

  /// Every valid family, in lexicographic order of value indices. Throws
  /// TruncationTooLarge once more than `cap` families are found.
  std::vector<Family> enumerate(std::size_t cap = 100'000) const {
    std::vector<Family> out;
    Family f(nodes_.size(), -1);
    std::vector<std::size_t> trail;
    search(0, f, trail, out, cap);
    return out;
  }

 private:
  struct Edge {
    std::size_t to;
    std::vector<int> table;  // value index at `to` forced by each value at the source, -1 if outside Y
  };

  static std::optional<std::size_t> find(const std::vector<Elem>& xs, const Elem& x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.end() || !(*it == x)) return std::nullopt;
    return static_cast<std::size_t>(it - xs.begin());
  }

  void add_edge(std::size_t u, std::size_t wv, const std::function<Elem(const Elem&)>& on_src,
                const std::function<Elem(const Elem&)>& on_tgt) {
    const auto k = find(*src_els_[wv], on_src(source_element(u)));
    if (!k) return;  // the constraint leaves the window
    Edge e{first_node_[wv] + *k, {}};
    for (const auto& y : *tgt_els_[nodes_[u].first]) {
      const auto j = find(*tgt_els_[wv], on_tgt(y));
      e.table.push_back(j ? static_cast<int>(*j) : -1);
    }
    edges_[u].push_back(std::move(e));
  }

  void build_edges() {
    const I& inst = ctx_.instance();
    const unsigned bound = ctx_.truncation().coeff_bound;
    edges_.resize(nodes_.size());
    for (std::size_t u = 0; u < nodes_.size(); ++u) {
      const auto& [d, a] = window_of(u);
      for (std::size_t w2 = 0; w2 < windows_.size(); ++w2) {
        const auto& [d2, a2] = windows_[w2];
        if (a2 == a) {
          for (const auto& g : inst.all_homs(d2, d)) {
            add_edge(u, w2, [&](const Elem& x) { return ctx_.act_C(src_, g, x); },
                     [&](const Elem& y) { return ctx_.act_C(tgt_, g, y); });
          }
        }
        if (d2 == d) {
          for (const auto& h : weil::enumerate_homs(a, a2, bound)) {
            add_edge(u, w2, [&](const Elem& x) { return ctx_.act_W(src_, h, x); },
                     [&](const Elem& y) { return ctx_.act_W(tgt_, h, y); });
          }
        }
      }
      if (const auto wt = window_index(inst.T(d), weil_tangent::T_obj(a))) {
        add_edge(u, *wt, [&](const Elem& x) { return ctx_.T_op(src_, a, x); },
                 [&](const Elem& y) { return ctx_.T_op(tgt_, a, y); });
      }
    }
  }

  bool assign(std::size_t u, int v, Family& f, std::vector<std::size_t>& trail) const {
    std::vector<std::size_t> queue{u};
    f[u] = v;
    trail.push_back(u);
    while (!queue.empty()) {
      const std::size_t n = queue.back();
      queue.pop_back();
      for (const auto& e : edges_[n]) {
        const int forced = e.table[static_cast<std::size_t>(f[n])];
        if (forced < 0) return false;
        if (f[e.to] >= 0) {
          if (f[e.to] != forced) return false;
          continue;
        }
        f[e.to] = forced;
        trail.push_back(e.to);
        queue.push_back(e.to);
      }
    }
    return true;
  }

  void search(std::size_t from, Family& f, std::vector<std::size_t>& trail, std::vector<Family>& out,
              std::size_t cap) const {
    std::size_t u = from;
    while (u < nodes_.size() && f[u] >= 0) ++u;
    if (u == nodes_.size()) {
      if (out.size() >= cap) throw TruncationTooLarge("more than " + std::to_string(cap) + " families");
      out.push_back(f);
      return;
    }
    const int choices = static_cast<int>(tgt_els_[nodes_[u].first]->size());
    for (int v = 0; v < choices; ++v) {
      const std::size_t mark = trail.size();
      if (assign(u, v, f, trail)) search(u + 1, f, trail, out, cap);
      while (trail.size() > mark) {
        f[trail.back()] = -1;
        trail.pop_back();
      }
    }
  }

  const ModuleContext<I>& ctx_;
  Module<I> src_, tgt_;
  std::vector<Window> windows_;
  std::vector<std::shared_ptr<const std::vector<Elem>>> src_els_, tgt_els_;
  std::vector<std::size_t> first_node_;
  std::vector<std::pair<std::size_t, std::size_t>> nodes_;  // (window, element)
  std::vector<std::vector<Edge>> edges_;
};

// ---------------------------------------------------------------------------
// The Yoneda embedding

/// Yg : YC → YC', x ↦ (A ∗ g) ∘ x.
template <api::TangentInstance I>
Element<I> yoneda_on_hom(const I& inst, const typename I::Hom& g, const WeilObject& a, const Element<I>& x) {
  return {inst.compose(coherence::shape_hom(inst, a.widths(), g), x.chom), {}, {}};
}

/// The symmetry W ⊗ A → A ⊗ W moving the first factor last.
inline RigHom move_first_last(const WeilObject& a) {
  const WeilObject src = weil_tangent::T_obj(a), tgt = weil::tensor_obj(a, weil_tangent::kW);
  std::vector<weil::WeilElement> flat{weil::WeilElement::generator(tgt, a.factors(), 1)};
  for (int i = 0; i < a.factors(); ++i) {
    for (int j = 1; j <= a.width(i); ++j) flat.push_back(weil::WeilElement::generator(tgt, i, j));
  }
  return RigHom::from_valid(src, tgt, std::move(flat));
}

struct EmbeddingOptions {
  /// Window for functoriality, faithfulness and T-preservation.
  Truncation<api::WeilInstance> window = [] {
    Truncation<api::WeilInstance> t;
    t.c_objects = {WeilObject{}, WeilObject{1}};
    t.w_objects = {WeilObject{}, WeilObject{1}, WeilObject{2}, WeilObject{1, 1}};
    t.coeff_bound = 1;
    return t;
  }();
  /// Window for the fullness enumeration of YC → YC' families.
  /// Window for the fullness enumeration of YC → YC' families. It holds TC
  /// for each C ∈ {ℕ, W}, so that T-compatibility pins the families down.
  std::vector<WeilObject> fullness_c = {WeilObject{}, WeilObject{1}, WeilObject{1, 1}};
  std::vector<WeilObject> fullness_w = {WeilObject{}, WeilObject{1}};
  /// The plain window {ℕ, W} × {ℕ, W}, on which families are only counted.
  std::vector<WeilObject> count_c = {WeilObject{}, WeilObject{1}};
  std::vector<WeilObject> count_w = {WeilObject{}, WeilObject{1}};
  std::vector<std::pair<WeilObject, WeilObject>> fullness_pairs = {{WeilObject{}, WeilObject{}},
                                                                   {WeilObject{}, WeilObject{1}},
                                                                   {WeilObject{1}, WeilObject{}},
                                                                   {WeilObject{1}, WeilObject{1}}};
  std::size_t family_cap = 100'000;
  unsigned jobs = 1;
};

namespace detail {

inline json window_json(const std::vector<WeilObject>& c, const std::vector<WeilObject>& w, unsigned bound) {
  json cj = json::array(), wj = json::array();
  for (const auto& x : c) cj.push_back(x.to_string());
  for (const auto& x : w) wj.push_back(x.to_string());
  return json{{"objects", json{{"C", cj}, {"W", wj}}}, {"coeff_bound", bound}};
}

}  // namespace detail

/// Result of enumerating module-map families YC → YC' and matching them
/// against the Yg.
struct FullnessResult {
  WeilObject from, to;
  std::size_t families = 0;
  std::size_t matched = 0;  // families equal to some Yg
  std::size_t homs = 0;     // |𝒞(C, C')| at the bound
};

inline FullnessResult fullness_count(const ModuleContext<api::WeilInstance>& ctx, const WeilObject& c,
                                     const WeilObject& c2, const std::vector<WeilObject>& c_objects,
                                     const std::vector<WeilObject>& w_objects, std::size_t cap) {
  const auto& inst = ctx.instance();
  using M = Module<api::WeilInstance>;
  const M yc = yoneda_object<api::WeilInstance>(c), yc2 = yoneda_object<api::WeilInstance>(c2);
  FamilySpace<api::WeilInstance> space(ctx, yc, yc2, c_objects, w_objects);
  const auto families = space.enumerate(cap);
  std::set<FamilySpace<api::WeilInstance>::Family> from_y;
  const auto gs = inst.all_homs(c, c2);
  for (const auto& g : gs) {
    auto f = space.encode([&](std::size_t n) {
      return yoneda_on_hom(inst, g, space.window_of(n).a, space.source_element(n));
    });
    if (f) from_y.insert(*f);
  }
  FullnessResult r{c, c2, families.size(), 0, gs.size()};
  for (const auto& f : families) r.matched += from_y.count(f);
  return r;
}

/// Y is a functor, faithful and full over the declared windows, its images
/// are module maps, and T(YC) ≅ Y(TC) by the flip W ⊗ A ≅ A ⊗ W as tangent
/// modules.
inline Report check_embedding(const EmbeddingOptions& opt = {}) {
  using Inst = api::WeilInstance;
  using Elem = Element<Inst>;
  const auto& tr = opt.window;
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);
  Report r;
  r.check = "verify embedding";
  r.truncation = truncation_json(inst, tr);
  r.truncation["fullness"] = detail::window_json(opt.fullness_c, opt.fullness_w, tr.coeff_bound);
  r.truncation["family_count"] = detail::window_json(opt.count_c, opt.count_w, tr.coeff_bound);

  struct Job {
    WeilObject c, c2;
  };
  std::vector<Job> pairs;
  for (const auto& c : tr.c_objects) {
    for (const auto& c2 : tr.c_objects) pairs.push_back({c, c2});
  }

  // functoriality, module-map property and faithfulness per (C, C')
  auto per = parallel_map(pairs.size(), opt.jobs, [&](std::size_t k) {
    const auto [c, c2] = pairs[k];
    const std::string obj = c.to_string() + " → " + c2.to_string();
    const auto yc = yoneda_object<Inst>(c), yc2 = yoneda_object<Inst>(c2);
    CheckItem functorial{"embedding.functorial", obj, true, nullptr, nullptr};
    CheckItem module_map{"embedding.module_map", obj, true, nullptr, nullptr};
    CheckItem faithful{"embedding.faithful", obj, true, nullptr, nullptr};
    auto fail = [](CheckItem& item, json why) {
      if (item.pass) {
        item.pass = false;
        item.counterexample = std::move(why);
      }
    };
    const auto gs = inst.all_homs(c, c2);
    std::map<std::vector<Elem>, RigHom> tabulated;
    std::size_t elements = 0;
    for (const auto& g : gs) {
      std::vector<Elem> table;
      for (const auto& d : tr.c_objects) {
        for (const auto& a : tr.w_objects) {
          const auto els = ctx.elements(yc, d, a);
          for (const auto& x : *els) {
            ++elements;
            const Elem gx = yoneda_on_hom(inst, g, a, x);
            table.push_back(gx);
            if (c == c2 && g == inst.id(c) && !(gx == x)) fail(functorial, json{{"hom", g.to_string()}, {"reason", "Y(id) ≠ id"}});
            // functoriality against every h : C' → C''
            for (const auto& c3 : tr.c_objects) {
              for (const auto& h : inst.all_homs(c2, c3)) {
                if (!(yoneda_on_hom(inst, h, a, gx) == yoneda_on_hom(inst, inst.compose(h, g), a, x))) {
                  fail(functorial, json{{"g", g.to_string()}, {"h", h.to_string()}, {"element", x.chom.to_string()}});
                }
              }
            }
            // naturality in D, in A, and T-compatibility
            for (const auto& d2 : tr.c_objects) {
              for (const auto& u : inst.all_homs(d2, d)) {
                if (!(yoneda_on_hom(inst, g, a, ctx.act_C(yc, u, x)) == ctx.act_C(yc2, u, gx))) {
                  fail(module_map, json{{"g", g.to_string()}, {"reason", "not natural in D"}, {"element", x.chom.to_string()}});
                }
              }
            }
            for (const auto& b : tr.w_objects) {
              for (const auto& f : weil::enumerate_homs(a, b, tr.coeff_bound)) {
                if (!(yoneda_on_hom(inst, g, b, ctx.act_W(yc, f, x)) == ctx.act_W(yc2, f, gx))) {
                  fail(module_map, json{{"g", g.to_string()}, {"reason", "not natural in A"}, {"element", x.chom.to_string()}});
                }
              }
            }
            const WeilObject ta = weil_tangent::T_obj(a);
            if (!(yoneda_on_hom(inst, g, ta, ctx.T_op(yc, a, x)) == ctx.T_op(yc2, a, gx))) {
              fail(module_map, json{{"g", g.to_string()}, {"reason", "does not commute with T"}, {"element", x.chom.to_string()}});
            }
          }
        }
      }
      auto [it, fresh] = tabulated.emplace(std::move(table), g);
      if (!fresh) fail(faithful, json{{"g", it->second.to_string()}, {"h", g.to_string()}});
    }
    functorial.detail = module_map.detail = json{{"homs", gs.size()}, {"elements", elements}};
    faithful.detail = json{{"homs", gs.size()}, {"distinct_images", tabulated.size()}};
    return std::vector<CheckItem>{functorial, module_map, faithful};
  });
  for (auto& items : per) {
    for (auto& item : items) r.add(std::move(item));
  }

  // fullness over the fullness window
  {
    Truncation<Inst> ft = tr;
    ft.c_objects = opt.fullness_c;
    ft.w_objects = opt.fullness_w;
    const ModuleContext<Inst> fctx(inst, ft);
    for (const auto& [c, c2] : opt.fullness_pairs) {
      const auto res = fullness_count(fctx, c, c2, opt.fullness_c, opt.fullness_w, opt.family_cap);
      CheckItem item{"embedding.full", c.to_string() + " → " + c2.to_string(), res.families == res.matched,
                     nullptr, json{{"families", res.families}, {"matched_by_Y", res.matched}, {"homs", res.homs}}};
      if (!item.pass) item.counterexample = json{{"unmatched_families", res.families - res.matched}};
      r.add(std::move(item));
    }
    Truncation<Inst> ct = tr;
    ct.c_objects = opt.count_c;
    ct.w_objects = opt.count_w;
    const ModuleContext<Inst> cctx(inst, ct);
    for (const auto& [c, c2] : opt.fullness_pairs) {
      const auto res = fullness_count(cctx, c, c2, opt.count_c, opt.count_w, opt.family_cap);
      // every Yg must survive; extra families are an artefact of the small window
      CheckItem item{"embedding.families", c.to_string() + " → " + c2.to_string(), res.matched == res.homs,
                     nullptr, json{{"families", res.families}, {"matched_by_Y", res.matched}, {"homs", res.homs}}};
      r.add(std::move(item));
    }
  }

  // T(YC) ≅ Y(TC)
  for (const auto& c : tr.c_objects) {
    const auto yc = yoneda_object<Inst>(c), tyc = T_module(yc), ytc = yoneda_object<Inst>(inst.T(c));
    const std::string obj = "T(Y(" + c.to_string() + ")) ≅ Y(T(" + c.to_string() + "))";
    CheckItem bij{"embedding.T_iso.bijective", obj, true, nullptr, nullptr};
    CheckItem nat{"embedding.T_iso.natural", obj, true, nullptr, nullptr};
    CheckItem top{"embedding.T_iso.T_compatible", obj, true, nullptr, nullptr};
    CheckItem pe{"embedding.T_iso.p_e_compatible", obj, true, nullptr, nullptr};
    auto fail = [](CheckItem& item, json why) {
      if (item.pass) {
        item.pass = false;
        item.counterexample = std::move(why);
      }
    };
    auto sigma = [&](const WeilObject& a, const Elem& x) {
      return Elem{inst.compose(coherence::star_hom(inst, move_first_last(a), c), x.chom), {}, {}};
    };
    std::size_t elements = 0;
    for (const auto& d : tr.c_objects) {
      for (const auto& a : tr.w_objects) {
        const auto src = ctx.elements(tyc, d, a), tgt = ctx.elements(ytc, d, a);
        std::set<Elem> image;
        for (const auto& x : *src) {
          ++elements;
          const Elem sx = sigma(a, x);
          image.insert(sx);
          if (!std::binary_search(tgt->begin(), tgt->end(), sx)) fail(bij, json{{"element", x.chom.to_string()}, {"reason", "image outside Y(TC)"}});
          for (const auto& d2 : tr.c_objects) {
            for (const auto& u : inst.all_homs(d2, d)) {
              if (!(sigma(a, ctx.act_C(tyc, u, x)) == ctx.act_C(ytc, u, sx))) fail(nat, json{{"element", x.chom.to_string()}, {"hom", u.to_string()}});
            }
          }
          for (const auto& b : tr.w_objects) {
            for (const auto& f : weil::enumerate_homs(a, b, tr.coeff_bound)) {
              if (!(sigma(b, ctx.act_W(tyc, f, x)) == ctx.act_W(ytc, f, sx))) fail(nat, json{{"element", x.chom.to_string()}, {"hom", f.to_string()}});
            }
          }
          const WeilObject ta = weil_tangent::T_obj(a);
          if (!(sigma(ta, ctx.T_op(tyc, a, x)) == ctx.T_op(ytc, a, sx))) fail(top, json{{"element", x.chom.to_string()}});
          // p : T(YC) → YC is X(D, p_A); on Y(TC) it is Y(p_C)
          const Elem px = ctx.act_W(yc, weil_tangent::component("p", a), x);
          if (!(px == yoneda_on_hom(inst, inst.p(c), a, sx))) fail(pe, json{{"element", x.chom.to_string()}, {"map", "p"}});
        }
        if (image.size() != src->size() || image.size() != tgt->size()) {
          fail(bij, json{{"window", d.to_string() + " | " + a.to_string()}, {"source", src->size()}, {"target", tgt->size()}, {"image", image.size()}});
        }
        // e : YC → T(YC) is X(D, e_A); on Y(TC) it is Y(e_C)
        for (const auto& y : *ctx.elements(yc, d, a)) {
          const Elem ey = ctx.act_W(yc, weil_tangent::component("e", a), y);
          if (!(sigma(a, ey) == yoneda_on_hom(inst, inst.e(c), a, y))) fail(pe, json{{"element", y.chom.to_string()}, {"map", "e"}});
        }
      }
    }
    for (CheckItem* item : {&bij, &nat, &top, &pe}) {
      item->detail = json{{"elements", elements}};
      r.add(std::move(*item));
    }
  }
  r.sort();
  return r;
}

// ---------------------------------------------------------------------------
// Representability

/// [d, id_A] : W ⊗ A → A for d : W → A.
inline RigHom copair_with_identity(const RigHom& d, const WeilObject& a) {
  std::vector<weil::WeilElement> flat{d.image(0, 1)};
  for (int i = 0; i < a.factors(); ++i) {
    for (int j = 1; j <= a.width(i); ++j) flat.push_back(weil::WeilElement::generator(a, i, j));
  }
  return RigHom::from_valid(weil_tangent::T_obj(a), a, std::move(flat));
}

struct RepresentabilityOptions {
  std::vector<WeilObject> c_objects = {WeilObject{}, WeilObject{1}};
  /// S; the enumeration runs over S ∪ T(S) so that currying stays inside it.
  std::vector<WeilObject> w_objects = {WeilObject{}, WeilObject{1}};
  unsigned coeff_bound = 1;
  std::size_t family_cap = 100'000;
};

/// ModuleMaps(Z × ΔD, X) ≅ ModuleMaps(Z, TX) for Z, X ∈ {1, Yℕ}:
///   curry    Ψ(φ)_{D,A}(z)    = φ_{D,W⊗A}(ι₂·z, ι₁)
///   uncurry  Φ(ψ)_{D,A}(z, d) = [d, id_A] · ψ_{D,A}(z)
/// Both sides are enumerated over S ∪ T(S) and compared on S.
inline Report check_representability(const RepresentabilityOptions& opt = {}) {
  using Inst = api::WeilInstance;
  using M = Module<Inst>;
  using Elem = Element<Inst>;
  using Space = FamilySpace<Inst>;
  Truncation<Inst> tr;
  tr.c_objects = opt.c_objects;
  tr.coeff_bound = opt.coeff_bound;
  std::set<WeilObject> wide(opt.w_objects.begin(), opt.w_objects.end());
  for (const auto& a : opt.w_objects) wide.insert(weil_tangent::T_obj(a));
  tr.w_objects.assign(wide.begin(), wide.end());
  const Inst inst = instance_for(tr);
  const ModuleContext<Inst> ctx(inst, tr);

  Report r;
  r.check = "verify representability";
  r.truncation = truncation_json(inst, tr);
  r.truncation["compared_on"] = detail::window_json(opt.c_objects, opt.w_objects, opt.coeff_bound);

  const M delta = delta_module<Inst>(), one = terminal_module<Inst>(), yn = yoneda_object<Inst>(WeilObject{});
  const std::vector<std::pair<std::string, M>> zs = {{"1", one}, {"Y(N)", yn}};
  const std::vector<std::pair<std::string, M>> xs = {{"1", one}, {"Y(N)", yn}};

  // restriction of a family on `big` to the windows of `small`
  auto restrict = [](const Space& big, const Space::Family& f, const Space& small) {
    return *small.encode([&](std::size_t n) {
      const auto& w = small.window_of(n);
      return big.value(f, *big.node_of(w.d, w.a, small.source_element(n)));
    });
  };

  struct Sides {
    std::unique_ptr<Space> lhs, rhs, lhs_small, rhs_small;
    std::vector<Space::Family> phis, psis;
  };
  auto build = [&](const M& z, const M& x) {
    Sides s;
    const M zd = product_module<Inst>({z, delta}), tx = T_module(x);
    s.lhs = std::make_unique<Space>(ctx, zd, x, tr.c_objects, tr.w_objects);
    s.rhs = std::make_unique<Space>(ctx, z, tx, tr.c_objects, tr.w_objects);
    s.lhs_small = std::make_unique<Space>(ctx, zd, x, opt.c_objects, opt.w_objects);
    s.rhs_small = std::make_unique<Space>(ctx, z, tx, opt.c_objects, opt.w_objects);
    s.phis = s.lhs->enumerate(opt.family_cap);
    s.psis = s.rhs->enumerate(opt.family_cap);
    return s;
  };
  // Ψ(φ) on the small windows
  auto curry = [&](const Sides& s, const Space::Family& phi) {
    return s.rhs_small->encode([&](std::size_t n) {
      const auto& w = s.rhs_small->window_of(n);
      const Elem& z = s.rhs_small->source_element(n);
      const WeilObject ta = weil_tangent::T_obj(w.a);
      const M& zmod = s.rhs_small->source_module();
      Elem arg;
      arg.parts = {ctx.act_W(zmod, weil_tangent::StructuralHomTable::iota2(w.a), z),
                   Elem{{}, weil_tangent::StructuralHomTable::iota1(w.a), {}}};
      const auto node = s.lhs->node_of(w.d, ta, arg);
      if (!node) throw Error("curry left the enumeration window");
      return s.lhs->value(phi, *node);
    });
  };
  // Φ(ψ) on the small windows
  auto uncurry = [&](const Sides& s, const Space::Family& psi) {
    return s.lhs_small->encode([&](std::size_t n) {
      const auto& w = s.lhs_small->window_of(n);
      const Elem& zd = s.lhs_small->source_element(n);
      const auto node = s.rhs->node_of(w.d, w.a, zd.parts[0]);
      return ctx.act_W(s.lhs_small->target_module(), copair_with_identity(zd.parts[1].whom, w.a),
                       s.rhs->value(psi, *node));
    });
  };

  for (const auto& [zn, z] : zs) {
    for (const auto& [xn, x] : xs) {
      const std::string obj = "Z = " + zn + ", X = " + xn;
      const Sides s = build(z, x);
      CheckItem well{"representability.curry_well_defined", obj, true, nullptr, nullptr};
      CheckItem inv{"representability.inverse", obj, true, nullptr, nullptr};
      CheckItem bij{"representability.bijection", obj, true, nullptr, nullptr};
      std::set<Space::Family> phi_small, psi_small, curried, uncurried;
      for (const auto& phi : s.phis) {
        const auto phis = restrict(*s.lhs, phi, *s.lhs_small);
        phi_small.insert(phis);
        const auto psi = curry(s, phi);
        if (!psi || !s.rhs_small->valid(*psi)) {
          if (well.pass) well.counterexample = json{{"reason", "curried family is not a module map"}};
          well.pass = false;
          continue;
        }
        curried.insert(*psi);
      }
      for (const auto& psi : s.psis) {
        const auto psis = restrict(*s.rhs, psi, *s.rhs_small);
        psi_small.insert(psis);
        const auto phi = uncurry(s, psi);
        if (!phi || !s.lhs_small->valid(*phi)) {
          if (well.pass) well.counterexample = json{{"reason", "uncurried family is not a module map"}};
          well.pass = false;
          continue;
        }
        uncurried.insert(*phi);
      }
      for (const auto& phi : s.phis) {
        const auto psi = curry(s, phi);
        if (!psi) continue;
        // Φ(Ψ(φ)) = φ on S
        const auto back = s.lhs_small->encode([&](std::size_t n) {
          const auto& w = s.lhs_small->window_of(n);
          const Elem& zd = s.lhs_small->source_element(n);
          const auto node = s.rhs_small->node_of(w.d, w.a, zd.parts[0]);
          return ctx.act_W(s.lhs_small->target_module(), copair_with_identity(zd.parts[1].whom, w.a),
                           s.rhs_small->value(*psi, *node));
        });
        if (!back || *back != restrict(*s.lhs, phi, *s.lhs_small)) {
          if (inv.pass) inv.counterexample = json{{"reason", "uncurry(curry(φ)) ≠ φ"}};
          inv.pass = false;
        }
      }
      for (const auto& psi : s.psis) {
        // Ψ(Φ(ψ)) = ψ on S: Φ(ψ) at (D, W⊗A) is read off ψ at (D, W⊗A)
        const auto phi_wide = s.lhs->encode([&](std::size_t n) {
          const auto& w = s.lhs->window_of(n);
          const Elem& zd = s.lhs->source_element(n);
          const auto node = s.rhs->node_of(w.d, w.a, zd.parts[0]);
          return ctx.act_W(x, copair_with_identity(zd.parts[1].whom, w.a), s.rhs->value(psi, *node));
        });
        const auto round = phi_wide ? curry(s, *phi_wide) : std::nullopt;
        if (!round || *round != restrict(*s.rhs, psi, *s.rhs_small)) {
          if (inv.pass) inv.counterexample = json{{"reason", "curry(uncurry(ψ)) ≠ ψ"}};
          inv.pass = false;
        }
      }
      bij.pass = curried == psi_small && uncurried == phi_small && phi_small.size() == psi_small.size();
      bij.detail = json{{"lhs_families", s.phis.size()}, {"rhs_families", s.psis.size()},
                        {"lhs_on_S", phi_small.size()}, {"rhs_on_S", psi_small.size()}};
      if (!bij.pass) bij.counterexample = json{{"curried", curried.size()}, {"uncurried", uncurried.size()}};
      r.add(std::move(well));
      r.add(std::move(inv));
      r.add(std::move(bij));
    }
  }

  // naturality in Z against u : Y(N) → 1, for every X
  for (const auto& [xn, x] : xs) {
    const std::string obj = "u : Y(N) → 1, X = " + xn;
    CheckItem item{"representability.natural_in_Z", obj, true, nullptr, nullptr};
    const Sides s1 = build(one, x), sy = build(yn, x);
    std::size_t checked = 0;
    for (const auto& phi : s1.phis) {
      // φ ∘ (u × id) : Y(N) × ΔD → X
      const auto pulled = sy.lhs->encode([&](std::size_t n) {
        const auto& w = sy.lhs->window_of(n);
        Elem arg;
        arg.parts = {Elem{}, sy.lhs->source_element(n).parts[1]};
        return s1.lhs->value(phi, *s1.lhs->node_of(w.d, w.a, arg));
      });
      const auto lhs = pulled ? curry(sy, *pulled) : std::nullopt;
      // Ψ(φ) ∘ u
      const auto psi = curry(s1, phi);
      const auto rhs = sy.rhs_small->encode([&](std::size_t n) {
        const auto& w = sy.rhs_small->window_of(n);
        return s1.rhs_small->value(*psi, *s1.rhs_small->node_of(w.d, w.a, Elem{}));
      });
      ++checked;
      if (!lhs || !rhs || *lhs != *rhs) {
        if (item.pass) item.counterexample = json{{"reason", "Ψ(φ ∘ (u × id)) ≠ Ψ(φ) ∘ u"}};
        item.pass = false;
      }
    }
    item.detail = json{{"families", checked}};
    r.add(std::move(item));
  }
  r.sort();
  return r;
}

}  // namespace tangent::tmod
