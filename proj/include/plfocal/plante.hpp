// Wreath products Z^m wr Z^k with the lexicographic (Plante) order on lamp
// configurations, the ultrametric kernel on configurations and the convex sets C.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plfocal/error.hpp"
#include "plfocal/exactnum.hpp"
#include "plfocal/plgroup.hpp"

namespace plfocal {

// Finitely supported map Z^k -> Z^m; zero values are never stored.
using LampConfig = std::map<ExpVec, ExpVec>;

inline ExpVec add(const ExpVec& a, const ExpVec& b) {
  ExpVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline ExpVec neg(const ExpVec& a) {
  ExpVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}
inline bool is_zero(const ExpVec& a) {
  return std::all_of(a.begin(), a.end(), [](long x) { return x == 0; });
}

// (g.s)(x) = s(x - g)
inline LampConfig shift_config(const LampConfig& s, const ExpVec& g) {
  LampConfig out;
  for (const auto& [x, v] : s) out.emplace(add(x, g), v);
  return out;
}

inline LampConfig add_configs(const LampConfig& a, const LampConfig& b) {
  LampConfig out = a;
  for (const auto& [x, v] : b) {
    auto it = out.find(x);
    if (it == out.end()) {
      out.emplace(x, v);
    } else {
      it->second = add(it->second, v);
      if (is_zero(it->second)) out.erase(it);
    }
  }
  return out;
}

inline LampConfig negate_config(const LampConfig& a) {
  LampConfig out;
  for (const auto& [x, v] : a) out.emplace(x, neg(v));
  return out;
}

inline std::string vec_str(const ExpVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

inline std::string config_str(const LampConfig& s) {
  if (s.empty()) return "e";
  std::string out;
  for (const auto& [x, v] : s) out += (out.empty() ? "" : " ") + vec_str(x) + "->" + vec_str(v);
  return out;
}

// Element (lamp, shift) of Z^m wr Z^k.
struct WreathElement {
  std::size_t base_dim = 1;
  std::size_t lamp_dim = 1;
  LampConfig lamp;
  ExpVec shift;

  WreathElement() : shift(1, 0) {}
  WreathElement(std::size_t k, std::size_t m) : base_dim(k), lamp_dim(m), shift(k, 0) {}
  WreathElement(std::size_t k, std::size_t m, LampConfig l, ExpVec s)
      : base_dim(k), lamp_dim(m), lamp(std::move(l)), shift(std::move(s)) {
    if (shift.size() != k) throw Error(ErrorCode::DimensionMismatch, "shift has wrong dimension");
    for (auto it = lamp.begin(); it != lamp.end();) {
      if (it->first.size() != k || it->second.size() != m)
        throw Error(ErrorCode::DimensionMismatch, "lamp entry has wrong dimension");
      it = is_zero(it->second) ? lamp.erase(it) : std::next(it);
    }
  }

  static WreathElement lamp_at(std::size_t k, std::size_t m, const ExpVec& x, const ExpVec& v) {
    return WreathElement(k, m, LampConfig{{x, v}}, ExpVec(k, 0));
  }
  static WreathElement base_shift(std::size_t k, std::size_t m, const ExpVec& g) {
    return WreathElement(k, m, {}, g);
  }

  // (s1,g1)(s2,g2) = (s1 + g1.s2, g1 + g2)
  friend WreathElement operator*(const WreathElement& a, const WreathElement& b) {
    if (a.base_dim != b.base_dim || a.lamp_dim != b.lamp_dim)
      throw Error(ErrorCode::DimensionMismatch, "wreath elements of different groups");
    WreathElement r(a.base_dim, a.lamp_dim);
    r.lamp = add_configs(a.lamp, shift_config(b.lamp, a.shift));
    r.shift = add(a.shift, b.shift);
    return r;
  }

  // Action on configurations: (s,g).t = s + g.t
  LampConfig act(const LampConfig& t) const { return add_configs(lamp, shift_config(t, shift)); }

  friend bool operator==(const WreathElement&, const WreathElement&) = default;

  std::string str() const { return "[" + config_str(lamp) + " ; " + vec_str(shift) + "]"; }
};

inline WreathElement inverse(const WreathElement& w) {
  ExpVec back = neg(w.shift);
  WreathElement r(w.base_dim, w.lamp_dim);
  r.lamp = negate_config(shift_config(w.lamp, back));
  r.shift = back;
  return r;
}

inline std::string key_of(const WreathElement& w) { return w.str(); }

// Named generators: base shifts t1..tk and lamps h1..hm at the origin. For
// k = m = 1 the names are g (shift) and h (lamp h0).
inline NamedGenerators<WreathElement> wreath_generators(std::size_t k, std::size_t m) {
  NamedGenerators<WreathElement> gens;
  for (std::size_t i = 0; i < k; ++i) {
    ExpVec e(k, 0);
    e[i] = 1;
    gens.push_back({k == 1 ? "g" : "g" + std::to_string(i + 1), WreathElement::base_shift(k, m, e)});
  }
  for (std::size_t j = 0; j < m; ++j) {
    ExpVec v(m, 0);
    v[j] = 1;
    gens.push_back({m == 1 ? "h" : "h" + std::to_string(j + 1), WreathElement::lamp_at(k, m, ExpVec(k, 0), v)});
  }
  return gens;
}

// h_n = g^n h0 g^-n
inline WreathElement lamp_generator(long n) {
  WreathElement h = wreath_generators(1, 1)[1].second;
  WreathElement gn = WreathElement::base_shift(1, 1, ExpVec{n});
  return gn * h * inverse(gn);
}

// Base and lamp orders of a Plante product; both must be total.
class PlanteOrder {
 public:
  PlanteOrder(LatticePreorder base, LatticePreorder lamp) : base_(std::move(base)), lamp_(std::move(lamp)) {
    if (!base_.is_total() || !lamp_.is_total()) throw Error(ErrorCode::NonTotalOrder, "base and lamp orders must be total");
  }
  static PlanteOrder standard(std::size_t k, std::size_t m) {
    return PlanteOrder(LatticePreorder::standard(k), LatticePreorder::standard(m));
  }

  const LatticePreorder& base() const { return base_; }
  const LatticePreorder& lamp() const { return lamp_; }

  // Strict base comparison x < y.
  bool base_less(const ExpVec& x, const ExpVec& y) const { return base_.sign(add(y, neg(x))) == Sign::Positive; }

  // The base-order maximum of the support.
  std::optional<ExpVec> top(const LampConfig& s) const {
    std::optional<ExpVec> best;
    for (const auto& [x, v] : s)
      if (!best || base_less(*best, x)) best = x;
    return best;
  }

  Sign sign(const LampConfig& s) const {
    auto x = top(s);
    if (!x) return Sign::Residue;
    return lamp_.sign(s.at(*x));
  }

  // Position of the largest disagreement between s and t.
  std::optional<ExpVec> max_disagreement(const LampConfig& s, const LampConfig& t) const {
    return top(add_configs(s, negate_config(t)));
  }

 private:
  LatticePreorder base_;
  LatticePreorder lamp_;
};

inline Sign plante_sign(const LampConfig& s, const PlanteOrder& order) { return order.sign(s); }

// Sign of s - t: Positive when s > t.
inline Sign plante_compare(const LampConfig& s, const LampConfig& t, const PlanteOrder& order) {
  return order.sign(add_configs(s, negate_config(t)));
}

class PlanteEngine {
 public:
  using element_type = WreathElement;
  explicit PlanteEngine(PlanteOrder order) : order_(std::move(order)) {}
  Sign sign(const WreathElement& w) const { return order_.sign(w.lamp); }
  std::string name() const { return "plante"; }
  const PlanteOrder& order() const { return order_; }

 private:
  PlanteOrder order_;
};

// Order embedding of the base group into the dyadics. Rank one uses the
// functional itself (unbounded); higher rank ranks a finite box [-R,R]^k.
class BaseEmbedding {
 public:
  BaseEmbedding(const LatticePreorder& base, long range = 8) : base_(base), range_(range) {
    if (base_.dim() > 1) {
      std::vector<ExpVec> pts;
      ExpVec x(base_.dim(), -range_);
      for (;;) {
        pts.push_back(x);
        std::size_t i = 0;
        while (i < x.size() && x[i] == range_) x[i++] = -range_;
        if (i == x.size()) break;
        ++x[i];
      }
      std::stable_sort(pts.begin(), pts.end(),
                       [&](const ExpVec& a, const ExpVec& b) { return base_.sign(add(b, neg(a))) == Sign::Positive; });
      long zero = 0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (is_zero(pts[i])) zero = static_cast<long>(i);
      for (std::size_t i = 0; i < pts.size(); ++i) rank_.emplace(pts[i], static_cast<long>(i) - zero);
    }
  }

  Dyadic operator()(const ExpVec& x) const {
    if (x.size() != base_.dim()) throw Error(ErrorCode::DimensionMismatch, "base point has wrong dimension");
    if (base_.dim() == 1) return Dyadic(base_.rows()[0][0] * x[0]);
    auto it = rank_.find(x);
    if (it == rank_.end()) throw Error(ErrorCode::EmbeddingOutOfRange, vec_str(x) + " outside the embedded box");
    return Dyadic(it->second);
  }

 private:
  LatticePreorder base_;
  long range_;
  std::map<ExpVec, long> rank_;
};

// delta(s,t) = iota(max disagreement); nullopt stands for minus infinity (s = t).
inline std::optional<Dyadic> delta_kernel(const LampConfig& s, const LampConfig& t, const PlanteOrder& order,
                                          const BaseEmbedding& iota) {
  auto x = order.max_disagreement(s, t);
  if (!x) return std::nullopt;
  return iota(*x);
}

// C_{s,g}: configurations agreeing with s at every base point above g.
struct CSet {
  LampConfig center;
  ExpVec level;

  bool contains(const LampConfig& t, const PlanteOrder& order) const {
    auto x = order.max_disagreement(center, t);
    return !x || !order.base_less(level, *x);
  }
};

inline CSet cset(const LampConfig& s, const ExpVec& g) { return {s, g}; }

// Each C-set must meet the sorted configurations in a contiguous run, and the
// runs must be pairwise nested or disjoint.
inline bool cset_cross_free(const std::vector<CSet>& family, const std::vector<LampConfig>& sorted_points,
                            const PlanteOrder& order) {
  std::set<std::pair<long, long>> runs;
  for (const auto& C : family) {
    long first = -1, last = -1;
    for (std::size_t i = 0; i < sorted_points.size(); ++i) {
      if (!C.contains(sorted_points[i], order)) continue;
      if (first < 0) first = static_cast<long>(i);
      else if (last != static_cast<long>(i) - 1) return false;  // not convex
      last = static_cast<long>(i);
    }
    if (first < 0) continue;
    runs.insert({first, last});
  }
  std::vector<Interval> fam;
  for (auto [a, b] : runs) fam.push_back({Rational(2 * a - 1, 2), Rational(2 * b + 1, 2)});
  return cross_free(fam);
}

}  // namespace plfocal
