// Left-invariant preorders given by sign oracles: restriction to a discrete
// invariant set, jump cocycles, prime slope valuations, escaping sequences.
#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "plfocal/error.hpp"
#include "plfocal/exactnum.hpp"
#include "plfocal/plgroup.hpp"
#include "plfocal/plmap.hpp"

namespace plfocal {

template <class T>
concept GroupElement = requires(const T& a, const T& b) {
  { a * b } -> std::convertible_to<T>;
  { inverse(a) } -> std::convertible_to<T>;
  { a == b } -> std::convertible_to<bool>;
  { key_of(a) } -> std::convertible_to<std::string>;
};

// A sign oracle for the positive cone of a left-invariant preorder.
template <class E>
concept SignEngine = requires(const E& e, const typename E::element_type& g) {
  requires GroupElement<typename E::element_type>;
  { e.sign(g) } -> std::convertible_to<Sign>;
  { e.name() } -> std::convertible_to<std::string>;
};

// Order between the cosets g and h under engine e: Positive means g < h.
template <SignEngine E>
Sign relative_sign(const E& e, const typename E::element_type& g, const typename E::element_type& h) {
  return e.sign(inverse(g) * h);
}

// ---------------------------------------------------------------- restriction

// K = union over n of f^n(seeds), with f(x) > x on (0,1).
class DiscreteInvariantSet {
 public:
  DiscreteInvariantSet(PLMap anchor, std::vector<Rational> seeds)
      : f_(std::move(anchor)), finv_(inverse(f_)), seeds_(std::move(seeds)) {
    if (f_.model() != Model::UnitInterval) throw Error(ErrorCode::ModelMismatch, "anchor must be an interval map");
    auto fs = fixed_structure(f_);
    if (fs.support.size() != 1 || !(f_(interior_point(fs.support[0])) > interior_point(fs.support[0])))
      throw Error(ErrorCode::InvalidMap, "anchor must satisfy f(x) > x on (0,1)");
    if (seeds_.empty()) throw Error(ErrorCode::OutOfDomain, "need at least one seed");
    std::sort(seeds_.begin(), seeds_.end());
    if (seeds_.front().sgn() <= 0 || !(seeds_.back() < f_(seeds_.front())))
      throw Error(ErrorCode::OutOfDomain, "seeds must lie in one fundamental domain [x, f(x)) inside (0,1)");
  }

  const PLMap& anchor() const { return f_; }
  const std::vector<Rational>& seeds() const { return seeds_; }

  // K-points in [a, b] for 0 < a <= b < 1, increasing.
  std::vector<Rational> points_in(const Rational& a, const Rational& b) const {
    std::vector<Rational> out;
    for (const auto& s : seeds_) {
      Rational x = s;
      while (x >= a) x = finv_(x);
      x = f_(x);
      while (x <= b) {
        if (x >= a) out.push_back(x);
        x = f_(x);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Calls visit(x) on K-points below `top` in decreasing order until it returns false.
  template <class Visit>
  void scan_down(const Rational& top, Visit visit) const {
    using Item = std::pair<Rational, std::size_t>;
    auto less = [](const Item& a, const Item& b) { return a.first < b.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(less)> heap(less);
    for (std::size_t i = 0; i < seeds_.size(); ++i) {
      Rational x = seeds_[i];
      if (x < top) {
        while (f_(x) < top) x = f_(x);
      } else {
        while (x >= top) x = finv_(x);
      }
      heap.push({x, i});
    }
    while (!heap.empty()) {
      Item it = heap.top();
      heap.pop();
      if (!visit(it.first)) return;
      heap.push({finv_(it.first), it.second});
    }
  }

  bool contains(const Rational& x) const {
    if (x.sgn() <= 0 || x >= Rational(1)) return false;
    auto pts = points_in(x, x);
    return !pts.empty();
  }

 private:
  PLMap f_, finv_;
  std::vector<Rational> seeds_;
};

inline void require_f_plus(const PLMap& g) {
  if (g.model() != Model::UnitInterval) throw Error(ErrorCode::ModelMismatch, "expected an interval map");
  if (germ(g, End::High).slope != Rational(1)) throw Error(ErrorCode::NotInFPlus, "germ at 1 is not trivial");
}

// The largest K-point moved by g, or nullopt when g fixes K pointwise.
inline std::optional<Rational> xg(const PLMap& g, const DiscreteInvariantSet& K) {
  require_f_plus(g);
  auto fs = fixed_structure(g);
  if (fs.support.empty()) return std::nullopt;
  const Rational top = *fs.support.back().hi;
  const Rational bottom = *fs.support.front().lo;  // K-points at or below are fixed
  std::optional<Rational> found;
  K.scan_down(top, [&](const Rational& x) {
    if (x <= bottom) return false;
    if (g(x) != x) {
      found = x;
      return false;
    }
    return true;
  });
  return found;
}

inline Sign restriction_sign(const PLMap& g, const DiscreteInvariantSet& K) {
  auto x = xg(g, K);
  if (!x) return Sign::Residue;
  Rational y = g(*x);
  if (y != *x) return y > *x ? Sign::Positive : Sign::Negative;
  return g.derivative(*x, Side::Left) > Rational(1) ? Sign::Positive : Sign::Negative;
}

class RestrictionEngine {
 public:
  using element_type = PLMap;
  explicit RestrictionEngine(DiscreteInvariantSet K) : K_(std::move(K)) {}
  Sign sign(const PLMap& g) const { return restriction_sign(g, K_); }
  std::string name() const { return "restriction"; }
  const DiscreteInvariantSet& set() const { return K_; }

 private:
  DiscreteInvariantSet K_;
};

// Projection of g in F onto F+ = ker tau1: f0^{-tau1(g)} g.
inline PLMap project_to_f_plus(const PLMap& g, const PLMap& f0) { return power(f0, -tau1(g)) * g; }

// ---------------------------------------------------------------- jump

class JumpEngine {
 public:
  using element_type = PLMap;
  JumpEngine(Side side, SlopeGroup lambda, LatticePreorder order)
      : side_(side), lambda_(std::move(lambda)), order_(std::move(order)) {
    if (order_.dim() != lambda_.rank()) throw Error(ErrorCode::DimensionMismatch, "order dimension != slope group rank");
  }

  Side side() const { return side_; }
  const SlopeGroup& lambda() const { return lambda_; }
  const LatticePreorder& order() const { return order_; }

  std::string name() const { return side_ == Side::Right ? "jump-right" : "jump-left"; }

  ExpVec exponent(const Rational& r) const {
    try {
      return lambda_.decompose(r);
    } catch (const Error& e) {
      throw Error(ErrorCode::SlopeNotInGroup, e.what());
    }
  }

  // Sign of the cocycle at the outermost point where it leaves the residue.
  Sign sign(const PLMap& g) const {
    const auto& pcs = g.pieces();
    const std::size_t n = g.breakpoints().size();
    Rational acc(1);
    if (side_ == Side::Right) {
      for (std::size_t i = n; i-- > 0;) {
        acc *= pcs[i].slope / pcs[i + 1].slope;
        Sign s = order_.sign(exponent(acc));
        if (s != Sign::Residue) return s;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        acc *= pcs[i + 1].slope / pcs[i].slope;
        Sign s = order_.sign(exponent(acc));
        if (s != Sign::Residue) return s;
      }
    }
    return Sign::Residue;
  }

 private:
  Side side_;
  SlopeGroup lambda_;
  LatticePreorder order_;
};

inline Sign jump_sign(const PLMap& g, Side side, const SlopeGroup& lambda, const LatticePreorder& order) {
  return JumpEngine(side, lambda, order).sign(g);
}

// ---------------------------------------------------------------- prime

inline void require_rational_interval(const PLMap& g) {
  if (g.model() != Model::UnitInterval) throw Error(ErrorCode::NonRationalSlope, "expected a map of (0,1)");
}

// D_q^- g(x) = q^{nu_q(D^- g(x))}; sign at the largest x in (0,1] where it is not 1.
inline Sign prime_jump_sign(const PLMap& g, const mpz_class& q) {
  require_rational_interval(g);
  const auto& pcs = g.pieces();
  for (std::size_t i = pcs.size(); i-- > 0;) {
    long v = valuation(pcs[i].slope, q);
    if (v != 0) return sign_of(v);
  }
  return Sign::Residue;
}

inline std::optional<mpz_class> largest_slope_prime(const PLMap& g) {
  std::optional<mpz_class> best;
  for (const auto& p : g.pieces()) {
    for (const auto& [q, e] : factorize(p.slope.num()))
      if (!best || q > *best) best = q;
    for (const auto& [q, e] : factorize(p.slope.den()))
      if (!best || q > *best) best = q;
  }
  return best;
}

inline Sign combined_prime_sign(const PLMap& g) {
  require_rational_interval(g);
  auto p = largest_slope_prime(g);
  if (!p) return Sign::Residue;
  return prime_jump_sign(g, *p);
}

class PrimeEngine {
 public:
  using element_type = PLMap;
  explicit PrimeEngine(long q) : q_(q) {
    if (q < 2 || factorize(mpz_class(q)).size() != 1 || factorize(mpz_class(q)).begin()->second != 1)
      throw Error(ErrorCode::OutOfDomain, "q must be prime");
  }
  Sign sign(const PLMap& g) const { return prime_jump_sign(g, mpz_class(q_)); }
  std::string name() const { return "prime-" + std::to_string(q_); }
  long q() const { return q_; }

 private:
  long q_;
};

class CombinedPrimeEngine {
 public:
  using element_type = PLMap;
  Sign sign(const PLMap& g) const { return combined_prime_sign(g); }
  std::string name() const { return "prime-combined"; }
};

// ---------------------------------------------------------------- escaping

// s_n = f0^n(s0) for a base element f0 with tau1(f0) = 1 and f0(x) > x on (0,1).
class EscapingContext {
 public:
  EscapingContext(PLMap f0, Rational s0) : cache_(std::make_shared<Cache>()) {
    if (f0.model() != Model::UnitInterval) throw Error(ErrorCode::ModelMismatch, "escaping sequences need an interval map");
    if (tau1(f0) != 1) throw Error(ErrorCode::OutOfDomain, "base element must have tau1 = 1");
    auto fs = fixed_structure(f0);
    if (fs.support.size() != 1 || !(f0(Rational(1, 2)) > Rational(1, 2)))
      throw Error(ErrorCode::InvalidMap, "base element must satisfy f(x) > x on (0,1)");
    if (s0.sgn() <= 0 || s0 >= Rational(1)) throw Error(ErrorCode::OutOfDomain, "seed must lie in (0,1)");
    cache_->f0 = std::move(f0);
    cache_->f0inv = inverse(cache_->f0);
    cache_->s0 = s0;
    cache_->beta = cache_->f0.breakpoints().empty() ? Rational(1, 2) : cache_->f0.breakpoints().front();
    cache_->values.emplace(0, s0);
  }

  const PLMap& base() const { return cache_->f0; }
  const Rational& seed() const { return cache_->s0; }

  Rational s(long n) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto& vals = cache_->values;
    auto it = vals.find(n);
    if (it != vals.end()) return it->second;
    if (n > 0) {
      long k = vals.rbegin()->first;
      Rational x = vals.rbegin()->second;
      while (k < n) vals.emplace(++k, x = cache_->f0(x));
    } else {
      long k = vals.begin()->first;
      Rational x = vals.begin()->second;
      while (k > n) vals.emplace(--k, x = cache_->f0inv(x));
    }
    return vals.at(n);
  }

  // Smallest m with s_m >= c (c in (0,1)).
  long first_index_at_least(const Rational& c) const {
    long m = 0;
    if (s(m) >= c) {
      while (s(m - 1) >= c) --m;
    } else {
      while (s(m) < c) ++m;
    }
    return m;
  }

  // Largest m with s_m <= c (c in (0,1)).
  long last_index_at_most(const Rational& c) const {
    long m = 0;
    if (s(m) <= c) {
      while (s(m + 1) <= c) ++m;
    } else {
      while (s(m) > c) --m;
    }
    return m;
  }

  // Entry n of the sequence g.s, namely g(s_{n - tau1(g)}).
  Rational entry(const PLMap& g, long n) const { return g(s(n - tau1(g))); }

  // Indices at or above this bound give (g.s)_n = s_n.
  std::optional<long> upper_regime(const PLMap& g) const {
    long t = tau1(g);
    PLMap ft = power(cache_->f0, t);
    Rational c(0);
    if (!g.breakpoints().empty()) c = std::max(c, g.breakpoints().back());
    if (!ft.breakpoints().empty()) c = std::max(c, ft.breakpoints().back());
    if (c.sgn() == 0) {
      if (g == ft) return std::nullopt;  // agrees everywhere
      c = Rational(1, 2);
    }
    return first_index_at_least(c) + t;
  }

  // Indices at or below this bound lie in the linear regime of both g and f0.
  long lower_regime(const PLMap& g) const {
    Rational c = cache_->beta;
    if (!g.breakpoints().empty()) c = std::min(c, g.breakpoints().front());
    return last_index_at_most(c) + tau1(g);
  }

 private:
  struct Cache {
    PLMap f0, f0inv;
    Rational s0, beta;
    std::map<long, Rational> values;
    std::mutex mu;
  };
  std::shared_ptr<Cache> cache_;
};

// Positive when g.s > h.s: compare at the largest index where the sequences differ.
inline Sign escaping_compare(const PLMap& g, const PLMap& h, const EscapingContext& ctx) {
  if (g.model() != Model::UnitInterval || h.model() != Model::UnitInterval)
    throw Error(ErrorCode::ModelMismatch, "escaping sequences use interval maps");
  auto ug = ctx.upper_regime(g), uh = ctx.upper_regime(h);
  long lo = std::min(ctx.lower_regime(g), ctx.lower_regime(h));
  if (!ug && !uh) return Sign::Residue;
  long hi = std::max(ug.value_or(lo), uh.value_or(lo));
  for (long n = hi; n >= lo; --n) {
    Rational a = ctx.entry(g, n), b = ctx.entry(h, n);
    if (a != b) return a > b ? Sign::Positive : Sign::Negative;
  }
  return Sign::Residue;
}

class EscapingEngine {
 public:
  using element_type = PLMap;
  explicit EscapingEngine(EscapingContext ctx) : ctx_(std::move(ctx)) {}
  Sign sign(const PLMap& g) const {
    return escaping_compare(g, PLMap::identity(Model::UnitInterval), ctx_);
  }
  std::string name() const { return "escaping"; }
  const EscapingContext& context() const { return ctx_; }

 private:
  EscapingContext ctx_;
};

// ---------------------------------------------------------------- point stabilizer

// Preorder induced by the orbit of a point under the standard action: g > 1 iff g(x0) > x0.
class PointEngine {
 public:
  using element_type = PLMap;
  explicit PointEngine(Rational x0) : x0_(std::move(x0)) {}
  Sign sign(const PLMap& g) const { return sign_of(g(x0_) - x0_); }
  std::string name() const { return "point"; }
  const Rational& point() const { return x0_; }

 private:
  Rational x0_;
};

// ---------------------------------------------------------------- axioms

struct AxiomReport {
  bool pass = true;
  std::string axiom;                // name of the first failing axiom
  std::vector<std::size_t> witness;  // sample indices
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
};

// Cone axioms on samples: sign(g^-1) = -sign(g); P.P in P; residue closed
// under products; residue.P.residue in P (pairs exhaustively, triples sampled).
template <SignEngine E>
AxiomReport axioms_report(const E& engine, const std::vector<typename E::element_type>& samples,
                          std::size_t max_triples = 20000, unsigned seed = 1) {
  AxiomReport rep;
  std::vector<Sign> s(samples.size());
  auto fail = [&](const char* ax, std::vector<std::size_t> w) {
    rep.pass = false;
    rep.axiom = ax;
    rep.witness = std::move(w);
    return rep;
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    s[i] = engine.sign(samples[i]);
    if (engine.sign(inverse(samples[i])) != negate(s[i])) return fail("inverse-symmetry", {i});
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (s[i] == Sign::Negative || s[j] == Sign::Negative) continue;
      if (s[i] == Sign::Residue && s[j] == Sign::Residue && i > j) continue;
      Sign p = engine.sign(samples[i] * samples[j]);
      ++rep.pairs_checked;
      if (s[i] == Sign::Positive && s[j] == Sign::Positive && p != Sign::Positive) return fail("semigroup", {i, j});
      if (s[i] == Sign::Residue && s[j] == Sign::Residue && p != Sign::Residue) return fail("residue-subgroup", {i, j});
      if (s[i] != s[j] && p != Sign::Positive) return fail("residue-sandwich", {i, j});
    }
  }
  std::vector<std::size_t> res, pos;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (s[i] == Sign::Residue) res.push_back(i);
    if (s[i] == Sign::Positive) pos.push_back(i);
  }
  if (!res.empty() && !pos.empty()) {
    std::mt19937 rng(seed);
    const std::size_t all = res.size() * pos.size() * res.size();
    const std::size_t count = std::min(all, max_triples);
    for (std::size_t t = 0; t < count; ++t) {
      std::size_t a, b, c;
      if (all <= max_triples) {
        a = res[t / (pos.size() * res.size())];
        b = pos[(t / res.size()) % pos.size()];
        c = res[t % res.size()];
      } else {
        a = res[rng() % res.size()];
        b = pos[rng() % pos.size()];
        c = res[rng() % res.size()];
      }
      ++rep.triples_checked;
      if (engine.sign(samples[a] * samples[b] * samples[c]) != Sign::Positive) return fail("residue-sandwich", {a, b, c});
    }
  }
  return rep;
}

}  // namespace plfocal
