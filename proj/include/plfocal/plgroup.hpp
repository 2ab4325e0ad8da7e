// Generators, words, balls, relator checks, 2-chain witnesses and
// interval-combinatorics predicates for PL groups.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "plfocal/error.hpp"
#include "plfocal/exactnum.hpp"
#include "plfocal/plmap.hpp"

namespace plfocal {

// ---------------------------------------------------------------- words

struct Letter {
  std::size_t gen = 0;
  int exp = 1;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

template <class T>
using NamedGenerators = std::vector<std::pair<std::string, T>>;

// Words are written as whitespace- or '*'-separated generator names, each
// optionally followed by ^n; "1" or the empty string is the identity.
template <class T>
Word parse_word(const std::string& text, const NamedGenerators<T>& gens) {
  Word w;
  std::string tok;
  auto flush = [&]() {
    if (tok.empty()) return;
    std::string name = tok;
    long e = 1;
    auto caret = tok.rfind('^');
    if (caret != std::string::npos) {
      name = tok.substr(0, caret);
      e = detail::parse_integer(tok.substr(caret + 1)).get_si();
    }
    tok.clear();
    if (name == "1" || name == "e") return;
    std::size_t idx = gens.size();
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].first == name) idx = i;
    if (idx == gens.size()) throw Error(ErrorCode::ParseError, "unknown generator '" + name + "'");
    for (long k = 0; k < (e >= 0 ? e : -e); ++k) w.push_back({idx, e >= 0 ? 1 : -1});
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') flush();
    else tok += c;
  }
  flush();
  return w;
}

template <class T>
std::string word_str(const Word& w, const NamedGenerators<T>& gens) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long run = static_cast<long>(j - i) * w[i].exp;
    if (!s.empty()) s += " ";
    s += gens[w[i].gen].first;
    if (run != 1) s += "^" + std::to_string(run);
    i = j;
  }
  return s;
}

template <class T>
T evaluate_word(const Word& w, const NamedGenerators<T>& gens, const T& identity) {
  T r = identity;
  for (const auto& l : w) r = r * (l.exp > 0 ? gens[l.gen].second : inverse(gens[l.gen].second));
  return r;
}

template <class T>
struct BallEntry {
  T element;
  Word word;
};

// Distinct elements of word length <= radius, each with a shortest word, in
// breadth-first order (ties broken by generator order, positive letter first).
template <class T>
std::vector<BallEntry<T>> enumerate_ball(const NamedGenerators<T>& gens, const T& identity, int radius) {
  std::vector<T> letters;
  std::vector<Letter> names;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    letters.push_back(gens[i].second);
    names.push_back({i, 1});
    letters.push_back(inverse(gens[i].second));
    names.push_back({i, -1});
  }
  std::vector<BallEntry<T>> out{{identity, {}}};
  std::unordered_map<std::string, std::size_t> seen{{key_of(identity), 0}};
  std::size_t begin = 0;
  for (int r = 0; r < radius; ++r) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t l = 0; l < letters.size(); ++l) {
        const Word& base = out[i].word;
        if (!base.empty() && base.back().gen == names[l].gen && base.back().exp == -names[l].exp) continue;
        T x = out[i].element * letters[l];
        std::string k = key_of(x);
        if (seen.count(k)) continue;
        Word w = base;
        w.push_back(names[l]);
        seen.emplace(std::move(k), out.size());
        out.push_back({std::move(x), std::move(w)});
      }
    }
    begin = end;
  }
  return out;
}

// ---------------------------------------------------------------- generators

enum class Family { ThompsonF, ThompsonFLine, BieriStrebel };

struct GroupPresentationContext {
  Family family = Family::ThompsonF;
  // Bieri–Strebel data: A = Z[1/2] and Lambda generated by these slopes.
  std::vector<Rational> slopes{Rational(2)};
};

// The generator f0: 2x on [0,1/4], x+1/4 on [1/4,1/2], x/2+1/2 on [1/2,1].
inline PLMap thompson_f0() {
  return PLMap::interval_from_points({{Rational(0), Rational(0)},
                                      {Rational(1, 4), Rational(1, 2)},
                                      {Rational(1, 2), Rational(3, 4)},
                                      {Rational(1), Rational(1)}});
}

// Conjugate of a unit-interval map onto [lo, hi] by the affine change of coordinates.
inline PLMap rescale(const PLMap& f, const Rational& lo, const Rational& hi) {
  if (f.model() != Model::UnitInterval) throw Error(ErrorCode::ModelMismatch, "rescale expects an interval map");
  std::vector<std::pair<Rational, Rational>> pts{{Rational(0), Rational(0)}};
  Rational len = hi - lo;
  if (lo.sgn() > 0) pts.push_back({lo, lo});
  for (const auto& b : f.breakpoints()) pts.push_back({lo + len * b, lo + len * f(b)});
  if (hi < Rational(1)) pts.push_back({hi, hi});
  pts.push_back({Rational(1), Rational(1)});
  return PLMap::interval_from_points(pts);
}

// The classical pair: A = x0 and B = x1.
inline NamedGenerators<PLMap> thompson_cfp_generators() {
  PLMap A = PLMap::interval_from_points({{Rational(0), Rational(0)},
                                         {Rational(1, 2), Rational(1, 4)},
                                         {Rational(3, 4), Rational(1, 2)},
                                         {Rational(1), Rational(1)}});
  PLMap B = PLMap::interval_from_points({{Rational(0), Rational(0)},
                                         {Rational(1, 2), Rational(1, 2)},
                                         {Rational(3, 4), Rational(5, 8)},
                                         {Rational(7, 8), Rational(3, 4)},
                                         {Rational(1), Rational(1)}});
  return {{"A", A}, {"B", B}};
}

// Unit translation and the map x (x<=0), 2x (0..1), x+1 (x>=1): Thompson's F acting on the line.
inline NamedGenerators<PLMap> thompson_line_generators() {
  PLMap t = PLMap::translation(Rational(1));
  PLMap g = PLMap::line_from_points(Rational(1), {{Rational(0), Rational(0)}, {Rational(1), Rational(2)}}, Rational(1));
  return {{"t", t}, {"g", g}};
}

// g(a,l): x -> l x + (1-l) a.
inline PLMap bs_scale(const Rational& a, const Rational& l) { return PLMap::affine(l, (Rational(1) - l) * a); }
// g+(a,l): identity left of a, g(a,l) right of a.
inline PLMap bs_scale_plus(const Rational& a, const Rational& l) {
  return PLMap::line_from_points(Rational(1), {{a, a}}, l);
}
// g-(a,l) = g(a,l) g+(a,l)^{-1}: g(a,l) left of a, identity right of a.
inline PLMap bs_scale_minus(const Rational& a, const Rational& l) { return bs_scale(a, l) * inverse(bs_scale_plus(a, l)); }

inline std::string bs_name(const std::string& prefix, const Rational& l) {
  return prefix + "(0," + l.short_str() + ")";
}

inline NamedGenerators<PLMap> standard_generators(const GroupPresentationContext& ctx) {
  switch (ctx.family) {
    case Family::ThompsonF: {
      // a = x1 and b = x0 x1^-1 in the classical generators; together they generate F.
      auto cfp = thompson_cfp_generators();
      const PLMap& A = cfp[0].second;
      const PLMap& B = cfp[1].second;
      return {{"a", B}, {"b", A * inverse(B)}};
    }
    case Family::ThompsonFLine:
      return thompson_line_generators();
    case Family::BieriStrebel: {
      NamedGenerators<PLMap> g{{"t1", PLMap::translation(Rational(1))}};
      for (const auto& l : ctx.slopes) g.push_back({bs_name("g", l), bs_scale(Rational(0), l)});
      for (const auto& l : ctx.slopes) g.push_back({bs_name("g+", l), bs_scale_plus(Rational(0), l)});
      return g;
    }
  }
  return {};
}

// Named elements accepted in words for the Bieri–Strebel group besides its generators.
inline NamedGenerators<PLMap> bs_named_elements(const GroupPresentationContext& ctx) {
  NamedGenerators<PLMap> g = standard_generators(ctx);
  for (const auto& l : ctx.slopes) g.push_back({bs_name("g-", l), bs_scale_minus(Rational(0), l)});
  return g;
}

// ---------------------------------------------------------------- relators

struct RelatorReport {
  bool ok = false;
  int failing = 0;  // 1 or 2: relator index; 3: the pair commutes
  std::optional<Rational> witness;  // point moved by the failing relator
};

inline std::optional<Rational> moved_point(const PLMap& f) {
  FixedStructure fs = fixed_structure(f);
  if (fs.support.empty()) return std::nullopt;
  return interior_point(fs.support.front());
}

// [a,(ba)b(ba)^-1] = [a,(ba)^2 b (ba)^-2] = 1 together with [a,b] != 1.
inline RelatorReport verify_relators_report(const PLMap& a, const PLMap& b) {
  if (a.model() != b.model()) throw Error(ErrorCode::ModelMismatch, "relators need maps on one model");
  PLMap ba = b * a;
  PLMap ba_inv = inverse(ba);
  PLMap r1 = commutator(a, ba * b * ba_inv);
  PLMap r2 = commutator(a, ba * ba * b * ba_inv * ba_inv);
  if (!r1.is_identity()) return {false, 1, moved_point(r1)};
  if (!r2.is_identity()) return {false, 2, moved_point(r2)};
  PLMap c = commutator(a, b);
  if (c.is_identity()) return {false, 3, std::nullopt};
  return {true, 0, std::nullopt};
}

inline bool verify_relators(const PLMap& a, const PLMap& b) { return verify_relators_report(a, b).ok; }

// ---------------------------------------------------------------- 2-chains

inline Bound support_inf(const PLMap& f) {
  auto fs = fixed_structure(f);
  if (fs.support.empty()) return std::nullopt;
  return fs.support.front().lo;
}
inline Bound support_sup(const PLMap& f) {
  auto fs = fixed_structure(f);
  if (fs.support.empty()) return std::nullopt;
  return fs.support.back().hi;
}

inline bool is_fixed(const PLMap& f, const Rational& x) { return f(x) == x; }

inline std::optional<OpenInterval> support_component(const PLMap& f, const Rational& x) {
  for (const auto& c : fixed_structure(f).support)
    if ((!c.lo || *c.lo < x) && (!c.hi || x < *c.hi)) return c;
  return std::nullopt;
}

struct TwoChainFailure : Error {
  int hypothesis;
  TwoChainFailure(int h, const std::string& msg)
      : Error(ErrorCode::HypothesisFailed, "(" + std::string(h == 1 ? "i" : h == 2 ? "ii" : "iii") + ") " + msg),
        hypothesis(h) {}
};

// Smallest N >= 1 with g^N(f(c)) > d, where c = inf supp g and d = sup supp f.
// If g moves that component downward, the result is -N for g^-1.
inline long two_chain_witness(const PLMap& f, const PLMap& g, long max_power = 1 << 16) {
  if (f.model() != Model::UnitInterval || g.model() != Model::UnitInterval)
    throw Error(ErrorCode::ModelMismatch, "two-chain witnesses use interval maps");
  Bound c = support_inf(g), d = support_sup(f);
  if (!c || !d) throw TwoChainFailure(1, "empty support");
  if (!(*c < *d)) throw TwoChainFailure(1, "inf supp(g) = " + c->str() + " is not below sup supp(f) = " + d->str());
  if (is_fixed(f, *c)) throw TwoChainFailure(2, "f fixes c = " + c->str());
  if (is_fixed(g, *d)) throw TwoChainFailure(2, "g fixes d = " + d->str());
  Rational fc = f(*c);
  auto comp = support_component(g, *d);
  if (!comp || !((!comp->lo || *comp->lo < fc) && (!comp->hi || fc < *comp->hi)))
    throw TwoChainFailure(3, "d and f(c) lie in different components of supp(g)");
  const bool up = g(fc) > fc;
  PLMap step = up ? g : inverse(g);
  Rational x = fc;
  for (long n = 1; n <= max_power; ++n) {
    x = step(x);
    if (x > *d) {
      long N = up ? n : -n;
      if (!verify_relators(f, power(g, N)))
        throw Error(ErrorCode::NoWitness, "relators fail for the computed power");
      return N;
    }
  }
  throw Error(ErrorCode::NoWitness, "no power of g carries f(c) past d within the bound");
}

// ---------------------------------------------------------------- interval predicates

inline bool in_open(const Bound& x, const OpenInterval& I) {
  if (!x) return false;
  return (!I.lo || *I.lo < *x) && (!I.hi || *x < *I.hi);
}

// Linked pair of successive fixed points: some support components (a,b) of f
// and (c,d) of g with {a,b} ∩ (c,d) or (a,b) ∩ {c,d} a single point.
inline bool linked_pair(const PLMap& f, const PLMap& g) {
  auto sf = fixed_structure(f).support, sg = fixed_structure(g).support;
  for (const auto& I : sf)
    for (const auto& J : sg) {
      int n1 = static_cast<int>(in_open(I.lo, J)) + static_cast<int>(in_open(I.hi, J));
      int n2 = static_cast<int>(in_open(J.lo, I)) + static_cast<int>(in_open(J.hi, I));
      if (n1 == 1 || n2 == 1) return true;
    }
  return false;
}

struct Interval {
  Rational lo;
  Rational hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Open intervals cross unless nested or disjoint.
inline bool crosses(const Interval& I, const Interval& J) {
  bool disjoint = I.hi <= J.lo || J.hi <= I.lo;
  bool nested = (I.lo <= J.lo && J.hi <= I.hi) || (J.lo <= I.lo && I.hi <= J.hi);
  return !disjoint && !nested;
}

inline std::optional<std::pair<std::size_t, std::size_t>> find_crossing(const std::vector<Interval>& family) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!(family[i].lo < family[i].hi)) throw Error(ErrorCode::OutOfDomain, "empty interval");
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (crosses(family[i], family[j])) return std::make_pair(i, j);
  }
  return std::nullopt;
}

inline bool cross_free(const std::vector<Interval>& family) { return !find_crossing(family).has_value(); }

}  // namespace plfocal
