// Self-similar subsets of the line built from a pair of binary words: the
// cancellation check, exact symbolic sets g(K), the kernel alpha, the induced
// order on the orbit of K and the openness check for g(K) n K.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plfocal/error.hpp"
#include "plfocal/exactnum.hpp"
#include "plfocal/plmap.hpp"

namespace plfocal {

namespace detail {

inline bool is_binary_word(const std::string& w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c == '0' || c == '1'; });
}

inline bool is_constant_word(const std::string& w) {
  return std::all_of(w.begin(), w.end(), [&](char c) { return c == w.front(); });
}

// Value of a finite binary word read as an integer.
inline mpz_class word_value(const std::string& z) {
  mpz_class v = 0;
  for (char c : z) v = v * 2 + (c == '1' ? 1 : 0);
  return v;
}

}  // namespace detail

class WordPair {
 public:
  WordPair(std::string w1, std::string w2) : w1_(std::move(w1)), w2_(std::move(w2)) {
    if (w1_.empty() || w2_.empty()) throw Error(ErrorCode::InvalidWordPair, "words must be nonempty");
    if (!detail::is_binary_word(w1_) || !detail::is_binary_word(w2_))
      throw Error(ErrorCode::InvalidWordPair, "words must be binary");
    if (w1_ == w2_) throw Error(ErrorCode::InvalidWordPair, "words must differ");
  }
  const std::string& w1() const { return w1_; }
  const std::string& w2() const { return w2_; }
  const std::string& block(int b) const { return b == 0 ? w1_ : w2_; }
  bool non_constant() const { return !detail::is_constant_word(w1_) && !detail::is_constant_word(w2_); }
  friend bool operator==(const WordPair&, const WordPair&) = default;

 private:
  std::string w1_, w2_;
};

// ---------------------------------------------------------------- automata

namespace detail {

// Subsets of parse positions. A position is (word index, offset): index 0 and 1
// are the blocks w1, w2; index k >= 2 is the (k-2)-th atom of a cell.
using PState = std::uint32_t;
using Subset = std::vector<PState>;

constexpr PState pstate(std::uint32_t word, std::uint32_t pos) { return (word << 16) | pos; }

class ParseNfa {
 public:
  ParseNfa(const WordPair& wp, std::vector<std::string> atoms) : wp_(&wp), atoms_(std::move(atoms)) {}
  explicit ParseNfa(const WordPair& wp) : wp_(&wp), atoms_{""} {}

  const std::string& word(std::uint32_t k) const { return k < 2 ? wp_->block(static_cast<int>(k)) : atoms_[k - 2]; }

  static Subset block_starts() { return {pstate(0, 0), pstate(1, 0)}; }

  Subset initial() const {
    Subset s;
    for (std::uint32_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i].empty()) {
        s.push_back(pstate(0, 0));
        s.push_back(pstate(1, 0));
      } else {
        s.push_back(pstate(i + 2, 0));
      }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  Subset step(const Subset& s, char bit) const {
    Subset out;
    for (PState q : s) {
      std::uint32_t k = q >> 16, pos = q & 0xffff;
      const std::string& w = word(k);
      if (w[pos] != bit) continue;
      if (pos + 1 == w.size()) {
        out.push_back(pstate(0, 0));
        out.push_back(pstate(1, 0));
      } else {
        out.push_back(pstate(k, pos + 1));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool empty_language() const { return initial().empty(); }

 private:
  const WordPair* wp_;
  std::vector<std::string> atoms_;
};

// Ultimately periodic binary word prefix.cycle^infinity.
struct Lasso {
  std::string prefix;
  std::string cycle;
};

// Deterministic walk over hashable keys until a key repeats.
template <class Key, class Next>
Lasso build_lasso(Key key, Next next) {
  std::map<Key, std::size_t> seen;
  std::string bits;
  for (;;) {
    auto it = seen.find(key);
    if (it != seen.end()) return {bits.substr(0, it->second), bits.substr(it->second)};
    seen.emplace(key, bits.size());
    auto [bit, nk] = next(key);
    bits += bit;
    key = std::move(nk);
  }
}

// Lexicographically largest infinite word accepted from a nonempty subset.
inline Lasso greedy_max(const ParseNfa& nfa, const Subset& start) {
  return build_lasso(start, [&](const Subset& s) {
    Subset one = nfa.step(s, '1');
    if (!one.empty()) return std::pair<char, Subset>('1', std::move(one));
    return std::pair<char, Subset>('0', nfa.step(s, '0'));
  });
}

// Reachable part of the product of two subset automata.
struct Product {
  std::vector<std::pair<Subset, Subset>> states;
  std::vector<std::array<int, 2>> next;

  Product(const ParseNfa& a, const ParseNfa& b) {
    std::map<std::pair<Subset, Subset>, int> index;
    auto add = [&](std::pair<Subset, Subset> st) {
      auto [it, fresh] = index.emplace(st, static_cast<int>(states.size()));
      if (fresh) {
        states.push_back(std::move(st));
        next.push_back({-1, -1});
      }
      return it->second;
    };
    add({a.initial(), b.initial()});
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (int bit = 0; bit < 2; ++bit) {
        char c = bit ? '1' : '0';
        auto st = std::make_pair(a.step(states[i].first, c), b.step(states[i].second, c));
        if (st.first.empty() && st.second.empty()) continue;
        int j = add(std::move(st));
        next[i][bit] = j;
      }
    }
  }

  bool one_sided(std::size_t i) const { return states[i].first.empty() != states[i].second.empty(); }
  bool two_sided(std::size_t i) const { return !states[i].first.empty() && !states[i].second.empty(); }

  // States from which some state satisfying `target` is reachable.
  std::vector<bool> can_reach(const std::function<bool(std::size_t)>& target) const {
    std::vector<std::vector<int>> rev(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
      for (int j : next[i])
        if (j >= 0) rev[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
    std::vector<bool> mark(states.size(), false);
    std::deque<std::size_t> q;
    for (std::size_t i = 0; i < states.size(); ++i)
      if (target(i)) {
        mark[i] = true;
        q.push_back(i);
      }
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop_front();
      for (int p : rev[i])
        if (!mark[static_cast<std::size_t>(p)]) {
          mark[static_cast<std::size_t>(p)] = true;
          q.push_back(static_cast<std::size_t>(p));
        }
    }
    return mark;
  }

  bool languages_equal() const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (one_sided(i)) return false;
    return true;
  }
};

}  // namespace detail

// ---------------------------------------------------------------- cancellation

struct CancellationReport {
  bool ok = true;
  std::string witness;  // offending prefix, or a word with two factorizations
  std::string reason;
};

// Bounded check: every word z with |z| <= L such that z.w lies in K~0 for some
// w in K~0 must factor over {w1, w2}; additionally {w1, w2} must be a code
// (unique factorization), tested exactly.
inline CancellationReport cancellation_report(const std::string& a, const std::string& b, std::size_t L) {
  WordPair wp(a, b);
  if (L < std::max(a.size(), b.size())) throw Error(ErrorCode::InvalidWordPair, "bound below word length");
  CancellationReport rep;

  // Unique factorization via dangling suffixes (top string longer than bottom by `dangling`).
  {
    struct Node {
      std::string top, bottom, dangling;
    };
    std::deque<Node> q;
    std::set<std::string> seen;
    const std::string words[2] = {a, b};
    for (const auto& u : words)
      for (const auto& v : words)
        if (u != v && u.size() > v.size() && u.compare(0, v.size(), v) == 0) q.push_back({u, v, u.substr(v.size())});
    while (!q.empty()) {
      Node n = q.front();
      q.pop_front();
      if (!seen.insert(n.dangling).second) continue;
      for (const auto& c : words) {
        if (c == n.dangling) {
          rep.ok = false;
          rep.witness = n.top;
          rep.reason = "two factorizations";
          return rep;
        }
        if (c.size() > n.dangling.size() && c.compare(0, n.dangling.size(), n.dangling) == 0)
          q.push_back({n.bottom + c, n.top, c.substr(n.dangling.size())});
        else if (n.dangling.size() > c.size() && n.dangling.compare(0, c.size(), c) == 0)
          q.push_back({n.top, n.bottom + c, n.dangling.substr(c.size())});
      }
    }
  }

  // Pairs of block positions admitting a common infinite continuation.
  const std::uint32_t n1 = static_cast<std::uint32_t>(a.size()), n2 = static_cast<std::uint32_t>(b.size());
  auto pos_index = [&](detail::PState q) { return (q >> 16) == 0 ? (q & 0xffff) : n1 + (q & 0xffff); };
  const std::size_t np = n1 + n2;
  detail::ParseNfa nfa(wp);
  std::vector<detail::PState> all;
  for (std::uint32_t j = 0; j < n1; ++j) all.push_back(detail::pstate(0, j));
  for (std::uint32_t j = 0; j < n2; ++j) all.push_back(detail::pstate(1, j));
  std::vector<std::vector<std::size_t>> succ(np * np);
  for (auto p : all)
    for (auto q : all)
      for (char c : {'0', '1'}) {
        auto sp = nfa.step({p}, c), sq = nfa.step({q}, c);
        for (auto x : sp)
          for (auto y : sq) succ[pos_index(p) * np + pos_index(q)].push_back(pos_index(x) * np + pos_index(y));
      }
  std::vector<bool> alive(np * np, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (!alive[i]) continue;
      bool any = std::any_of(succ[i].begin(), succ[i].end(), [&](std::size_t j) { return alive[j]; });
      if (!any) {
        alive[i] = false;
        changed = true;
      }
    }
  }
  auto relevant = [&](const detail::Subset& s) {
    for (auto q : s)
      for (auto st : detail::ParseNfa::block_starts())
        if (alive[pos_index(q) * np + pos_index(st)]) return true;
    return false;
  };
  auto at_boundary = [](const detail::Subset& s) { return std::find(s.begin(), s.end(), detail::pstate(0, 0)) != s.end(); };

  std::map<detail::Subset, std::string> seen;
  std::deque<detail::Subset> frontier;
  seen.emplace(nfa.initial(), "");
  frontier.push_back(nfa.initial());
  while (!frontier.empty()) {
    detail::Subset s = frontier.front();
    frontier.pop_front();
    const std::string z = seen.at(s);
    if (relevant(s) && !at_boundary(s)) {
      rep.ok = false;
      rep.witness = z;
      rep.reason = "prefix of a concatenation that does not factor";
      return rep;
    }
    if (z.size() == L) continue;
    for (char c : {'0', '1'}) {
      auto t = nfa.step(s, c);
      if (t.empty() || seen.count(t)) continue;
      seen.emplace(t, z + c);
      frontier.push_back(std::move(t));
    }
  }
  return rep;
}

inline bool cancellation_check(const std::string& a, const std::string& b, std::size_t L) {
  return cancellation_report(a, b, L).ok;
}

// ---------------------------------------------------------------- points

// cell + ev(prefix . cycle^infinity)
struct SetPoint {
  long cell = 0;
  std::string prefix;
  std::string cycle = "0";

  Rational value() const {
    Rational v(cell);
    v += Rational(detail::word_value(prefix), mpz_class(1)) * Rational::pow2(-static_cast<long>(prefix.size()));
    mpz_class den = (mpz_class(1) << cycle.size()) - 1;
    v += Rational(detail::word_value(cycle), den) * Rational::pow2(-static_cast<long>(prefix.size()));
    return v;
  }

  std::string str() const { return std::to_string(cell) + "+0." + prefix + "(" + cycle + ")"; }

  static SetPoint from_rational(const Rational& x) {
    mpz_class fl = x.floor();
    SetPoint p;
    p.cell = fl.get_si();
    Rational f = x - Rational(fl);
    std::map<Rational, std::size_t> seen;
    std::string bits;
    for (;;) {
      auto it = seen.find(f);
      if (it != seen.end()) {
        p.prefix = bits.substr(0, it->second);
        p.cycle = bits.substr(it->second);
        return p;
      }
      seen.emplace(f, bits.size());
      f = f * Rational(2);
      if (f >= Rational(1)) {
        bits += '1';
        f = f - Rational(1);
      } else {
        bits += '0';
      }
    }
  }
};

// ---------------------------------------------------------------- sets

// Union over cells n of n + ev(z.K~0) for the atoms z of the cell; cells not
// listed hold the single atom "" (the reference set K there).
class TailSet {
 public:
  using Cell = std::vector<std::string>;

  static TailSet reference(const WordPair& wp) { return TailSet(wp); }

  const WordPair& pair() const { return wp_; }
  const std::map<long, Cell>& cells() const { return cells_; }
  Cell cell(long n) const {
    auto it = cells_.find(n);
    return it == cells_.end() ? Cell{""} : it->second;
  }

  // Explicit cells stored after normalization; cells equal to {""} are dropped.
  void set_cell(long n, Cell atoms) {
    normalize(atoms);
    if (atoms.size() == 1 && atoms[0].empty()) cells_.erase(n);
    else cells_[n] = std::move(atoms);
  }

  bool contains(const SetPoint& p) const {
    detail::ParseNfa nfa(wp_, cell(p.cell));
    detail::Subset s = nfa.initial();
    if (s.empty()) return false;
    for (char c : p.prefix) {
      s = nfa.step(s, c);
      if (s.empty()) return false;
    }
    std::set<detail::Subset> seen;
    for (;;) {
      if (!seen.insert(s).second) return true;
      for (char c : p.cycle) {
        s = nfa.step(s, c);
        if (s.empty()) return false;
      }
    }
  }
  bool contains(const Rational& x) const { return contains(SetPoint::from_rational(x)); }

  // One line per explicit cell: "n: atom atom ..." with "e" for the empty atom and "-" for an empty cell.
  std::string dump() const {
    std::string out = "K(" + wp_.w1() + "," + wp_.w2() + ")\n";
    for (const auto& [n, atoms] : cells_) {
      out += std::to_string(n) + ":";
      if (atoms.empty()) out += " -";
      for (const auto& z : atoms) out += " " + (z.empty() ? std::string("e") : z);
      out += "\n";
    }
    return out;
  }

  friend bool operator==(const TailSet& a, const TailSet& b) { return a.wp_ == b.wp_ && a.cells_ == b.cells_; }

 private:
  explicit TailSet(const WordPair& wp) : wp_(wp) {}

  bool factors(const std::string& u) const {
    std::vector<bool> ok(u.size() + 1, false);
    ok[0] = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!ok[i]) continue;
      for (int b = 0; b < 2; ++b) {
        const auto& w = wp_.block(b);
        if (i + w.size() <= u.size() && u.compare(i, w.size(), w) == 0) ok[i + w.size()] = true;
      }
    }
    return ok[u.size()];
  }

  // Drop atoms contained in shorter ones; merge z.w1, z.w2 into z.
  void normalize(Cell& atoms) const {
    for (bool changed = true; changed;) {
      changed = false;
      std::sort(atoms.begin(), atoms.end(), [](const std::string& x, const std::string& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
      });
      atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
      Cell kept;
      for (const auto& z : atoms) {
        bool inside = std::any_of(kept.begin(), kept.end(), [&](const std::string& k) {
          return z.size() > k.size() && z.compare(0, k.size(), k) == 0 && factors(z.substr(k.size()));
        });
        if (!inside) kept.push_back(z);
      }
      if (kept.size() != atoms.size()) changed = true;
      atoms = std::move(kept);
      for (std::size_t i = 0; i < atoms.size() && !changed; ++i) {
        const auto& z = atoms[i];
        if (z.size() < wp_.w1().size() || z.compare(z.size() - wp_.w1().size(), std::string::npos, wp_.w1()) != 0)
          continue;
        std::string stem = z.substr(0, z.size() - wp_.w1().size());
        auto sib = std::find(atoms.begin(), atoms.end(), stem + wp_.w2());
        if (sib == atoms.end()) continue;
        std::string drop = *sib;
        atoms.erase(std::remove_if(atoms.begin(), atoms.end(),
                                   [&](const std::string& x) { return x == stem + wp_.w1() || x == drop; }),
                    atoms.end());
        atoms.push_back(stem);
        changed = true;
      }
    }
    std::sort(atoms.begin(), atoms.end());
  }

  WordPair wp_;
  std::map<long, Cell> cells_;
};

// K = union of integer translates of K0(w1, w2); the pair must be non-constant
// and pass the cancellation check up to `bound`.
inline TailSet build_reference(const WordPair& wp, std::size_t bound = 20) {
  if (!wp.non_constant()) throw Error(ErrorCode::InvalidWordPair, "constant words do not give a set with property (O)");
  auto rep = cancellation_report(wp.w1(), wp.w2(), std::max(bound, std::max(wp.w1().size(), wp.w2().size())));
  if (!rep.ok) throw Error(ErrorCode::InvalidWordPair, "cancellation fails (" + rep.reason + "): " + rep.witness);
  return TailSet::reference(wp);
}

// ---------------------------------------------------------------- action

inline void require_line_dyadic(const PLMap& g) {
  if (g.model() != Model::Line) throw Error(ErrorCode::ModelMismatch, "symbolic sets use maps of the line");
  for (const auto& b : g.breakpoints())
    if (!b.is_dyadic()) throw Error(ErrorCode::NonDyadicMap, "non-dyadic breakpoint " + b.str());
  for (const auto& p : g.pieces()) {
    if (!p.offset.is_dyadic()) throw Error(ErrorCode::NonDyadicMap, "non-dyadic offset " + p.offset.str());
    auto e = p.slope.num() == 1 ? p.slope.den() : p.slope.num();
    if (p.slope.sgn() <= 0 || !(p.slope.num() == 1 || p.slope.den() == 1) || (e & (e - 1)) != 0)
      throw Error(ErrorCode::NonDyadicMap, "slope not a power of 2: " + p.slope.str());
  }
  const auto& f = g.pieces().front();
  const auto& l = g.pieces().back();
  if (f.slope != Rational(1) || l.slope != Rational(1) || !f.offset.is_integer() || !l.offset.is_integer())
    throw Error(ErrorCode::NonDyadicMap, "germs at infinity must be integer translations");
}

// g(S), computed atom by atom: atoms are refined by block until their cylinder
// avoids breakpoints and the image is again an aligned cylinder.
inline TailSet image(const PLMap& g, const TailSet& S) {
  require_line_dyadic(g);
  const auto& bps = g.breakpoints();
  long lo = bps.empty() ? 0 : bps.front().floor().get_si();
  long hi = bps.empty() ? 0 : bps.back().ceil().get_si();
  if (!S.cells().empty()) {
    lo = std::min(lo, S.cells().begin()->first);
    hi = std::max(hi, S.cells().rbegin()->first + 1);
  }
  const WordPair& wp = S.pair();
  std::map<long, TailSet::Cell> out;
  const long out_lo = g(Rational(lo)).floor().get_si(), out_hi = g(Rational(hi)).floor().get_si();
  for (long m = out_lo; m < out_hi; ++m) out[m];
  for (long n = lo; n < hi; ++n) {
    std::vector<std::string> work = S.cell(n);
    while (!work.empty()) {
      std::string z = work.back();
      work.pop_back();
      const long len = static_cast<long>(z.size());
      Rational left = Rational(n) + Rational(detail::word_value(z), mpz_class(1)) * Rational::pow2(-len);
      Rational right = left + Rational::pow2(-len);
      bool split = std::any_of(bps.begin(), bps.end(), [&](const Rational& b) { return left < b && b < right; });
      std::optional<std::pair<long, std::string>> placed;
      if (!split) {
        const Affine& a = g.pieces()[g.piece_right(left)];
        long e = a.slope.num() == 1 ? -static_cast<long>(mpz_sizeinbase(a.slope.den().get_mpz_t(), 2) - 1)
                                    : static_cast<long>(mpz_sizeinbase(a.slope.num().get_mpz_t(), 2) - 1);
        long m = len - e;
        Rational d = a(left);
        if (m >= 0) {
          Rational scaled = d * Rational::pow2(m);
          if (scaled.is_integer()) {
            mpz_class cell = d.floor();
            mpz_class idx = scaled.num() - (cell << static_cast<unsigned long>(m));
            std::string zz;
            for (long i = m - 1; i >= 0; --i) zz += mpz_tstbit(idx.get_mpz_t(), static_cast<mp_bitcnt_t>(i)) ? '1' : '0';
            placed = std::make_pair(cell.get_si(), zz);
          }
        }
      }
      if (placed) {
        out[placed->first].push_back(placed->second);
      } else {
        work.push_back(z + wp.w1());
        work.push_back(z + wp.w2());
      }
    }
  }
  TailSet T = TailSet::reference(wp);
  for (auto& [m, atoms] : out) T.set_cell(m, std::move(atoms));
  return T;
}

// ---------------------------------------------------------------- kernel and order

struct Alpha {
  bool minus_infinity = true;
  SetPoint point;
  Rational value;
  int side = 0;  // +1: the point lies in the first set only, -1: second only, 0: both

  friend bool operator<(const Alpha& a, const Alpha& b) {
    if (a.minus_infinity || b.minus_infinity) return a.minus_infinity && !b.minus_infinity;
    return a.value < b.value;
  }
  std::string str() const { return minus_infinity ? "-inf" : value.str(); }
};

// alpha(S1, S2) = inf{x : S1 and S2 agree on [x, +inf)}: the supremum of the
// symmetric difference, located in the highest differing cell by a greedy
// walk on the product automaton.
inline Alpha alpha(const TailSet& A, const TailSet& B) {
  if (!(A.pair() == B.pair())) throw Error(ErrorCode::InvalidWordPair, "sets built from different word pairs");
  std::set<long> keys;
  for (const auto& [n, c] : A.cells()) keys.insert(n);
  for (const auto& [n, c] : B.cells()) keys.insert(n);
  for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
    const long n = *it;
    detail::ParseNfa na(A.pair(), A.cell(n)), nb(B.pair(), B.cell(n));
    detail::Product prod(na, nb);
    if (prod.languages_equal()) continue;
    auto good = prod.can_reach([&](std::size_t i) { return prod.one_sided(i); });
    // Key: (0, product state) while two-sided, then (side, subset) on one side.
    using Key = std::pair<int, std::pair<int, detail::Subset>>;
    int side = 0;
    Key start{0, {0, {}}};
    if (prod.one_sided(0)) {
      side = prod.states[0].first.empty() ? -1 : 1;
      start = Key{side, {0, side > 0 ? prod.states[0].first : prod.states[0].second}};
    }
    auto lasso = detail::build_lasso(start, [&](const Key& k) -> std::pair<char, Key> {
      if (k.first == 0) {
        std::size_t i = static_cast<std::size_t>(k.second.first);
        for (int bit : {1, 0}) {
          int j = prod.next[i][bit];
          if (j < 0 || !good[static_cast<std::size_t>(j)]) continue;
          const auto& st = prod.states[static_cast<std::size_t>(j)];
          char c = bit ? '1' : '0';
          if (prod.one_sided(static_cast<std::size_t>(j))) {
            side = st.first.empty() ? -1 : 1;
            return {c, Key{side, {0, side > 0 ? st.first : st.second}}};
          }
          return {c, Key{0, {j, {}}}};
        }
        throw Error(ErrorCode::NoCommonTail, "greedy walk lost the difference");
      }
      const detail::ParseNfa& nfa = k.first > 0 ? na : nb;
      auto one = nfa.step(k.second.second, '1');
      if (!one.empty()) return {'1', Key{k.first, {0, one}}};
      return {'0', Key{k.first, {0, nfa.step(k.second.second, '0')}}};
    });
    Alpha a;
    a.minus_infinity = false;
    a.point = SetPoint{n, lasso.prefix, lasso.cycle};
    a.value = a.point.value();
    a.side = side;
    return a;
  }
  return Alpha{};
}

struct Supremum {
  SetPoint point;
  bool attained = true;  // false: the supremum is x itself, approached from below
  Rational value() const { return point.value(); }
};

// Supremum of S n (-inf, x); throws EmptyBelow when it lies below `floor_limit`.
inline Supremum max_below(const TailSet& S, const Rational& x, const std::optional<Rational>& floor_limit = std::nullopt) {
  if (floor_limit && !(*floor_limit < x)) throw Error(ErrorCode::EmptyBelow, "nothing of the window lies below " + x.str());
  SetPoint X = SetPoint::from_rational(x);
  auto check = [&](Supremum s) {
    if (floor_limit && s.value() < *floor_limit) throw Error(ErrorCode::EmptyBelow, "no point of the set in the window below " + x.str());
    return s;
  };
  {
    detail::ParseNfa nfa(S.pair(), S.cell(X.cell));
    detail::Subset s = nfa.initial();
    std::optional<std::pair<std::size_t, detail::Subset>> best;  // branch position, subset after '0'
    std::map<std::pair<std::size_t, detail::Subset>, std::size_t> seen;
    std::string bits;
    bool alive = !s.empty();
    const std::size_t plen = X.prefix.size(), clen = X.cycle.size();
    for (std::size_t i = 0; alive; ++i) {
      std::size_t phase = i < plen ? i : plen + (i - plen) % clen;
      if (i >= plen) {
        auto key = std::make_pair(phase, s);
        auto it = seen.find(key);
        if (it != seen.end()) {
          bool branch_in_cycle = best && best->first >= it->second;
          if (branch_in_cycle) return check(Supremum{X, false});
          break;
        }
        seen.emplace(key, i);
      }
      char c = i < plen ? X.prefix[i] : X.cycle[(i - plen) % clen];
      if (c == '1') {
        auto zero = nfa.step(s, '0');
        if (!zero.empty()) best = std::make_pair(i, zero);
      }
      bits += c;
      s = nfa.step(s, c);
      alive = !s.empty();
    }
    if (best) {
      auto tail = detail::greedy_max(nfa, best->second);
      return check(Supremum{SetPoint{X.cell, bits.substr(0, best->first) + "0" + tail.prefix, tail.cycle}, true});
    }
  }
  long lowest = S.cells().empty() ? X.cell : std::min(X.cell, S.cells().begin()->first);
  for (long m = X.cell - 1;; --m) {
    if (floor_limit && Rational(m + 1) <= *floor_limit) throw Error(ErrorCode::EmptyBelow, "no point of the set in the window below " + x.str());
    detail::ParseNfa nfa(S.pair(), S.cell(m));
    auto init = nfa.initial();
    if (init.empty()) {
      if (m < lowest) throw Error(ErrorCode::EmptyBelow, "empty set");
      continue;
    }
    auto tail = detail::greedy_max(nfa, init);
    return check(Supremum{SetPoint{m, tail.prefix, tail.cycle}, true});
  }
}

// Positive when S1 follows S2: the supremum of S1 below alpha exceeds that of S2.
inline Sign ok_compare(const TailSet& S1, const TailSet& S2) {
  Alpha a = alpha(S1, S2);
  if (a.minus_infinity) return Sign::Residue;
  if (a.side != 0) return a.side > 0 ? Sign::Positive : Sign::Negative;
  Rational x1 = max_below(S1, a.value).value(), x2 = max_below(S2, a.value).value();
  if (x1 == x2) throw Error(ErrorCode::NonTotalOrder, "suprema below alpha coincide");
  return x1 > x2 ? Sign::Positive : Sign::Negative;
}

inline Sign ok_compare(const PLMap& g1, const PLMap& g2, const TailSet& K) {
  return ok_compare(image(g1, K), image(g2, K));
}

// g(S) n S is open in S: fails iff some point of the intersection has every
// neighbourhood in S meeting S minus g(S), i.e. an infinite walk through
// product states that are two-sided yet can still reach an S-only state.
inline bool propertyO_spot(const PLMap& g, const TailSet& S) {
  TailSet T = image(g, S);
  std::set<long> keys;
  for (const auto& [n, c] : S.cells()) keys.insert(n);
  for (const auto& [n, c] : T.cells()) keys.insert(n);
  for (long n : keys) {
    detail::ParseNfa ns(S.pair(), S.cell(n)), nt(T.pair(), T.cell(n));
    detail::Product prod(ns, nt);
    auto leaks = prod.can_reach([&](std::size_t i) {
      return !prod.states[i].first.empty() && prod.states[i].second.empty();
    });
    std::vector<bool> bad(prod.states.size());
    for (std::size_t i = 0; i < bad.size(); ++i) bad[i] = prod.two_sided(i) && leaks[i];
    if (!bad[0]) continue;
    // Cycle detection inside the bad region reachable from the root.
    std::vector<int> color(bad.size(), 0);
    std::function<bool(std::size_t)> dfs = [&](std::size_t i) {
      color[i] = 1;
      for (int j : prod.next[i]) {
        if (j < 0 || !bad[static_cast<std::size_t>(j)]) continue;
        if (color[static_cast<std::size_t>(j)] == 1) return true;
        if (color[static_cast<std::size_t>(j)] == 0 && dfs(static_cast<std::size_t>(j))) return true;
      }
      color[i] = 2;
      return false;
    };
    if (dfs(0)) return false;
  }
  return true;
}

}  // namespace plfocal
