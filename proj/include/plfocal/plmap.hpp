// Piecewise-linear orientation-preserving homeomorphisms of [0,1] or of the line.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plfocal/error.hpp"
#include "plfocal/exactnum.hpp"

namespace plfocal {

enum class Model { UnitInterval, Line };

enum class Side { Left, Right };

// x -> slope * x + offset
struct Affine {
  Rational slope{1};
  Rational offset{0};

  Rational operator()(const Rational& x) const { return slope * x + offset; }
  Affine after(const Affine& inner) const { return {slope * inner.slope, slope * inner.offset + offset}; }
  Affine inverse() const { return {Rational(1) / slope, -offset / slope}; }
  bool is_identity() const { return slope == Rational(1) && offset.sgn() == 0; }
  friend bool operator==(const Affine&, const Affine&) = default;
};

// An endpoint of an interval; nullopt stands for -inf on the left and +inf on the right.
using Bound = std::optional<Rational>;

struct OpenInterval {
  Bound lo;
  Bound hi;
  friend bool operator==(const OpenInterval&, const OpenInterval&) = default;
};

// Closed maximal fixed set component; lo == hi for an isolated fixed point.
struct FixedComponent {
  Bound lo;
  Bound hi;
  bool is_point() const { return lo && hi && *lo == *hi; }
  friend bool operator==(const FixedComponent&, const FixedComponent&) = default;
};

struct FixedStructure {
  std::vector<FixedComponent> fixed;
  std::vector<OpenInterval> support;
};

class PLMap {
 public:
  PLMap() : model_(Model::UnitInterval), pieces_{Affine{}} {}

  static PLMap identity(Model m) { return PLMap(m, {}, {Affine{}}); }

  // pieces.size() == breakpoints.size() + 1. For the line model the first and
  // last pieces are the end germs; for the unit interval they start at 0 and end at 1.
  PLMap(Model m, std::vector<Rational> breakpoints, std::vector<Affine> pieces)
      : model_(m), bps_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    validate();
    canonicalize();
  }

  // Unit interval map through the given graph points; must start at (0,0) and end at (1,1).
  static PLMap interval_from_points(const std::vector<std::pair<Rational, Rational>>& pts) {
    if (pts.size() < 2 || pts.front() != std::make_pair(Rational(0), Rational(0)) ||
        pts.back() != std::make_pair(Rational(1), Rational(1)))
      throw Error(ErrorCode::InvalidMap, "interval map must run from (0,0) to (1,1)");
    std::vector<Rational> bps;
    std::vector<Affine> pieces;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) pieces.push_back(through(pts[i], pts[i + 1]));
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) bps.push_back(pts[i].first);
    return PLMap(Model::UnitInterval, bps, pieces);
  }

  // Line map through the given graph points, with the given end slopes.
  static PLMap line_from_points(const Rational& left_slope, const std::vector<std::pair<Rational, Rational>>& pts,
                                const Rational& right_slope) {
    if (pts.empty()) throw Error(ErrorCode::InvalidMap, "need at least one graph point");
    std::vector<Rational> bps;
    std::vector<Affine> pieces;
    pieces.push_back({left_slope, pts.front().second - left_slope * pts.front().first});
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) pieces.push_back(through(pts[i], pts[i + 1]));
    pieces.push_back({right_slope, pts.back().second - right_slope * pts.back().first});
    for (const auto& p : pts) bps.push_back(p.first);
    return PLMap(Model::Line, bps, pieces);
  }

  static PLMap translation(const Rational& a) { return PLMap(Model::Line, {}, {Affine{Rational(1), a}}); }
  static PLMap affine(const Rational& slope, const Rational& offset) {
    return PLMap(Model::Line, {}, {Affine{slope, offset}});
  }

  Model model() const { return model_; }
  const std::vector<Rational>& breakpoints() const { return bps_; }
  const std::vector<Affine>& pieces() const { return pieces_; }
  bool is_identity() const { return bps_.empty() && pieces_[0].is_identity(); }

  // Index of the piece used to the right of x (or containing x).
  std::size_t piece_right(const Rational& x) const {
    return static_cast<std::size_t>(std::upper_bound(bps_.begin(), bps_.end(), x) - bps_.begin());
  }
  std::size_t piece_left(const Rational& x) const {
    return static_cast<std::size_t>(std::lower_bound(bps_.begin(), bps_.end(), x) - bps_.begin());
  }

  void check_domain(const Rational& x) const {
    if (model_ == Model::UnitInterval && (x.sgn() < 0 || x > Rational(1)))
      throw Error(ErrorCode::OutOfDomain, "point " + x.str() + " outside [0,1]");
  }

  Rational operator()(const Rational& x) const {
    check_domain(x);
    return pieces_[piece_right(x)](x);
  }

  Rational inverse_at(const Rational& y) const {
    check_domain(y);
    // Images of breakpoints are increasing; locate y among them.
    std::size_t lo = 0, hi = bps_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (pieces_[mid](bps_[mid]) <= y) lo = mid + 1;
      else hi = mid;
    }
    return pieces_[lo].inverse()(y);
  }

  Rational derivative(const Rational& x, Side side) const {
    check_domain(x);
    if (model_ == Model::UnitInterval) {
      if (side == Side::Left && x.sgn() == 0) throw Error(ErrorCode::OutOfDomain, "no left derivative at 0");
      if (side == Side::Right && x == Rational(1)) throw Error(ErrorCode::OutOfDomain, "no right derivative at 1");
    }
    return pieces_[side == Side::Right ? piece_right(x) : piece_left(x)].slope;
  }

  friend bool operator==(const PLMap& a, const PLMap& b) {
    return a.model_ == b.model_ && a.bps_ == b.bps_ && a.pieces_ == b.pieces_;
  }

  // Text form: one line per piece "x : slope, offset" giving the piece valid to
  // the right of x; the first line starts at "-inf" (line) or "0" (interval).
  std::string str(const std::string& sep = "\n") const {
    std::ostringstream os;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (i) os << sep;
      std::string start = i == 0 ? (model_ == Model::Line ? "-inf" : "0") : bps_[i - 1].short_str();
      os << start << " : " << pieces_[i].slope.short_str() << ", " << pieces_[i].offset.short_str();
    }
    return os.str();
  }

  // Compact single-line key; equal maps give equal keys.
  std::string key() const {
    std::string k = model_ == Model::Line ? "L" : "I";
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (i) k += "|" + bps_[i - 1].str();
      k += ";" + pieces_[i].slope.str() + "," + pieces_[i].offset.str();
    }
    return k;
  }

  static PLMap parse(const std::string& text);

  friend PLMap operator*(const PLMap& f, const PLMap& g);

 private:
  static Affine through(const std::pair<Rational, Rational>& a, const std::pair<Rational, Rational>& b) {
    if (b.first <= a.first || b.second <= a.second)
      throw Error(ErrorCode::InvalidMap, "graph points must be strictly increasing");
    Rational s = (b.second - a.second) / (b.first - a.first);
    return {s, a.second - s * a.first};
  }

  void validate() const {
    if (pieces_.size() != bps_.size() + 1) throw Error(ErrorCode::InvalidMap, "piece count must be breakpoints + 1");
    for (const auto& p : pieces_)
      if (p.slope.sgn() <= 0) throw Error(ErrorCode::InvalidMap, "slopes must be positive");
    for (std::size_t i = 0; i + 1 < bps_.size(); ++i)
      if (!(bps_[i] < bps_[i + 1])) throw Error(ErrorCode::InvalidMap, "breakpoints must increase");
    for (std::size_t i = 0; i < bps_.size(); ++i)
      if (pieces_[i](bps_[i]) != pieces_[i + 1](bps_[i]))
        throw Error(ErrorCode::InvalidMap, "discontinuity at " + bps_[i].str());
    if (model_ == Model::UnitInterval) {
      if (!bps_.empty() && (bps_.front().sgn() <= 0 || bps_.back() >= Rational(1)))
        throw Error(ErrorCode::InvalidMap, "interval breakpoints must lie in (0,1)");
      if (pieces_.front()(Rational(0)).sgn() != 0 || pieces_.back()(Rational(1)) != Rational(1))
        throw Error(ErrorCode::InvalidMap, "interval map must fix 0 and 1");
    }
  }

  void canonicalize() {
    std::vector<Rational> bps;
    std::vector<Affine> pieces{pieces_[0]};
    for (std::size_t i = 0; i < bps_.size(); ++i) {
      if (pieces_[i + 1] == pieces.back()) continue;
      bps.push_back(bps_[i]);
      pieces.push_back(pieces_[i + 1]);
    }
    bps_ = std::move(bps);
    pieces_ = std::move(pieces);
  }

  // Trusted constructor for data already in canonical form.
  struct Raw {};
  PLMap(Raw, Model m, std::vector<Rational> bps, std::vector<Affine> pieces)
      : model_(m), bps_(std::move(bps)), pieces_(std::move(pieces)) {}

  Model model_;
  std::vector<Rational> bps_;
  std::vector<Affine> pieces_;

  friend PLMap inverse(const PLMap& f);
};

// Composition f∘g (apply g first).
inline PLMap operator*(const PLMap& f, const PLMap& g) {
  if (f.model_ != g.model_) throw Error(ErrorCode::ModelMismatch, "cannot compose maps on different models");
  // Merge the breakpoints of g with the preimages under g of those of f,
  // tracking the active piece of each map.
  std::vector<Rational> bps;
  std::vector<Affine> pieces;
  bps.reserve(f.bps_.size() + g.bps_.size());
  pieces.reserve(f.bps_.size() + g.bps_.size() + 1);
  std::size_t i = 0, j = 0;
  pieces.push_back(f.pieces_[0].after(g.pieces_[0]));
  while (i < g.bps_.size() || j < f.bps_.size()) {
    int c = -1;
    if (i < g.bps_.size() && j < f.bps_.size()) c = cmp(g.pieces_[i](g.bps_[i]).raw(), f.bps_[j].raw());
    else if (i == g.bps_.size()) c = 1;
    if (c <= 0) {
      bps.push_back(g.bps_[i++]);
      if (c == 0) ++j;
    } else {
      const Affine& a = g.pieces_[i];
      bps.push_back((f.bps_[j++] - a.offset) / a.slope);
    }
    Affine next = f.pieces_[j].after(g.pieces_[i]);
    if (next == pieces.back()) bps.pop_back();
    else pieces.push_back(std::move(next));
  }
  return PLMap(PLMap::Raw{}, f.model_, std::move(bps), std::move(pieces));
}

inline PLMap inverse(const PLMap& f) {
  std::vector<Rational> bps;
  std::vector<Affine> pieces;
  for (std::size_t i = 0; i < f.bps_.size(); ++i) bps.push_back(f.pieces_[i](f.bps_[i]));
  for (const auto& p : f.pieces_) pieces.push_back(p.inverse());
  return PLMap(PLMap::Raw{}, f.model_, std::move(bps), std::move(pieces));
}

inline PLMap compose(const PLMap& f, const PLMap& g) { return f * g; }
inline PLMap invert(const PLMap& f) { return inverse(f); }
inline Rational evaluate(const PLMap& f, const Rational& x) { return f(x); }
inline Rational derivative(const PLMap& f, const Rational& x, Side side) { return f.derivative(x, side); }
inline std::string key_of(const PLMap& f) { return f.key(); }

inline PLMap power(const PLMap& f, long n) {
  PLMap base = n >= 0 ? f : inverse(f);
  PLMap r = PLMap::identity(f.model());
  for (long i = 0; i < (n >= 0 ? n : -n); ++i) r = base * r;
  return r;
}

inline PLMap commutator(const PLMap& a, const PLMap& b) { return a * b * inverse(a) * inverse(b); }

inline PLMap PLMap::parse(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n' || c == ';') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  std::vector<Rational> starts;
  std::vector<Affine> pieces;
  std::optional<Model> model;
  for (const auto& raw : lines) {
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    auto comma = line.find(',', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || comma == std::string::npos)
      throw Error(ErrorCode::ParseError, "expected 'x : slope, offset' in '" + line + "'");
    std::string x = detail::trim(line.substr(0, colon));
    Affine a{Rational::parse(line.substr(colon + 1, comma - colon - 1)), Rational::parse(line.substr(comma + 1))};
    if (!model) {
      if (x == "-inf") model = Model::Line;
      else if (Rational::parse(x).sgn() == 0) model = Model::UnitInterval;
      else throw Error(ErrorCode::ParseError, "first piece must start at -inf or 0");
    } else {
      starts.push_back(Rational::parse(x));
    }
    pieces.push_back(a);
  }
  if (!model) throw Error(ErrorCode::ParseError, "empty map description");
  return PLMap(*model, starts, pieces);
}

// Fixed points and support of f.
inline FixedStructure fixed_structure(const PLMap& f) {
  const auto& bps = f.breakpoints();
  const auto& pcs = f.pieces();
  const bool line = f.model() == Model::Line;
  // Collect closed fixed pieces in order, then merge touching ones.
  std::vector<FixedComponent> raw;
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    Bound lo = i == 0 ? (line ? Bound{} : Bound{Rational(0)}) : Bound{bps[i - 1]};
    Bound hi = i + 1 == pcs.size() ? (line ? Bound{} : Bound{Rational(1)}) : Bound{bps[i]};
    const Affine& a = pcs[i];
    if (a.is_identity()) {
      raw.push_back({lo, hi});
    } else if (a.slope != Rational(1)) {
      Rational x = a.offset / (Rational(1) - a.slope);
      if ((!lo || *lo <= x) && (!hi || x <= *hi)) raw.push_back({x, x});
    }
  }
  FixedStructure out;
  for (const auto& c : raw) {
    if (!out.fixed.empty()) {
      auto& last = out.fixed.back();
      if (last.hi && c.lo && *last.hi >= *c.lo) {
        if (!c.hi || (last.hi && *c.hi > *last.hi)) last.hi = c.hi;
        continue;
      }
    }
    out.fixed.push_back(c);
  }
  Bound left = line ? Bound{} : Bound{Rational(0)};
  bool open_left = line;
  // Support components are the gaps between fixed components.
  Bound prev_hi;
  bool have_prev = false;
  for (const auto& c : out.fixed) {
    if (!have_prev) {
      if (open_left && c.lo) out.support.push_back({Bound{}, c.lo});
    } else {
      out.support.push_back({prev_hi, c.lo});
    }
    prev_hi = c.hi;
    have_prev = true;
  }
  if (!have_prev) {
    out.support.push_back({left, line ? Bound{} : Bound{Rational(1)}});
    if (!line) out.support.back() = {Rational(0), Rational(1)};
  } else if (prev_hi && line) {
    out.support.push_back({prev_hi, Bound{}});
  }
  return out;
}

// A point inside an open interval (midpoint when bounded).
inline Rational interior_point(const OpenInterval& I) {
  if (I.lo && I.hi) return (*I.lo + *I.hi) / Rational(2);
  if (I.lo) return *I.lo + Rational(1);
  if (I.hi) return *I.hi - Rational(1);
  return Rational(0);
}

// Affine end germ: for the interval model the slope at 0 or 1; for the line the affine map near -inf or +inf.
enum class End { Low, High };

inline Affine germ(const PLMap& f, End end) { return end == End::Low ? f.pieces().front() : f.pieces().back(); }

// tau0(g) = -log2 D+g(0), tau1(g) = -log2 D-g(1).
inline long tau(const PLMap& f, End end) {
  static const SlopeGroup two{std::vector<Rational>{Rational(2)}};
  return -two.decompose(germ(f, end).slope)[0];
}
inline long tau0(const PLMap& f) { return tau(f, End::Low); }
inline long tau1(const PLMap& f) { return tau(f, End::High); }

// j+(f,x) = prod_{y >= x} D-f(y)/D+f(y); j-(f,x) = prod_{y <= x} D+f(y)/D-f(y).
inline Rational jump_cocycle(const PLMap& f, const Rational& x, Side side) {
  const auto& bps = f.breakpoints();
  const auto& pcs = f.pieces();
  Rational r(1);
  if (side == Side::Right) {
    for (std::size_t i = f.piece_left(x); i < bps.size(); ++i) r *= pcs[i].slope / pcs[i + 1].slope;
  } else {
    std::size_t end = f.piece_right(x);
    for (std::size_t i = 0; i < end; ++i) r *= pcs[i + 1].slope / pcs[i].slope;
  }
  return r;
}

}  // namespace plfocal
