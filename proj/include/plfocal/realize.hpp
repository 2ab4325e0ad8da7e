// Finite orbit frames of a preorder: sorted cosets of a word ball, the partial
// action of elements on them, and empirical versus germ-based dynamics.
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
#include "plfocal/plgroup.hpp"
#include "plfocal/plmap.hpp"
#include "plfocal/preorders.hpp"

namespace plfocal {

template <class T>
struct FramePoint {
  Word word;  // shortest representative
  T rep;      // rep = word * basepoint
  T rep_inv;
};

template <SignEngine E>
class OrbitFrame {
 public:
  using T = typename E::element_type;

  const E& engine() const { return engine_; }
  const NamedGenerators<T>& generators() const { return gens_; }
  int radius() const { return radius_; }
  int core_radius() const { return core_radius_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<FramePoint<T>>& points() const { return points_; }
  const std::vector<Dyadic>& coordinates() const { return coords_; }
  std::size_t base_index() const { return base_index_; }
  const T& basepoint() const { return basepoint_; }

  // Order of the points represented by x and y: Positive when x < y.
  Sign compare(const T& x, const T& y) const { return engine_.sign(inverse(x) * y); }

  // Index of the frame point equal to x (as a coset), if any.
  std::optional<std::size_t> locate(const T& x) const {
    std::size_t lo = 0, hi = points_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      Sign s = engine_.sign(points_[mid].rep_inv * x);
      if (s == Sign::Residue) return mid;
      if (s == Sign::Positive) lo = mid + 1;
      else hi = mid;
    }
    return std::nullopt;
  }

  // Sign of x relative to frame point i: Positive when x is above it.
  Sign relative_to(std::size_t i, const T& x) const { return engine_.sign(points_[i].rep_inv * x); }

  std::string word_of(std::size_t i) const { return word_str(points_[i].word, gens_); }

 private:
  template <SignEngine F>
  friend OrbitFrame<F> build_frame(const F&, const NamedGenerators<typename F::element_type>&,
                                   const typename F::element_type&, const typename F::element_type&, int);

  OrbitFrame(E engine, NamedGenerators<T> gens, int radius, T basepoint)
      : engine_(std::move(engine)), gens_(std::move(gens)), radius_(radius), basepoint_(std::move(basepoint)) {}

  E engine_;
  NamedGenerators<T> gens_;
  int radius_ = 0;
  int core_radius_ = 0;
  T basepoint_;
  std::vector<FramePoint<T>> points_;
  std::vector<Dyadic> coords_;
  std::size_t base_index_ = 0;
};

// Enumerate the ball of radius L, act on the basepoint, sort by the engine and
// keep one shortest representative per coset. Coordinates are consecutive
// integers with the basepoint at 0.
template <SignEngine E>
OrbitFrame<E> build_frame(const E& engine, const NamedGenerators<typename E::element_type>& gens,
                          const typename E::element_type& identity, const typename E::element_type& basepoint, int L) {
  using T = typename E::element_type;
  if (L < 0) throw Error(ErrorCode::OutOfDomain, "radius must be non-negative");
  OrbitFrame<E> frame(engine, gens, L, basepoint);
  frame.core_radius_ = std::max(1, L / 2);
  auto ball = enumerate_ball(gens, identity, L);
  std::vector<FramePoint<T>> pts;
  pts.reserve(ball.size());
  for (auto& b : ball) {
    T rep = b.element * basepoint;
    T inv = inverse(rep);
    pts.push_back({std::move(b.word), std::move(rep), std::move(inv)});
  }
  auto sign_between = [&](const FramePoint<T>& a, const FramePoint<T>& b) {
    try {
      return engine.sign(a.rep_inv * b.rep);
    } catch (const Error& e) {
      throw Error(ErrorCode::EngineUndefined, word_str(a.word, gens) + " vs " + word_str(b.word, gens) + ": " + e.what());
    }
  };
  std::stable_sort(pts.begin(), pts.end(),
                   [&](const FramePoint<T>& a, const FramePoint<T>& b) { return sign_between(a, b) == Sign::Positive; });
  // Equal cosets are adjacent; keep the shortest word (ties: earliest in ball order, preserved by stable_sort).
  std::vector<FramePoint<T>> uniq;
  for (auto& p : pts) {
    if (!uniq.empty() && sign_between(uniq.back(), p) == Sign::Residue) {
      if (p.word.size() < uniq.back().word.size()) uniq.back() = std::move(p);
      continue;
    }
    uniq.push_back(std::move(p));
  }
  frame.points_ = std::move(uniq);
  for (std::size_t i = 0; i < frame.points_.size(); ++i)
    if (engine.sign(frame.points_[i].rep_inv * basepoint) == Sign::Residue) frame.base_index_ = i;
  for (std::size_t i = 0; i < frame.points_.size(); ++i)
    frame.coords_.push_back(Dyadic(static_cast<long>(i) - static_cast<long>(frame.base_index_)));
  return frame;
}

template <SignEngine E>
OrbitFrame<E> build_frame(const E& engine, const NamedGenerators<typename E::element_type>& gens,
                          const typename E::element_type& identity, int L) {
  return build_frame(engine, gens, identity, identity, L);
}

// Partial map i -> index of g.point_i; nullopt where the image leaves the frame.
template <SignEngine E>
std::vector<std::optional<std::size_t>> induced_map(const OrbitFrame<E>& frame, const typename E::element_type& g) {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(frame.size());
  for (const auto& p : frame.points()) out.push_back(frame.locate(g * p.rep));
  return out;
}

inline bool is_monotone(const std::vector<std::optional<std::size_t>>& m) {
  std::optional<std::size_t> prev;
  for (const auto& v : m) {
    if (!v) continue;
    if (prev && !(*prev < *v)) return false;
    prev = v;
  }
  return true;
}

// ---------------------------------------------------------------- dynamics

enum class DynType {
  TotallyBounded,
  ExpandingPseudohomothety,
  ContractingPseudohomothety,
  ExpandingHomothety,
  ContractingHomothety,
  Inconclusive,
};

inline const char* to_string(DynType t) {
  switch (t) {
    case DynType::TotallyBounded: return "TotallyBounded";
    case DynType::ExpandingPseudohomothety: return "ExpandingPseudohomothety";
    case DynType::ContractingPseudohomothety: return "ContractingPseudohomothety";
    case DynType::ExpandingHomothety: return "Homothety(expanding)";
    case DynType::ContractingHomothety: return "Homothety(contracting)";
    case DynType::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline int direction(DynType t) {
  switch (t) {
    case DynType::ExpandingPseudohomothety:
    case DynType::ExpandingHomothety: return 1;
    case DynType::ContractingPseudohomothety:
    case DynType::ContractingHomothety: return -1;
    default: return 0;
  }
}

// Empirical and predicted verdicts conflict when both are conclusive and
// disagree on bounded versus escaping, or on the escape direction.
inline bool contradicts(DynType predicted, DynType empirical) {
  if (predicted == DynType::Inconclusive || empirical == DynType::Inconclusive) return false;
  bool pb = predicted == DynType::TotallyBounded, eb = empirical == DynType::TotallyBounded;
  if (pb != eb) return true;
  return direction(predicted) != direction(empirical);
}

struct EmpiricalDetail {
  DynType type = DynType::Inconclusive;
  bool up_escape_pos = false, down_escape_pos = false;  // under g^k, k = 1..B
  bool up_escape_neg = false, down_escape_neg = false;  // under g^-k
  std::size_t fixed_core_points = 0;
};

// Probes are the frame extremes. The upper threshold is the lowest generator
// image of the top point lying above it (the top point itself if none does);
// the lower threshold is symmetric. An escape is a power g^k or g^-k,
// k <= powerBound, carrying a probe past its threshold. No escape is bounded
// evidence; escapes at both ends under positive (negative) powers only are
// expanding (contracting) evidence, upgraded to a homothety when exactly one
// core point is fixed. Both ends pushed the same way (top up and bottom up, or
// both down) fits no pseudohomothety and is read as bounded.
template <SignEngine E>
EmpiricalDetail classify_empirical_detail(const OrbitFrame<E>& frame, const typename E::element_type& g,
                                          int powerBound = 8) {
  using T = typename E::element_type;
  const auto& eng = frame.engine();
  EmpiricalDetail d;
  const auto& pts = frame.points();
  const T& top = pts.back().rep;
  const T& bottom = pts.front().rep;
  T up_bound = top, down_bound = bottom;
  for (const auto& [name, s] : frame.generators()) {
    for (const T& step : {s, inverse(s)}) {
      T a = step * top, b = step * bottom;
      if (eng.sign(inverse(top) * a) == Sign::Positive &&
          (eng.sign(inverse(up_bound) * top) == Sign::Residue || eng.sign(inverse(a) * up_bound) == Sign::Positive))
        up_bound = a;
      if (eng.sign(inverse(bottom) * b) == Sign::Negative &&
          (eng.sign(inverse(down_bound) * bottom) == Sign::Residue ||
           eng.sign(inverse(b) * down_bound) == Sign::Negative))
        down_bound = b;
    }
  }
  const T up_inv = inverse(up_bound), down_inv = inverse(down_bound);
  const T ginv = inverse(g);
  auto escapes = [&](const T& step, const T& start, bool upward) {
    T x = start;
    for (int k = 1; k <= powerBound; ++k) {
      x = step * x;
      if (upward ? eng.sign(up_inv * x) == Sign::Positive : eng.sign(down_inv * x) == Sign::Negative) return true;
    }
    return false;
  };
  d.up_escape_pos = escapes(g, top, true);
  d.down_escape_pos = escapes(g, bottom, false);
  d.up_escape_neg = escapes(ginv, top, true);
  d.down_escape_neg = escapes(ginv, bottom, false);
  for (const auto& p : pts)
    if (static_cast<int>(p.word.size()) <= frame.core_radius() && eng.sign(p.rep_inv * g * p.rep) == Sign::Residue)
      ++d.fixed_core_points;
  const bool any = d.up_escape_pos || d.down_escape_pos || d.up_escape_neg || d.down_escape_neg;
  const bool expand = d.up_escape_pos && d.down_escape_pos && !d.up_escape_neg && !d.down_escape_neg;
  const bool contract = d.up_escape_neg && d.down_escape_neg && !d.up_escape_pos && !d.down_escape_pos;
  const bool drift_up = d.up_escape_pos && d.down_escape_neg && !d.up_escape_neg && !d.down_escape_pos;
  const bool drift_down = d.up_escape_neg && d.down_escape_pos && !d.up_escape_pos && !d.down_escape_neg;
  if (!any || drift_up || drift_down) d.type = DynType::TotallyBounded;
  else if (expand) d.type = d.fixed_core_points == 1 ? DynType::ExpandingHomothety : DynType::ExpandingPseudohomothety;
  else if (contract) d.type = d.fixed_core_points == 1 ? DynType::ContractingHomothety : DynType::ContractingPseudohomothety;
  else d.type = DynType::Inconclusive;
  return d;
}

template <SignEngine E>
DynType classify_empirical(const OrbitFrame<E>& frame, const typename E::element_type& g, int powerBound = 8) {
  return classify_empirical_detail(frame, g, powerBound).type;
}

enum class Horograding { IncreasingByStandard, DecreasingByStandard };

// From germ data at the horograding endpoint (the top end for increasing,
// the bottom end for decreasing): trivial germ gives TotallyBounded; otherwise
// expanding when g pushes points toward that end, and a homothety when g has
// no fixed point inside the domain.
inline DynType classify_predicted(const PLMap& g, Horograding h) {
  const bool top = h == Horograding::IncreasingByStandard;
  Affine a = germ(g, top ? End::High : End::Low);
  if (a.is_identity()) return DynType::TotallyBounded;
  const Rational one(1);
  int drift;  // sign of g(x) - x near the endpoint
  if (g.model() == Model::Line) {
    // g(x) - x = (slope - 1)x + offset for |x| large.
    if (a.slope == one) drift = a.offset.sgn();
    else drift = (a.slope > one) == top ? 1 : -1;
  } else {
    // The germ fixes the endpoint: g(x) - x = (slope - 1)(x - endpoint).
    drift = top ? (a.slope < one ? 1 : -1) : (a.slope > one ? 1 : -1);
  }
  const bool expanding = top ? drift > 0 : drift < 0;
  auto fs = fixed_structure(g);
  std::size_t interior_fixed = 0;
  for (const auto& c : fs.fixed) {
    bool at_end = g.model() == Model::UnitInterval && c.is_point() && (c.lo->sgn() == 0 || *c.lo == one);
    if (!at_end) ++interior_fixed;
  }
  if (interior_fixed == 0) return expanding ? DynType::ExpandingHomothety : DynType::ContractingHomothety;
  return expanding ? DynType::ExpandingPseudohomothety : DynType::ContractingPseudohomothety;
}

// ---------------------------------------------------------------- covers

struct CoverReport {
  bool cross_free = true;
  bool covering = true;
};

// Intervals are inclusive runs [i, j] of frame indices, read as open intervals (i - 1/2, j + 1/2).
inline CoverReport cf_cover_check(std::size_t frame_size, const std::vector<std::pair<long, long>>& runs) {
  std::vector<Interval> fam;
  std::vector<bool> covered(frame_size, false);
  for (auto [i, j] : runs) {
    if (i > j) std::swap(i, j);
    fam.push_back({Rational(2 * i - 1, 2), Rational(2 * j + 1, 2)});
    for (long k = std::max(0L, i); k <= j && k < static_cast<long>(frame_size); ++k) covered[static_cast<std::size_t>(k)] = true;
  }
  CoverReport r;
  r.cross_free = cross_free(fam);
  r.covering = std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  return r;
}

// Images of the frame run [i, j] under the given elements, where both ends stay in the frame.
template <SignEngine E>
std::vector<std::pair<long, long>> orbit_runs(const OrbitFrame<E>& frame, std::size_t i, std::size_t j,
                                              const std::vector<typename E::element_type>& elements) {
  std::vector<std::pair<long, long>> out;
  for (const auto& g : elements) {
    auto a = frame.locate(g * frame.points()[i].rep);
    auto b = frame.locate(g * frame.points()[j].rep);
    if (a && b) out.push_back({static_cast<long>(std::min(*a, *b)), static_cast<long>(std::max(*a, *b))});
  }
  return out;
}

// g fixes `fixed`; every test point above (below) it is pushed above (below)
// all other test points by some power |n| <= powerBound.
template <SignEngine E>
bool homothety_witness(const E& engine, const typename E::element_type& g, const typename E::element_type& fixed,
                       const std::vector<typename E::element_type>& tests, int powerBound = 32) {
  using T = typename E::element_type;
  const T fixed_inv = inverse(fixed);
  if (engine.sign(fixed_inv * g * fixed) != Sign::Residue) throw Error(ErrorCode::NoFixedPoint, "g does not fix the designated point");
  bool any = false;
  const T ginv = inverse(g);
  for (std::size_t i = 0; i < tests.size(); ++i) {
    Sign side = engine.sign(fixed_inv * tests[i]);
    if (side == Sign::Residue) continue;
    any = true;
    bool ok = false;
    for (int s = 0; s < 2 && !ok; ++s) {
      T x = tests[i];
      for (int k = 1; k <= powerBound && !ok; ++k) {
        x = (s == 0 ? g : ginv) * x;
        T xinv = inverse(x);
        bool beyond = true;
        for (std::size_t j = 0; j < tests.size() && beyond; ++j) {
          if (j == i) continue;
          // Positive means tests[j] is above x.
          Sign rel = engine.sign(xinv * tests[j]);
          beyond = side == Sign::Positive ? rel == Sign::Negative : rel == Sign::Positive;
        }
        ok = beyond;
      }
    }
    if (!ok) return false;
  }
  return any;
}

// Variant without a designated point: false when g fixes no test point.
template <SignEngine E>
bool homothety_witness(const E& engine, const typename E::element_type& g,
                       const std::vector<typename E::element_type>& tests, int powerBound = 32) {
  for (const auto& t : tests)
    if (engine.sign(inverse(t) * g * t) == Sign::Residue) return homothety_witness(engine, g, t, tests, powerBound);
  return false;
}

// ---------------------------------------------------------------- output

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
      else if (c == '"') quoted = false;
      else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

struct FrameRow {
  long id = 0;
  std::string word;
  Dyadic coordinate;
  std::vector<std::optional<long>> images;
  friend bool operator==(const FrameRow&, const FrameRow&) = default;
};

struct FrameTable {
  std::vector<std::string> generator_names;
  std::vector<FrameRow> rows;
  friend bool operator==(const FrameTable&, const FrameTable&) = default;
};

template <SignEngine E>
FrameTable frame_table(const OrbitFrame<E>& frame) {
  FrameTable t;
  std::vector<std::vector<std::optional<std::size_t>>> maps;
  for (const auto& [name, g] : frame.generators()) {
    t.generator_names.push_back(name);
    maps.push_back(induced_map(frame, g));
  }
  for (std::size_t i = 0; i < frame.size(); ++i) {
    FrameRow r{static_cast<long>(i), frame.word_of(i), frame.coordinates()[i], {}};
    for (const auto& m : maps) r.images.push_back(m[i] ? std::optional<long>(static_cast<long>(*m[i])) : std::nullopt);
    t.rows.push_back(std::move(r));
  }
  return t;
}

// Columns: id, word, coordinate (num/2^exp), then one image id per generator (empty when it leaves the frame).
inline std::string to_csv(const FrameTable& t) {
  std::ostringstream os;
  os << "id,word,coordinate";
  for (const auto& n : t.generator_names) os << "," << detail::csv_field(n);
  os << "\n";
  for (const auto& r : t.rows) {
    os << r.id << "," << detail::csv_field(r.word) << "," << r.coordinate.str();
    for (const auto& im : r.images) os << "," << (im ? std::to_string(*im) : std::string());
    os << "\n";
  }
  return os.str();
}

inline FrameTable parse_frame_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  FrameTable t;
  if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "empty csv");
  auto head = detail::csv_split(line);
  if (head.size() < 3 || head[0] != "id" || head[1] != "word" || head[2] != "coordinate")
    throw Error(ErrorCode::ParseError, "unexpected csv header");
  t.generator_names.assign(head.begin() + 3, head.end());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = detail::csv_split(line);
    if (f.size() != head.size()) throw Error(ErrorCode::ParseError, "wrong field count in '" + line + "'");
    FrameRow r;
    r.id = detail::parse_integer(f[0]).get_si();
    r.word = f[1];
    r.coordinate = Dyadic::parse(f[2]);
    for (std::size_t i = 3; i < f.size(); ++i)
      r.images.push_back(f[i].empty() ? std::nullopt : std::optional<long>(detail::parse_integer(f[i]).get_si()));
    t.rows.push_back(std::move(r));
  }
  return t;
}

// Points on a horizontal axis, one arc family per generator (presentation only).
inline std::string to_svg(const FrameTable& t) {
  const double step = 14.0, margin = 20.0;
  const double width = margin * 2 + step * static_cast<double>(t.rows.empty() ? 1 : t.rows.size());
  const double axis = 160.0;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"320\">\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << axis << "\" x2=\"" << width - margin << "\" y2=\"" << axis
     << "\" stroke=\"black\"/>\n";
  auto xpos = [&](long id) { return margin + step * (static_cast<double>(id) + 0.5); };
  for (std::size_t g = 0; g < t.generator_names.size(); ++g) {
    const char* col = colors[g % 6];
    double side = g % 2 == 0 ? -1.0 : 1.0;
    for (const auto& r : t.rows) {
      if (!r.images[g] || *r.images[g] == r.id) continue;
      double x1 = xpos(r.id), x2 = xpos(*r.images[g]);
      double h = std::min(140.0, std::abs(x2 - x1) * 0.5);
      os << "<path d=\"M " << x1 << " " << axis << " Q " << (x1 + x2) / 2 << " " << axis + side * h << " " << x2
         << " " << axis << "\" fill=\"none\" stroke=\"" << col << "\" stroke-width=\"0.6\"/>\n";
    }
  }
  for (const auto& r : t.rows)
    os << "<circle cx=\"" << xpos(r.id) << "\" cy=\"" << axis << "\" r=\"2\"><title>" << r.word
       << "</title></circle>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace plfocal
