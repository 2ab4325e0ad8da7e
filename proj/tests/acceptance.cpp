// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "plfocal/plfocal.hpp"

using namespace plfocal;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

constexpr unsigned kSeed = 20240601;

GroupPresentationContext bs_context() {
  GroupPresentationContext ctx;
  ctx.family = Family::BieriStrebel;
  ctx.slopes = {Rational(2)};
  return ctx;
}

template <class T>
std::vector<T> elements(const std::vector<BallEntry<T>>& ball) {
  std::vector<T> out;
  out.reserve(ball.size());
  for (const auto& b : ball) out.push_back(b.element);
  return out;
}

std::vector<PLMap> f_ball(int L) {
  return elements(enumerate_ball(thompson_cfp_generators(), PLMap::identity(Model::UnitInterval), L));
}

std::vector<PLMap> f_plus_ball(int L) {
  std::vector<PLMap> out;
  for (const auto& g : f_ball(L)) out.push_back(project_to_f_plus(g, thompson_f0()));
  return out;
}

std::vector<PLMap> bs_ball(int L) { return elements(enumerate_ball(standard_generators(bs_context()), PLMap::identity(Model::Line), L)); }

// A and a map with slopes 3 and 1/3: a sample of PL maps with rational slopes.
NamedGenerators<PLMap> rational_slope_generators() {
  return {{"A", thompson_cfp_generators()[0].second},
          {"C", PLMap::interval_from_points({{Rational(0), Rational(0)}, {Rational(1, 4), Rational(3, 4)}, {Rational(1), Rational(1)}})}};
}

NamedGenerators<PLMap> f_plus_generators() {
  NamedGenerators<PLMap> out;
  for (const auto& [n, g] : thompson_cfp_generators()) out.push_back({n + "+", project_to_f_plus(g, thompson_f0())});
  return out;
}

DiscreteInvariantSet orbit_of_half() { return DiscreteInvariantSet(thompson_f0(), {Rational(1, 2)}); }

std::string word_list(const std::vector<std::size_t>& w) {
  std::string s;
  for (auto i : w) s += (s.empty() ? "" : ",") + std::to_string(i);
  return s;
}

template <class E>
Outcome axioms(const std::string& label, const E& engine, const std::vector<typename E::element_type>& samples) {
  AxiomReport r = axioms_report(engine, samples, 20000, kSeed);
  Outcome o;
  o.pass = r.pass;
  o.detail = label + ": " + (r.pass ? "ok" : r.axiom + " at samples [" + word_list(r.witness) + "]") + " (" +
             std::to_string(samples.size()) + " samples, " + std::to_string(r.pairs_checked) + " pairs, " +
             std::to_string(r.triples_checked) + " triples)";
  return o;
}

Outcome merge(const std::vector<Outcome>& parts) {
  Outcome o;
  for (const auto& p : parts) {
    o.pass = o.pass && p.pass;
    o.detail += (o.detail.empty() ? "" : "; ") + p.detail;
  }
  return o;
}

// ---------------------------------------------------------------- criteria

Outcome c1() {
  auto gens = standard_generators({});
  RelatorReport r = verify_relators_report(gens[0].second, gens[1].second);
  return {r.ok, r.ok ? "both relators trivial, [a,b] nontrivial" : "relator " + std::to_string(r.failing) + " fails"};
}

Outcome c2() {
  auto ball = bs_ball(6);
  std::mt19937 rng(kSeed);
  std::size_t bad = 0, checks = 0;
  for (int i = 0; i < 1000; ++i) {
    const PLMap& f = ball[rng() % ball.size()];
    const PLMap& g = ball[rng() % ball.size()];
    std::vector<Rational> xs{Rational(static_cast<long>(rng() % 257) - 128, 1L << (rng() % 6))};
    for (const auto& b : g.breakpoints()) xs.push_back(b);
    for (const auto& x : xs)
      for (Side s : {Side::Right, Side::Left}) {
        ++checks;
        if (jump_cocycle(f * g, x, s) != jump_cocycle(f, g(x), s) * jump_cocycle(g, x, s)) ++bad;
      }
  }
  return {bad == 0, std::to_string(checks) + " identities on 1000 pairs from " + std::to_string(ball.size()) +
                        " elements, " + std::to_string(bad) + " failures"};
}

Outcome c3() {
  std::vector<Outcome> parts;
  parts.push_back(axioms("restriction", RestrictionEngine(orbit_of_half()), f_plus_ball(5)));
  auto bs = bs_ball(5);
  SlopeGroup two({Rational(2)});
  for (Side s : {Side::Right, Side::Left})
    for (bool opp : {false, true}) {
      LatticePreorder o = opp ? LatticePreorder::standard(1).opposite() : LatticePreorder::standard(1);
      parts.push_back(axioms(std::string(s == Side::Right ? "jump-right" : "jump-left") + (opp ? "/opposite" : "/standard"),
                             JumpEngine(s, two, o), bs));
    }
  auto rat = elements(enumerate_ball(rational_slope_generators(), PLMap::identity(Model::UnitInterval), 5));
  parts.push_back(axioms("prime-2", PrimeEngine(2), rat));
  parts.push_back(axioms("prime-3", PrimeEngine(3), rat));
  parts.push_back(axioms("plante", PlanteEngine(PlanteOrder::standard(1, 1)),
                         elements(enumerate_ball(wreath_generators(1, 1), WreathElement(1, 1), 5))));
  parts.push_back(axioms("escaping", EscapingEngine(EscapingContext(thompson_f0(), Rational(1, 2))), f_ball(5)));
  return merge(parts);
}

Outcome c4() {
  auto K = orbit_of_half();
  auto samples = f_plus_ball(5);
  PLMap f = thompson_f0(), finv = inverse(f);
  std::mt19937 rng(kSeed + 4);
  std::size_t conj_bad = 0, max_bad = 0, eq_bad = 0, distinct = 0;
  auto less = [](const std::optional<Rational>& a, const std::optional<Rational>& b) { return a < b; };  // nullopt lowest
  for (int i = 0; i < 500; ++i) {
    const PLMap& g = samples[rng() % samples.size()];
    const PLMap& h = samples[rng() % samples.size()];
    if (restriction_sign(f * g * finv, K) != restriction_sign(g, K)) ++conj_bad;
    auto xg_ = xg(g, K), xh = xg(h, K), xgh = xg(g * h, K);
    auto mx = std::max(xg_, xh, less);
    if (less(mx, xgh)) ++max_bad;
    if (xg_ != xh) {
      ++distinct;
      if (xgh != mx) ++eq_bad;
    }
  }
  bool ok = conj_bad == 0 && max_bad == 0 && eq_bad == 0;
  return {ok, "500 pairs: conjugation " + std::to_string(conj_bad) + " failures, x_gh <= max " + std::to_string(max_bad) +
                  " failures, equality on " + std::to_string(distinct) + " distinct pairs " + std::to_string(eq_bad) +
                  " failures"};
}

Outcome c5() {
  Outcome o;
  for (auto [p, q] : std::vector<std::pair<long, long>>{{2, 1}, {3, 1}, {3, 2}, {5, 2}, {5, 3}}) {
    long idx = module_index(p, q);
    o.pass = o.pass && idx == p - q;
    o.detail += (o.detail.empty() ? "" : ", ") + std::to_string(p) + "/" + std::to_string(q) + " -> " + std::to_string(idx);
  }
  return o;
}

Outcome c6() {
  bool a = cancellation_check("0", "1", 20);
  bool b = cancellation_check("10001", "01110", 20);
  auto r = cancellation_report("01", "0101", 20);
  bool ok = a && b && !r.ok && !r.witness.empty();
  return {ok, std::string("(0,1) ") + (a ? "true" : "false") + ", (10001,01110) " + (b ? "true" : "false") +
                  ", (01,0101) " + (r.ok ? "true" : "false, witness " + r.witness + " (" + r.reason + ")")};
}

Outcome c7() {
  std::vector<Outcome> parts;
  {
    bool ok = true;
    for (long a = -6; a <= 6; ++a)
      for (long b = -6; b <= 6; ++b) ok = ok && lamp_generator(a) * lamp_generator(b) == lamp_generator(b) * lamp_generator(a);
    parts.push_back({ok, "h_n commute for |n| <= 6"});
  }
  const WreathElement e(1, 1);
  auto gens = wreath_generators(1, 1);
  auto order = PlanteOrder::standard(1, 1);
  auto frame = build_frame(PlanteEngine(order), gens, e, 6);
  {
    DynType t = classify_empirical(frame, gens[0].second, 8);
    auto m = induced_map(frame, gens[0].second);
    std::vector<std::size_t> fixed;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] == i) fixed.push_back(i);
    bool ok = t == DynType::ExpandingHomothety && fixed.size() == 1 && fixed[0] == frame.base_index();
    parts.push_back({ok, std::string("shift ") + to_string(t) + ", fixed frame points [" + word_list(fixed) + "], e-point " +
                             std::to_string(frame.base_index()) + " of " + std::to_string(frame.size())});
  }
  std::vector<LampConfig> sorted;
  for (const auto& p : frame.points()) sorted.push_back(p.rep.lamp);
  {
    std::vector<CSet> family;
    for (const auto& s : sorted)
      for (long g = -7; g <= 7; ++g) family.push_back(cset(s, ExpVec{g}));
    bool ok = cset_cross_free(family, sorted, order);
    parts.push_back({ok, std::to_string(family.size()) + " C-sets " + (ok ? "cross-free" : "cross")});
  }
  {
    BaseEmbedding iota(order.base());
    std::mt19937 rng(kSeed + 7);
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto& a = sorted[rng() % sorted.size()];
      const auto& b = sorted[rng() % sorted.size()];
      const auto& c = sorted[rng() % sorted.size()];
      if (delta_kernel(a, c, order, iota) > std::max(delta_kernel(a, b, order, iota), delta_kernel(b, c, order, iota))) ++bad;
    }
    parts.push_back({bad == 0, "ultrametric on 1000 triples, " + std::to_string(bad) + " failures"});
  }
  return merge(parts);
}

Outcome c8() {
  auto gens = standard_generators(bs_context());
  PLMap id = PLMap::identity(Model::Line);
  JumpEngine engine(Side::Right, SlopeGroup({Rational(2)}), LatticePreorder::standard(1));
  auto frame = build_frame(engine, gens, id, 6);
  auto ball = enumerate_ball(gens, id, 6);
  std::size_t contra = 0, inconclusive = 0, trivial_germ = 0, trivial_germ_bounded = 0;
  std::string first_contra;
  for (const auto& b : ball) {
    DynType pred = classify_predicted(b.element, Horograding::IncreasingByStandard);
    DynType emp = classify_empirical(frame, b.element, 8);
    if (contradicts(pred, emp)) {
      if (first_contra.empty()) first_contra = " first " + word_str(b.word, gens) + ": " + to_string(pred) + " vs " + to_string(emp);
      ++contra;
    }
    if (emp == DynType::Inconclusive) ++inconclusive;
    if (germ(b.element, End::High).is_identity() && !b.element.is_identity()) {
      ++trivial_germ;
      if (emp == DynType::TotallyBounded) ++trivial_germ_bounded;
    }
  }
  DynType t1 = classify_empirical(frame, gens[0].second, 8);
  DynType gminus = classify_empirical(frame, bs_scale_minus(Rational(0), Rational(2)), 8);
  const double conclusive = 1.0 - static_cast<double>(inconclusive) / static_cast<double>(ball.size());
  bool ok = contra == 0 && conclusive >= 0.95 && t1 == DynType::ExpandingHomothety && gminus == DynType::TotallyBounded &&
            trivial_germ_bounded == trivial_germ;
  std::ostringstream os;
  os << ball.size() << " elements, frame " << frame.size() << ": " << contra << " contradictions" << first_contra << ", "
     << static_cast<int>(conclusive * 1000) / 10.0 << "% conclusive; t1 " << to_string(t1) << "; g-(0,2) " << to_string(gminus)
     << "; trivial right germ bounded " << trivial_germ_bounded << "/" << trivial_germ;
  return {ok, os.str()};
}

Outcome c9() {
  auto gens = thompson_cfp_generators();
  PLMap id = PLMap::identity(Model::UnitInterval);
  auto frame = build_frame(PointEngine(Rational(1, 3)), gens, id, 4);
  auto elems = f_ball(4);
  const std::size_t i = frame.base_index();
  auto runs = orbit_runs(frame, i, std::min(i + 2, frame.size() - 1), elems);
  CoverReport std_rep = cf_cover_check(frame.size(), runs);

  auto order = PlanteOrder::standard(1, 1);
  auto pframe = build_frame(PlanteEngine(order), wreath_generators(1, 1), WreathElement(1, 1), 5);
  std::vector<LampConfig> sorted;
  for (const auto& p : pframe.points()) sorted.push_back(p.rep.lamp);
  std::vector<CSet> family;
  for (const auto& s : sorted)
    for (long g = -6; g <= 6; ++g) family.push_back(cset(s, ExpVec{g}));
  bool plante_free = cset_cross_free(family, sorted, order);
  bool ok = !std_rep.cross_free && plante_free;
  return {ok, "standard F frame (" + std::to_string(frame.size()) + " points), " + std::to_string(runs.size()) + " orbit intervals: " +
                  (std_rep.cross_free ? "cross-free" : "crossed pair found") + "; Plante " + std::to_string(family.size()) +
                  " C-sets: " + (plante_free ? "cross-free" : "crossed")};
}

Outcome c10() {
  auto t0 = std::chrono::steady_clock::now();
  WordPair wp("10001", "01110");
  TailSet K = build_reference(wp);
  auto gens = thompson_line_generators();
  auto ball = elements(enumerate_ball(gens, PLMap::identity(Model::Line), 4));
  const std::size_t n = ball.size();
  std::vector<TailSet> im;
  for (const auto& g : ball) im.push_back(image(g, K));
  std::mt19937 rng(kSeed + 10);
  std::size_t ultra_bad = 0, equi_bad = 0;
  for (int i = 0; i < 300; ++i) {
    const auto& A = im[rng() % n];
    const auto& B = im[rng() % n];
    const auto& C = im[rng() % n];
    Alpha ac = alpha(A, C), ab = alpha(A, B), bc = alpha(B, C);
    if (bc < ac && ab < ac) ++ultra_bad;
  }
  for (int i = 0; i < 300; ++i) {
    const auto& A = im[rng() % n];
    const auto& B = im[rng() % n];
    const PLMap& h = ball[rng() % n];
    Alpha a = alpha(A, B), b = alpha(image(h, A), image(h, B));
    if (a.minus_infinity != b.minus_infinity || (!a.minus_infinity && h(a.value) != b.value)) ++equi_bad;
  }
  std::vector<std::vector<int>> M(n, std::vector<int>(n));
  std::size_t total_bad = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      M[i][j] = static_cast<int>(ok_compare(im[i], im[j]));
      if ((M[i][j] == 0) != (im[i] == im[j])) ++total_bad;
    }
  std::size_t anti_bad = 0, trans_bad = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (M[i][j] != -M[j][i]) ++anti_bad;
      for (std::size_t k = 0; k < n; ++k)
        if (M[i][j] > 0 && M[j][k] > 0 && M[i][k] <= 0) ++trans_bad;
    }
  std::size_t inv_bad = 0;
  for (int i = 0; i < 300; ++i) {
    const PLMap& h = ball[rng() % n];
    std::size_t a = rng() % n, b = rng() % n;
    if (ok_compare(h * ball[a], h * ball[b], K) != static_cast<Sign>(M[a][b])) ++inv_bad;
  }
  std::size_t po_bad = 0;
  for (int i = 0; i < 100; ++i)
    if (!propertyO_spot(ball[rng() % n], K)) ++po_bad;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = ultra_bad + equi_bad + total_bad + anti_bad + trans_bad + inv_bad + po_bad == 0 && secs <= 300;
  std::ostringstream os;
  os << n << " ball elements; failures: ultrametric " << ultra_bad << ", equivariance " << equi_bad << ", totality " << total_bad
     << ", antisymmetry " << anti_bad << ", transitivity " << trans_bad << ", invariance " << inv_bad << ", property (O) "
     << po_bad << "; " << static_cast<int>(secs * 10) / 10.0 << " s";
  return {ok, os.str()};
}

Outcome c11() {
  std::vector<Outcome> parts;
  PLMap f = PLMap::interval_from_points(
      {{Rational(0), Rational(0)}, {Rational(1, 4), Rational(3, 8)}, {Rational(9, 16), Rational(9, 16)}, {Rational(1), Rational(1)}});
  PLMap g = PLMap::interval_from_points(
      {{Rational(0), Rational(0)}, {Rational(7, 16), Rational(7, 16)}, {Rational(11, 16), Rational(13, 16)}, {Rational(1), Rational(1)}});
  try {
    long N = two_chain_witness(f, g);
    Rational c = *support_inf(g), d = *support_sup(f);
    Rational x = f(c);
    bool minimal = true;
    for (long k = 1; k < N; ++k) {
      x = g(x);
      minimal = minimal && x <= d;
    }
    bool ok = N >= 1 && minimal && power(g, N)(f(c)) > d && verify_relators(f, power(g, N));
    parts.push_back({ok, "N = " + std::to_string(N) + (minimal ? " minimal" : " not minimal") + ", relators verified"});
  } catch (const Error& e) {
    parts.push_back({false, e.what()});
  }
  auto expect_code = [&](const std::string& label, const PLMap& a, const PLMap& b, int hyp) {
    try {
      two_chain_witness(a, b);
      parts.push_back({false, label + ": no failure reported"});
    } catch (const TwoChainFailure& e) {
      parts.push_back({e.hypothesis == hyp && e.code() == ErrorCode::HypothesisFailed, label + ": " + e.what()});
    }
  };
  PLMap f0 = thompson_f0();
  expect_code("disjoint", rescale(f0, Rational(0), Rational(1, 4)), rescale(f0, Rational(1, 2), Rational(1)), 1);
  expect_code("f fixes c", rescale(f0, Rational(0), Rational(1, 4)) * rescale(f0, Rational(1, 2), Rational(3, 4)),
              rescale(f0, Rational(1, 4), Rational(1)), 2);
  expect_code("split support", rescale(f0, Rational(0), Rational(3, 4)),
              rescale(f0, Rational(1, 4), Rational(1, 2)) * rescale(f0, Rational(1, 2), Rational(1)), 3);
  return merge(parts);
}

template <class E>
Outcome refinement(const std::string& label, const E& engine, const NamedGenerators<typename E::element_type>& gens,
                   const typename E::element_type& id) {
  std::size_t bad = 0, pairs = 0;
  std::string sizes;
  auto prev = build_frame(engine, gens, id, 3);
  sizes = std::to_string(prev.size());
  for (int L = 3; L <= 5; ++L) {
    auto next = build_frame(engine, gens, id, L + 1);
    sizes += "/" + std::to_string(next.size());
    std::vector<std::size_t> pos;
    for (const auto& p : prev.points()) {
      auto k = next.locate(p.rep);
      if (!k) {
        ++bad;
        continue;
      }
      pos.push_back(*k);
    }
    const auto& pts = prev.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        ++pairs;
        Sign replay = next.compare(pts[i].rep, pts[j].rep);
        Sign expect = i < j ? Sign::Positive : i > j ? Sign::Negative : Sign::Residue;
        if (replay != expect) ++bad;
        if (pos.size() == pts.size() && i < j && !(pos[i] < pos[j])) ++bad;
      }
    prev = std::move(next);
  }
  return {bad == 0, label + " sizes " + sizes + ", " + std::to_string(bad) + " mismatches in " + std::to_string(pairs) + " pairs"};
}

Outcome c12() {
  std::vector<Outcome> parts;
  PLMap idI = PLMap::identity(Model::UnitInterval), idL = PLMap::identity(Model::Line);
  auto bs = standard_generators(bs_context());
  SlopeGroup two({Rational(2)});
  parts.push_back(refinement("restriction", RestrictionEngine(orbit_of_half()), f_plus_generators(), idI));
  parts.push_back(refinement("jump-right", JumpEngine(Side::Right, two, LatticePreorder::standard(1)), bs, idL));
  parts.push_back(refinement("jump-left", JumpEngine(Side::Left, two, LatticePreorder::standard(1).opposite()), bs, idL));
  parts.push_back(refinement("prime-2", PrimeEngine(2), rational_slope_generators(), idI));
  parts.push_back(refinement("prime-3", PrimeEngine(3), rational_slope_generators(), idI));
  parts.push_back(refinement("plante", PlanteEngine(PlanteOrder::standard(1, 1)), wreath_generators(1, 1), WreathElement(1, 1)));
  parts.push_back(refinement("escaping", EscapingEngine(EscapingContext(thompson_f0(), Rational(1, 2))), thompson_cfp_generators(), idI));
  return merge(parts);
}

}  // namespace

int main() {
  std::vector<Criterion> all{
      {1, "F presentation relators", c1},
      {2, "jump cocycle chain rule", c2},
      {3, "preorder axioms for all engines", c3},
      {4, "restriction conjugation invariance and x_g laws", c4},
      {5, "module index p-q", c5},
      {6, "cancellation check", c6},
      {7, "Plante wreath product realization", c7},
      {8, "predicted vs empirical classification", c8},
      {9, "focal dichotomy evidence", c9},
      {10, "symbolic sets order", c10},
      {11, "two-chain witness", c11},
      {12, "frame refinement", c12},
  };
  std::cout << "seed " << kSeed << "\n";
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- " << o.detail << " ["
              << static_cast<int>(secs * 10) / 10.0 << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
