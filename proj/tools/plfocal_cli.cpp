// Command-line driver. Exit codes: 0 success, 1 property failure, 2 input error.
#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "plfocal/plfocal.hpp"

using namespace plfocal;

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PropertyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string engine = "jump:right,lex";
  std::string family;
  std::string word = "1";
  std::string pair = "10001,01110";
  std::string emit = "csv";
  std::string output;
  int radius = -1;
  int power_bound = 8;
  long bound = 20;
  unsigned seed = 20240601;
  std::vector<std::string> args;
};

const std::vector<std::string> kSubcommands{"sign",     "classify", "realize", "check",   "twochain",
                                            "relators", "cancel",   "index",   "plante",  "okorder"};

// ---------------------------------------------------------------- config file

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

template <class N>
N parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<N>(x);
  } catch (const std::exception&) {
    throw InputError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

// Lines "key = value"; '#' starts a comment; unknown keys are rejected.
void load_config(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq)), val = detail::trim(line.substr(eq + 1));
    if (key == "subcommand") c.subcommand = val;
    else if (key == "engine") c.engine = val;
    else if (key == "family") c.family = val;
    else if (key == "word") c.word = val;
    else if (key == "pair") c.pair = val;
    else if (key == "emit") c.emit = val;
    else if (key == "output") c.output = val;
    else if (key == "radius") c.radius = parse_number<int>(key, val);
    else if (key == "power-bound") c.power_bound = parse_number<int>(key, val);
    else if (key == "bound") c.bound = parse_number<long>(key, val);
    else if (key == "seed") c.seed = parse_number<unsigned>(key, val);
    else if (key == "args") c.args = split_ws(val);
    else throw InputError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

// ---------------------------------------------------------------- engines

// "kind", "kind:v1,v2" or "kind(key=v, ...)"; positional values take keys in order.
struct EngineSpec {
  std::string kind;
  std::map<std::string, std::string> params;
};

EngineSpec parse_engine(const std::string& text) {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"jump", {"side", "order"}}, {"restriction", {"seeds"}}, {"prime", {"q"}},
      {"escaping", {"seed"}},      {"point", {"x"}},           {"plante", {}}};
  EngineSpec spec;
  std::string body;
  auto open = text.find_first_of(":(");
  spec.kind = detail::trim(text.substr(0, open));
  if (open != std::string::npos) {
    if (text[open] == ':') {
      body = text.substr(open + 1);
    } else {
      if (text.back() != ')') throw InputError("engine descriptor '" + text + "': missing ')'");
      body = text.substr(open + 1, text.size() - open - 2);
    }
  }
  auto it = keys.find(spec.kind);
  if (it == keys.end()) throw InputError("unknown engine '" + spec.kind + "'");
  std::size_t pos = 0;
  std::stringstream ss(body);
  for (std::string item; std::getline(ss, item, ',');) {
    item = detail::trim(item);
    if (item.empty()) continue;
    std::string key, val;
    auto eq = item.find('=');
    if (eq != std::string::npos) {
      key = detail::trim(item.substr(0, eq));
      val = detail::trim(item.substr(eq + 1));
    } else if (spec.kind == "restriction") {
      key = "seeds";
      val = item;
    } else {
      if (pos >= it->second.size()) throw InputError("engine '" + spec.kind + "': too many parameters");
      key = it->second[pos++];
      val = item;
    }
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
      throw InputError("engine '" + spec.kind + "': unknown parameter '" + key + "'");
    if (key == "seeds" && spec.params.count(key)) spec.params[key] += ";" + val;
    else spec.params[key] = val;
  }
  return spec;
}

std::string param(const EngineSpec& s, const std::string& key, const std::string& fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

template <class E>
struct Setup {
  using T = typename E::element_type;
  E engine;
  NamedGenerators<T> gens;   // frame and ball generators
  NamedGenerators<T> names;  // names accepted in words
  T identity;
  std::string family;
  std::optional<Horograding> horograding;
};

GroupPresentationContext bs_context() {
  GroupPresentationContext ctx;
  ctx.family = Family::BieriStrebel;
  return ctx;
}

NamedGenerators<PLMap> f_names() {
  auto names = thompson_cfp_generators();
  for (const auto& g : standard_generators({})) names.push_back(g);
  names.push_back({"f", thompson_f0()});
  return names;
}

NamedGenerators<PLMap> f_plus_generators() {
  NamedGenerators<PLMap> out;
  for (const auto& [n, g] : thompson_cfp_generators()) out.push_back({n + "+", project_to_f_plus(g, thompson_f0())});
  return out;
}

NamedGenerators<PLMap> rational_slope_generators() {
  return {{"A", thompson_cfp_generators()[0].second},
          {"C", PLMap::interval_from_points({{Rational(0), Rational(0)}, {Rational(1, 4), Rational(3, 4)}, {Rational(1), Rational(1)}})}};
}

NamedGenerators<PLMap> with_names(NamedGenerators<PLMap> base, const NamedGenerators<PLMap>& extra) {
  for (const auto& e : extra) {
    bool dup = false;
    for (const auto& b : base) dup = dup || b.first == e.first;
    if (!dup) base.push_back(e);
  }
  return base;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  std::string cur;
  for (char ch : text + ";") {
    if (ch == ';' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(Rational::parse(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

// Calls body(setup) with the engine named by the descriptor.
template <class Body>
int with_engine(const std::string& descriptor, Body&& body) {
  EngineSpec s = parse_engine(descriptor);
  const PLMap idI = PLMap::identity(Model::UnitInterval), idL = PLMap::identity(Model::Line);
  if (s.kind == "jump") {
    std::string side = param(s, "side", "right"), order = param(s, "order", "lex");
    if (side != "right" && side != "left") throw InputError("jump side must be right or left");
    LatticePreorder o = LatticePreorder::standard(1);
    if (order == "opp" || order == "opposite") o = o.opposite();
    else if (order != "lex") throw InputError("jump order must be lex or opp");
    Side sd = side == "right" ? Side::Right : Side::Left;
    Horograding h = sd == Side::Right ? Horograding::IncreasingByStandard : Horograding::DecreasingByStandard;
    return body(Setup<JumpEngine>{JumpEngine(sd, SlopeGroup({Rational(2)}), o), standard_generators(bs_context()),
                                  bs_named_elements(bs_context()), idL, "BS", h});
  }
  if (s.kind == "restriction") {
    auto seeds = parse_rationals(param(s, "seeds", "1/2"));
    auto gens = f_plus_generators();
    return body(Setup<RestrictionEngine>{RestrictionEngine(DiscreteInvariantSet(thompson_f0(), seeds)), gens,
                                         with_names(gens, f_names()), idI, "F", std::nullopt});
  }
  if (s.kind == "prime") {
    std::string q = param(s, "q", "combined");
    auto gens = rational_slope_generators();
    auto names = with_names(gens, f_names());
    if (q == "combined") return body(Setup<CombinedPrimeEngine>{CombinedPrimeEngine(), gens, names, idI, "F", std::nullopt});
    return body(Setup<PrimeEngine>{PrimeEngine(detail::parse_integer(q).get_si()), gens, names, idI, "F", std::nullopt});
  }
  if (s.kind == "escaping") {
    Rational seed = Rational::parse(param(s, "seed", "1/2"));
    return body(Setup<EscapingEngine>{EscapingEngine(EscapingContext(thompson_f0(), seed)), thompson_cfp_generators(),
                                      f_names(), idI, "F", Horograding::IncreasingByStandard});
  }
  if (s.kind == "point") {
    Rational x = Rational::parse(param(s, "x", "1/3"));
    return body(Setup<PointEngine>{PointEngine(x), thompson_cfp_generators(), f_names(), idI, "F", std::nullopt});
  }
  auto gens = wreath_generators(1, 1);
  return body(Setup<PlanteEngine>{PlanteEngine(PlanteOrder::standard(1, 1)), gens, gens, WreathElement(1, 1), "wreath",
                                  std::nullopt});
}

void check_family(const RunConfig& c, const std::string& engine_family) {
  if (!c.family.empty() && c.family != engine_family)
    throw InputError("family '" + c.family + "' does not match engine family '" + engine_family + "'");
}

// ---------------------------------------------------------------- output

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw InputError("cannot write '" + c.output + "'");
  out << text;
}

void need_args(const RunConfig& c, std::size_t n, const std::string& usage) {
  if (c.args.size() != n) throw InputError("usage: " + c.subcommand + " " + usage);
}

// Map text in "x : slope, offset" form with ';' between pieces, or @file.
PLMap read_map(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw InputError("cannot read '" + arg.substr(1) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return PLMap::parse(ss.str());
  }
  return PLMap::parse(arg);
}

// ---------------------------------------------------------------- subcommands

int cmd_sign(const RunConfig& c) {
  return with_engine(c.engine, [&](const auto& s) {
    check_family(c, s.family);
    auto g = evaluate_word(parse_word(c.word, s.names), s.names, s.identity);
    std::cout << to_string(s.engine.sign(g)) << "\n";
    return kOk;
  });
}

int cmd_classify(const RunConfig& c) {
  return with_engine(c.engine, [&](const auto& s) {
    check_family(c, s.family);
    using T = typename std::decay_t<decltype(s)>::T;
    T g = evaluate_word(parse_word(c.word, s.names), s.names, s.identity);
    auto frame = build_frame(s.engine, s.gens, s.identity, c.radius < 0 ? 6 : c.radius);
    DynType emp = classify_empirical(frame, g, c.power_bound);
    std::optional<DynType> pred;
    if constexpr (std::is_same_v<T, PLMap>)
      if (s.horograding) pred = classify_predicted(g, *s.horograding);
    std::cout << "predicted: " << (pred ? to_string(*pred) : "n/a") << "\n";
    std::cout << "empirical: " << to_string(emp) << "\n";
    if (pred && contradicts(*pred, emp)) {
      std::cerr << "contradiction for '" << c.word << "' at radius " << frame.radius() << "\n";
      return kPropertyFailure;
    }
    return kOk;
  });
}

int emit_frame(const RunConfig& c, const std::string& engine) {
  if (c.emit != "csv" && c.emit != "svg") throw InputError("emit must be csv or svg");
  return with_engine(engine, [&](const auto& s) {
    check_family(c, s.family);
    auto table = frame_table(build_frame(s.engine, s.gens, s.identity, c.radius < 0 ? 4 : c.radius));
    std::string csv = to_csv(table);
    if (!(parse_frame_csv(csv) == table)) throw PropertyFailure("emitted csv does not round-trip");
    emit(c, c.emit == "csv" ? csv : to_svg(table));
    return kOk;
  });
}

int cmd_realize(const RunConfig& c) { return emit_frame(c, c.engine); }

int cmd_plante(const RunConfig& c) {
  const int L = c.radius < 0 ? 4 : c.radius;
  auto order = PlanteOrder::standard(1, 1);
  auto frame = build_frame(PlanteEngine(order), wreath_generators(1, 1), WreathElement(1, 1), L);
  std::vector<LampConfig> sorted;
  for (const auto& p : frame.points()) sorted.push_back(p.rep.lamp);
  std::vector<CSet> family;
  for (const auto& s : sorted)
    for (long g = -L; g <= L; ++g) family.push_back(cset(s, ExpVec{g}));
  if (!cset_cross_free(family, sorted, order)) throw PropertyFailure("C-sets of the frame cross");
  return emit_frame(c, "plante");
}

int cmd_index(const RunConfig& c) {
  need_args(c, 2, "P Q");
  long p = detail::parse_integer(c.args[0]).get_si(), q = detail::parse_integer(c.args[1]).get_si();
  std::cout << module_index(p, q) << "\n";
  return kOk;
}

int cmd_cancel(const RunConfig& c) {
  need_args(c, 2, "W1 W2");
  if (c.bound < 0) throw InputError("bound must be nonnegative");
  auto rep = cancellation_report(c.args[0], c.args[1], static_cast<std::size_t>(c.bound));
  std::cout << (rep.ok ? "true" : "false") << "\n";
  if (!rep.ok) {
    std::cerr << "witness " << rep.witness << ": " << rep.reason << "\n";
    return kPropertyFailure;
  }
  return kOk;
}

int cmd_okorder(const RunConfig& c) {
  need_args(c, 2, "WORD1 WORD2");
  auto comma = c.pair.find(',');
  if (comma == std::string::npos) throw InputError("pair must be 'w1,w2'");
  TailSet K = build_reference(WordPair(c.pair.substr(0, comma), c.pair.substr(comma + 1)), static_cast<std::size_t>(c.bound));
  auto gens = thompson_line_generators();
  PLMap id = PLMap::identity(Model::Line);
  PLMap g1 = evaluate_word(parse_word(c.args[0], gens), gens, id);
  PLMap g2 = evaluate_word(parse_word(c.args[1], gens), gens, id);
  for (const PLMap* g : {&g1, &g2})
    if (!propertyO_spot(*g, K)) throw PropertyFailure("property (O) fails for '" + c.args[g == &g1 ? 0 : 1] + "'");
  std::cout << to_string(ok_compare(g1, g2, K)) << "\n";
  return kOk;
}

int cmd_relators(const RunConfig& c) {
  PLMap a = PLMap::identity(Model::UnitInterval), b = a;
  if (c.args.empty()) {
    if (!c.family.empty() && c.family != "F") throw InputError("relators: family must be F");
    auto gens = standard_generators({});
    a = gens[0].second;
    b = gens[1].second;
  } else {
    need_args(c, 2, "[MAP_A MAP_B]");
    a = read_map(c.args[0]);
    b = read_map(c.args[1]);
  }
  RelatorReport r = verify_relators_report(a, b);
  std::cout << (r.ok ? "true" : "false") << "\n";
  if (!r.ok) {
    std::cerr << (r.failing == 3 ? std::string("the pair commutes") : "relator " + std::to_string(r.failing) + " fails")
              << (r.witness ? " at " + r.witness->str() : std::string()) << "\n";
    return kPropertyFailure;
  }
  return kOk;
}

int cmd_twochain(const RunConfig& c) {
  need_args(c, 2, "MAP_F MAP_G");
  PLMap f = read_map(c.args[0]), g = read_map(c.args[1]);
  try {
    std::cout << two_chain_witness(f, g) << "\n";
  } catch (const TwoChainFailure& e) {
    throw PropertyFailure(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoWitness) throw PropertyFailure(e.what());
    throw;
  }
  return kOk;
}

// Seeded property suite over every engine; one "PASS|FAIL name detail" line each.
int cmd_check(const RunConfig& c) {
  const int L = c.radius < 0 ? 3 : c.radius;
  int failed = 0;
  std::cout << "seed " << c.seed << "\nradius " << L << "\n";
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++failed;
    std::cout << (ok ? "PASS " : "FAIL ") << name << " " << detail << "\n";
  };
  {
    auto gens = standard_generators({});
    RelatorReport r = verify_relators_report(gens[0].second, gens[1].second);
    report("relators", r.ok, r.ok ? "ok" : "relator " + std::to_string(r.failing));
  }
  for (const std::string d : {"restriction", "jump:right,lex", "jump:left,lex", "jump:right,opp", "prime:2", "prime:3",
                              "escaping", "point", "plante"}) {
    with_engine(d, [&](const auto& s) {
      using E = std::decay_t<decltype(s.engine)>;
      std::vector<typename std::decay_t<decltype(s)>::T> samples;
      if constexpr (std::is_same_v<E, RestrictionEngine>) {
        for (const auto& b : enumerate_ball(thompson_cfp_generators(), s.identity, L))
          samples.push_back(project_to_f_plus(b.element, thompson_f0()));
      } else {
        for (const auto& b : enumerate_ball(s.gens, s.identity, L)) samples.push_back(b.element);
      }
      AxiomReport r = axioms_report(s.engine, samples, 20000, c.seed);
      std::string w;
      for (auto i : r.witness) w += (w.empty() ? "" : ",") + std::to_string(i);
      report("axioms/" + d, r.pass,
             (r.pass ? "ok" : r.axiom + " at [" + w + "]") + " samples=" + std::to_string(samples.size()) +
                 " pairs=" + std::to_string(r.pairs_checked) + " triples=" + std::to_string(r.triples_checked));
      auto small = build_frame(s.engine, s.gens, s.identity, L);
      auto big = build_frame(s.engine, s.gens, s.identity, L + 1);
      std::size_t bad = 0;
      std::optional<std::size_t> last;
      for (const auto& p : small.points()) {
        auto k = big.locate(p.rep);
        if (!k || (last && !(*last < *k))) ++bad;
        if (k) last = k;
      }
      report("refinement/" + d, bad == 0, std::to_string(small.size()) + "->" + std::to_string(big.size()) +
                                                " mismatches=" + std::to_string(bad));
      if constexpr (std::is_same_v<typename std::decay_t<decltype(s)>::T, PLMap>) {
        if (s.horograding) {
          const int R = std::max(L + 3, 6);
          auto wide = build_frame(s.engine, s.gens, s.identity, R);
          std::size_t contra = 0;
          for (const auto& g : samples)
            if (contradicts(classify_predicted(g, *s.horograding), classify_empirical(wide, g, c.power_bound))) ++contra;
          report("classify/" + d, contra == 0,
                 "frame-radius=" + std::to_string(R) + " contradictions=" + std::to_string(contra));
        }
      }
      return kOk;
    });
  }
  report("cancel/10001,01110", cancellation_check("10001", "01110", 20), "bound=20");
  report("index/3,2", module_index(3, 2) == 1, "value=" + std::to_string(module_index(3, 2)));
  std::cout << (failed == 0 ? "ok" : "failed " + std::to_string(failed)) << "\n";
  return failed == 0 ? kOk : kPropertyFailure;
}

int run(const RunConfig& c) {
  if (c.subcommand == "sign") return cmd_sign(c);
  if (c.subcommand == "classify") return cmd_classify(c);
  if (c.subcommand == "realize") return cmd_realize(c);
  if (c.subcommand == "check") return cmd_check(c);
  if (c.subcommand == "twochain") return cmd_twochain(c);
  if (c.subcommand == "relators") return cmd_relators(c);
  if (c.subcommand == "cancel") return cmd_cancel(c);
  if (c.subcommand == "index") return cmd_index(c);
  if (c.subcommand == "plante") return cmd_plante(c);
  if (c.subcommand == "okorder") return cmd_okorder(c);
  if (c.subcommand.empty()) throw InputError("no subcommand given");
  throw InputError("unknown subcommand '" + c.subcommand + "'");
}

std::optional<std::string> config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    if (auto path = config_path(argc, argv)) load_config(*path, cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  CLI::App app{"plfocal: preorders, realizations and checks for PL groups"};
  std::string config_file;
  app.add_option("--config", config_file, "key = value config file; command-line flags override it");
  app.require_subcommand(0, 1);
  std::vector<std::string> positional;
  for (const auto& name : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--engine", cfg.engine, "engine descriptor");
    sub->add_option("--family", cfg.family, "group family: F, F-line, BS, wreath");
    sub->add_option("--word", cfg.word, "group element as a word");
    sub->add_option("--pair", cfg.pair, "binary word pair w1,w2");
    sub->add_option("--radius", cfg.radius, "ball radius");
    sub->add_option("--power-bound", cfg.power_bound, "largest power used by classification");
    sub->add_option("--bound", cfg.bound, "word length bound");
    sub->add_option("--seed", cfg.seed, "sampling seed");
    sub->add_option("--emit", cfg.emit, "csv or svg");
    sub->add_option("--output", cfg.output, "write the artifact here instead of stdout");
    sub->add_option("args", positional, "positional arguments");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  auto subs = app.get_subcommands();
  if (!subs.empty()) cfg.subcommand = subs.front()->get_name();
  if (!positional.empty()) cfg.args = positional;

  try {
    return run(cfg);
  } catch (const PropertyFailure& e) {
    std::cerr << "property failure: " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
