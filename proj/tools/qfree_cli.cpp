// qfree: command-line front end.  Every subcommand emits
// {"command", "parameters", "results", "verdicts"} as JSON, or a CSV table.
// Exit codes: 0 success, 1 a verification verdict failed, 2 usage error.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qfree/parallel.hpp"
#include "qfree/scenario.hpp"
#include "qfree/selftest.hpp"

using namespace qfree;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  json doc;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool verdict_failed = false;

  explicit Output(const std::string& command) {
    doc["command"] = command;
    doc["parameters"] = json::object();
    doc["results"] = json::object();
    doc["verdicts"] = json::object();
  }
  void verdict(const std::string& name, bool ok) {
    doc["verdicts"][name] = ok;
    if (!ok) verdict_failed = true;
  }
};

struct Common {
  std::string flavor = "quantum";
  std::string eps;
  int m = 0;
  std::string scenario;
  long n_min = 2, n_max = 10;
  bool n_min_set = false, n_max_set = false;
  std::string format = "json";
  std::string out;
  int threads = 1;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

Flavor parse_flavor(const std::string& s) {
  if (s == "quantum") return Flavor::quantum;
  if (s == "classical") return Flavor::classical;
  throw UsageError("--flavor must be quantum or classical, got '" + s + "'");
}

SignPattern parse_eps(const Common& c) {
  if (!c.eps.empty()) {
    for (char ch : c.eps)
      if (ch != '1' && ch != '*') throw UsageError("--eps uses the characters 1 and *, got '" + c.eps + "'");
    return SignPattern::parse(c.eps);
  }
  if (c.m > 0) return SignPattern::alternating(c.m);
  throw UsageError("give --eps or --m");
}

std::vector<int> parse_indices(const std::string& s, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size() || v < 1) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(flag + " expects positive integers separated by commas, got '" + s + "'");
    }
  }
  return out;
}

std::vector<long> n_range(const Common& c, long lo_default, long hi_default) {
  long lo = c.n_min_set ? c.n_min : lo_default, hi = c.n_max_set ? c.n_max : hi_default;
  if (lo < 2 || hi < lo) throw UsageError("need 2 <= --n-min <= --n-max");
  std::vector<long> ns;
  for (long n = lo; n <= hi; ++n) ns.push_back(n);
  return ns;
}

Scenario scenario_or_throw(const Common& c) {
  if (c.scenario.empty()) throw UsageError("--scenario <path> is required");
  try {
    return load_scenario(c.scenario);
  } catch (const ScenarioError& e) {
    throw UsageError(std::string("--scenario: ") + e.what());
  }
}

// ---- subcommands ----

Output cmd_partitions(const Common& c, const std::string& kind_text, int size) {
  Output o("partitions");
  FamilyKind kind;
  try {
    kind = family_kind_from_string(kind_text);
  } catch (const std::exception& e) {
    throw UsageError("--kind: " + std::string(e.what()));
  }
  std::optional<SignPattern> eps;
  if (family_needs_sign(kind)) eps = parse_eps(c);
  int k = size;
  if (k <= 0) {
    if (!eps) throw UsageError("--size is required for " + kind_text);
    k = kind == FamilyKind::NC_EPS ? eps->size() / 2 : eps->size();
  }
  PartitionFamily fam;
  try {
    fam = enumerate(kind, k, eps ? &*eps : nullptr);
  } catch (const PartitionError& e) {
    throw UsageError(e.what());
  }
  o.doc["parameters"]["kind"] = to_string(kind);
  o.doc["parameters"]["size"] = k;
  if (eps) o.doc["parameters"]["eps"] = eps->to_string();
  json members = json::array();
  o.csv_header = {"index", "partition", "blocks"};
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    members.push_back(fam.members[i].to_string());
    o.csv_rows.push_back({std::to_string(i), fam.members[i].to_string(), std::to_string(fam.members[i].num_blocks())});
  }
  o.doc["results"]["count"] = fam.members.size();
  o.doc["results"]["members"] = members;
  return o;
}

Output cmd_weingarten(const Common& c) {
  Output o("weingarten");
  Flavor f = parse_flavor(c.flavor);
  SignPattern eps = parse_eps(c);
  const int cap = f == Flavor::quantum ? kMaxQuantumWordLength : kMaxClassicalWordLength;
  if (eps.size() > cap) throw UsageError("--eps: length " + std::to_string(eps.size()) + " exceeds the cap " + std::to_string(cap));
  const auto& t = weingarten_table(f, eps);
  o.doc["parameters"]["flavor"] = c.flavor;
  o.doc["parameters"]["eps"] = eps.to_string();
  json fam = json::array(), gram = json::array(), wg = json::array();
  o.csv_header = {"row", "col", "pi", "sigma", "gram", "wg"};
  for (std::size_t a = 0; a < t.family.size(); ++a) {
    fam.push_back(t.family[a].to_string());
    json gr = json::array(), wr = json::array();
    for (std::size_t b = 0; b < t.family.size(); ++b) {
      gr.push_back(t.gram(a, b).to_string());
      wr.push_back(t.wg(a, b).to_string());
      o.csv_rows.push_back({std::to_string(a), std::to_string(b), t.family[a].to_string(), t.family[b].to_string(),
                            t.gram(a, b).to_string(), t.wg(a, b).to_string()});
    }
    gram.push_back(gr);
    wg.push_back(wr);
  }
  o.doc["results"]["family"] = fam;
  o.doc["results"]["gram"] = gram;
  o.doc["results"]["wg"] = wg;
  o.verdict("gram_times_wg_is_identity", (t.gram * t.wg).is_identity());
  return o;
}

Output cmd_moment(const Common& c, const std::string& i_text, const std::string& j_text, const std::string& l_text) {
  Output o("moment");
  if (!c.scenario.empty()) {
    // exact mixed moment and its limit for each N of a scenario
    Scenario s = scenario_or_throw(c);
    auto ns = n_range(c, s.ns.front(), s.ns.back());
    o.doc["parameters"]["scenario"] = s.name;
    o.doc["parameters"]["word"] = s.word_text;
    o.doc["parameters"]["flavor"] = to_string(s.flavor);
    o.csv_header = {"N", "value", "limit"};
    json rows = json::array();
    with_algebra(s, [&](auto algebra_at) {
      for (long N : ns) {
        auto alg = algebra_at(N);
        auto w = scenario_word(s, alg, N);
        std::string v = alg.to_string(lhs_exact(alg, w));
        std::string lim = w.lead ? std::string("n/a") : alg.to_string(limit_formula(alg, w));
        rows.push_back({{"N", N}, {"value", v}, {"limit", lim}});
        o.csv_rows.push_back({std::to_string(N), v, lim});
      }
      return 0;
    });
    o.doc["results"]["rows"] = rows;
    return o;
  }
  Flavor f = parse_flavor(c.flavor);
  SignPattern eps = parse_eps(c);
  auto i = parse_indices(i_text, "--i"), j = parse_indices(j_text, "--j");
  if (static_cast<int>(i.size()) != eps.size() || static_cast<int>(j.size()) != eps.size())
    throw UsageError("--i and --j need one index per letter of --eps (" + std::to_string(eps.size()) + ")");
  o.doc["parameters"]["flavor"] = c.flavor;
  o.doc["parameters"]["eps"] = eps.to_string();
  o.doc["parameters"]["i"] = i;
  o.doc["parameters"]["j"] = j;
  RationalFunction v;
  if (!l_text.empty()) {
    auto l = parse_indices(l_text, "--labels");
    if (static_cast<int>(l.size()) != eps.size()) throw UsageError("--labels needs one label per letter");
    if (eps.size() > kMaxFreeProductWordLength) throw UsageError("--eps: free products are capped at length 6");
    o.doc["parameters"]["labels"] = l;
    v = free_product_moment(f, eps, l, i, j);
  } else {
    const int cap = f == Flavor::quantum ? kMaxQuantumWordLength : kMaxClassicalWordLength;
    if (eps.size() > cap) throw UsageError("--eps: length exceeds the cap " + std::to_string(cap));
    v = haar_moment(f, eps, i, j);
  }
  o.doc["results"]["moment"] = v.to_string();
  o.csv_header = {"N", "moment"};
  json at = json::array();
  if (c.n_min_set || c.n_max_set) {
    for (long N : n_range(c, 2, 10)) {
      std::string s = v.has_pole(BigRational(N)) ? std::string("pole") : to_string(v.eval(BigRational(N)));
      at.push_back({{"N", N}, {"value", s}});
      o.csv_rows.push_back({std::to_string(N), s});
    }
  } else {
    o.csv_rows.push_back({"n", v.to_string()});
  }
  if (!at.empty()) o.doc["results"]["values"] = at;
  return o;
}

Output cmd_freeness(const Common& c, bool infinitesimal) {
  Output o("freeness");
  Scenario s = scenario_or_throw(c);
  if (c.n_min_set || c.n_max_set) s.ns = n_range(c, s.ns.front(), s.ns.back());
  o.doc["parameters"]["scenario"] = s.name;
  o.doc["parameters"]["flavor"] = to_string(s.flavor);
  o.doc["parameters"]["word"] = s.word_text;
  o.doc["parameters"]["n_min"] = s.ns.front();
  o.doc["parameters"]["n_max"] = s.ns.back();
  ConvergenceReport r;
  try {
    r = run_convergence(s);
  } catch (const std::length_error& e) {
    throw UsageError(e.what());
  }
  json rows = json::array();
  o.csv_header = {"N", "delta", "N2_delta"};
  for (const auto& row : r.rows) {
    rows.push_back({{"N", row.N}, {"value", row.value}, {"limit", row.limit}, {"delta", row.delta},
                    {"N2_delta", row.scaled}});
    o.csv_rows.push_back({std::to_string(row.N), fmt(row.delta), fmt(row.scaled)});
  }
  o.doc["results"]["rows"] = rows;
  // an exact match everywhere gives slope -inf, which JSON cannot carry
  if (std::isfinite(r.slope))
    o.doc["results"]["slope"] = r.slope;
  else
    o.doc["results"]["slope"] = std::isnan(r.slope) ? "nan" : r.slope < 0 ? "-inf" : "inf";
  o.doc["results"]["tail_points"] = r.tail_points;
  o.verdict("slope_ok", r.slope_ok);
  o.verdict("bounded", r.bounded);
  o.doc["verdicts"]["converges"] = r.verdict();
  if (!r.verdict()) o.verdict_failed = true;
  if (infinitesimal) {
    if (!s.bounds) throw UsageError("--infinitesimal: scenario has no infinitesimal section");
    auto inf = run_infinitesimal(s);
    json words = json::array();
    for (const auto& w : inf.words) {
      json lhs = json::array(), rhs = json::array();
      for (const auto& x : w.lhs) lhs.push_back(x.to_string());
      for (const auto& x : w.rhs) rhs.push_back(x.to_string());
      std::string text;
      for (const auto& l : w.word) text += (text.empty() ? "" : " ") + l;
      words.push_back({{"word", text}, {"ok", w.ok}, {"lhs", lhs}, {"rhs", rhs}});
    }
    json letters = json::object();
    for (const auto& [name, lm] : inf.letter_moments) {
      json coords = json::object();
      for (std::size_t k = 0; k < lm.labels.size(); ++k) {
        if (lm.functions[k].re.is_zero() && lm.functions[k].im.is_zero()) continue;
        coords[lm.labels[k]] = {{"re", lm.functions[k].re.to_string()}, {"im", lm.functions[k].im.to_string()},
                                {"E", lm.e[k].to_string()}, {"E_prime", lm.e_prime[k].to_string()}};
      }
      letters[name] = coords;
    }
    o.doc["results"]["infinitesimal"] = {{"letters", letters}, {"words", words}};
    o.verdict("infinitesimal_identity", inf.all_ok);
    o.verdict("samples_reproduced", inf.samples_reproduced);
    o.verdict("negative_control_rejected", inf.control_failed);
  }
  return o;
}

Output cmd_counterexample(const Common& c) {
  Output o("counterexample");
  Flavor f = parse_flavor(c.flavor);
  auto ns = n_range(c, 2, 10);
  if (ns.back() > 16) throw UsageError("--n-max is capped at 16");
  o.doc["parameters"]["flavor"] = c.flavor;
  o.doc["parameters"]["n_min"] = ns.front();
  o.doc["parameters"]["n_max"] = ns.back();
  const bool classical = f == Flavor::classical;
  o.csv_header = {"N", "value", classical ? "distance_to_one" : "norm"};
  json rows = json::array();
  bool envelope = true;
  for (long N : ns) {
    MatrixUnitAlgebra alg(static_cast<int>(N));
    auto v = counterexample(N, f);
    double d = classical ? alg.norm(v - alg.one()) : alg.norm(v);
    if (N >= 4 && d > 2.0 / N) envelope = false;
    rows.push_back({{"N", N}, {"value", alg.to_string(v)}, {classical ? "distance_to_one" : "norm", d}});
    o.csv_rows.push_back({std::to_string(N), alg.to_string(v), fmt(d)});
  }
  o.doc["results"]["rows"] = rows;
  o.doc["results"]["expected_limit"] = classical ? "1" : "0";
  o.verdict("within_2_over_N", envelope);
  return o;
}

Output cmd_selftest(const Common& c, const std::vector<int>& ids_in, const std::string& dir) {
  Output o("selftest");
  SelftestOptions opt;
  opt.scenario_dir = dir.empty() ? std::string(QFREE_SCENARIO_DIR) : dir;
  if (!std::filesystem::is_directory(opt.scenario_dir))
    throw UsageError("--scenario-dir: not a directory: " + opt.scenario_dir.string());
  std::vector<int> ids = ids_in;
  if (ids.empty())
    for (int k = 1; k <= kCriterionCount; ++k) ids.push_back(k);
  for (int id : ids)
    if (id < 1 || id > kCriterionCount) throw UsageError("--criteria: ids are 1.." + std::to_string(kCriterionCount));
  o.doc["parameters"]["criteria"] = ids;
  o.csv_header = {"criterion", "title", "pass", "detail"};
  json rows = json::array();
  for (int id : ids) {
    auto r = run_criterion(id, opt);
    std::fprintf(stderr, "[%s] %2d %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", id, r.title.c_str(), r.seconds);
    rows.push_back({{"criterion", id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    o.csv_rows.push_back({std::to_string(id), r.title, r.pass ? "true" : "false", r.detail});
    o.verdict("criterion_" + std::to_string(id), r.pass);
  }
  o.doc["results"]["criteria"] = rows;
  (void)c;
  return o;
}

void emit(const Output& o, const Common& c) {
  std::ostringstream os;
  if (c.format == "csv") {
    for (std::size_t k = 0; k < o.csv_header.size(); ++k) os << (k ? "," : "") << o.csv_header[k];
    os << "\n";
    for (const auto& row : o.csv_rows) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_field(row[k]);
      os << "\n";
    }
  } else {
    os << o.doc.dump(2) << "\n";
  }
  if (c.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(c.out);
    if (!f) throw UsageError("--out: cannot write " + c.out);
    f << os.str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfree: exact moments of Haar-rotated operator-valued matrices"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", c.out, "write the report here instead of standard output");
    s->add_option("--threads", c.threads, "worker threads inside library calls (output does not depend on it)")
        ->check(CLI::Range(1, 256));
  };
  auto add_range = [&](CLI::App* s) {
    s->add_option_function<long>("--n-min", [&](long v) { c.n_min = v, c.n_min_set = true; }, "smallest N");
    s->add_option_function<long>("--n-max", [&](long v) { c.n_max = v, c.n_max_set = true; }, "largest N");
  };

  std::string kind = "NC";
  int size = 0;
  auto* parts = app.add_subcommand(
      "partitions", "Enumerate a partition family: ALL, NC, NC2, NC2_EPS, NC_EPS, NCH_EPS or P2_EPS.");
  parts->add_option("--kind", kind, "family kind");
  parts->add_option("--size", size, "ground size (for NC_EPS: m)");
  parts->add_option("--eps", c.eps, "sign pattern over 1 and *");
  parts->add_option("--m", c.m, "use the alternating pattern 1*1*... of length 2m");
  add_common(parts);

  auto* wg = app.add_subcommand(
      "weingarten",
      "Gram and Weingarten matrices of the Haar state (Weingarten formula for the free unitary quantum group, "
      "or the classical unitary group).");
  wg->add_option("--flavor", c.flavor, "quantum or classical");
  wg->add_option("--eps", c.eps, "sign pattern over 1 and *");
  wg->add_option("--m", c.m, "use the alternating pattern of length 2m");
  add_common(wg);

  std::string i_text, j_text, l_text;
  auto* mom = app.add_subcommand(
      "moment",
      "Haar-state moment of matrix entries via the Weingarten formula (with --labels: the free product state), "
      "or with --scenario the exact mixed moment and its limit formula per N.");
  mom->add_option("--flavor", c.flavor, "quantum or classical");
  mom->add_option("--eps", c.eps, "sign pattern over 1 and *");
  mom->add_option("--m", c.m, "use the alternating pattern of length 2m");
  mom->add_option("--i", i_text, "row indices, e.g. 1,1");
  mom->add_option("--j", j_text, "column indices, e.g. 1,1");
  mom->add_option("--labels", l_text, "free-product labels, one per letter");
  mom->add_option("--scenario", c.scenario, "scenario file");
  add_range(mom);
  add_common(mom);

  bool infinitesimal = false;
  auto* fr = app.add_subcommand(
      "freeness",
      "Asymptotic freeness with amalgamation: N^2-scaled distance between exact mixed moments and the limit "
      "formula (O(N^-2) convergence theorem); with --infinitesimal the infinitesimal freeness identity.");
  fr->add_option("--scenario", c.scenario, "scenario file")->required();
  fr->add_flag("--infinitesimal", infinitesimal, "also check the infinitesimal identity on the scenario's letters");
  add_range(fr);
  add_common(fr);

  auto* ce = app.add_subcommand(
      "counterexample",
      "tr (x) E [(U A U* B)^3] for the commuting matrix-unit families: classical Haar unitaries stay at 1, "
      "quantum ones decay to the free value 0.");
  ce->add_option("--flavor", c.flavor, "quantum or classical");
  add_range(ce);
  add_common(ce);

  std::vector<int> criteria;
  std::string scenario_dir;
  auto* st = app.add_subcommand("selftest", "Run the acceptance invariants of every module; exit 1 on any failure.");
  st->add_option("--criteria", criteria, "criterion ids to run (default: all)");
  st->add_option("--scenario-dir", scenario_dir, "directory of shipped scenarios");
  add_common(st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(c.threads);
    Output o("");
    if (*parts) {
      o = cmd_partitions(c, kind, size);
    } else if (*wg) {
      o = cmd_weingarten(c);
    } else if (*mom) {
      o = cmd_moment(c, i_text, j_text, l_text);
    } else if (*fr) {
      o = cmd_freeness(c, infinitesimal);
    } else if (*ce) {
      o = cmd_counterexample(c);
    } else {
      o = cmd_selftest(c, criteria, scenario_dir);
    }
    emit(o, c);
    return o.verdict_failed ? 1 : 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
