#include "qfree/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qfree {

namespace {

using json = nlohmann::json;

GaussianRational scalar(const json& v, const std::string& where) {
  if (v.is_number_integer()) return GaussianRational(v.get<long>());
  if (v.is_string()) {
    try {
      return GaussianRational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ScenarioError(where + ": bad coefficient '" + v.get<std::string>() + "'");
    }
  }
  throw ScenarioError(where + ": coefficients are strings like \"3/2\" or \"1+i\", or integers");
}

// scalar -> {c}; [[..],[..]] -> row-major entries
std::vector<GaussianRational> value(const json& v, const std::string& where) {
  if (!v.is_array()) return {scalar(v, where)};
  std::vector<GaussianRational> out;
  std::size_t width = 0;
  for (const auto& row : v) {
    if (!row.is_array()) throw ScenarioError(where + ": a matrix value is a list of rows");
    if (width == 0) width = row.size();
    if (row.size() != width || row.size() != v.size()) throw ScenarioError(where + ": matrix value must be square");
    for (const auto& x : row) out.push_back(scalar(x, where));
  }
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::vector<long> range(long lo, long hi, const std::string& what) {
  if (lo < 2 || hi < lo) throw ScenarioError(what + ": need 2 <= min <= max");
  std::vector<long> ns;
  for (long n = lo; n <= hi; ++n) ns.push_back(n);
  return ns;
}

void check_value_shape(const Scenario& s, const FamilySpec& f) {
  for (const auto& v : f.values) {
    if (v.size() == 1) continue;
    if (s.algebra != Scenario::AlgebraKind::dense || v.size() != static_cast<std::size_t>(s.dim * s.dim))
      throw ScenarioError("family '" + f.name + "': matrix values need the dense algebra of matching size");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    Scenario s;
    s.name = get_or<std::string>(j, "name", "unnamed");
    s.description = get_or<std::string>(j, "description", "");
    std::string flavor = get_or<std::string>(j, "flavor", "quantum");
    if (flavor == "quantum") {
      s.flavor = Flavor::quantum;
    } else if (flavor == "classical") {
      s.flavor = Flavor::classical;
    } else {
      throw ScenarioError("flavor must be quantum or classical, got '" + flavor + "'");
    }

    const json& alg = j.at("algebra");
    std::string kind = alg.at("kind").get<std::string>();
    if (kind == "dense") {
      s.algebra = Scenario::AlgebraKind::dense;
      s.dim = alg.at("d").get<int>();
      if (s.dim < 1 || s.dim > 4) throw ScenarioError("dense algebra: need 1 <= d <= 4");
    } else if (kind == "matrix_units") {
      s.algebra = Scenario::AlgebraKind::matrix_units;
    } else {
      throw ScenarioError("algebra kind must be dense or matrix_units, got '" + kind + "'");
    }

    std::set<std::string> seen;
    for (const auto& fj : j.at("families")) {
      FamilySpec f;
      f.name = fj.at("name").get<std::string>();
      f.pattern = fj.at("pattern").get<std::string>();
      const std::string where = "family '" + f.name + "'";
      if (!seen.insert(f.name).second) throw ScenarioError(where + " declared twice");
      if (f.name.empty() || f.name[0] == 'U') throw ScenarioError(where + ": names may not start with U");
      if (f.pattern == "diagonal_constant" || f.pattern == "shift" || f.pattern == "averaging") {
        f.values.push_back(value(fj.at("value"), where));
      } else if (f.pattern == "diagonal_cycle" || f.pattern == "diagonal_blocks") {
        for (const auto& v : fj.at("values")) f.values.push_back(value(v, where));
        if (f.values.empty()) throw ScenarioError(where + ": " + f.pattern + " needs values");
      } else if (f.pattern == "matrix_units") {
        f.system = fj.at("system").get<int>();
        if (f.system != 1 && f.system != 2) throw ScenarioError(where + ": system must be 1 or 2");
        if (s.algebra != Scenario::AlgebraKind::matrix_units)
          throw ScenarioError(where + ": matrix_units pattern needs the matrix_units algebra");
      } else if (f.pattern == "combination") {
        for (const auto& t : fj.at("terms")) {
          auto n = t.at(1).get<std::string>();
          if (!seen.count(n) || n == f.name) throw ScenarioError(where + ": unknown family '" + n + "'");
          f.terms.emplace_back(scalar(t.at(0), where), n);
        }
      } else if (f.pattern == "product") {
        f.factors = fj.at("factors").get<std::vector<std::string>>();
        if (f.factors.empty()) throw ScenarioError(where + ": product needs factors");
        for (const auto& n : f.factors)
          if (!seen.count(n) || n == f.name) throw ScenarioError(where + ": unknown family '" + n + "'");
      } else if (f.pattern != "identity") {
        throw ScenarioError(where + ": unknown pattern '" + f.pattern + "'");
      }
      check_value_shape(s, f);
      s.families.push_back(std::move(f));
    }

    auto check_tokens = [&](const std::vector<WordToken>& w, const std::string& where) {
      for (const auto& t : w)
        if (t.kind == WordToken::Kind::family && !seen.count(t.name))
          throw ScenarioError(where + ": unknown family '" + t.name + "'");
    };
    s.word_text = j.at("word").get<std::string>();
    s.word = parse_word(s.word_text);
    check_tokens(s.word, "word");
    s.ns = range(get_or<long>(j, "n_min", 2), get_or<long>(j, "n_max", 10), "N range");

    if (j.contains("infinitesimal")) {
      const json& inf = j.at("infinitesimal");
      auto b = inf.at("degree_bounds").get<std::vector<int>>();
      if (b.size() != 2) throw ScenarioError("degree_bounds is [numerator, denominator]");
      s.bounds = DegreeBounds{b[0], b[1]};
      s.laurent_ns = range(inf.at("n_min").get<long>(), inf.at("n_max").get<long>(), "Laurent sample range");
      for (const auto& [name, text] : inf.at("letters").items()) {
        s.letters[name] = parse_word(text.get<std::string>());
        check_tokens(s.letters[name], "letter '" + name + "'");
      }
      for (const auto& [name, g] : inf.at("groups").items()) {
        if (!s.letters.count(name)) throw ScenarioError("group given for unknown letter '" + name + "'");
        s.groups[name] = g.get<int>();
      }
      if (s.groups.size() != s.letters.size()) throw ScenarioError("every letter needs a group");
      s.max_letters = get_or<int>(inf, "max_letters", 3);
      if (s.max_letters < 1 || s.max_letters > 4) throw ScenarioError("max_letters must be 1..4");
    }
    return s;
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

ConvergenceReport run_convergence(const Scenario& s) {
  return with_algebra(s, [&](auto algebra_at) {
    return convergence_report(s.ns, [&](long N) {
      auto alg = algebra_at(N);
      return compare_to_limit(alg, scenario_word(s, alg, N));
    });
  });
}

InfinitesimalSummary run_infinitesimal(const Scenario& s) {
  if (!s.bounds) throw ScenarioError("scenario '" + s.name + "' has no infinitesimal section");
  return with_algebra(s, [&](auto algebra_at) {
    using Alg = decltype(algebra_at(2L));
    InfinitesimalSummary out;
    InfinitesimalPair<Alg> pair(
        s.flavor, algebra_at,
        [&s](const Alg& a, long N) { return build_families(s, a, static_cast<int>(N)); }, s.letters,
        s.laurent_ns, *s.bounds);
    out.coordinate_labels = pair.coordinate_labels();
    using Item = typename InfinitesimalPair<Alg>::Item;
    // laurent_from_samples re-evaluates every sample, so getting here means
    // the rational functions reproduce the exact values
    for (const auto& [name, _] : s.letters) out.letter_moments.emplace(name, pair.moments({Item::of_letter(name)}));
    auto words = alternating_words(s.groups, s.max_letters);
    out.all_ok = true;
    for (const auto& w : words) {
      out.words.push_back(infinitesimal_check(pair, w));
      out.all_ok = out.all_ok && out.words.back().ok;
    }
    out.samples_reproduced = true;
    pair.corrupt(true);
    for (const auto& w : words) {
      if (!infinitesimal_check(pair, w).ok) {
        out.control_failed = true;
        break;
      }
    }
    return out;
  });
}

}  // namespace qfree
