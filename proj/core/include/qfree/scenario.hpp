#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfree/freeness.hpp"

namespace qfree {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One matrix family D_N, defined for every N by a pattern.
//   identity
//   diagonal_constant  value on every diagonal entry
//   diagonal_cycle     values[i mod k] on diagonal entry i
//   diagonal_blocks    values[floor(k i / N)] on diagonal entry i (k values)
//   shift              value at (i, i+1 mod N)
//   averaging          value / N at every entry
//   matrix_units       entry (i, j) is E_ji(system)  (matrix-unit algebra only)
//   combination        sum of coefficient * earlier family
//   product            product of earlier families, left to right
// A value is a scalar multiple of one or, for the dense algebra, a d x d
// matrix given row by row.
struct FamilySpec {
  std::string name;
  std::string pattern;
  std::vector<std::vector<GaussianRational>> values;
  int system = 1;
  std::vector<std::pair<GaussianRational, std::string>> terms;
  std::vector<std::string> factors;
};

struct Scenario {
  enum class AlgebraKind { dense, matrix_units };

  std::string name;
  std::string description;
  Flavor flavor = Flavor::quantum;
  AlgebraKind algebra = AlgebraKind::dense;
  int dim = 1;
  std::vector<FamilySpec> families;  // declaration order
  std::string word_text;
  std::vector<WordToken> word;
  std::vector<long> ns;

  // optional Laurent / infinitesimal section
  std::optional<DegreeBounds> bounds;
  std::vector<long> laurent_ns;
  std::map<std::string, std::vector<WordToken>> letters;
  std::map<std::string, int> groups;
  int max_letters = 3;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

template <CoefficientAlgebra Alg>
typename Alg::Element element_from_value(const Alg& alg, const std::vector<GaussianRational>& v) {
  if (v.size() == 1) return alg.one() * v[0];
  return alg.from_coordinates(v);
}

template <CoefficientAlgebra Alg>
std::map<std::string, BMatrix<Alg>> build_families(const Scenario& s, const Alg& alg, int N) {
  std::map<std::string, BMatrix<Alg>> out;
  auto get = [&](const std::string& n) -> const BMatrix<Alg>& {
    auto it = out.find(n);
    if (it == out.end()) throw ScenarioError("family '" + n + "' used before it is declared");
    return it->second;
  };
  for (const auto& f : s.families) {
    BMatrix<Alg> m(N);
    if (f.pattern == "identity") {
      m = BMatrix<Alg>::identity(alg, N);
    } else if (f.pattern == "diagonal_constant") {
      m = BMatrix<Alg>::diagonal(N, element_from_value(alg, f.values.at(0)));
    } else if (f.pattern == "diagonal_cycle") {
      for (int i = 0; i < N; ++i) m(i, i) = element_from_value(alg, f.values.at(i % f.values.size()));
    } else if (f.pattern == "diagonal_blocks") {
      const long k = static_cast<long>(f.values.size());
      for (int i = 0; i < N; ++i) m(i, i) = element_from_value(alg, f.values.at(k * i / N));
    } else if (f.pattern == "averaging") {
      auto b = element_from_value(alg, f.values.at(0)) * GaussianRational(make_rational(1, N));
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = b;
    } else if (f.pattern == "shift") {
      auto b = element_from_value(alg, f.values.at(0));
      for (int i = 0; i < N; ++i) m(i, (i + 1) % N) += b;
    } else if (f.pattern == "matrix_units") {
      if constexpr (std::is_same_v<Alg, MatrixUnitAlgebra>) {
        m = flip_matrix(alg, f.system);
      } else {
        throw ScenarioError("pattern matrix_units needs the matrix_units algebra");
      }
    } else if (f.pattern == "combination") {
      for (const auto& [c, n] : f.terms) m = add(m, scale(get(n), c));
    } else if (f.pattern == "product") {
      m = get(f.factors.at(0));
      for (std::size_t k = 1; k < f.factors.size(); ++k) m = multiply(m, get(f.factors[k]));
    } else {
      throw ScenarioError("unknown family pattern '" + f.pattern + "'");
    }
    out.emplace(f.name, std::move(m));
  }
  return out;
}

// Calls fn(algebra_at) with algebra_at(N) building the scenario's algebra.
template <class Fn>
decltype(auto) with_algebra(const Scenario& s, Fn&& fn) {
  if (s.algebra == Scenario::AlgebraKind::dense) {
    int d = s.dim;
    return fn([d](long) { return DenseAlgebra(d); });
  }
  return fn([](long N) { return MatrixUnitAlgebra(static_cast<int>(N)); });
}

template <CoefficientAlgebra Alg>
MixedWord<Alg> scenario_word(const Scenario& s, const Alg& alg, long N) {
  return instantiate(alg, s.flavor, s.word, build_families(s, alg, static_cast<int>(N)), {}, static_cast<int>(N));
}

// exact values against the limit formula over the scenario's N range
ConvergenceReport run_convergence(const Scenario& s);

struct InfinitesimalSummary {
  std::vector<InfinitesimalResult> words;
  bool all_ok = false;
  bool control_failed = false;  // negative control must fail
  bool samples_reproduced = false;
  std::vector<std::string> coordinate_labels;
  // Laurent data of each single letter
  std::map<std::string, LaurentMoments> letter_moments;
};

InfinitesimalSummary run_infinitesimal(const Scenario& s);

}  // namespace qfree
