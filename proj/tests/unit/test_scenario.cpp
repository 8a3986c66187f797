#include <gtest/gtest.h>

#include "qfree/scenario.hpp"

using namespace qfree;

namespace {

const std::filesystem::path kDir = QFREE_SCENARIO_DIR;

std::string minimal(const std::string& families, const std::string& word = "U A U* B") {
  return R"({"flavor": "quantum", "algebra": {"kind": "dense", "d": 2}, "families": [)" + families +
         R"(], "word": ")" + word + R"(", "n_min": 2, "n_max": 4})";
}

}  // namespace

TEST(Scenario, ShippedFilesParse) {
  for (const char* f : {"quantum_dense_d2.json", "quantum_diagonal.json", "quantum_matrix_units.json",
                        "classical_dense_d2.json", "classical_matrix_units.json", "dense_infinitesimal.json"}) {
    Scenario s = load_scenario(kDir / f);
    EXPECT_FALSE(s.word.empty()) << f;
    EXPECT_EQ(s.ns.front(), 2) << f;
  }
}

TEST(Scenario, FamilyPatterns) {
  Scenario s = parse_scenario(minimal(R"(
    {"name": "I", "pattern": "identity"},
    {"name": "D", "pattern": "diagonal_cycle", "values": ["1", [["0", "1"], ["1", "0"]]]},
    {"name": "K", "pattern": "diagonal_blocks", "values": ["1", "2"]},
    {"name": "S", "pattern": "shift", "value": "1/2"},
    {"name": "P", "pattern": "averaging", "value": 3},
    {"name": "A", "pattern": "combination", "terms": [["2", "I"], ["-1", "S"]]},
    {"name": "B", "pattern": "product", "factors": ["S", "S"]})"));
  DenseAlgebra alg(2);
  auto f = build_families(s, alg, 4);
  auto c = [&](const char* n, int i, int j) { return alg.coordinates(f.at(n)(i, j)); };
  using G = GaussianRational;
  EXPECT_EQ(c("I", 2, 2), (std::vector<G>{1, 0, 0, 1}));
  EXPECT_EQ(c("D", 1, 1), (std::vector<G>{0, 1, 1, 0}));
  EXPECT_EQ(c("D", 2, 2), (std::vector<G>{1, 0, 0, 1}));
  EXPECT_EQ(c("K", 1, 1)[0], G(1));
  EXPECT_EQ(c("K", 2, 2)[0], G(2));
  EXPECT_EQ(c("S", 3, 0)[0], G(make_rational(1, 2)));
  EXPECT_EQ(c("P", 1, 3)[0], G(make_rational(3, 4)));
  EXPECT_EQ(c("A", 0, 1)[0], G(make_rational(-1, 2)));
  EXPECT_EQ(c("B", 0, 2)[0], G(make_rational(1, 4)));
}

TEST(Scenario, MatrixUnitPattern) {
  Scenario s = load_scenario(kDir / "quantum_matrix_units.json");
  MatrixUnitAlgebra alg(3);
  auto f = build_families(s, alg, 3);
  EXPECT_TRUE(alg.equal(f.at("A")(0, 2), alg.unit(1, 3, 1)));
  EXPECT_TRUE(alg.equal(f.at("B")(1, 0), alg.unit(2, 1, 2)));
  ASSERT_TRUE(s.bounds.has_value());
  EXPECT_EQ(s.groups.at("b"), 2);
}

TEST(Scenario, ErrorsNameTheProblem) {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    try {
      parse_scenario(text);
    } catch (const ScenarioError& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails_with("{", "not valid JSON"));
  EXPECT_TRUE(fails_with(minimal(R"({"name": "A", "pattern": "spiral"})"), "spiral"));
  EXPECT_TRUE(fails_with(minimal(R"({"name": "A", "pattern": "identity"})"), "'B'"));
  const char* three = R"({"name": "A", "pattern": "shift", "value": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})";
  EXPECT_TRUE(fails_with(minimal(three, "U A U*"), "matching size"));
  EXPECT_TRUE(fails_with(minimal(R"({"name": "A", "pattern": "shift", "value": "x"})", "U A U*"), "bad coefficient"));
  EXPECT_TRUE(fails_with(minimal(R"({"name": "A", "pattern": "matrix_units", "system": 1})", "U A U*"),
                         "matrix_units algebra"));
  EXPECT_TRUE(fails_with(minimal(R"({"name": "A", "pattern": "identity"}, {"name": "A", "pattern": "identity"})"),
                         "declared twice"));
  EXPECT_THROW(load_scenario(kDir / "does_not_exist.json"), ScenarioError);
}

TEST(Scenario, ConvergenceOnShortRange) {
  Scenario s = load_scenario(kDir / "quantum_diagonal.json");
  s.ns = {2, 3, 4, 5, 6};
  auto r = run_convergence(s);
  ASSERT_EQ(r.rows.size(), 5u);
  for (const auto& row : r.rows) EXPECT_GT(row.delta, 0);
  EXPECT_TRUE(r.bounded);
}

TEST(Scenario, DenseInfinitesimalIdentity) {
  auto r = run_infinitesimal(load_scenario(kDir / "dense_infinitesimal.json"));
  EXPECT_TRUE(r.samples_reproduced);
  EXPECT_TRUE(r.all_ok);
  EXPECT_TRUE(r.control_failed);
  EXPECT_FALSE(r.words.empty());
  // k = 1 words hold trivially
  for (const auto& w : r.words)
    if (w.word.size() == 1) EXPECT_TRUE(w.ok);
  // E' must not vanish, or the identity would hold vacuously
  bool nonzero = false;
  for (const auto& [name, lm] : r.letter_moments)
    for (const auto& c : lm.e_prime) nonzero = nonzero || !c.is_zero();
  EXPECT_TRUE(nonzero);
}
