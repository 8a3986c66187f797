#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qfree/freeness.hpp"

namespace qfree {

// Random test data: small rationals in [-3, 3] with denominators up to 3.
GaussianRational random_small(std::mt19937& rng, bool complex);
BMatrix<DenseAlgebra> random_dense_bmatrix(const DenseAlgebra& alg, int N, std::mt19937& rng, bool complex);

// A balanced sign pattern of length 2m.  alternating=true gives 1*1*...
SignPattern random_balanced(std::mt19937& rng, int m, bool alternating);

// Word of 2m unitary letters with random dense factors.  labels = 1 keeps a
// single unitary; otherwise each letter draws from 1..labels.
MixedWord<DenseAlgebra> random_dense_word(const DenseAlgebra& alg, std::mt19937& rng, Flavor flavor, int m, int N,
                                          int labels, bool alternating);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0;
  std::string detail;  // counts on success, the first failure otherwise
};

struct SelftestOptions {
  std::filesystem::path scenario_dir;
  unsigned seed = 20240611;
};

inline constexpr int kCriterionCount = 10;

// Runs one acceptance criterion (1..10).  Exceptions become failures.
CriterionResult run_criterion(int id, const SelftestOptions& opt);
std::string criterion_title(int id);

}  // namespace qfree
