#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfree/field_matrix.hpp"
#include "qfree/partitions.hpp"
#include "qfree/rational_function.hpp"

namespace qfree {

enum class Flavor { quantum, classical };

std::string to_string(Flavor f);
Flavor flavor_from_string(std::string_view s);

inline constexpr int kMaxQuantumWordLength = 8;
inline constexpr int kMaxClassicalWordLength = 6;
inline constexpr int kMaxFreeProductWordLength = 6;

// Gram and Weingarten matrices over eps-admissible pairings: noncrossing ones
// for the free unitary quantum group, all of them for the unitary group.
struct WeingartenTable {
  Flavor flavor = Flavor::quantum;
  SignPattern eps;
  std::vector<Partition> family;
  FieldMatrix<RationalFunction> gram;
  FieldMatrix<RationalFunction> wg;

  int index_of(const Partition& p) const;  // -1 when absent
  const RationalFunction& entry(const Partition& p, const Partition& s) const;
};

WeingartenTable build_table(Flavor flavor, const SignPattern& eps);
// Memoized build_table; thread-safe; references live for the process.
const WeingartenTable& weingarten_table(Flavor flavor, const SignPattern& eps);

// Weingarten matrix evaluated at n = N.  When N is a pole of the rational
// entries (classical flavor with N below half the word length) the
// Moore-Penrose pseudo-inverse of the numeric Gram matrix is returned,
// which is what the integration formula requires there.
const FieldMatrix<BigRational>& numeric_weingarten(Flavor flavor, const SignPattern& eps, long N);
FieldMatrix<BigRational> pseudo_inverse(const FieldMatrix<BigRational>& a);

// psi(U^{e1}_{i1 j1} ... U^{e2m}_{i2m j2m}); zero for odd length or an empty family.
RationalFunction haar_moment(Flavor flavor, const SignPattern& eps, std::span<const int> i, std::span<const int> j);
RationalFunction haar_moment(const WeingartenTable& table, std::span<const int> i, std::span<const int> j);
BigRational haar_moment_at(Flavor flavor, const SignPattern& eps, std::span<const int> i, std::span<const int> j,
                           long N);

struct EntryLetter {
  int label = 1;
  bool star = false;
  // true: the letter is the (i,j) entry of the matrix U^star, so for a star
  // it equals (U_{ji})^*; false: it is (U_{ij})^star.
  bool of_adjoint = false;
  int i = 1;
  int j = 1;
  friend bool operator==(const EntryLetter&, const EntryLetter&) = default;
};

using EntryWord = std::vector<EntryLetter>;

// Rewrites a word of adjoint entries into plain entries, swapping indices
// on even positions.  Plain-entry letters are first rewritten as adjoint
// entries so the Haar value is preserved.
EntryWord adjoint_reduce(const EntryWord& w);
// Haar value of a single-label word taken literally.
RationalFunction word_moment(Flavor flavor, const EntryWord& w);

// Product over blocks of omega of the Haar moments of the sub-words.
RationalFunction moment_function(Flavor flavor, const SignPattern& eps, const Partition& omega, std::span<const int> i,
                                 std::span<const int> j);
RationalFunction entry_cumulant(Flavor flavor, const SignPattern& eps, const Partition& tau, std::span<const int> i,
                                std::span<const int> j);
// Haar state of the free product of copies indexed by the labels.
RationalFunction free_product_moment(Flavor flavor, const SignPattern& eps, std::span<const int> labels,
                                     std::span<const int> i, std::span<const int> j);

struct WestReport {
  int exponent = 0;       // leading exponent of W(fatten p, fatten s); meaningless if zero
  bool zero = false;      // W entry identically zero
  int exponent_bound = 0; // 2|p v s| - |p| - |s| - m
  BigRational c0, c1, c2; // of n^{m+|s|-|p|} W
  std::int64_t mobius = 0;
  bool ok() const;
};

WestReport west_expansion(const WeingartenTable& table, const Partition& p, const Partition& s);

}  // namespace qfree
