#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfree {

class PartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A set partition of {1..k}.  Stored as a restricted growth string: label[x]
// is the index of the block of element x+1, blocks numbered by first
// occurrence, so two equal partitions have identical storage.
class Partition {
 public:
  Partition() = default;

  static Partition zero(int k);
  static Partition one(int k);
  static Partition from_blocks(int k, const std::vector<std::vector<int>>& blocks);
  // Any labelling of 0..k-1; relabelled to canonical form.
  static Partition from_labels(std::span<const int> labels);
  static Partition parse(std::string_view text);

  int size() const { return static_cast<int>(labels_.size()); }
  int num_blocks() const { return nblocks_; }
  const std::vector<int>& labels() const { return labels_; }
  // 1-based element -> 0-based block index.
  int block_of(int x) const { return labels_[x - 1]; }
  bool same_block(int x, int y) const { return labels_[x - 1] == labels_[y - 1]; }
  // Blocks as sorted 1-based lists, ordered by minimum.
  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_sizes() const;

  bool is_noncrossing() const;
  bool is_pairing() const;
  bool has_singleton() const;
  // this <= q in the refinement order.
  bool refines(const Partition& q) const;

  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.labels_ == b.labels_; }
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
  // Lexicographic order on canonical block lists.
  friend bool operator<(const Partition& a, const Partition& b);

 private:
  std::vector<int> labels_;
  int nblocks_ = 0;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const noexcept;
};

// Word over {1,*}; true marks a star.
class SignPattern {
 public:
  SignPattern() = default;
  explicit SignPattern(std::vector<bool> stars);
  static SignPattern parse(std::string_view text);
  static SignPattern alternating(int m);  // 1*1*... of length 2m

  int size() const { return static_cast<int>(stars_.size()); }
  bool star(int pos1) const { return stars_[pos1 - 1]; }
  const std::vector<bool>& stars() const { return stars_; }
  bool balanced() const;
  SignPattern restrict(std::span<const int> positions1) const;
  std::string to_string() const;

  friend bool operator==(const SignPattern&, const SignPattern&) = default;
  friend bool operator<(const SignPattern& a, const SignPattern& b) { return a.stars_ < b.stars_; }

 private:
  std::vector<bool> stars_;
};

enum class FamilyKind { ALL, NC, NC2, NC2_EPS, NC_EPS, NCH_EPS, P2_EPS };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(std::string_view s);
bool family_needs_sign(FamilyKind kind);

struct PartitionFamily {
  FamilyKind kind = FamilyKind::ALL;
  int ground_size = 0;
  SignPattern eps;
  std::vector<Partition> members;
};

inline constexpr int kMaxAllSize = 10;
inline constexpr int kMaxNcSize = 12;
inline constexpr int kMaxPairingSize = 12;

// For NC_EPS, k is the size m of the partitions and eps has length 2m.
PartitionFamily enumerate(FamilyKind kind, int k, const SignPattern* eps = nullptr);
// Thread-safe memoized enumeration; references stay valid for the process lifetime.
const std::vector<Partition>& cached_members(FamilyKind kind, int k, const SignPattern* eps = nullptr);

Partition join_full(const Partition& p, const Partition& q);
Partition join_nc(const Partition& p, const Partition& q);
Partition meet(const Partition& p, const Partition& q);
Partition kreweras(const Partition& p);
Partition fatten(const Partition& p);  // also accepts crossing input, used for norm bounds
Partition unfatten(const Partition& p);
Partition hat(const Partition& p);
Partition interleave(const Partition& p, const Partition& q);
Partition rotate_left(const Partition& p);
Partition rotate_right(const Partition& p);
Partition kernel(std::span<const int> indices);
Partition restrict(const Partition& p, std::span<const int> subset1);

// Mobius function of NC(k).  mobius() uses the product over blocks of
// signed Catalan numbers; mobius_recursive() evaluates the defining
// recursion over the interval and memoizes it.
std::int64_t mobius(const Partition& s, const Partition& p);
std::int64_t mobius_recursive(const Partition& s, const Partition& p);
std::int64_t catalan(int n);

bool pairing_respects(const Partition& p, const SignPattern& eps);
bool alternating_blocks(const Partition& p, const SignPattern& eps);

}  // namespace qfree
