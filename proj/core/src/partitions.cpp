#include "qfree/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace qfree {

namespace {

std::vector<int> canonical_labels(std::span<const int> raw) {
  std::vector<int> out(raw.size());
  std::unordered_map<int, int> seen;
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = seen.emplace(raw[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

void require_nc(const Partition& p, const char* op) {
  if (!p.is_noncrossing())
    throw PartitionError(std::string(op) + ": partition " + p.to_string() + " is not noncrossing");
}

void require_same_size(const Partition& p, const Partition& q, const char* op) {
  if (p.size() != q.size())
    throw PartitionError(std::string(op) + ": ground sizes differ (" + std::to_string(p.size()) +
                         " vs " + std::to_string(q.size()) + ")");
}

}  // namespace

Partition Partition::zero(int k) {
  std::vector<int> l(k);
  std::iota(l.begin(), l.end(), 0);
  return from_labels(l);
}

Partition Partition::one(int k) {
  std::vector<int> l(k, 0);
  return from_labels(l);
}

Partition Partition::from_labels(std::span<const int> labels) {
  if (labels.empty()) throw PartitionError("partition of an empty ground set");
  Partition p;
  p.labels_ = canonical_labels(labels);
  p.nblocks_ = *std::max_element(p.labels_.begin(), p.labels_.end()) + 1;
  return p;
}

Partition Partition::from_blocks(int k, const std::vector<std::vector<int>>& blocks) {
  if (k < 1) throw PartitionError("ground size must be positive");
  std::vector<int> l(k, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw PartitionError("empty block");
    for (int x : blocks[b]) {
      if (x < 1 || x > k) throw PartitionError("element " + std::to_string(x) + " outside 1.." + std::to_string(k));
      if (l[x - 1] != -1) throw PartitionError("element " + std::to_string(x) + " appears twice");
      l[x - 1] = static_cast<int>(b);
    }
  }
  for (int x = 0; x < k; ++x)
    if (l[x] == -1) throw PartitionError("element " + std::to_string(x + 1) + " missing");
  return from_labels(l);
}

Partition Partition::parse(std::string_view text) {
  std::vector<std::vector<int>> blocks;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  auto expect = [&](char c) {
    skip();
    if (i >= text.size() || text[i] != c)
      throw PartitionError("malformed partition '" + std::string(text) + "': expected '" + c + "'");
    ++i;
  };
  expect('{');
  skip();
  if (i < text.size() && text[i] == '}') throw PartitionError("empty partition");
  while (true) {
    expect('{');
    std::vector<int> block;
    while (true) {
      skip();
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) throw PartitionError("malformed partition '" + std::string(text) + "': expected integer");
      block.push_back(std::stoi(std::string(text.substr(start, i - start))));
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      expect('}');
      break;
    }
    blocks.push_back(std::move(block));
    skip();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    expect('}');
    break;
  }
  skip();
  if (i != text.size()) throw PartitionError("trailing characters in partition '" + std::string(text) + "'");
  int k = 0;
  for (auto& b : blocks) k += static_cast<int>(b.size());
  return from_blocks(k, blocks);
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(nblocks_);
  for (int x = 0; x < size(); ++x) out[labels_[x]].push_back(x + 1);
  return out;
}

std::vector<int> Partition::block_sizes() const {
  std::vector<int> out(nblocks_, 0);
  for (int l : labels_) ++out[l];
  return out;
}

bool Partition::is_noncrossing() const {
  // Scan left to right keeping the stack of blocks that are open; revisiting a
  // block that is not on top means some later-opened block is still open.
  std::vector<int> last(nblocks_, -1);
  for (int x = 0; x < size(); ++x) last[labels_[x]] = x;
  std::vector<char> started(nblocks_, 0);
  std::vector<int> stack;
  for (int x = 0; x < size(); ++x) {
    int b = labels_[x];
    if (started[b]) {
      if (stack.empty() || stack.back() != b) return false;
      if (last[b] == x) stack.pop_back();
    } else {
      started[b] = 1;
      if (last[b] != x) stack.push_back(b);
    }
  }
  return true;
}

bool Partition::is_pairing() const {
  for (int s : block_sizes())
    if (s != 2) return false;
  return true;
}

bool Partition::has_singleton() const {
  for (int s : block_sizes())
    if (s == 1) return true;
  return false;
}

bool Partition::refines(const Partition& q) const {
  if (size() != q.size()) return false;
  std::vector<int> image(nblocks_, -1);
  for (int x = 0; x < size(); ++x) {
    int& img = image[labels_[x]];
    if (img == -1)
      img = q.labels_[x];
    else if (img != q.labels_[x])
      return false;
  }
  return true;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first_block = true;
  for (auto& b : blocks()) {
    if (!first_block) os << ',';
    first_block = false;
    os << '{';
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) os << ',';
      os << b[i];
    }
    os << '}';
  }
  os << '}';
  return os.str();
}

bool operator<(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.blocks() < b.blocks();
}

std::size_t PartitionHash::operator()(const Partition& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int l : p.labels()) h = (h ^ static_cast<std::size_t>(l + 1)) * 1099511628211ull;
  return h;
}

SignPattern::SignPattern(std::vector<bool> stars) : stars_(std::move(stars)) {}

SignPattern SignPattern::parse(std::string_view text) {
  std::vector<bool> s;
  for (char c : text) {
    if (c == '1')
      s.push_back(false);
    else if (c == '*')
      s.push_back(true);
    else
      throw PartitionError("sign pattern '" + std::string(text) + "' may only contain '1' and '*'");
  }
  if (s.empty()) throw PartitionError("empty sign pattern");
  return SignPattern(std::move(s));
}

SignPattern SignPattern::alternating(int m) {
  std::vector<bool> s(2 * m);
  for (int i = 0; i < 2 * m; ++i) s[i] = (i % 2 == 1);
  return SignPattern(std::move(s));
}

bool SignPattern::balanced() const {
  int c = 0;
  for (bool b : stars_) c += b ? 1 : -1;
  return c == 0;
}

SignPattern SignPattern::restrict(std::span<const int> positions1) const {
  std::vector<bool> s;
  s.reserve(positions1.size());
  for (int p : positions1) s.push_back(stars_.at(p - 1));
  return SignPattern(std::move(s));
}

std::string SignPattern::to_string() const {
  std::string out;
  for (bool b : stars_) out += b ? '*' : '1';
  return out;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::ALL: return "ALL";
    case FamilyKind::NC: return "NC";
    case FamilyKind::NC2: return "NC2";
    case FamilyKind::NC2_EPS: return "NC2_EPS";
    case FamilyKind::NC_EPS: return "NC_EPS";
    case FamilyKind::NCH_EPS: return "NCH_EPS";
    case FamilyKind::P2_EPS: return "P2_EPS";
  }
  return "?";
}

FamilyKind family_kind_from_string(std::string_view s) {
  for (auto k : {FamilyKind::ALL, FamilyKind::NC, FamilyKind::NC2, FamilyKind::NC2_EPS, FamilyKind::NC_EPS,
                 FamilyKind::NCH_EPS, FamilyKind::P2_EPS})
    if (to_string(k) == s) return k;
  throw PartitionError("unknown partition family '" + std::string(s) + "'");
}

bool family_needs_sign(FamilyKind kind) {
  return kind == FamilyKind::NC2_EPS || kind == FamilyKind::NC_EPS || kind == FamilyKind::NCH_EPS ||
         kind == FamilyKind::P2_EPS;
}

bool pairing_respects(const Partition& p, const SignPattern& eps) {
  if (p.size() != eps.size()) return false;
  for (auto& b : p.blocks()) {
    if (b.size() != 2) return false;
    if (eps.star(b[0]) == eps.star(b[1])) return false;
  }
  return true;
}

bool alternating_blocks(const Partition& p, const SignPattern& eps) {
  if (p.size() != eps.size()) return false;
  for (auto& b : p.blocks()) {
    if (b.size() % 2) return false;
    for (std::size_t i = 1; i < b.size(); ++i)
      if (eps.star(b[i]) == eps.star(b[i - 1])) return false;
  }
  return true;
}

namespace {

void gen_all(int k, std::vector<int>& cur, int maxlabel, std::vector<Partition>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(Partition::from_labels(cur));
    return;
  }
  for (int l = 0; l <= maxlabel + 1; ++l) {
    cur.push_back(l);
    gen_all(k, cur, std::max(maxlabel, l), out);
    cur.pop_back();
  }
}

// Each new element either opens a block or joins an open block; joining
// closes every block opened after it, which is exactly the noncrossing rule.
void gen_nc(int k, std::vector<int>& cur, std::vector<int>& stack, int nblocks, bool pairs_only,
            std::vector<int>& sizes, std::vector<Partition>& out) {
  int x = static_cast<int>(cur.size());
  if (x == k) {
    if (pairs_only && !stack.empty()) return;
    out.push_back(Partition::from_labels(cur));
    return;
  }
  if (pairs_only && static_cast<int>(stack.size()) > k - x) return;
  // open a new block
  cur.push_back(nblocks);
  stack.push_back(nblocks);
  sizes.push_back(1);
  gen_nc(k, cur, stack, nblocks + 1, pairs_only, sizes, out);
  sizes.pop_back();
  stack.pop_back();
  cur.pop_back();
  if (pairs_only) {
    if (stack.empty()) return;
    int b = stack.back();
    stack.pop_back();
    cur.push_back(b);
    ++sizes[b];
    gen_nc(k, cur, stack, nblocks, pairs_only, sizes, out);
    --sizes[b];
    cur.pop_back();
    stack.push_back(b);
    return;
  }
  for (int depth = static_cast<int>(stack.size()) - 1; depth >= 0; --depth) {
    int b = stack[depth];
    std::vector<int> saved(stack.begin() + depth + 1, stack.end());
    stack.resize(depth + 1);
    cur.push_back(b);
    ++sizes[b];
    gen_nc(k, cur, stack, nblocks, pairs_only, sizes, out);
    --sizes[b];
    cur.pop_back();
    stack.insert(stack.end(), saved.begin(), saved.end());
  }
}

void gen_pairings(std::vector<int>& cur, int nblocks, std::vector<Partition>& out) {
  int k = static_cast<int>(cur.size());
  int first = -1;
  for (int i = 0; i < k; ++i)
    if (cur[i] == -1) {
      first = i;
      break;
    }
  if (first == -1) {
    out.push_back(Partition::from_labels(cur));
    return;
  }
  for (int j = first + 1; j < k; ++j) {
    if (cur[j] != -1) continue;
    cur[first] = cur[j] = nblocks;
    gen_pairings(cur, nblocks + 1, out);
    cur[first] = cur[j] = -1;
  }
}

std::vector<Partition> all_nc(int k, bool pairs_only) {
  std::vector<Partition> out;
  std::vector<int> cur, stack, sizes;
  gen_nc(k, cur, stack, 0, pairs_only, sizes, out);
  return out;
}

}  // namespace

PartitionFamily enumerate(FamilyKind kind, int k, const SignPattern* eps) {
  if (k < 1) throw PartitionError("enumerate: ground size must be >= 1, got " + std::to_string(k));
  bool needs = family_needs_sign(kind);
  if (needs && !eps) throw PartitionError("enumerate: family " + to_string(kind) + " requires a sign pattern");
  if (!needs && eps) throw PartitionError("enumerate: family " + to_string(kind) + " takes no sign pattern");
  PartitionFamily fam;
  fam.kind = kind;
  fam.ground_size = k;
  if (eps) fam.eps = *eps;
  auto cap = [&](int limit) {
    if (k > limit)
      throw PartitionError("enumerate: " + to_string(kind) + " is capped at ground size " + std::to_string(limit) +
                           ", got " + std::to_string(k));
  };
  auto need_even = [&] {
    if (k % 2) throw PartitionError("enumerate: " + to_string(kind) + " needs an even ground size");
  };
  auto need_eps_len = [&](int len) {
    if (eps->size() != len)
      throw PartitionError("enumerate: sign pattern length " + std::to_string(eps->size()) + " does not match " +
                           std::to_string(len));
  };
  switch (kind) {
    case FamilyKind::ALL: {
      cap(kMaxAllSize);
      std::vector<int> cur;
      gen_all(k, cur, -1, fam.members);
      break;
    }
    case FamilyKind::NC:
      cap(kMaxNcSize);
      fam.members = all_nc(k, false);
      break;
    case FamilyKind::NC2:
      cap(kMaxPairingSize);
      need_even();
      fam.members = all_nc(k, true);
      break;
    case FamilyKind::NC2_EPS:
      cap(kMaxPairingSize);
      need_even();
      need_eps_len(k);
      for (auto& p : all_nc(k, true))
        if (pairing_respects(p, *eps)) fam.members.push_back(p);
      break;
    case FamilyKind::NC_EPS:
      if (2 * k > kMaxPairingSize)
        throw PartitionError("enumerate: NC_EPS is capped at m = " + std::to_string(kMaxPairingSize / 2));
      need_eps_len(2 * k);
      for (auto& p : all_nc(k, false))
        if (pairing_respects(fatten(p), *eps)) fam.members.push_back(p);
      break;
    case FamilyKind::NCH_EPS:
      cap(kMaxNcSize);
      need_even();
      need_eps_len(k);
      for (auto& p : all_nc(k, false))
        if (alternating_blocks(p, *eps)) fam.members.push_back(p);
      break;
    case FamilyKind::P2_EPS: {
      cap(kMaxPairingSize);
      need_even();
      need_eps_len(k);
      std::vector<int> cur(k, -1);
      std::vector<Partition> all;
      gen_pairings(cur, 0, all);
      for (auto& p : all)
        if (pairing_respects(p, *eps)) fam.members.push_back(p);
      break;
    }
  }
  // Sort on precomputed block lists; comparing through operator< would
  // rebuild them on every comparison.
  std::vector<std::pair<std::vector<std::vector<int>>, std::size_t>> keyed;
  keyed.reserve(fam.members.size());
  for (std::size_t i = 0; i < fam.members.size(); ++i) keyed.emplace_back(fam.members[i].blocks(), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<Partition> sorted;
  sorted.reserve(keyed.size());
  for (auto& [key, idx] : keyed) sorted.push_back(std::move(fam.members[idx]));
  fam.members = std::move(sorted);
  return fam;
}

const std::vector<Partition>& cached_members(FamilyKind kind, int k, const SignPattern* eps) {
  using Key = std::tuple<int, int, std::string>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<std::vector<Partition>>> cache;
  Key key{static_cast<int>(kind), k, eps ? eps->to_string() : std::string()};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto fam = std::make_unique<std::vector<Partition>>(enumerate(kind, k, eps).members);
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(fam));
  return *it->second;
}

Partition join_full(const Partition& p, const Partition& q) {
  require_same_size(p, q, "join_full");
  int k = p.size();
  UnionFind uf(k);
  std::vector<int> firstp(p.num_blocks(), -1), firstq(q.num_blocks(), -1);
  for (int x = 0; x < k; ++x) {
    int& fp = firstp[p.labels()[x]];
    if (fp == -1) fp = x; else uf.unite(x, fp);
    int& fq = firstq[q.labels()[x]];
    if (fq == -1) fq = x; else uf.unite(x, fq);
  }
  std::vector<int> l(k);
  for (int x = 0; x < k; ++x) l[x] = uf.find(x);
  return Partition::from_labels(l);
}

Partition meet(const Partition& p, const Partition& q) {
  require_same_size(p, q, "meet");
  std::vector<int> l(p.size());
  for (int x = 0; x < p.size(); ++x) l[x] = p.labels()[x] * q.size() + q.labels()[x];
  return Partition::from_labels(l);
}

Partition join_nc(const Partition& p, const Partition& q) {
  require_nc(p, "join_nc");
  require_nc(q, "join_nc");
  Partition r = join_full(p, q);
  // Merge crossing blocks until none remain.
  while (true) {
    auto bl = r.blocks();
    bool merged = false;
    std::vector<int> l = r.labels();
    for (std::size_t a = 0; a < bl.size() && !merged; ++a)
      for (std::size_t b = a + 1; b < bl.size() && !merged; ++b) {
        // blocks a and b cross iff some x<y<z<w with x,z in one and y,w in the other
        std::vector<int> seq;
        std::size_t i = 0, j = 0;
        while (i < bl[a].size() || j < bl[b].size()) {
          if (j == bl[b].size() || (i < bl[a].size() && bl[a][i] < bl[b][j])) {
            if (seq.empty() || seq.back() != 0) seq.push_back(0);
            ++i;
          } else {
            if (seq.empty() || seq.back() != 1) seq.push_back(1);
            ++j;
          }
        }
        if (seq.size() >= 4) {
          for (int x : bl[b]) l[x - 1] = static_cast<int>(a);
          merged = true;
        }
      }
    if (!merged) return r;
    r = Partition::from_labels(l);
  }
}

Partition kreweras(const Partition& p) {
  require_nc(p, "kreweras");
  int k = p.size();
  // next element of each block, cyclically; K = next^{-1} o (x -> x+1)
  std::vector<int> next(k), prev(k);
  for (auto& b : p.blocks())
    for (std::size_t i = 0; i < b.size(); ++i) next[b[i] - 1] = b[(i + 1) % b.size()] - 1;
  for (int x = 0; x < k; ++x) prev[next[x]] = x;
  std::vector<int> perm(k);
  for (int x = 0; x < k; ++x) perm[x] = prev[(x + 1) % k];
  std::vector<int> l(k, -1);
  int c = 0;
  for (int x = 0; x < k; ++x) {
    if (l[x] != -1) continue;
    for (int y = x; l[y] == -1; y = perm[y]) l[y] = c;
    ++c;
  }
  return Partition::from_labels(l);
}

Partition fatten(const Partition& p) {
  int m = p.size();
  std::vector<int> l(2 * m, -1);
  int c = 0;
  for (auto& b : p.blocks()) {
    std::size_t s = b.size();
    l[2 * b[0] - 2] = c;
    l[2 * b[s - 1] - 1] = c;
    ++c;
    for (std::size_t i = 0; i + 1 < s; ++i) {
      l[2 * b[i] - 1] = c;
      l[2 * b[i + 1] - 2] = c;
      ++c;
    }
  }
  return Partition::from_labels(l);
}

Partition hat(const Partition& p) {
  std::vector<int> l(2 * p.size());
  for (int x = 0; x < p.size(); ++x) l[2 * x] = l[2 * x + 1] = p.labels()[x];
  return Partition::from_labels(l);
}

Partition unfatten(const Partition& p) {
  if (!p.is_pairing() || !p.is_noncrossing())
    throw PartitionError("unfatten: " + p.to_string() + " is not a noncrossing pairing");
  int m = p.size() / 2;
  Partition j = join_full(p, hat(Partition::zero(m)));
  std::vector<int> l(m);
  for (int x = 0; x < m; ++x) l[x] = j.labels()[2 * x];
  return Partition::from_labels(l);
}

Partition interleave(const Partition& p, const Partition& q) {
  require_same_size(p, q, "interleave");
  int m = p.size();
  std::vector<int> l(2 * m);
  for (int x = 0; x < m; ++x) {
    l[2 * x] = p.labels()[x];
    l[2 * x + 1] = q.labels()[x] + p.num_blocks();
  }
  return Partition::from_labels(l);
}

Partition rotate_left(const Partition& p) {
  int k = p.size();
  std::vector<int> l(k);
  for (int x = 0; x < k; ++x) l[x] = p.labels()[(x + 1) % k];
  return Partition::from_labels(l);
}

Partition rotate_right(const Partition& p) {
  int k = p.size();
  std::vector<int> l(k);
  for (int x = 0; x < k; ++x) l[x] = p.labels()[(x + k - 1) % k];
  return Partition::from_labels(l);
}

Partition kernel(std::span<const int> indices) { return Partition::from_labels(indices); }

Partition restrict(const Partition& p, std::span<const int> subset1) {
  if (subset1.empty()) throw PartitionError("restrict: empty subset");
  std::vector<char> used(p.size(), 0);
  std::vector<int> l;
  l.reserve(subset1.size());
  for (int x : subset1) {
    if (x < 1 || x > p.size()) throw PartitionError("restrict: element " + std::to_string(x) + " not in ground set");
    if (used[x - 1]) throw PartitionError("restrict: element " + std::to_string(x) + " repeated");
    used[x - 1] = 1;
    l.push_back(p.labels()[x - 1]);
  }
  return Partition::from_labels(l);
}

std::int64_t catalan(int n) {
  std::int64_t c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::int64_t mobius(const Partition& s, const Partition& p) {
  require_same_size(s, p, "mobius");
  if (!s.refines(p)) return 0;
  std::int64_t result = 1;
  for (auto& w : p.blocks()) {
    Partition sw = restrict(s, w);
    for (int sz : kreweras(sw).block_sizes()) result *= ((sz - 1) % 2 ? -1 : 1) * catalan(sz - 1);
  }
  return result;
}

std::int64_t mobius_recursive(const Partition& s, const Partition& p) {
  require_same_size(s, p, "mobius_recursive");
  require_nc(s, "mobius_recursive");
  require_nc(p, "mobius_recursive");
  if (!s.refines(p)) return 0;
  static std::mutex mu;
  static std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t> memo;
  auto key = std::make_pair(s.labels(), p.labels());
  {
    std::lock_guard lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  std::int64_t value;
  if (s == p) {
    value = 1;
  } else {
    value = 0;
    for (const auto& t : cached_members(FamilyKind::NC, s.size()))
      if (t != p && s.refines(t) && t.refines(p)) value -= mobius_recursive(s, t);
  }
  std::lock_guard lock(mu);
  memo.emplace(std::move(key), value);
  return value;
}

}  // namespace qfree
