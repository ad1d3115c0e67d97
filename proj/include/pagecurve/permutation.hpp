#ifndef PAGECURVE_PERMUTATION_HPP
#define PAGECURVE_PERMUTATION_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "pagecurve/errors.hpp"

namespace pagecurve {

/// Disjoint-set forest with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(int size) : parent_(static_cast<std::size_t>(size)),
                                 size_(static_cast<std::size_t>(size), 1),
                                 components_(size) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    int root = x;
    while (parent_[static_cast<std::size_t>(root)] != root) {
      root = parent_[static_cast<std::size_t>(root)];
    }
    while (parent_[static_cast<std::size_t>(x)] != root) {
      const int next = parent_[static_cast<std::size_t>(x)];
      parent_[static_cast<std::size_t>(x)] = root;
      x = next;
    }
    return root;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    --components_;
  }

  int components() const noexcept { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int components_;
};

/// Element of the symmetric group S_q. Positions and images are 0-based
/// internally; one_based() and from_cycles() accept the usual 1-based notation.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (const int v : images_) {
      if (v < 0 || v >= static_cast<int>(images_.size()) || seen[static_cast<std::size_t>(v)]) {
        throw InputError("Permutation: images must form a bijection on {0, ..., q-1}");
      }
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }

  static Permutation identity(int q) {
    if (q < 0) throw InputError("Permutation: size must be nonnegative");
    std::vector<int> images(static_cast<std::size_t>(q));
    std::iota(images.begin(), images.end(), 0);
    return Permutation(std::move(images));
  }

  /// From images of 1..q written 1-based.
  static Permutation one_based(std::initializer_list<int> images) {
    std::vector<int> zero;
    zero.reserve(images.size());
    for (const int v : images) zero.push_back(v - 1);
    return Permutation(std::move(zero));
  }

  /// From disjoint cycles in 1-based notation, e.g. from_cycles(4, {{1, 2}, {3, 4}}).
  static Permutation from_cycles(int q, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> images(static_cast<std::size_t>(q));
    std::iota(images.begin(), images.end(), 0);
    std::vector<char> used(static_cast<std::size_t>(q), 0);
    for (const auto& cycle : cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int from = cycle[i] - 1;
        const int to = cycle[(i + 1) % cycle.size()] - 1;
        if (from < 0 || from >= q || used[static_cast<std::size_t>(from)]) {
          throw InputError("Permutation::from_cycles: cycles must be disjoint and in range");
        }
        used[static_cast<std::size_t>(from)] = 1;
        images[static_cast<std::size_t>(from)] = to;
      }
    }
    return Permutation(std::move(images));
  }

  int size() const noexcept { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const noexcept { return images_; }

  /// (this * other)(i) = this(other(i)).
  Permutation operator*(const Permutation& other) const {
    if (other.size() != size()) throw InputError("Permutation: size mismatch in composition");
    std::vector<int> out(images_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = images_[static_cast<std::size_t>(other.images_[i])];
    }
    return Permutation(std::move(out));
  }

  Permutation inverse() const {
    std::vector<int> out(images_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
    return Permutation(std::move(out));
  }

  /// Cycle lengths in descending order (a partition of q).
  std::vector<int> cycle_type() const { return cycle_type_of(images_); }

  /// Number of cycles #(p), fixed points included.
  int cycle_count() const { return static_cast<int>(cycle_type().size()); }

  /// Minimum number of transpositions generating p: q - #(p).
  int transposition_distance() const { return size() - cycle_count(); }

  /// Advances to the lexicographic successor; returns false after the last one.
  bool next() { return std::next_permutation(images_.begin(), images_.end()); }

  friend bool operator==(const Permutation&, const Permutation&) = default;

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(images_[i] + 1);
    }
    return out + "]";
  }

  /// Cycle type of a raw 0-based image array.
  static std::vector<int> cycle_type_of(const std::vector<int>& images) {
    std::vector<int> lengths;
    std::vector<char> seen(images.size(), 0);
    for (std::size_t start = 0; start < images.size(); ++start) {
      if (seen[start]) continue;
      int length = 0;
      for (auto i = start; !seen[i]; i = static_cast<std::size_t>(images[i])) {
        seen[i] = 1;
        ++length;
      }
      lengths.push_back(length);
    }
    std::sort(lengths.begin(), lengths.end(), std::greater<>());
    return lengths;
  }

 private:
  std::vector<int> images_;
};

inline std::vector<int> cycle_type(const Permutation& p) { return p.cycle_type(); }

/// q! as a 64-bit integer (q <= 20).
inline std::uint64_t factorial_u64(int q) {
  if (q < 0 || q > 20) throw InputError("factorial_u64: q must lie in [0, 20]");
  std::uint64_t f = 1;
  for (int i = 2; i <= q; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// The permutation of rank `rank` (0-based) in lexicographic order of S_q.
inline Permutation permutation_from_rank(int q, std::uint64_t rank) {
  if (rank >= factorial_u64(q)) throw InputError("permutation_from_rank: rank out of range");
  std::vector<int> pool(static_cast<std::size_t>(q));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> images;
  images.reserve(static_cast<std::size_t>(q));
  for (int remaining = q; remaining > 0; --remaining) {
    const std::uint64_t block = factorial_u64(remaining - 1);
    const auto index = static_cast<std::size_t>(rank / block);
    rank %= block;
    images.push_back(pool[index]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(index));
  }
  return Permutation(std::move(images));
}

/// All partitions of q in descending-part form, ordered reverse-lexicographically
/// starting from [q].
inline std::vector<std::vector<int>> integer_partitions(int q) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      rec(remaining - part, part);
      current.pop_back();
    }
  };
  rec(q, q);
  return out;
}

/// xi(p) for p in S_{2l}: the number of connected components of the graph on l
/// vertices with edges {ceil(p(2a)/2), ceil(p(2a+1)/2)} for a = 1..l-1 and
/// {ceil(p(2l)/2), ceil(p(1)/2)} (1-based positions and values).
inline int xi_statistic(const std::vector<int>& images) {
  const int q = static_cast<int>(images.size());
  if (q == 0 || q % 2 != 0) throw InputError("xi_statistic: permutation size must be even and positive");
  const int l = q / 2;
  UnionFind uf(l);
  for (int b = 0; b < l; ++b) {
    const int left = images[static_cast<std::size_t>(2 * b + 1)] / 2;
    const int right = images[static_cast<std::size_t>((2 * b + 2) % q)] / 2;
    uf.unite(left, right);
  }
  return uf.components();
}

inline int xi_statistic(const Permutation& p) { return xi_statistic(p.images()); }

}  // namespace pagecurve

#endif  // PAGECURVE_PERMUTATION_HPP
