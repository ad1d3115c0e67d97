#ifndef PAGECURVE_WEINGARTEN_HPP
#define PAGECURVE_WEINGARTEN_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pagecurve/errors.hpp"
#include "pagecurve/permutation.hpp"
#include "pagecurve/rational.hpp"

namespace pagecurve {

/// Default limit on q (the symmetric-group size) for Weingarten values and moments.
inline constexpr int kDefaultMaxQ = 6;
/// Default limit on l for the S_{2l} enumerations; kExtendedMaxEll with an override.
inline constexpr int kDefaultMaxEll = 5;
inline constexpr int kExtendedMaxEll = 6;

/// Effective q limit: PAGECURVE_MAX_Q when set to a positive integer, else the default.
inline int max_q_limit() {
  if (const char* env = std::getenv("PAGECURVE_MAX_Q")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1 && value <= 12) return static_cast<int>(value);
  }
  return kDefaultMaxQ;
}

namespace detail {

inline void require_q_capacity(int q, const char* where) {
  const int limit = max_q_limit();
  if (q > limit) {
    throw CapacityError(std::string(where) + ": q = " + std::to_string(q) +
                            " exceeds the limit q <= " + std::to_string(limit) +
                            " (set PAGECURVE_MAX_Q to raise it)",
                        limit);
  }
}

/// Solves A x = b exactly by Gaussian elimination; A must be nonsingular.
inline std::vector<ExactRational> solve_exact(std::vector<std::vector<ExactRational>> a,
                                              std::vector<ExactRational> b) {
  const std::size_t dim = b.size();
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t pivot = col;
    while (pivot < dim && a[pivot][col] == 0) ++pivot;
    if (pivot == dim) throw NumericalError("solve_exact: singular system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const ExactRational inv = 1 / a[col][col];
    for (std::size_t j = col; j < dim; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t row = 0; row < dim; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const ExactRational factor = a[row][col];
      for (std::size_t j = col; j < dim; ++j) a[row][j] -= factor * a[col][j];
      b[row] -= factor * b[col];
    }
  }
  return b;
}

inline std::vector<Permutation> all_permutations(int q) {
  std::vector<Permutation> out;
  out.reserve(factorial_u64(q));
  Permutation p = Permutation::identity(q);
  do {
    out.push_back(p);
  } while (p.next());
  return out;
}

/// Conjugacy classes of S_q, indexed by partition.
struct ClassIndex {
  std::vector<std::vector<int>> partitions;
  std::map<std::vector<int>, int> index;

  explicit ClassIndex(int q) : partitions(integer_partitions(q)) {
    for (std::size_t i = 0; i < partitions.size(); ++i) index.emplace(partitions[i], static_cast<int>(i));
  }

  int of(const std::vector<int>& images) const { return index.at(Permutation::cycle_type_of(images)); }
};

/// Weingarten values per conjugacy class for one (q, n).
struct WeingartenTable {
  int q = 0;
  int n = 0;
  ClassIndex classes;
  std::vector<ExactRational> values;

  WeingartenTable(int q_, int n_) : q(q_), n(n_), classes(q_) {}
};

inline ExactRational power_of(int base, int exponent) {
  return ExactRational(boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent)));
}

/// Full q! x q! Gram system G w = e_identity with G[s][t] = n^{#(s t^-1)}.
inline std::vector<ExactRational> weingarten_by_gram(const WeingartenTable& table) {
  const auto perms = all_permutations(table.q);
  const std::size_t count = perms.size();
  std::vector<Permutation> inverses;
  inverses.reserve(count);
  for (const auto& p : perms) inverses.push_back(p.inverse());
  std::vector<std::vector<ExactRational>> gram(count, std::vector<ExactRational>(count));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      gram[i][j] = power_of(table.n, (perms[i] * inverses[j]).cycle_count());
    }
  }
  std::vector<ExactRational> rhs(count, ExactRational(0));
  rhs[0] = 1;  // lexicographic rank 0 is the identity
  const auto w = solve_exact(std::move(gram), std::move(rhs));
  std::vector<ExactRational> per_class(table.classes.partitions.size());
  std::vector<char> filled(per_class.size(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const int c = table.classes.of(perms[i].images());
    if (!filled[static_cast<std::size_t>(c)]) {
      per_class[static_cast<std::size_t>(c)] = w[i];
      filled[static_cast<std::size_t>(c)] = 1;
    }
  }
  return per_class;
}

/// Class-resolved system: for each class representative s_lambda,
/// sum_mu w_mu sum_{p in mu} n^{#(p^-1 s_lambda)} = [lambda = identity].
inline std::vector<ExactRational> weingarten_by_classes(const WeingartenTable& table) {
  const auto& partitions = table.classes.partitions;
  const std::size_t dim = partitions.size();
  std::vector<Permutation> representatives;
  representatives.reserve(dim);
  for (const auto& partition : partitions) {
    std::vector<std::vector<int>> cycles;
    int next = 1;
    for (const int part : partition) {
      std::vector<int> cycle;
      for (int i = 0; i < part; ++i) cycle.push_back(next++);
      cycles.push_back(std::move(cycle));
    }
    representatives.push_back(Permutation::from_cycles(table.q, cycles));
  }
  std::vector<std::vector<std::int64_t>> counts(dim, std::vector<std::int64_t>(dim * (table.q + 1), 0));
  Permutation p = Permutation::identity(table.q);
  do {
    const auto mu = static_cast<std::size_t>(table.classes.of(p.images()));
    const Permutation p_inv = p.inverse();
    for (std::size_t lambda = 0; lambda < dim; ++lambda) {
      const int cycles = (p_inv * representatives[lambda]).cycle_count();
      ++counts[lambda][mu * static_cast<std::size_t>(table.q + 1) + static_cast<std::size_t>(cycles)];
    }
  } while (p.next());
  std::vector<std::vector<ExactRational>> a(dim, std::vector<ExactRational>(dim, ExactRational(0)));
  for (std::size_t lambda = 0; lambda < dim; ++lambda) {
    for (std::size_t mu = 0; mu < dim; ++mu) {
      for (int c = 0; c <= table.q; ++c) {
        const auto cnt = counts[lambda][mu * static_cast<std::size_t>(table.q + 1) + static_cast<std::size_t>(c)];
        if (cnt != 0) a[lambda][mu] += ExactRational(cnt) * power_of(table.n, c);
      }
    }
  }
  std::vector<ExactRational> rhs(dim, ExactRational(0));
  rhs[table.classes.index.at(std::vector<int>(static_cast<std::size_t>(table.q), 1))] = 1;
  return solve_exact(std::move(a), std::move(rhs));
}

/// Memoized table per (q, n); built once under a lock, immutable afterwards.
inline std::shared_ptr<const WeingartenTable> weingarten_table(int q, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const WeingartenTable>> cache;
  {
    const std::lock_guard<std::mutex> lock(mutex);
    const auto it = cache.find({q, n});
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<WeingartenTable>(q, n);
  table->values = q <= 4 ? weingarten_by_gram(*table) : weingarten_by_classes(*table);
  const std::lock_guard<std::mutex> lock(mutex);
  return cache.try_emplace({q, n}, std::move(table)).first->second;
}

inline std::shared_ptr<const WeingartenTable> checked_weingarten_table(int q, int n, const char* where) {
  if (q < 1) throw InputError(std::string(where) + ": q must be >= 1");
  require_q_capacity(q, where);
  if (n < q) {
    throw DomainError(std::string(where) + ": n must be >= q (the Gram matrix may be singular)");
  }
  return weingarten_table(q, n);
}

}  // namespace detail

/// Exact Wg(p, n) by inversion of the Gram matrix G[s][t] = n^{#(s t^-1)}.
inline ExactRational wg_exact(const Permutation& p, int n) {
  const auto table = detail::checked_weingarten_table(p.size(), n, "wg_exact");
  return table->values[static_cast<std::size_t>(table->classes.of(p.images()))];
}

/// Leading large-n term n^{-q-|p|} prod_i (-1)^{|c_i|-1} C_{|c_i|-1}.
inline double wg_asymptotic(const Permutation& p, int n) {
  if (n < 1) throw InputError("wg_asymptotic: n must be >= 1");
  double coefficient = 1.0;
  for (const int length : p.cycle_type()) {
    const double c = catalan_number(static_cast<unsigned>(length - 1)).convert_to<double>();
    coefficient *= (length - 1) % 2 == 0 ? c : -c;
  }
  return coefficient * std::pow(static_cast<double>(n), -(p.size() + p.transposition_distance()));
}

/// Options for the S_{2l} enumerations.
struct EnumerationOptions {
  bool allow_extended = false;  ///< permits l = kExtendedMaxEll
  int workers = 1;              ///< lexicographic rank ranges processed in parallel
};

namespace detail {

/// Sum of (-1)^{#t} prod C_{|c|-1} over t in S_{2l} with lexicographic rank in
/// [begin, end) and xi(t) = |t| + offset.
inline std::int64_t xi_partial_sum(int l, int offset, std::uint64_t begin, std::uint64_t end) {
  const int q = 2 * l;
  static constexpr std::int64_t kCatalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786};
  std::int64_t total = 0;
  if (begin >= end) return total;
  Permutation p = permutation_from_rank(q, begin);
  std::vector<int> images = p.images();
  std::vector<char> seen(static_cast<std::size_t>(q));
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    std::fill(seen.begin(), seen.end(), 0);
    int cycles = 0;
    std::int64_t weight = 1;
    for (int start = 0; start < q; ++start) {
      if (seen[static_cast<std::size_t>(start)]) continue;
      int length = 0;
      for (int i = start; !seen[static_cast<std::size_t>(i)]; i = images[static_cast<std::size_t>(i)]) {
        seen[static_cast<std::size_t>(i)] = 1;
        ++length;
      }
      ++cycles;
      weight *= kCatalan[length - 1];
    }
    const int distance = q - cycles;
    if (xi_statistic(images) == distance + offset) total += cycles % 2 == 0 ? weight : -weight;
    std::next_permutation(images.begin(), images.end());
  }
  return total;
}

inline ExactRational xi_sum(int l, int offset, const EnumerationOptions& options, const char* where) {
  if (l < 1) throw InputError(std::string(where) + ": l must be >= 1");
  const int limit = options.allow_extended ? kExtendedMaxEll : kDefaultMaxEll;
  if (l > limit) {
    throw CapacityError(std::string(where) + ": l = " + std::to_string(l) + " exceeds the limit l <= " +
                            std::to_string(limit) +
                            (options.allow_extended ? "" : " (extended runs allow l <= 6)"),
                        limit);
  }
  const std::uint64_t count = factorial_u64(2 * l);
  const auto workers = static_cast<std::uint64_t>(std::max(1, options.workers));
  std::vector<std::int64_t> partial(workers, 0);
  std::vector<std::thread> threads;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = count * w / workers;
    const std::uint64_t end = count * (w + 1) / workers;
    if (workers == 1) {
      partial[w] = xi_partial_sum(l, offset, begin, end);
    } else {
      threads.emplace_back([&, w, begin, end] { partial[w] = xi_partial_sum(l, offset, begin, end); });
    }
  }
  for (auto& t : threads) t.join();
  std::int64_t total = 0;
  for (const auto v : partial) total += v;
  return ExactRational(total);
}

}  // namespace detail

/// a^(l) = sum over t in S_{2l} with xi(t) = |t| of (-1)^{#t} prod C_{|c|-1}.
inline ExactRational a_ell_enumeration(int l, const EnumerationOptions& options = {}) {
  return detail::xi_sum(l, 0, options, "a_ell_enumeration");
}

/// The same sum restricted to xi(t) = |t| + 1 (the leading coefficient of f_l).
inline ExactRational alpha_top_enumeration(int l, const EnumerationOptions& options = {}) {
  return detail::xi_sum(l, 1, options, "alpha_top_enumeration");
}

/// Exact E_U prod_m Tr W^{powers[m]} at finite n and subsystem size k, where
/// W = X conj(X) and X = V V^T for the first k rows V of a Haar unitary U(n).
///
/// Each factor X_{a b} = sum_j U_{a j} U_{b j} and conj(X)_{b c} contributes two U
/// (resp. two conj(U)) entries sharing a column index. For a pair (s, t) of
/// permutations the Weingarten deltas identify U-row p with conj(U)-row s(p) and
/// U-column p with conj(U)-column t(p); the free row and column index classes are
/// counted by union-find, giving k^{A(s)} n^{B(t)} Wg(s t^-1).
inline ExactRational haar_moment_trace_product(const std::vector<int>& powers, int n, int k) {
  if (powers.empty()) throw InputError("haar_moment_trace_product: powers must be nonempty");
  int half = 0;
  for (const int p : powers) {
    if (p < 1) throw InputError("haar_moment_trace_product: powers must be >= 1");
    half += p;
  }
  if (n < 1) throw InputError("haar_moment_trace_product: n must be >= 1");
  if (k < 0 || k > n) throw InputError("haar_moment_trace_product: k must lie in [0, n]");
  const int q = 2 * half;
  detail::require_q_capacity(q, "haar_moment_trace_product");
  if (k == 0) return 0;
  const auto table = detail::checked_weingarten_table(q, n, "haar_moment_trace_product");

  // conj(U) factor p carries the row index of U factor next(p) (cyclic within its trace).
  std::vector<int> next(static_cast<std::size_t>(q));
  int offset = 0;
  for (const int p : powers) {
    for (int i = 0; i < 2 * p; ++i) next[static_cast<std::size_t>(offset + i)] = offset + (i + 1) % (2 * p);
    offset += 2 * p;
  }

  const auto perms = detail::all_permutations(q);
  const std::size_t count = perms.size();
  std::vector<int> row_components(count);
  std::vector<int> column_components(count);
  for (std::size_t i = 0; i < count; ++i) {
    UnionFind rows(q);
    UnionFind columns(q);
    for (int p = 0; p < q; ++p) {
      rows.unite(p, next[static_cast<std::size_t>(perms[i](p))]);
      columns.unite(p / 2, half + perms[i](p) / 2);
    }
    row_components[i] = rows.components();
    column_components[i] = columns.components();
  }

  const std::size_t classes = table->classes.partitions.size();
  const auto stride = static_cast<std::size_t>(q + 1);
  std::vector<std::int64_t> cnt(stride * classes * stride, 0);
  std::vector<int> product(static_cast<std::size_t>(q));
  std::vector<std::vector<int>> inverse_images;
  inverse_images.reserve(count);
  for (const auto& p : perms) inverse_images.push_back(p.inverse().images());
  for (std::size_t s = 0; s < count; ++s) {
    const auto a = static_cast<std::size_t>(row_components[s]);
    for (std::size_t t = 0; t < count; ++t) {
      for (int i = 0; i < q; ++i) product[static_cast<std::size_t>(i)] = perms[s](inverse_images[t][static_cast<std::size_t>(i)]);
      const auto c = static_cast<std::size_t>(table->classes.of(product));
      const auto b = static_cast<std::size_t>(column_components[t]);
      ++cnt[(a * classes + c) * stride + b];
    }
  }

  ExactRational total = 0;
  for (std::size_t a = 0; a < stride; ++a) {
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t b = 0; b < stride; ++b) {
        const auto v = cnt[(a * classes + c) * stride + b];
        if (v == 0) continue;
        total += ExactRational(v) * table->values[c] * detail::power_of(k, static_cast<int>(a)) *
                 detail::power_of(n, static_cast<int>(b));
      }
    }
  }
  return total;
}

/// Exact E_U[prod_p U_{i_p j_p} conj(U)_{i'_p j'_p}] by the Weingarten formula
/// sum_{s,t} delta(i_p = i'_{s(p)}) delta(j_p = j'_{t(p)}) Wg(s t^-1, n); indices 0-based.
inline ExactRational haar_moment_entries(const std::vector<int>& i, const std::vector<int>& j,
                                         const std::vector<int>& i_bar, const std::vector<int>& j_bar,
                                         int n) {
  const auto q = static_cast<int>(i.size());
  if (static_cast<int>(j.size()) != q || static_cast<int>(i_bar.size()) != q ||
      static_cast<int>(j_bar.size()) != q) {
    throw InputError("haar_moment_entries: index lists must have equal length");
  }
  const auto table = detail::checked_weingarten_table(q, n, "haar_moment_entries");
  const auto perms = detail::all_permutations(q);
  auto matches = [q](const std::vector<int>& lhs, const std::vector<int>& rhs, const Permutation& p) {
    for (int a = 0; a < q; ++a) {
      if (lhs[static_cast<std::size_t>(a)] != rhs[static_cast<std::size_t>(p(a))]) return false;
    }
    return true;
  };
  ExactRational total = 0;
  for (const auto& s : perms) {
    if (!matches(i, i_bar, s)) continue;
    for (const auto& t : perms) {
      if (!matches(j, j_bar, t)) continue;
      total += table->values[static_cast<std::size_t>(table->classes.of((s * t.inverse()).images()))];
    }
  }
  return total;
}

/// Result of an extrapolation in h = 1/n.
struct OmegaExtrapolation {
  std::vector<int> ladder;
  std::vector<ExactRational> finite_n;  ///< exact value at each ladder point
  ExactRational extrapolated;           ///< polynomial extrapolation to h = 0
};

/// Neville evaluation at h = 0 of the interpolating polynomial through (h_i, y_i).
inline ExactRational extrapolate_to_zero(const std::vector<ExactRational>& h, std::vector<ExactRational> y) {
  const std::size_t count = y.size();
  for (std::size_t m = 1; m < count; ++m) {
    for (std::size_t i = 0; i + m < count; ++i) {
      y[i] = (h[i] * y[i + 1] - h[i + m] * y[i]) / (h[i] - h[i + m]);
    }
  }
  return y.empty() ? ExactRational(0) : y[0];
}

/// Exact finite-n variance coefficient at order d:
/// sum_{l=1}^{d-1} Cov(Tr W^l, Tr W^{d-l}) / (4 l (d-l)) divided by (r(1-r))^d, r = k/n.
inline ExactRational omega_finite_n(int d, int n, int k) {
  if (d < 2) throw InputError("omega_finite_n: d must be >= 2");
  if (k < 1 || k >= n) throw InputError("omega_finite_n: k must lie in [1, n-1]");
  std::vector<ExactRational> means(static_cast<std::size_t>(d));
  for (int l = 1; l < d; ++l) means[static_cast<std::size_t>(l)] = haar_moment_trace_product({l}, n, k);
  ExactRational sum = 0;
  for (int l = 1; l < d; ++l) {
    const ExactRational joint = haar_moment_trace_product({l, d - l}, n, k);
    const ExactRational covariance = joint - means[static_cast<std::size_t>(l)] * means[static_cast<std::size_t>(d - l)];
    sum += covariance / ExactRational(4 * l * (d - l));
  }
  const ExactRational r(k, n);
  ExactRational scale = 1;
  for (int i = 0; i < d; ++i) scale *= r * (1 - r);
  return sum / scale;
}

/// Extrapolates omega_finite_n(d, n, r n) over the ladder to n -> infinity.
/// Orders d >= 3 are exploratory: no reference values exist for them.
inline OmegaExtrapolation omega_extrapolation(int d, const std::vector<int>& ladder, const ExactRational& r) {
  if (ladder.empty()) throw InputError("omega_extrapolation: ladder must be nonempty");
  if (r <= 0 || r >= 1) throw InputError("omega_extrapolation: r must lie in (0, 1)");
  OmegaExtrapolation out;
  out.ladder = ladder;
  std::vector<ExactRational> h;
  for (const int n : ladder) {
    if (n < 4) throw InputError("omega_extrapolation: ladder entries must be >= 4");
    const ExactRational kr = r * n;
    if (denominator_of(kr) != 1) throw InputError("omega_extrapolation: r * n must be an integer");
    for (const auto& previous : h) {
      if (previous == ExactRational(1, n)) throw InputError("omega_extrapolation: ladder entries must be distinct");
    }
    out.finite_n.push_back(omega_finite_n(d, n, static_cast<int>(numerator_of(kr))));
    h.emplace_back(1, n);
  }
  out.extrapolated = extrapolate_to_zero(h, out.finite_n);
  return out;
}

/// omega^(2) from exact Var(Tr W) over the ladder.
inline OmegaExtrapolation omega2_extrapolation(const std::vector<int>& ladder, const ExactRational& r) {
  return omega_extrapolation(2, ladder, r);
}

}  // namespace pagecurve

#endif  // PAGECURVE_WEINGARTEN_HPP
