#pragma once

// Small shared numerics: multi-index tables, multiset spectrum matching,
// deterministic seeding, significant-digit rounding, error types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhsc {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline constexpr int kMaxDim = 4;

using MultiIndex = std::array<int, kMaxDim>;  // first p entries used, increasing

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// all strictly increasing p-subsets of {0,..,m-1}, lexicographic
inline const std::vector<MultiIndex>& increasing_indices(int m, int p) {
  static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
  auto key = std::make_pair(m, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<MultiIndex> out;
  if (p == 0) {
    out.push_back(MultiIndex{});
  } else if (p <= m) {
    MultiIndex idx{};
    for (int i = 0; i < p; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      int j = p - 1;
      while (j >= 0 && idx[j] == m - p + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int i = j + 1; i < p; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return cache.emplace(key, std::move(out)).first->second;
}

inline int position_of_index(int m, int p, const MultiIndex& idx) {
  const auto& tab = increasing_indices(m, p);
  for (size_t c = 0; c < tab.size(); ++c) {
    bool eq = true;
    for (int i = 0; i < p; ++i) eq = eq && tab[c][i] == idx[i];
    if (eq) return static_cast<int>(c);
  }
  throw std::logic_error("position_of_index: index not found");
}

// sign of the permutation (I, I^c) of (0..m-1); I increasing of length p
inline int complement_sign(int m, int p, const MultiIndex& I, MultiIndex& comp) {
  bool used[kMaxDim] = {false, false, false, false};
  for (int i = 0; i < p; ++i) used[I[i]] = true;
  int q = 0;
  for (int d = 0; d < m; ++d)
    if (!used[d]) comp[q++] = d;
  // count inversions of the concatenated sequence
  int seq[kMaxDim];
  for (int i = 0; i < p; ++i) seq[i] = I[i];
  for (int i = 0; i < m - p; ++i) seq[p + i] = comp[i];
  int inv = 0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (seq[a] > seq[b]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

// --- multiset comparison of spectra ------------------------------------

// cluster a sorted list: values closer than tol merge into one representative
inline std::vector<double> cluster_values(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  size_t i = 0;
  while (i < v.size()) {
    size_t j = i;
    double sum = 0;
    while (j < v.size() && v[j] - v[i] <= tol) sum += v[j++];
    out.push_back(sum / double(j - i));
    i = j;
  }
  return out;
}

struct SetMatch {
  double max_unmatched_gap = 0.0;  // worst distance from a value of one set
                                   // to the nearest value of the other
  bool equal(double tol) const { return max_unmatched_gap <= tol; }
};

// symmetric set distance between two spectra viewed as SETS of values
inline SetMatch match_value_sets(const std::vector<double>& a,
                                 const std::vector<double>& b,
                                 double cluster_tol = 1e-8) {
  std::vector<double> ca = cluster_values(a, cluster_tol);
  std::vector<double> cb = cluster_values(b, cluster_tol);
  SetMatch m;
  auto nearest_gap = [](double x, const std::vector<double>& s) {
    if (s.empty()) return std::abs(x);
    auto it = std::lower_bound(s.begin(), s.end(), x);
    double g = std::numeric_limits<double>::infinity();
    if (it != s.end()) g = std::min(g, std::abs(*it - x));
    if (it != s.begin()) g = std::min(g, std::abs(*std::prev(it) - x));
    return g;
  };
  for (double x : ca) m.max_unmatched_gap = std::max(m.max_unmatched_gap, nearest_gap(x, cb));
  for (double x : cb) m.max_unmatched_gap = std::max(m.max_unmatched_gap, nearest_gap(x, ca));
  return m;
}

// max |a_i - b_i| after sorting both (multiset comparison with multiplicity)
inline double sorted_max_deviation(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sorted_max_deviation: length mismatch");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double dev = 0;
  for (size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
  return dev;
}

// --- deterministic seeding ----------------------------------------------

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// stable per-task seed derived from a master seed and a task label
inline uint64_t derive_seed(uint64_t master, const std::string& tag) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tag) h = (h ^ c) * 1099511628211ULL;
  return splitmix64(master ^ h);
}

// tiny deterministic generator (keeps tests independent of libstdc++ details)
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(splitmix64(seed)) {}
  uint64_t next_u64() { return state = splitmix64(state); }
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + int(next_u64() % uint64_t(hi - lo + 1));
  }
};

// --- formatting -----------------------------------------------------------

// round-trip through %.15g: stabilizes serialized numeric output
inline double round_sig15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

// observed convergence order between errors at h and h/2
inline double observed_order(double err_coarse, double err_fine) {
  if (err_fine <= 0) return std::numeric_limits<double>::infinity();
  return std::log2(err_coarse / err_fine);
}

}  // namespace fhsc
