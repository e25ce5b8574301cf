#pragma once

#include <limits>
#include <vector>

#include "cobra/dataset.hpp"
#include "cobra/random.hpp"

namespace cobra {

struct KMeansResult {
  std::vector<std::size_t> assignment;  // cluster index per instance
  std::vector<double> centroids;        // k x dim, row-major
  std::size_t k = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct KMeansOptions {
  std::size_t max_iterations = 300;
};

namespace detail {

inline std::size_t nearest_centroid(std::span<const double> x,
                                    const std::vector<double>& centroids,
                                    std::size_t k, std::size_t m) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double dc = squared_distance(
        x, std::span<const double>(centroids.data() + c * m, m));
    if (dc < best_d) {
      best_d = dc;
      best = c;
    }
  }
  return best;
}

// k-means++ seeding: first center uniform, then proportional to squared
// distance to the nearest chosen center.
inline std::vector<double> seed_plus_plus(const Dataset& d, std::size_t k,
                                          Rng& rng) {
  const std::size_t n = d.size(), m = d.dim();
  std::vector<double> centers;
  centers.reserve(k * m);
  std::vector<bool> chosen(n, false);
  auto take = [&](InstanceId i) {
    chosen[i] = true;
    const auto r = d.row(i);
    centers.insert(centers.end(), r.begin(), r.end());
  };
  take(static_cast<InstanceId>(uniform_index(rng, n)));

  std::vector<double> d2(n);
  for (InstanceId i = 0; i < n; ++i)
    d2[i] = squared_distance(d.row(i), std::span<const double>(centers.data(), m));

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (InstanceId i = 0; i < n; ++i)
      if (!chosen[i]) total += d2[i];
    InstanceId pick = n;
    if (total > 0.0) {
      const double target = uniform_unit(rng) * total;
      double acc = 0.0;
      for (InstanceId i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    }
    if (pick == n) {
      // Only duplicates of chosen centers remain.
      for (InstanceId i = 0; i < n; ++i)
        if (!chosen[i]) {
          pick = i;
          break;
        }
    }
    take(pick);
    const std::span<const double> newest(centers.data() + c * m, m);
    for (InstanceId i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(d.row(i), newest));
  }
  return centers;
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding. Stops when no assignment
/// changes or after `max_iterations`. Every returned cluster is non-empty:
/// an emptied cluster takes the point farthest from its own centroid.
inline KMeansResult kmeans(const Dataset& d, std::size_t k, std::uint64_t seed,
                           const KMeansOptions& opts = {}) {
  const std::size_t n = d.size(), m = d.dim();
  if (k == 0) throw ConfigError("kmeans: k must be positive");
  if (k > n)
    throw ConfigError("kmeans: k=" + std::to_string(k) +
                      " exceeds instance count " + std::to_string(n));

  Rng rng(seed);
  KMeansResult res;
  res.k = k;
  res.centroids = detail::seed_plus_plus(d, k, rng);
  res.assignment.assign(n, k);

  std::vector<std::size_t> counts(k);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    bool changed = false;
    for (InstanceId i = 0; i < n; ++i) {
      const std::size_t c = detail::nearest_centroid(d.row(i), res.centroids, k, m);
      if (c != res.assignment[i]) {
        res.assignment[i] = c;
        changed = true;
      }
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (InstanceId i = 0; i < n; ++i) ++counts[res.assignment[i]];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      InstanceId far = n;
      double far_d = -1.0;
      for (InstanceId i = 0; i < n; ++i) {
        const std::size_t a = res.assignment[i];
        if (counts[a] < 2) continue;
        const double di = squared_distance(
            d.row(i), std::span<const double>(res.centroids.data() + a * m, m));
        if (di > far_d) {
          far_d = di;
          far = i;
        }
      }
      --counts[res.assignment[far]];
      res.assignment[far] = c;
      counts[c] = 1;
      changed = true;
    }

    std::fill(res.centroids.begin(), res.centroids.end(), 0.0);
    for (InstanceId i = 0; i < n; ++i) {
      const auto r = d.row(i);
      double* dst = res.centroids.data() + res.assignment[i] * m;
      for (std::size_t j = 0; j < m; ++j) dst[j] += r[j];
    }
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < m; ++j)
        res.centroids[c * m + j] /= static_cast<double>(counts[c]);

    res.iterations = it + 1;
    if (!changed) {
      res.converged = true;
      break;
    }
  }
  return res;
}

/// Groups of instance ids, one per K-means cluster, each in ascending order.
inline std::vector<std::vector<InstanceId>> kmeans_groups(const Dataset& d,
                                                          std::size_t k,
                                                          std::uint64_t seed) {
  const auto res = kmeans(d, k, seed);
  std::vector<std::vector<InstanceId>> groups(k);
  for (InstanceId i = 0; i < d.size(); ++i) groups[res.assignment[i]].push_back(i);
  return groups;
}

}  // namespace cobra
