#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "cobra/dataset.hpp"
#include "cobra/kmeans.hpp"

namespace cobra {

/// Over-clustering of a dataset. groups[i] holds the member ids of
/// super-instance i (ascending); medoids[i] is its representative.
struct SuperInstanceSet {
  std::vector<std::vector<InstanceId>> groups;
  std::vector<InstanceId> medoids;

  std::size_t size() const { return groups.size(); }

  /// Super-instance index per instance id.
  std::vector<std::size_t> membership(std::size_t n_instances) const {
    std::vector<std::size_t> out(n_instances, groups.size());
    for (std::size_t s = 0; s < groups.size(); ++s)
      for (InstanceId i : groups[s]) out[i] = s;
    return out;
  }

  bool operator==(const SuperInstanceSet&) const = default;
};

/// Instance-id membership mask; empty optional means "all instances".
using TrainMask = std::optional<std::vector<bool>>;

inline TrainMask make_mask(std::size_t n, const std::vector<InstanceId>& ids) {
  std::vector<bool> mask(n, false);
  for (InstanceId i : ids) mask.at(i) = true;
  return mask;
}

/// Member of `group` (restricted to `eligible` when given) with the smallest
/// sum of distances to every member of the group. Ties go to the lower id.
inline InstanceId medoid(const std::vector<InstanceId>& group, const Dataset& d,
                         const TrainMask& eligible = std::nullopt) {
  InstanceId best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  bool found = false;
  for (InstanceId c : group) {
    if (eligible && !(*eligible)[c]) continue;
    double sum = 0.0;
    for (InstanceId o : group) sum += distance(d.row(c), d.row(o));
    if (!found || sum < best_sum || (sum == best_sum && c < best)) {
      best = c;
      best_sum = sum;
      found = true;
    }
  }
  if (!found) throw ConfigError("medoid: no eligible member in group");
  return best;
}

inline std::vector<double> group_centroid(const std::vector<InstanceId>& group,
                                          const Dataset& d) {
  std::vector<double> c(d.dim(), 0.0);
  for (InstanceId i : group) {
    const auto r = d.row(i);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += r[j];
  }
  for (double& v : c) v /= static_cast<double>(group.size());
  return c;
}

/// K-means over-clustering followed by medoid selection.
///
/// With a train mask, any group without training instances is folded into
/// the train-containing group whose centroid is nearest, so the result can
/// hold fewer than `n_super` groups. Medoids are then chosen among training
/// instances only.
inline SuperInstanceSet build_super_instances(const Dataset& d,
                                              std::size_t n_super,
                                              std::uint64_t seed,
                                              const TrainMask& train = std::nullopt) {
  if (n_super == 0) throw ConfigError("n_super must be positive");
  if (n_super > d.size())
    throw ConfigError("n_super=" + std::to_string(n_super) +
                      " exceeds instance count " + std::to_string(d.size()));
  if (train) {
    if (train->size() != d.size())
      throw ConfigError("train mask size does not match the dataset");
    if (std::none_of(train->begin(), train->end(), [](bool b) { return b; }))
      throw ConfigError("train mask selects no instances");
  }

  auto groups = kmeans_groups(d, n_super, seed);

  if (train) {
    auto has_train = [&](const std::vector<InstanceId>& g) {
      return std::any_of(g.begin(), g.end(),
                         [&](InstanceId i) { return (*train)[i]; });
    };
    std::vector<std::vector<double>> centroids;
    std::vector<bool> keep(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      centroids.push_back(group_centroid(groups[g], d));
      keep[g] = has_train(groups[g]);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (keep[g]) continue;
      std::size_t target = groups.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t h = 0; h < groups.size(); ++h) {
        if (!keep[h]) continue;
        const double dh = distance(centroids[g], centroids[h]);
        if (dh < best) {
          best = dh;
          target = h;
        }
      }
      groups[target].insert(groups[target].end(), groups[g].begin(),
                            groups[g].end());
      std::sort(groups[target].begin(), groups[target].end());
      groups[g].clear();
    }
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
  }

  SuperInstanceSet out;
  out.groups = std::move(groups);
  out.medoids.reserve(out.groups.size());
  for (const auto& g : out.groups) out.medoids.push_back(medoid(g, d, train));
  return out;
}

}  // namespace cobra
