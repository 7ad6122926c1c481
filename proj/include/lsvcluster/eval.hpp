#ifndef LSVCLUSTER_EVAL_HPP
#define LSVCLUSTER_EVAL_HPP

#include <algorithm>
#include <atomic>
#include <future>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lsvcluster/cluster.hpp"
#include "lsvcluster/coupling.hpp"
#include "lsvcluster/ensembles.hpp"
#include "lsvcluster/matrix.hpp"

namespace lsvc {

namespace detail {

// Exact minimum-cost assignment on a square cost matrix (Hungarian algorithm
// with potentials, O(l^3)). Returns the optimal total cost.
inline double hungarian_min_cost(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(n + 1), 0);    // p[j]: row matched to column j
  std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] != 0) total += cost(p[static_cast<std::size_t>(j)] - 1, j - 1);
  return total;
}

inline void check_cluster_list(const std::vector<IndexSet>& list, int n, const char* what) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const IndexSet& c : list)
    for (int i : c.indices()) {
      require(i >= 0 && i < n, std::string(what) + ": index out of range");
      require(!seen[static_cast<std::size_t>(i)], std::string(what) + ": overlapping clusters");
      seen[static_cast<std::size_t>(i)] = 1;
    }
}

inline int symmetric_difference_size(const IndexSet& a, const IndexSet& b) {
  int inter = 0;
  const auto& x = a.indices();
  const auto& y = b.indices();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (x[i] < y[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return a.size() + b.size() - 2 * inter;
}

}  // namespace detail

/// Misclassification count between a ground-truth partition and an empirical
/// clustering: pad the shorter list with empty clusters, weight each pair by
/// the size of its symmetric difference, and take half the minimum-weight
/// perfect matching (computed exactly by the Hungarian algorithm).
inline double count_errors(const std::vector<IndexSet>& ground,
                           const std::vector<IndexSet>& empirical, int n) {
  detail::check_cluster_list(ground, n, "count_errors(ground)");
  detail::check_cluster_list(empirical, n, "count_errors(empirical)");
  const int l = static_cast<int>(std::max(ground.size(), empirical.size()));
  if (l == 0) return 0.0;
  const IndexSet empty({}, n);
  Matrix w(l, l);
  for (int i = 0; i < l; ++i) {
    const IndexSet& gi = i < static_cast<int>(ground.size()) ? ground[static_cast<std::size_t>(i)] : empty;
    for (int j = 0; j < l; ++j) {
      const IndexSet& ej =
          j < static_cast<int>(empirical.size()) ? empirical[static_cast<std::size_t>(j)] : empty;
      w(i, j) = static_cast<double>(detail::symmetric_difference_size(gi, ej));
    }
  }
  return detail::hungarian_min_cost(w) / 2.0;
}

/// Order-insensitive equality of two cluster collections, ignoring empty sets.
inline bool fully_recovered(const std::vector<IndexSet>& ground,
                            const std::vector<IndexSet>& empirical) {
  auto normalize = [](const std::vector<IndexSet>& list) {
    std::set<std::vector<int>> out;
    for (const IndexSet& c : list)
      if (!c.empty()) out.insert(c.indices());
    return out;
  };
  return normalize(ground) == normalize(empirical);
}

struct EvalReport {
  int num_clusters = 0;
  double errors = 0.0;
  bool fully_recovered = false;
  double avg_diag_liwv = 0.0;
  double min_diag_liwv = 0.0;
  double avg_diag_ones = 0.0;
  double min_diag_ones = 0.0;
};

inline EvalReport evaluate_sample(const StochasticMatrix& t, const GroundTruth& truth,
                                  const ClusterResult& result) {
  EvalReport rep;
  rep.num_clusters = static_cast<int>(result.clusters.size());
  rep.errors = count_errors(truth.partition, result.clusters, t.size());
  rep.fully_recovered = fully_recovered(truth.partition, result.clusters);
  const DiagStats liwv =
      diag_stats(coupling_matrix(t, result.clusters, make_weight_vector(t, result, WeightKind::liwv)));
  const DiagStats ones =
      diag_stats(coupling_matrix(t, result.clusters, make_weight_vector(t, result, WeightKind::ones)));
  rep.avg_diag_liwv = liwv.avg;
  rep.min_diag_liwv = liwv.min;
  rep.avg_diag_ones = ones.avg;
  rep.min_diag_ones = ones.min;
  return rep;
}

/// One row of ensemble benchmark statistics, averaged over trials.
struct BenchRow {
  int trials = 0;
  double avg_clusters = 0.0;
  double avg_avg_diag_liwv = 0.0;
  double avg_avg_diag_ones = 0.0;
  double avg_min_diag_liwv = 0.0;
  double avg_min_diag_ones = 0.0;
  double pct_fully_recovered = 0.0;
  double avg_errors = 0.0;
};

/// Runs generate -> lsv_cluster -> coupling -> count_errors over `trials`
/// independent samples (seeded via trial_seed) and averages the statistics.
/// Trials run in parallel when hardware allows; aggregation always follows
/// trial index order, so results do not depend on scheduling.
inline BenchRow bench(const EnsembleSpec& spec, double tau, int trials) {
  require(trials >= 1, "bench: trials must be >= 1");
  spec.validate();

  std::vector<EvalReport> reports(static_cast<std::size_t>(trials));
  std::vector<std::string> failures(static_cast<std::size_t>(trials));
  auto run_trial = [&](int i) {
    try {
      EnsembleSpec s = spec;
      s.seed = trial_seed(spec.seed, static_cast<std::uint64_t>(i));
      const EnsembleSample sample = generate(s);
      const ClusterResult result = lsv_cluster(sample.t, tau);
      reports[static_cast<std::size_t>(i)] = evaluate_sample(sample.t, sample.truth, result);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(i)] = e.what();
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw == 1 || trials == 1) {
    for (int i = 0; i < trials; ++i) run_trial(i);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(trials));
    for (unsigned w = 0; w < workers; ++w)
      futs.push_back(std::async(std::launch::async, [&]() {
        for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) run_trial(i);
      }));
    for (auto& f : futs) f.get();
  }
  for (int i = 0; i < trials; ++i)
    if (!failures[static_cast<std::size_t>(i)].empty())
      throw std::runtime_error("bench: trial " + std::to_string(i) + " failed: " +
                               failures[static_cast<std::size_t>(i)]);

  BenchRow row;
  row.trials = trials;
  for (const EvalReport& r : reports) {
    row.avg_clusters += r.num_clusters;
    row.avg_avg_diag_liwv += r.avg_diag_liwv;
    row.avg_avg_diag_ones += r.avg_diag_ones;
    row.avg_min_diag_liwv += r.min_diag_liwv;
    row.avg_min_diag_ones += r.min_diag_ones;
    row.pct_fully_recovered += r.fully_recovered ? 1.0 : 0.0;
    row.avg_errors += r.errors;
  }
  const double t = static_cast<double>(trials);
  row.avg_clusters /= t;
  row.avg_avg_diag_liwv /= t;
  row.avg_avg_diag_ones /= t;
  row.avg_min_diag_liwv /= t;
  row.avg_min_diag_ones /= t;
  row.pct_fully_recovered = 100.0 * row.pct_fully_recovered / t;
  row.avg_errors /= t;
  return row;
}

}  // namespace lsvc

#endif  // LSVCLUSTER_EVAL_HPP
