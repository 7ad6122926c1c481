#ifndef LSVCLUSTER_COUPLING_HPP
#define LSVCLUSTER_COUPLING_HPP

#include <cmath>
#include <string>
#include <vector>

#include "lsvcluster/cluster.hpp"
#include "lsvcluster/matrix.hpp"
#include "lsvcluster/svd.hpp"

namespace lsvc {

/// k x k block-quality matrix of a partition under a weight vector: entry
/// (i, j) is the weighted average row sum of the (i, j) block of T.
struct CouplingMatrix {
  Matrix values;
  std::vector<IndexSet> partition;
  Vector weight;  // full-length weight vector the blocks were scored with

  int order() const { return static_cast<int>(values.rows()); }
};

namespace detail {

inline void check_disjoint(const std::vector<IndexSet>& partition, int n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const IndexSet& s : partition) {
    require(!s.empty(), "coupling: empty block");
    for (int i : s.indices()) {
      require(i < n, "coupling: block index out of range");
      require(!seen[static_cast<std::size_t>(i)], "coupling: overlapping blocks");
      seen[static_cast<std::size_t>(i)] = 1;
    }
  }
}

}  // namespace detail

/// W[i][j] = u_i^T T[S_i, S_j] 1 / (u_i^T 1), with u_i the restriction of the
/// weight vector to block i. Requires strictly positive weights on each block.
inline CouplingMatrix coupling_matrix(const StochasticMatrix& t,
                                      const std::vector<IndexSet>& partition,
                                      const Vector& weight) {
  const int n = t.size();
  require(static_cast<int>(weight.size()) == n, "coupling_matrix: weight length mismatch");
  require(!partition.empty(), "coupling_matrix: empty partition");
  detail::check_disjoint(partition, n);
  for (const IndexSet& s : partition)
    for (int i : s.indices())
      require(weight(i) > 0.0, "coupling_matrix: nonpositive weight on a block");

  const int k = static_cast<int>(partition.size());
  Matrix w(k, k);
  for (int bi = 0; bi < k; ++bi) {
    const IndexSet& si = partition[static_cast<std::size_t>(bi)];
    double wsum = 0.0;
    for (int i : si.indices()) wsum += weight(i);
    for (int bj = 0; bj < k; ++bj) {
      const IndexSet& sj = partition[static_cast<std::size_t>(bj)];
      double acc = 0.0;
      for (int i : si.indices()) {
        double row = 0.0;
        for (int j : sj.indices()) row += t(i, j);
        acc += weight(i) * row;
      }
      w(bi, bj) = acc / wsum;
    }
  }
  return CouplingMatrix{std::move(w), partition, weight};
}

/// Coupling matrix of order n - |S1| - |S2| + 2: the two given blocks carry
/// the given weights, and every remaining state becomes a singleton block with
/// weight one.
inline CouplingMatrix coupling_with_singletons(const StochasticMatrix& t, const IndexSet& s1,
                                               const IndexSet& s2, const Vector& u1,
                                               const Vector& u2) {
  const int n = t.size();
  require(u1.size() == s1.size() && u2.size() == s2.size(),
          "coupling_with_singletons: weight/block size mismatch");
  std::vector<IndexSet> partition{s1, s2};
  Vector weight = Vector::Ones(n);
  for (int i = 0; i < s1.size(); ++i) weight(s1[i]) = u1(i);
  for (int i = 0; i < s2.size(); ++i) weight(s2[i]) = u2(i);

  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int i : s1.indices()) used[static_cast<std::size_t>(i)] = 1;
  for (int i : s2.indices()) {
    require(!used[static_cast<std::size_t>(i)], "coupling_with_singletons: S1, S2 overlap");
    used[static_cast<std::size_t>(i)] = 1;
  }
  for (int i = 0; i < n; ++i)
    if (!used[static_cast<std::size_t>(i)]) partition.push_back(IndexSet({i}, n));

  return coupling_matrix(t, partition, weight);
}

struct DiagStats {
  double avg = 0.0;
  double min = 0.0;
};

inline DiagStats diag_stats(const CouplingMatrix& w) {
  const auto d = w.values.diagonal();
  return DiagStats{d.mean(), d.minCoeff()};
}

/// Left fixed vector pi^T T = pi^T with unit 1-norm, by power iteration on the
/// lazy transpose (T^T + I)/2; the averaging keeps periodic chains (e.g.
/// bipartite random walks) from oscillating and leaves the fixed vector
/// unchanged.
struct StationaryResult {
  Vector pi;
  bool converged = false;
  int iterations = 0;
};

inline StationaryResult stationary_distribution(const StochasticMatrix& t) {
  const int n = t.size();
  constexpr int kMaxIter = 1000000;
  constexpr double kResidual = 1e-10;
  Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  StationaryResult out;
  for (int it = 0; it < kMaxIter; ++it) {
    Vector next = 0.5 * (t.mat().transpose() * pi + pi);
    next /= next.sum();
    pi = next;
    out.iterations = it + 1;
    double residual = (t.mat().transpose() * pi - pi).cwiseAbs().sum();
    if (residual <= kResidual) {
      out.converged = true;
      break;
    }
  }
  out.pi = pi;
  return out;
}

/// Spectral radius of each principal submatrix T[S] over the partition.
inline std::vector<double> perron_values(const StochasticMatrix& t,
                                         const std::vector<IndexSet>& partition) {
  std::vector<double> out;
  out.reserve(partition.size());
  for (const IndexSet& s : partition)
    out.push_back(spectral_radius(principal_submatrix(t.mat(), s)).rho);
  return out;
}

enum class WeightKind { ones, liwv, stationary };

inline std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::ones: return "ones";
    case WeightKind::liwv: return "liwv";
    case WeightKind::stationary: return "stationary";
  }
  return "?";
}

/// Weight vector for scoring a clustering. Left-iterative weights fall back
/// to one on near-zero entries (possible for states classified as zero during
/// a split), keeping every block weight strictly positive.
inline Vector make_weight_vector(const StochasticMatrix& t, const ClusterResult& result,
                                 WeightKind kind) {
  const int n = t.size();
  switch (kind) {
    case WeightKind::ones:
      return Vector::Ones(n);
    case WeightKind::liwv: {
      Vector w = result.liwv;
      for (int i = 0; i < n; ++i)
        if (w(i) <= 1e-12) w(i) = 1.0;
      return w;
    }
    case WeightKind::stationary:
      return stationary_distribution(t).pi;
  }
  throw std::logic_error("make_weight_vector: unknown kind");
}

}  // namespace lsvc

#endif  // LSVCLUSTER_COUPLING_HPP
