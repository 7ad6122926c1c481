#ifndef LSVCLUSTER_CLUSTER_HPP
#define LSVCLUSTER_CLUSTER_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lsvcluster/matrix.hpp"
#include "lsvcluster/svd.hpp"

namespace lsvc {

/// Outcome of one sign classification of a vector: entries > eta, entries
/// < -eta, and the remainder.
struct SignSplit {
  IndexSet positive;
  IndexSet negative;
  IndexSet zeros;
};

inline SignSplit sign_split(const Vector& u, double eta) {
  require(u.size() >= 1, "sign_split: empty vector");
  const int n = static_cast<int>(u.size());
  std::vector<int> pos, neg, zer;
  for (int i = 0; i < n; ++i) {
    if (u(i) > eta)
      pos.push_back(i);
    else if (u(i) < -eta)
      neg.push_back(i);
    else
      zer.push_back(i);
  }
  return SignSplit{IndexSet(std::move(pos), n), IndexSet(std::move(neg), n),
                   IndexSet(std::move(zer), n)};
}

/// Node of the recursive splitting tree. All index sets are expressed in the
/// original state labels of the top-level chain.
struct ClusterNode {
  IndexSet indices;
  double sigma = std::numeric_limits<double>::infinity();
  std::optional<SignSplit> split;
  std::unique_ptr<ClusterNode> child1;  // recursion on the positive side
  std::unique_ptr<ClusterNode> child2;  // recursion on the negative side
};

struct ClusterResult {
  std::vector<IndexSet> clusters;  // discovery order
  IndexSet unclustered;
  Vector liwv;  // left-iterative weight vector, length n
  std::unique_ptr<ClusterNode> tree;
  bool clustered = false;  // false iff the root sigma exceeded tau
};

struct ClusterOptions {
  double tau = 0.0;
  int max_depth = -1;  // -1: defaults to n
  double degeneracy_tol = 1e-10;
  bool reverse_children = false;  // recurse on the negative side first
};

namespace detail {

struct ClusterState {
  const ClusterOptions* opts;
  std::vector<IndexSet>* clusters;
  std::vector<int>* unclustered;
  Vector* liwv;
  int n = 0;
};

inline std::unique_ptr<ClusterNode> cluster_recurse(ClusterState& st,
                                                    const StochasticMatrix& t,
                                                    const std::vector<int>& orig,
                                                    int depth) {
  auto node = std::make_unique<ClusterNode>();
  node->indices = IndexSet(orig, st.n);
  const int m = static_cast<int>(orig.size());

  auto terminal = [&]() {
    st.clusters->push_back(node->indices);
    return std::move(node);
  };

  if (m <= 1) return terminal();  // a 1x1 Laplacian has no second singular value

  const Matrix lap = laplacian(t.mat());
  const SvdResult svd = full_svd(lap);
  node->sigma = svd.singular_values(m - 2);
  if (node->sigma > st.opts->tau) return terminal();
  if (depth >= st.opts->max_depth) return terminal();

  auto pair = extract_second_smallest(svd, st.opts->degeneracy_tol);
  if (!pair) return terminal();  // no mixed-sign vector: stop splitting here

  const SignSplit local = sign_split(pair->left, sign_threshold(pair->left));
  if (local.positive.empty() || local.negative.empty()) return terminal();

  for (int i = 0; i < m; ++i) (*st.liwv)(orig[static_cast<std::size_t>(i)]) = std::abs(pair->left(i));

  auto to_orig = [&](const IndexSet& s) {
    std::vector<int> mapped;
    mapped.reserve(static_cast<std::size_t>(s.size()));
    for (int i : s.indices()) mapped.push_back(orig[static_cast<std::size_t>(i)]);
    return mapped;
  };
  std::vector<int> s1 = to_orig(local.positive);
  std::vector<int> s2 = to_orig(local.negative);
  std::vector<int> zer = to_orig(local.zeros);
  node->split = SignSplit{IndexSet(s1, st.n), IndexSet(s2, st.n), IndexSet(zer, st.n)};
  st.unclustered->insert(st.unclustered->end(), zer.begin(), zer.end());

  auto descend = [&](const IndexSet& side, const std::vector<int>& mapped) {
    StochasticMatrix sub = dnf(SubStochasticMatrix(principal_submatrix(t.mat(), side)));
    return cluster_recurse(st, sub, mapped, depth + 1);
  };
  if (!st.opts->reverse_children) {
    node->child1 = descend(local.positive, s1);
    node->child2 = descend(local.negative, s2);
  } else {
    node->child2 = descend(local.negative, s2);
    node->child1 = descend(local.positive, s1);
  }
  return node;
}

}  // namespace detail

/// The recursive left-singular-vector clustering algorithm. Splits the index
/// set by the sign pattern of a left singular vector for the second smallest
/// singular value of I - T whenever that value is at most tau, restochasticises
/// each side with the dangling node fix, and recurses. Also assembles the
/// left-iterative weight vector: initialised to ones, and on every split the
/// entries of the current index set are overwritten with |u|.
inline ClusterResult lsv_cluster(const StochasticMatrix& t, const ClusterOptions& opts_in) {
  ClusterOptions opts = opts_in;
  require(std::isfinite(opts.tau) && opts.tau >= 0.0, "lsv_cluster: tau must be finite and >= 0");
  const int n = t.size();
  if (opts.max_depth < 0) opts.max_depth = n;

  ClusterResult res;
  res.liwv = Vector::Ones(n);
  std::vector<int> unclustered;
  detail::ClusterState st{&opts, &res.clusters, &unclustered, &res.liwv, n};

  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  res.tree = detail::cluster_recurse(st, t, all, 0);
  res.unclustered = IndexSet(std::move(unclustered), n);
  res.clustered = !(res.tree->sigma > opts.tau);
  return res;
}

inline ClusterResult lsv_cluster(const StochasticMatrix& t, double tau, int max_depth = -1) {
  ClusterOptions opts;
  opts.tau = tau;
  opts.max_depth = max_depth;
  return lsv_cluster(t, opts);
}

/// Permutation placing each cluster's states contiguously (clusters in
/// discovery order, unclustered states last); perm[new] = old.
struct BlockPermutation {
  std::vector<int> perm;
  StochasticMatrix permuted;
};

inline BlockPermutation permute_to_blocks(const StochasticMatrix& t, const ClusterResult& result) {
  const int n = t.size();
  std::vector<int> perm;
  perm.reserve(static_cast<std::size_t>(n));
  for (const IndexSet& c : result.clusters)
    for (int i : c.indices()) perm.push_back(i);
  for (int i : result.unclustered.indices()) perm.push_back(i);
  require(static_cast<int>(perm.size()) == n, "permute_to_blocks: result does not cover the chain");

  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = t(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  return BlockPermutation{std::move(perm), StochasticMatrix(std::move(out))};
}

}  // namespace lsvc

#endif  // LSVCLUSTER_CLUSTER_HPP
