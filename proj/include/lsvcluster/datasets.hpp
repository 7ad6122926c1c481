#ifndef LSVCLUSTER_DATASETS_HPP
#define LSVCLUSTER_DATASETS_HPP

#include "lsvcluster/matrix.hpp"

namespace lsvc {

/// Courtois' 8-state nearly decoupled chain (with the usual correction of the
/// (6,2) entry), a standard benchmark for metastability detection.
inline StochasticMatrix courtois_matrix() {
  Matrix c(8, 8);
  c << 0.8500, 0, 0.1490, 0.0009, 0, 0.00005, 0, 0.00005,          //
      0.1000, 0.6500, 0.2490, 0, 0.0009, 0.00005, 0, 0.00005,      //
      0.1000, 0.8000, 0.0996, 0.0003, 0, 0, 0.0001, 0,             //
      0, 0.0004, 0, 0.7000, 0.2995, 0, 0.0001, 0,                  //
      0.0005, 0, 0.0004, 0.3990, 0.6000, 0.0001, 0, 0,             //
      0, 0.00005, 0, 0, 0.00005, 0.6000, 0.2499, 0.1500,           //
      0.00003, 0, 0.00003, 0.00004, 0, 0.1000, 0.8000, 0.0999,     //
      0, 0.00005, 0, 0, 0.00005, 0.1999, 0.2500, 0.5500;
  return StochasticMatrix(std::move(c));
}

/// Biadjacency matrix of the classic 18-women / 14-events Southern social
/// network; rows are individuals, columns are events.
inline Matrix deep_south_biadjacency() {
  Matrix d(18, 14);
  d << 1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0,  //
      1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0,   //
      0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0,   //
      1, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0,   //
      0, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0,   //
      0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0,   //
      0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0,   //
      0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0,   //
      0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0,   //
      0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0,   //
      0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 0,   //
      0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1,   //
      0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 1, 1, 1,   //
      0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1,   //
      0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 0, 0,   //
      0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0,   //
      0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0,   //
      0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0;
  return d;
}

/// Random walk on the Deep South bipartite graph (32 states).
inline StochasticMatrix deep_south_walk() {
  return row_normalize(bipartite_embed(deep_south_biadjacency()));
}

/// Two k-blocks of uniform in-block mass 1-a and cross mass a; I - T has
/// singular values 1 (multiplicity 2k-2), 2a and 0.
inline StochasticMatrix analytic_two_block(int k, double a) {
  require(k >= 1, "analytic_two_block: k must be >= 1");
  require(a > 0.0 && a < 0.5, "analytic_two_block: a must be in (0, 1/2)");
  const int n = 2 * k;
  Matrix t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const bool same = (i < k) == (j < k);
      t(i, j) = (same ? (1.0 - a) : a) / static_cast<double>(k);
    }
  return StochasticMatrix(std::move(t));
}

/// The completely decoupled comparison point for analytic_two_block: two
/// uniform blocks (1/k) J.
inline StochasticMatrix analytic_two_block_decoupled(int k) {
  require(k >= 1, "analytic_two_block_decoupled: k must be >= 1");
  const int n = 2 * k;
  Matrix s = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((i < k) == (j < k)) s(i, j) = 1.0 / static_cast<double>(k);
  return StochasticMatrix(std::move(s));
}

}  // namespace lsvc

#endif  // LSVCLUSTER_DATASETS_HPP
