#ifndef LSVCLUSTER_BOUNDS_HPP
#define LSVCLUSTER_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lsvcluster/coupling.hpp"
#include "lsvcluster/matrix.hpp"
#include "lsvcluster/svd.hpp"

namespace lsvc {

constexpr double kOracleSlack = 1e-10;  // absolute slack absorbing floating point

/// Outcome of one inequality check: holds iff lhs <= rhs + slack tolerance.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack = 0.0;  // rhs - lhs
};

inline BoundReport make_report(std::string name, double lhs, double rhs) {
  BoundReport r{std::move(name), lhs, rhs, lhs <= rhs + kOracleSlack, rhs - lhs};
  return r;
}

/// sigma_1(T) <= sqrt(n) for stochastic T, with equality exactly for the
/// rank-one matrices 1 e_j^T.
inline BoundReport sigma1_bound(const StochasticMatrix& t) {
  const double s1 = full_svd(t.mat()).singular_values(0);
  return make_report("sigma1_vs_sqrt_n", s1, std::sqrt(static_cast<double>(t.size())));
}

/// Decomposition E = epsilon * Etilde with Etilde the difference of two
/// stochastic matrices of maximal infinity norm 2.
struct BlowupDecomposition {
  double epsilon = 0.0;
  Matrix etilde;
  StochasticMatrix t1tilde;
  StochasticMatrix t2tilde;
};

/// Splits a zero-row-sum matrix E (a scaled difference of stochastic
/// matrices) into epsilon * (T1~ - T2~): positive and negative parts of
/// E / epsilon, with each row's slack padded onto column 1.
inline BlowupDecomposition blowup(const Matrix& e) {
  require(e.rows() == e.cols() && e.rows() >= 1, "blowup: matrix must be square");
  require(all_finite(e), "blowup: non-finite entry");
  const auto n = e.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    require(std::abs(e.row(i).sum()) <= kOracleSlack, "blowup: row sums must be zero");
  const double eps = inf_norm(e) / 2.0;
  require(eps > 0.0, "blowup: E must be nonzero");
  require(eps <= 1.0 + kOracleSlack, "blowup: infinity norm exceeds 2");

  Matrix etilde = e / eps;
  Matrix t1 = etilde.cwiseMax(0.0);
  Matrix t2 = (-etilde).cwiseMax(0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    t1(i, 0) += std::max(0.0, 1.0 - t1.row(i).sum());
    t2(i, 0) += std::max(0.0, 1.0 - t2.row(i).sum());
  }
  return BlowupDecomposition{eps, std::move(etilde), StochasticMatrix(std::move(t1)),
                             StochasticMatrix(std::move(t2))};
}

/// sigma_1(T1 - T2) <= 2 * epsilon * sqrt(n) with epsilon = |T1 - T2|_inf / 2.
inline BoundReport diff_norm_bound(const StochasticMatrix& t1, const StochasticMatrix& t2) {
  require(t1.size() == t2.size(), "diff_norm_bound: size mismatch");
  const Matrix e = t1.mat() - t2.mat();
  const double eps = inf_norm(e) / 2.0;
  const double lhs = full_svd(e).singular_values(0);
  const double rhs = 2.0 * eps * std::sqrt(static_cast<double>(t1.size()));
  return make_report("diff_norm_bound", lhs, rhs);
}

/// True when E has the extremal form epsilon * 1 (e_j1 - e_j2)^T for distinct
/// columns j1, j2 — the equality case of the difference norm bound.
inline bool is_extremal_difference(const Matrix& e, double tol = 1e-12) {
  const auto n = e.rows();
  if (n < 2 || e.rows() != e.cols()) return false;
  for (Eigen::Index i = 1; i < n; ++i)
    if (((e.row(i) - e.row(0)).cwiseAbs().maxCoeff()) > tol) return false;
  Eigen::Index jpos = -1, jneg = -1;
  for (Eigen::Index j = 0; j < n; ++j) {
    double v = e(0, j);
    if (std::abs(v) <= tol) continue;
    if (v > 0.0) {
      if (jpos >= 0) return false;
      jpos = j;
    } else {
      if (jneg >= 0) return false;
      jneg = j;
    }
  }
  return jpos >= 0 && jneg >= 0 && std::abs(e(0, jpos) + e(0, jneg)) <= tol;
}

/// If T = S + E with S a direct sum of k irreducible stochastic blocks, then
/// I - T has at least k singular values <= 2 * epsilon * sqrt(n). The report
/// compares the k-th smallest singular value against that bound.
inline BoundReport count_small_singvals(const StochasticMatrix& t, int k, double epsilon) {
  const int n = t.size();
  require(k >= 1 && k <= n, "count_small_singvals: k out of range");
  const Vector s = full_svd(laplacian(t.mat())).singular_values;
  const double kth_smallest = s(n - k);
  const double rhs = 2.0 * epsilon * std::sqrt(static_cast<double>(n));
  return make_report("count_small_singvals", kth_smallest, rhs);
}

/// sigma_{n-1}(I - T) <= |T - S|_F for any completely decoupled S declared
/// block diagonal over the given partition (at least two parts).
inline BoundReport frob_vs_sigma(const StochasticMatrix& t, const StochasticMatrix& s,
                                 const std::vector<IndexSet>& partition) {
  const int n = t.size();
  require(s.size() == n, "frob_vs_sigma: size mismatch");
  require(partition.size() >= 2, "frob_vs_sigma: need at least two parts");
  std::vector<int> block_of(static_cast<std::size_t>(n), -1);
  int covered = 0;
  for (std::size_t b = 0; b < partition.size(); ++b)
    for (int i : partition[b].indices()) {
      require(block_of[static_cast<std::size_t>(i)] == -1, "frob_vs_sigma: overlapping parts");
      block_of[static_cast<std::size_t>(i)] = static_cast<int>(b);
      ++covered;
    }
  require(covered == n, "frob_vs_sigma: partition must cover all states");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (block_of[static_cast<std::size_t>(i)] != block_of[static_cast<std::size_t>(j)])
        require(s(i, j) == 0.0, "frob_vs_sigma: S is not block diagonal over the partition");

  const Vector sv = full_svd(laplacian(t.mat())).singular_values;
  const double lhs = sv(n - 2);
  const double rhs = frob_norm(t.mat() - s.mat());
  return make_report("frob_vs_sigma", lhs, rhs);
}

/// The two decompositions of a chain whose one-weighted coupling diagonal is
/// >= 1 - delta on every block: T = B + E with sub-stochastic diagonal blocks,
/// and T = B' + E' with the blocks restochasticised by the dangling node fix.
struct NearDecoupledDecomposition {
  Matrix b_sub;
  Matrix e_sub;
  Matrix b_dnf;
  Matrix e_dnf;
  std::vector<BoundReport> reports;
};

inline NearDecoupledDecomposition near_decoupled_decomp(const StochasticMatrix& t,
                                                        const std::vector<IndexSet>& partition,
                                                        double delta) {
  const int n = t.size();
  require(delta >= 0.0 && delta < 1.0, "near_decoupled_decomp: delta must be in [0, 1)");
  const CouplingMatrix w1 = coupling_matrix(t, partition, Vector::Ones(n));
  int covered = 0;
  for (const IndexSet& s : partition) covered += s.size();
  require(covered == n, "near_decoupled_decomp: partition must cover all states");
  for (int b = 0; b < w1.order(); ++b)
    require(w1.values(b, b) >= 1.0 - delta - kOracleSlack,
            "near_decoupled_decomp: coupling diagonal below 1 - delta");

  NearDecoupledDecomposition out;
  const double dn = delta * static_cast<double>(n);
  const double m = static_cast<double>(partition.size());

  out.b_sub = Matrix::Zero(n, n);
  out.b_dnf = Matrix::Zero(n, n);
  for (const IndexSet& s : partition) {
    const Matrix block = principal_submatrix(t.mat(), s);
    const Matrix fixed = dnf(SubStochasticMatrix(block)).mat();
    for (int i = 0; i < s.size(); ++i)
      for (int j = 0; j < s.size(); ++j) {
        out.b_sub(s[i], s[j]) = block(i, j);
        out.b_dnf(s[i], s[j]) = fixed(i, j);
      }
  }
  out.e_sub = t.mat() - out.b_sub;
  out.e_dnf = t.mat() - out.b_dnf;

  out.reports.push_back(make_report("near_decoupled_sub_frob", frob_norm(out.e_sub),
                                    std::min(std::sqrt(dn), dn)));
  out.reports.push_back(
      make_report("near_decoupled_sub_inf", inf_norm(out.e_sub), std::min(1.0, dn)));
  out.reports.push_back(
      make_report("near_decoupled_dnf_inf", inf_norm(out.e_dnf), 2.0 * std::min(1.0, dn)));
  out.reports.push_back(make_report(
      "near_decoupled_dnf_frob", frob_norm(out.e_dnf),
      std::min({2.0 * dn, std::sqrt(dn * dn + delta * m), std::sqrt(dn + delta * m)})));
  return out;
}

/// The dangling node fix is the nearest stochastic matrix in the infinity,
/// operator-2 and Frobenius norms; checked against `trials` random stochastic
/// competitors. The returned report is the tightest competitor/norm pair.
inline BoundReport dnf_optimality_check(const SubStochasticMatrix& t, int trials,
                                        std::uint64_t seed = 0x5eed0001u) {
  require(trials >= 1, "dnf_optimality_check: trials must be >= 1");
  const int n = t.size();
  const Matrix fixed = dnf(t).mat();
  const Matrix diff = t.mat() - fixed;
  const double lhs_inf = inf_norm(diff);
  const double lhs_two = full_svd(diff).singular_values(0);
  const double lhs_frob = frob_norm(diff);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  BoundReport worst;
  bool first = true;
  for (int trial = 0; trial < trials; ++trial) {
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        s(i, j) = unif(rng);
        sum += s(i, j);
      }
      s.row(i) /= sum;
    }
    const Matrix d = t.mat() - s;
    const double rhs[3] = {inf_norm(d), full_svd(d).singular_values(0), frob_norm(d)};
    const double lhs[3] = {lhs_inf, lhs_two, lhs_frob};
    const char* names[3] = {"dnf_optimality_inf", "dnf_optimality_2", "dnf_optimality_frob"};
    for (int k = 0; k < 3; ++k) {
      BoundReport r = make_report(names[k], lhs[k], rhs[k]);
      if (first || r.slack < worst.slack) {
        worst = r;
        first = false;
      }
    }
  }
  return worst;
}

/// After exactly recovering an index set S whose restriction of T0 is
/// stochastic, the dangling node fix of T[S] stays within |T - T0| of T0[S]
/// in the 2-, Frobenius and infinity norms. Returns the tightest of the three.
inline BoundReport noblowup_check(const StochasticMatrix& t0, const StochasticMatrix& t,
                                  const IndexSet& s) {
  require(t0.size() == t.size(), "noblowup_check: size mismatch");
  Matrix t0s = principal_submatrix(t0.mat(), s);
  StochasticMatrix t0s_check{t0s};  // throws if T0[S] is not stochastic
  const Matrix fixed = dnf(SubStochasticMatrix(principal_submatrix(t.mat(), s))).mat();
  const Matrix inner = fixed - t0s;
  const Matrix outer = t.mat() - t0.mat();

  const BoundReport reports[3] = {
      make_report("noblowup_2", full_svd(inner).singular_values(0),
                  full_svd(outer).singular_values(0)),
      make_report("noblowup_frob", frob_norm(inner), frob_norm(outer)),
      make_report("noblowup_inf", inf_norm(inner), inf_norm(outer)),
  };
  return *std::min_element(std::begin(reports), std::end(reports),
                           [](const BoundReport& a, const BoundReport& b) {
                             return a.slack < b.slack;
                           });
}

/// Parameters of the three-block construction whose coupling matrix has one
/// diagonal entry well below 1 - sqrt(n) * sigma_{n-1}.
struct SmallDiagParams {
  int n = 4;
  double x = 0.0;
  double y = 0.0;
  double eps = 0.0;
  double delta = 0.0;

  void validate() const {
    require(n >= 4, "smalldiag: n must be >= 4");
    require(delta > 0.0 && delta < eps, "smalldiag: need 0 < delta < eps");
    require(eps < x && x < y, "smalldiag: need eps < x < y");
    require(x + y < 1.0, "smalldiag: need x + y < 1");
  }
};

struct SmallDiagResult {
  StochasticMatrix t;
  double sigma = 0.0;        // computed sigma_{n-1} of I - T
  double closed_form = 0.0;  // leading-order closed form for sigma_{n-1}
  double mu = 0.0;           // (2,2) entry of the two-block coupling matrix
  std::vector<BoundReport> reports;
};

inline Matrix smalldiag_matrix(const SmallDiagParams& p) {
  p.validate();
  const int n = p.n;
  Matrix t = Matrix::Zero(n, n);
  t(0, 0) = 1.0 - p.eps;
  t(0, 1) = p.eps;
  t(1, 1) = 1.0 - p.delta;
  for (int j = 2; j < n; ++j) t(1, j) = p.delta / static_cast<double>(n - 2);
  for (int i = 2; i < n; ++i) {
    t(i, 0) = p.x;
    t(i, 1) = p.y;
    t(i, i) = 1.0 - p.x - p.y;
  }
  return t;
}

inline SmallDiagResult smalldiag_example(const SmallDiagParams& p) {
  p.validate();
  const int n = p.n;
  StochasticMatrix t{smalldiag_matrix(p)};
  const SvdResult svd = full_svd(laplacian(t.mat()));
  const double sigma = svd.singular_values(n - 2);
  const double closed = p.eps * (p.x + p.y) * std::sqrt(static_cast<double>(n)) /
                        std::sqrt(static_cast<double>(n - 1) * (p.x * p.x + p.y * p.y) +
                                  2.0 * p.x * p.y);

  SmallDiagResult out{std::move(t), sigma, closed, 0.0, {}};

  // (a) x + y is a singular value of I - T with multiplicity n - 3
  std::vector<double> dev;
  dev.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dev.push_back(std::abs(svd.singular_values(i) - (p.x + p.y)));
  std::sort(dev.begin(), dev.end());
  out.reports.push_back(
      make_report("smalldiag_multiplicity", dev[static_cast<std::size_t>(n - 4)], 1e-8));

  // (b) computed sigma_{n-1} matches the closed form to second order
  out.reports.push_back(
      make_report("smalldiag_sigma_closed_form", std::abs(sigma - closed), 10.0 * p.eps * p.eps));

  // (c) the sign split isolates state 1 from all others
  auto pair = extract_second_smallest(svd);
  bool split_ok = false;
  Vector u;
  if (pair) {
    u = pair->left;
    const SignSplit split = sign_split(u, sign_threshold(u));
    const IndexSet lone({0}, n);
    std::vector<int> rest;
    for (int i = 1; i < n; ++i) rest.push_back(i);
    const IndexSet others(rest, n);
    split_ok = (split.positive == lone && split.negative == others) ||
               (split.positive == others && split.negative == lone);
  }
  out.reports.push_back(make_report("smalldiag_sign_split", split_ok ? 0.0 : 1.0, 0.0));

  // (d) the second diagonal coupling entry sits below 1 - sqrt(n) * sigma
  if (pair) {
    std::vector<int> rest;
    for (int i = 1; i < n; ++i) rest.push_back(i);
    const IndexSet s1({0}, n), s2(rest, n);
    const CouplingMatrix w = coupling_matrix(out.t, {s1, s2}, u.cwiseAbs());
    out.mu = w.values(1, 1);
  }
  out.reports.push_back(make_report("smalldiag_mu_bound", out.mu,
                                    1.0 - std::sqrt(static_cast<double>(n)) * sigma));
  return out;
}

/// min over alpha in [0,1] of max(alpha/sqrt(l), sqrt(1-alpha^2)/sqrt(m-l))
/// equals 1/sqrt(m); verified on a gridsize-point grid with resolution bound
/// 2/gridsize.
inline BoundReport maxlem_grid_check(int l, int m, int gridsize) {
  require(l >= 1 && l <= m - 1, "maxlem_grid_check: need 1 <= l <= m-1");
  require(gridsize >= 2, "maxlem_grid_check: gridsize too small");
  double best = std::numeric_limits<double>::infinity();
  const double sl = std::sqrt(static_cast<double>(l));
  const double sml = std::sqrt(static_cast<double>(m - l));
  for (int i = 0; i < gridsize; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(gridsize - 1);
    const double v = std::max(alpha / sl, std::sqrt(1.0 - alpha * alpha) / sml);
    best = std::min(best, v);
  }
  const double target = 1.0 / std::sqrt(static_cast<double>(m));
  return make_report("maxlem_grid", std::abs(best - target), 2.0 / static_cast<double>(gridsize));
}

}  // namespace lsvc

#endif  // LSVCLUSTER_BOUNDS_HPP
