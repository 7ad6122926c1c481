#ifndef LSVCLUSTER_SVD_HPP
#define LSVCLUSTER_SVD_HPP

#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lsvcluster/matrix.hpp"

namespace lsvc {

/// One singular triple (sigma, left vector u, right vector v) of a square
/// matrix M, satisfying u^T M = sigma v^T up to the solver's residual.
struct SingularPair {
  double sigma = 0.0;
  Vector left;
  Vector right;
};

/// Full SVD with singular values in descending order: M = U diag(s) V^T.
struct SvdResult {
  Vector singular_values;
  Matrix u;
  Matrix v;
};

inline SvdResult full_svd(const Matrix& m) {
  require(m.rows() == m.cols(), "full_svd: matrix must be square");
  require(all_finite(m), "full_svd: non-finite entry");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SvdResult{svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

/// Entries with |u_i| <= eta count as zero when classifying signs.
inline double sign_threshold(const Vector& u) {
  return 1e-12 * u.cwiseAbs().maxCoeff();
}

inline bool has_mixed_signs(const Vector& u, double eta) {
  return (u.array() > eta).any() && (u.array() < -eta).any();
}

namespace detail {

// Flips (u, v) together so the entry of u with largest magnitude is positive.
inline void canonicalize_sign(Vector& u, Vector& v) {
  Eigen::Index imax = 0;
  u.cwiseAbs().maxCoeff(&imax);
  if (u(imax) < 0.0) {
    u = -u;
    v = -v;
  }
}

}  // namespace detail

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic generic probe vectors for the degenerate-subspace search.
inline Vector probe_vector(Eigen::Index n, int attempt) {
  Vector h(n);
  if (attempt == 0) {
    for (Eigen::Index i = 0; i < n; ++i) h(i) = static_cast<double>(i + 1);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::uint64_t bits =
          splitmix64(static_cast<std::uint64_t>(attempt) * 0x100000001ULL +
                     static_cast<std::uint64_t>(i));
      h(i) = static_cast<double>(bits >> 11) * 0x1.0p-53 - 0.5;
    }
  }
  return h / h.norm();
}

}  // namespace detail

/// Returns the second smallest singular value of an SVD together with a left
/// singular vector having mixed signs, or nullopt if no such vector exists.
///
/// When the second smallest singular value lies in a numerically degenerate
/// subspace (dimension >= 2 within degeneracy_tol), the returned vector is
/// chosen orthogonal to the subspace's uniform-sign aggregate (the in-subspace
/// projection of the all-ones vector), probing a few deterministic generic
/// directions and keeping the mixed-sign result with the fewest zero-classified
/// entries. That keeps every nearly-invariant block represented in the sign
/// pattern, so recursion on an exactly decoupled chain loses no states.
inline std::optional<SingularPair> extract_second_smallest(const SvdResult& svd,
                                                           double degeneracy_tol = 1e-10) {
  const auto n = svd.singular_values.size();
  require(n >= 2, "extract_second_smallest: need n >= 2");
  const Eigen::Index cand = n - 2;
  const double sigma = svd.singular_values(cand);

  std::vector<Eigen::Index> degen;
  for (Eigen::Index j = 0; j < n; ++j)
    if (std::abs(svd.singular_values(j) - sigma) <= degeneracy_tol) degen.push_back(j);

  auto make = [&](Vector u, Vector v) {
    detail::canonicalize_sign(u, v);
    return SingularPair{sigma, std::move(u), std::move(v)};
  };
  auto zero_count = [](const Vector& u) {
    const double eta = sign_threshold(u);
    Eigen::Index zeros = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (std::abs(u(i)) <= eta) ++zeros;
    return zeros;
  };

  if (degen.size() < 2) {
    auto pair = make(svd.u.col(cand), svd.v.col(cand));
    if (has_mixed_signs(pair.left, sign_threshold(pair.left))) return pair;
    return std::nullopt;
  }

  const int d = static_cast<int>(degen.size());
  Matrix ud(n, d), vd(n, d);
  for (int j = 0; j < d; ++j) {
    ud.col(j) = svd.u.col(degen[static_cast<std::size_t>(j)]);
    vd.col(j) = svd.v.col(degen[static_cast<std::size_t>(j)]);
  }

  std::optional<SingularPair> best;
  Eigen::Index best_zeros = 0;
  auto consider = [&](SingularPair pair) {
    if (!has_mixed_signs(pair.left, sign_threshold(pair.left))) return false;
    const Eigen::Index zeros = zero_count(pair.left);
    if (!best || zeros < best_zeros) {
      best_zeros = zeros;
      best = std::move(pair);
    }
    return best_zeros == 0;
  };

  // Subspace coefficients of the all-ones aggregate; any unit vector
  // orthogonal to it keeps a sign change wherever the aggregate is positive.
  Vector ap = ud.transpose() * Vector::Ones(n);
  if (ap.norm() > 1e-12) {
    ap /= ap.norm();
    for (int attempt = 0; attempt < 4; ++attempt) {
      Vector ag = ud.transpose() * detail::probe_vector(n, attempt);
      Vector au = ag - ap.dot(ag) * ap;
      if (au.norm() <= 1e-12) continue;
      au /= au.norm();
      if (consider(make(ud * au, vd * au))) return best;
    }
  }

  if (consider(make(svd.u.col(cand), svd.v.col(cand)))) return best;
  for (Eigen::Index j : degen) {
    if (j == cand) continue;
    if (consider(make(svd.u.col(j), svd.v.col(j)))) return best;
  }
  if (best) return best;

  // Everything so far was uniform-sign; orthonormality then forces disjoint
  // supports, so the difference of any two basis vectors has both signs.
  const Eigen::Index other = degen[0] == cand ? degen[1] : degen[0];
  Vector uc = svd.u.col(cand), vc = svd.v.col(cand);
  Vector uo = svd.u.col(other), vo = svd.v.col(other);
  detail::canonicalize_sign(uc, vc);
  detail::canonicalize_sign(uo, vo);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto pair = make((uc - uo) * inv_sqrt2, (vc - vo) * inv_sqrt2);
  if (has_mixed_signs(pair.left, sign_threshold(pair.left))) return pair;
  return std::nullopt;
}

/// SVD-based extraction of (sigma_{n-1}, u, v) for a square matrix M, with u
/// guaranteed to have mixed signs; nullopt signals that no mixed-sign left
/// singular vector is available so a caller can stop splitting.
inline std::optional<SingularPair> second_smallest_pair(const Matrix& m,
                                                        double degeneracy_tol = 1e-10) {
  require(m.rows() >= 2, "second_smallest_pair: need n >= 2");
  return extract_second_smallest(full_svd(m), degeneracy_tol);
}

/// Spectral radius and Perron vector of a nonnegative matrix.
struct PerronResult {
  double rho = 0.0;
  Vector vec;            // unit (2-norm), nonnegative
  bool converged = false;
  int iterations = 0;
};

/// Power iteration on M + I (the shift keeps periodic chains from cycling;
/// it changes no eigenvectors and shifts every eigenvalue by one). Stops when
/// successive Rayleigh quotients differ by < 1e-12, or flags non-convergence
/// after 1e5 iterations.
inline PerronResult spectral_radius(const Matrix& m) {
  require(m.rows() == m.cols(), "spectral_radius: matrix must be square");
  require(all_finite(m), "spectral_radius: non-finite entry");
  require((m.array() >= -kNegativeDust).all(), "spectral_radius: negative entry");
  const auto n = m.rows();
  constexpr int kMaxIter = 100000;
  constexpr double kTol = 1e-12;

  Vector x = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double prev = std::numeric_limits<double>::quiet_NaN();
  PerronResult out;
  for (int it = 0; it < kMaxIter; ++it) {
    Vector y = m * x + x;
    double rayleigh = x.dot(y);  // Rayleigh quotient of M + I at unit x
    out.rho = rayleigh - 1.0;
    out.iterations = it + 1;
    if (it > 0 && std::abs(rayleigh - prev) < kTol) {
      out.converged = true;
      break;
    }
    prev = rayleigh;
    x = y / y.norm();  // y >= x entrywise, so the norm stays >= 1
  }
  out.vec = x.cwiseMax(0.0);
  double nx = out.vec.norm();
  if (nx > 0.0) out.vec /= nx;
  if (out.rho < 0.0) out.rho = 0.0;
  return out;
}

}  // namespace lsvc

#endif  // LSVCLUSTER_SVD_HPP
