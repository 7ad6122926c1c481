#ifndef LSVCLUSTER_MATRIX_HPP
#define LSVCLUSTER_MATRIX_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsvc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr double kStochasticTol = 1e-9;   // row-sum validation slack
constexpr double kNegativeDust = 1e-12;   // negatives above this are clamped, below rejected

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// Sorted set of 0-based state indices inside an n-state space.
class IndexSet {
 public:
  IndexSet() = default;

  IndexSet(std::vector<int> indices, int n) : idx_(std::move(indices)), n_(n) {
    require(n_ >= 0, "IndexSet: negative ambient size");
    std::sort(idx_.begin(), idx_.end());
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      require(idx_[i] >= 0 && idx_[i] < n_, "IndexSet: index out of range");
      require(i == 0 || idx_[i] != idx_[i - 1], "IndexSet: duplicate index");
    }
  }

  static IndexSet full(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return IndexSet(std::move(v), n);
  }

  const std::vector<int>& indices() const { return idx_; }
  int ambient_size() const { return n_; }
  int size() const { return static_cast<int>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  int operator[](int i) const { return idx_[static_cast<std::size_t>(i)]; }
  bool contains(int i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

  IndexSet complement() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n_ - size()));
    std::size_t k = 0;
    for (int i = 0; i < n_; ++i) {
      if (k < idx_.size() && idx_[k] == i) { ++k; continue; }
      out.push_back(i);
    }
    return IndexSet(std::move(out), n_);
  }

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.n_ == b.n_ && a.idx_ == b.idx_;
  }

 private:
  std::vector<int> idx_;
  int n_ = 0;
};

namespace detail {

// Clamps floating-point dust in [-kNegativeDust, 0) to zero; rejects anything
// more negative.
inline void clamp_negative_dust(Matrix& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      double& e = m(i, j);
      if (e < 0.0) {
        if (e < -kNegativeDust)
          throw std::invalid_argument(std::string(what) + ": negative entry " +
                                      std::to_string(e));
        e = 0.0;
      }
    }
  }
}

}  // namespace detail

/// Square nonnegative matrix whose rows each sum to 1. Rows within `tol` of
/// unit sum are accepted and then rescaled so each sums to 1.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix m, double tol = kStochasticTol) : m_(std::move(m)) {
    require(m_.rows() >= 1 && m_.rows() == m_.cols(), "StochasticMatrix: must be square, n >= 1");
    require(all_finite(m_), "StochasticMatrix: non-finite entry");
    detail::clamp_negative_dust(m_, "StochasticMatrix");
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      double s = m_.row(i).sum();
      if (std::abs(s - 1.0) > tol)
        throw std::invalid_argument("StochasticMatrix: row " + std::to_string(i) +
                                    " sums to " + std::to_string(s));
      m_.row(i) /= s;
      // nudge the largest entry until the row sums to 1 without residue
      for (int pass = 0; pass < 4; ++pass) {
        const double residue = 1.0 - m_.row(i).sum();
        if (residue == 0.0) break;
        Eigen::Index jmax;
        m_.row(i).maxCoeff(&jmax);
        m_(i, jmax) += residue;
      }
    }
  }

  const Matrix& mat() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Square nonnegative matrix whose rows sum to at most 1.
class SubStochasticMatrix {
 public:
  explicit SubStochasticMatrix(Matrix m, double tol = kStochasticTol) : m_(std::move(m)) {
    require(m_.rows() >= 1 && m_.rows() == m_.cols(), "SubStochasticMatrix: must be square, n >= 1");
    require(all_finite(m_), "SubStochasticMatrix: non-finite entry");
    detail::clamp_negative_dust(m_, "SubStochasticMatrix");
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      double s = m_.row(i).sum();
      if (s > 1.0 + tol)
        throw std::invalid_argument("SubStochasticMatrix: row " + std::to_string(i) +
                                    " sums to " + std::to_string(s) + " > 1");
    }
  }

  SubStochasticMatrix(const StochasticMatrix& t) : m_(t.mat()) {}  // NOLINT: intentional implicit widening

  const Matrix& mat() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }

 private:
  Matrix m_;
};

/// diag(row sums) - A; equals I - A when A is stochastic.
inline Matrix laplacian(const Matrix& a) {
  require(a.rows() == a.cols(), "laplacian: matrix must be square");
  Matrix l = -a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) l(i, i) += a.row(i).sum();
  return l;
}

/// Dangling node fix: each row's deficit 1 - rowsum is spread evenly over the
/// row, producing a stochastic matrix.
inline StochasticMatrix dnf(const SubStochasticMatrix& t) {
  const Matrix& m = t.mat();
  const auto n = m.rows();
  Matrix out = m;
  for (Eigen::Index i = 0; i < n; ++i) {
    double deficit = 1.0 - m.row(i).sum();
    out.row(i).array() += deficit / static_cast<double>(n);
  }
  return StochasticMatrix(std::move(out));
}

inline Matrix principal_submatrix(const Matrix& m, const IndexSet& s) {
  require(m.rows() == m.cols(), "principal_submatrix: matrix must be square");
  require(s.empty() || s[s.size() - 1] < m.rows(), "principal_submatrix: index out of range");
  const int k = s.size();
  Matrix out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = m(s[i], s[j]);
  return out;
}

enum class ZeroRowPolicy { error, uniform };

/// Divides each row by its sum. A zero row either raises an error or is
/// replaced by the uniform row, depending on policy.
inline StochasticMatrix row_normalize(const Matrix& a, ZeroRowPolicy policy = ZeroRowPolicy::error) {
  require(a.rows() == a.cols(), "row_normalize: matrix must be square");
  require(all_finite(a), "row_normalize: non-finite entry");
  Matrix m = a;
  detail::clamp_negative_dust(m, "row_normalize");
  const auto n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = m.row(i).sum();
    if (s <= 0.0) {
      if (policy == ZeroRowPolicy::error)
        throw std::invalid_argument("row_normalize: zero row " + std::to_string(i));
      m.row(i).setConstant(1.0 / static_cast<double>(n));
    } else {
      m.row(i) /= s;
    }
  }
  return StochasticMatrix(std::move(m));
}

/// Embeds an m x n biadjacency matrix D as the symmetric (m+n) x (m+n)
/// adjacency [[0, D], [D^T, 0]] of the corresponding bipartite graph.
inline Matrix bipartite_embed(const Matrix& d) {
  require(all_finite(d), "bipartite_embed: non-finite entry");
  require((d.array() >= 0.0).all(), "bipartite_embed: negative entry");
  const auto m = d.rows(), n = d.cols();
  Matrix a = Matrix::Zero(m + n, m + n);
  a.block(0, m, m, n) = d;
  a.block(m, 0, n, m) = d.transpose();
  return a;
}

// Norm helpers used throughout the oracle suites.
inline double inf_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }
inline double one_norm(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }
inline double frob_norm(const Matrix& m) { return m.norm(); }

}  // namespace lsvc

#endif  // LSVCLUSTER_MATRIX_HPP
