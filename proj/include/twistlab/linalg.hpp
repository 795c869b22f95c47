#pragma once

// Rank-revealing decompositions and the Subspace carrier type.  Rank
// tolerances are always relative to the largest singular value.

#include "twistlab/spaces.hpp"

#include <Eigen/SVD>

namespace twistlab {

inline constexpr double kDefaultRankTol = 1e-10;

namespace detail {
inline Eigen::JacobiSVD<Matrix> svd_of(const Matrix& A, unsigned options) {
  return Eigen::JacobiSVD<Matrix>(A, options);
}
inline double sv_threshold(const Eigen::JacobiSVD<Matrix>& svd, double rel_tol) {
  double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  return rel_tol * std::max(top, 1e-300);
}
}  // namespace detail

inline int numeric_rank(const Matrix& A, double rel_tol = kDefaultRankTol) {
  if (A.size() == 0) return 0;
  auto svd = detail::svd_of(A, 0);
  double thr = detail::sv_threshold(svd, rel_tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > thr) ++r;
  return r;
}

// Orthonormal basis of range(A) as columns.
inline Matrix orthonormal_range(const Matrix& A, double rel_tol = kDefaultRankTol) {
  if (A.cols() == 0 || A.size() == 0) return Matrix(A.rows(), 0);
  auto svd = detail::svd_of(A, Eigen::ComputeThinU);
  double thr = detail::sv_threshold(svd, rel_tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > thr) ++r;
  return svd.matrixU().leftCols(r);
}

// Orthonormal basis of the nullspace of A.
inline Matrix kernel_basis(const Matrix& A, double rel_tol = kDefaultRankTol) {
  if (A.cols() == 0) return Matrix(0, 0);
  if (A.rows() == 0) return Matrix::Identity(A.cols(), A.cols());
  auto svd = detail::svd_of(A, Eigen::ComputeFullV);
  double thr = detail::sv_threshold(svd, rel_tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > thr) ++r;
  return svd.matrixV().rightCols(A.cols() - r);
}

// Orthonormal basis of the orthogonal complement of range(B).
inline Matrix orthogonal_complement(const Matrix& B, Eigen::Index ambient,
                                    double rel_tol = kDefaultRankTol) {
  if (B.cols() == 0) return Matrix::Identity(ambient, ambient);
  return kernel_basis(B.transpose(), rel_tol);
}

// Minimum-Euclidean-norm least-squares solution of A f = b; optional residual.
inline Vector min_norm_solution(const Matrix& A, const Vector& b, double rel_tol = kDefaultRankTol,
                                double* residual = nullptr) {
  auto svd = detail::svd_of(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double thr = detail::sv_threshold(svd, rel_tol);
  Vector c = svd.matrixU().transpose() * b;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    double s = svd.singularValues()[i];
    c[i] = (s > thr) ? c[i] / s : 0.0;
  }
  Vector f = svd.matrixV() * c;
  if (residual) *residual = (A * f - b).norm();
  return f;
}

// Moore-Penrose pseudoinverse with relative truncation.
inline Matrix pseudo_inverse(const Matrix& A, double rel_tol = kDefaultRankTol) {
  if (A.size() == 0) return Matrix(A.cols(), A.rows());
  auto svd = detail::svd_of(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double thr = detail::sv_threshold(svd, rel_tol);
  Matrix Sp = Matrix::Zero(svd.matrixV().cols(), svd.matrixU().cols());
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    double s = svd.singularValues()[i];
    if (s > thr) Sp(i, i) = 1.0 / s;
  }
  return svd.matrixV() * Sp * svd.matrixU().transpose();
}

inline double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return detail::svd_of(A, 0).singularValues()[0];
}

inline double smallest_singular_value(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  auto sv = detail::svd_of(A, 0).singularValues();
  return sv[sv.size() - 1];
}

// Basis of the intersection range(Bm) cap range(Bn) via the kernel of the
// horizontally stacked coefficient map.
inline Matrix intersection_basis(const Matrix& Bm, const Matrix& Bn,
                                 double rel_tol = kDefaultRankTol) {
  if (Bm.cols() == 0 || Bn.cols() == 0) return Matrix(Bm.rows(), 0);
  Matrix S(Bm.rows(), Bm.cols() + Bn.cols());
  S << Bm, -Bn;
  Matrix K = kernel_basis(S, rel_tol);
  if (K.cols() == 0) return Matrix(Bm.rows(), 0);
  Matrix vecs = Bm * K.topRows(Bm.cols());
  return orthonormal_range(vecs, rel_tol);
}

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

class Subspace {
 public:
  // Columns of `basis` must be independent up to the rank tolerance.
  Subspace(FiniteSpace ambient, Matrix basis, double rank_tol = kDefaultRankTol)
      : ambient_(std::move(ambient)), basis_(std::move(basis)), rank_tol_(rank_tol) {
    if (basis_.rows() != ambient_.dim)
      throw DimensionMismatch("Subspace: basis rows do not match ambient dimension");
    if (basis_.cols() > 0) {
      int r = numeric_rank(basis_, rank_tol_);
      if (r != basis_.cols())
        throw InvalidParameter("Subspace: basis columns dependent (rank " + std::to_string(r) +
                               " of " + std::to_string(basis_.cols()) + ")");
      onb_ = orthonormal_range(basis_, rank_tol_);
    } else {
      onb_ = Matrix(ambient_.dim, 0);
    }
  }

  static Subspace zero(FiniteSpace ambient) {
    Matrix empty(ambient.dim, 0);
    return Subspace(std::move(ambient), std::move(empty), kDefaultRankTol);
  }

  static Subspace span(FiniteSpace ambient, const Matrix& vectors,
                       double rank_tol = kDefaultRankTol) {
    return Subspace(ambient, orthonormal_range(vectors, rank_tol), rank_tol);
  }

  static Subspace full(FiniteSpace ambient) {
    Matrix id = Matrix::Identity(ambient.dim, ambient.dim);
    return Subspace(std::move(ambient), id);
  }

  const FiniteSpace& ambient() const { return ambient_; }
  const Matrix& basis() const { return basis_; }
  const Matrix& onb() const { return onb_; }
  int dim() const { return static_cast<int>(onb_.cols()); }
  double rank_tol() const { return rank_tol_; }

  bool contains(const Subspace& other, double gap_tol = 1e-9) const {
    if (other.dim() == 0) return true;
    Matrix resid = other.onb() - onb_ * (onb_.transpose() * other.onb());
    return spectral_norm(resid) < gap_tol;
  }

 private:
  FiniteSpace ambient_;
  Matrix basis_;
  Matrix onb_;
  double rank_tol_;
};

namespace detail {
// zero-subspace helper usable before Subspace::zero is well-formed
inline Matrix empty_basis(int n) { return Matrix(n, 0); }
}  // namespace detail

}  // namespace twistlab
