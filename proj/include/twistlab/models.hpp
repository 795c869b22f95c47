#pragma once

// Finite matrix models of evaluation families.  Coefficient vectors
// (b_0, ..., b_N) with b_j in R^d stand in for analytic functions
// z -> sum z^j b_j; evaluation and derivative-evaluation at interior points
// are then explicit block-row matrices, and any d x d operator tau lifts to
// the block-diagonal T acting coefficient-wise, which commutes with every
// evaluation row.

#include "twistlab/interpolator.hpp"

namespace twistlab {

// d x d(N+1) block row [t^0 I, t^1 I, ..., t^N I].
inline Matrix evaluation_row(double t, int degree, int block_dim) {
  if (degree < 1 || block_dim < 1) throw InvalidParameter("evaluation_row: need degree, d >= 1");
  Matrix M = Matrix::Zero(block_dim, block_dim * (degree + 1));
  double tp = 1.0;
  for (int j = 0; j <= degree; ++j) {
    M.block(0, j * block_dim, block_dim, block_dim) = tp * Matrix::Identity(block_dim, block_dim);
    tp *= t;
  }
  return M;
}

// d x d(N+1) block row of the derivative evaluation [0, I, 2t I, ..., N t^{N-1} I].
inline Matrix derivative_row(double t, int degree, int block_dim) {
  if (degree < 1 || block_dim < 1) throw InvalidParameter("derivative_row: need degree, d >= 1");
  Matrix M = Matrix::Zero(block_dim, block_dim * (degree + 1));
  double tp = 1.0;
  for (int j = 1; j <= degree; ++j) {
    M.block(0, j * block_dim, block_dim, block_dim) =
        (static_cast<double>(j) * tp) * Matrix::Identity(block_dim, block_dim);
    tp *= t;
  }
  return M;
}

// Pair of evaluations at two points: the translation model (Psi, Phi) = (eval nu, eval theta).
inline MatrixInterpolatorPair evaluation_pair(double theta, double nu, int degree,
                                              int block_dim = 1) {
  return MatrixInterpolatorPair(evaluation_row(nu, degree, block_dim),
                                evaluation_row(theta, degree, block_dim));
}

// Jet pair at one point: (Psi, Phi) = (derivative eval, eval).
inline MatrixInterpolatorPair jet_pair(double theta, int degree, int block_dim = 1) {
  return MatrixInterpolatorPair(derivative_row(theta, degree, block_dim),
                                evaluation_row(theta, degree, block_dim));
}

// Lift of a d x d operator to block-diagonal action on coefficients.
inline Matrix lift_blockdiag(const Matrix& tau, int copies) {
  if (tau.rows() != tau.cols()) throw InvalidParameter("lift_blockdiag: tau must be square");
  int d = static_cast<int>(tau.rows());
  Matrix T = Matrix::Zero(d * copies, d * copies);
  for (int j = 0; j < copies; ++j) T.block(j * d, j * d, d, d) = tau;
  return T;
}

// First-order model of the weighted evaluation family: coefficients (a, b)
// represent f(z) = r^z (a + z b) with r = w1/w0, so
//   Phi_t = [diag(r^t), t diag(r^t)],  Psi_t = d/dz at t.
inline MatrixInterpolatorPair weighted_two_point_pair(const Vector& w0, const Vector& w1,
                                                      double t) {
  require_dim(w1, w0.size(), "weighted_two_point_pair");
  const int d = static_cast<int>(w0.size());
  Matrix Phi = Matrix::Zero(d, 2 * d), Psi = Matrix::Zero(d, 2 * d);
  for (int i = 0; i < d; ++i) {
    double r = w1[i] / w0[i];
    double rt = std::pow(r, t);
    double lr = std::log(r);
    Phi(i, i) = rt;
    Phi(i, d + i) = t * rt;
    Psi(i, i) = rt * lr;
    Psi(i, d + i) = rt * (t * lr + 1.0);
  }
  return MatrixInterpolatorPair(Psi, Phi);
}

}  // namespace twistlab
