#pragma once

// Finite matrix model of a pair of interpolators (Psi, Phi) on H = R^m with
// target Sigma = R^k.  Quotient norms, near-optimal preimage selectors, the
// induced derivation Omega = Psi B_Phi, and the set-level identities for its
// domain and range become exact linear-algebra computations here.

#include "twistlab/geometry.hpp"

namespace twistlab {

struct MatrixInterpolatorPair {
  Matrix Psi;  // k x m
  Matrix Phi;  // k x m
  FiniteSpace H_norm;
  FiniteSpace Sigma_norm;
  double rank_tol = kDefaultRankTol;

  MatrixInterpolatorPair(Matrix psi, Matrix phi)
      : Psi(std::move(psi)), Phi(std::move(phi)),
        H_norm(FiniteSpace::euclidean(std::max<int>(1, static_cast<int>(Phi.cols())))),
        Sigma_norm(FiniteSpace::euclidean(std::max<int>(1, static_cast<int>(Phi.rows())))) {
    validate();
  }

  MatrixInterpolatorPair(Matrix psi, Matrix phi, FiniteSpace h_norm, FiniteSpace sigma_norm,
                         double tol = kDefaultRankTol)
      : Psi(std::move(psi)), Phi(std::move(phi)), H_norm(std::move(h_norm)),
        Sigma_norm(std::move(sigma_norm)), rank_tol(tol) {
    validate();
  }

  int m() const { return static_cast<int>(Psi.cols()); }
  int k() const { return static_cast<int>(Psi.rows()); }

 private:
  void validate() const {
    if (Psi.rows() != Phi.rows() || Psi.cols() != Phi.cols())
      throw DimensionMismatch("MatrixInterpolatorPair: Psi and Phi shapes differ");
    if (Psi.rows() < 1 || Psi.cols() < 1)
      throw InvalidParameter("MatrixInterpolatorPair: need m, k >= 1");
    if (!Psi.allFinite() || !Phi.allFinite())
      throw InvalidParameter("MatrixInterpolatorPair: non-finite entries");
    if (H_norm.dim != Psi.cols() || Sigma_norm.dim != Psi.rows())
      throw DimensionMismatch("MatrixInterpolatorPair: norm dimensions do not match matrices");
  }
};

enum class SelectorMethod { exact_euclidean, convex_minimize };

struct SelectorConfig {
  double epsilon = 0.0;
  SelectorMethod method = SelectorMethod::exact_euclidean;
  OptOptions opt;
};

inline Subspace kernel(const Matrix& A, const FiniteSpace& ambient,
                       double tol = kDefaultRankTol) {
  return Subspace(ambient, kernel_basis(A, tol), tol);
}

inline Subspace kernel(const Matrix& A, double tol = kDefaultRankTol) {
  return kernel(A, FiniteSpace::euclidean(static_cast<int>(A.cols())), tol);
}

namespace detail {

// Any preimage of x under Phi; throws NotInRange when the least-squares
// residual is above tolerance.
inline Vector preimage_or_throw(const MatrixInterpolatorPair& pair, const Vector& x) {
  require_dim(x, pair.k(), "preimage");
  double resid = 0.0;
  Vector f = min_norm_solution(pair.Phi, x, pair.rank_tol, &resid);
  double scale = std::max(1.0, x.norm());
  if (resid > 1e-8 * scale)
    throw NotInRange("x outside range(Phi): residual " + std::to_string(resid));
  return f;
}

}  // namespace detail

// Quotient norm ||x||_Phi = dist(f0, ker Phi) in the H-norm, f0 any preimage.
inline double quotient_norm(const MatrixInterpolatorPair& pair, const Vector& x,
                            const SelectorConfig& cfg = {}) {
  Vector f0 = detail::preimage_or_throw(pair, x);
  if (pair.H_norm.is_euclidean()) return f0.norm();  // min-norm solution is orthogonal to ker Phi
  Subspace K = kernel(pair.Phi, pair.H_norm, pair.rank_tol);
  return dist_to_subspace(f0, K, cfg.opt);
}

// Homogeneous near-optimal preimage selector B_Phi.
inline Vector b_select(const MatrixInterpolatorPair& pair, const SelectorConfig& cfg,
                       const Vector& x) {
  if (cfg.method == SelectorMethod::exact_euclidean) {
    if (!pair.H_norm.is_euclidean())
      throw InvalidParameter("b_select: exact_euclidean selector requires Euclidean H-norm");
    return detail::preimage_or_throw(pair, x);  // min-norm least squares, linear in x
  }
  // Convex-minimize: canonicalize scale and sign so the selector is exactly
  // homogeneous, then minimize the H-norm over the preimage fiber.
  double s = x.cwiseAbs().maxCoeff();
  if (s == 0.0) {
    (void)detail::preimage_or_throw(pair, x);
    return Vector::Zero(pair.m());
  }
  double sgn = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      sgn = x[i] > 0 ? 1.0 : -1.0;
      break;
    }
  }
  Vector xc = x / (s * sgn);
  Vector f0 = detail::preimage_or_throw(pair, xc);
  Matrix K = kernel_basis(pair.Phi, pair.rank_tol);
  if (K.cols() == 0) return (s * sgn) * f0;
  auto f = [&](const Vector& c) { return pair.H_norm.norm(f0 - K * c); };
  Vector cbest;
  std::vector<Vector> starts{Vector::Zero(K.cols())};
  multistart_minimize(f, K.cols(), starts, cfg.opt, &cbest);
  return (s * sgn) * (f0 - K * cbest);
}

// The derivation Omega = Psi B_Phi evaluated at x in range(Phi).
inline Vector derivation_omega(const MatrixInterpolatorPair& pair, const SelectorConfig& cfg,
                               const Vector& x) {
  return pair.Psi * b_select(pair, cfg, x);
}

// ---------------------------------------------------------------------------
// Set-level identities for Dom and Ran
// ---------------------------------------------------------------------------

struct DomRanReport {
  double dom_gap = 0.0;  // gap between the constructed domain and Phi(ker Psi)
  double ran_gap = 0.0;  // gap between the constructed range and range(Psi)
  int symmetric_membership_violations = 0;
  double max_membership_residual = 0.0;
  int samples = 0;
};

namespace detail {

// Subspace {x in range(Phi): Omega x in span(S_onb)} for linear Omega.
inline Matrix constrained_domain(const Matrix& omega, const Matrix& range_phi_onb,
                                 const Matrix& S_onb, double tol) {
  if (range_phi_onb.cols() == 0) return range_phi_onb;
  Matrix W = omega * range_phi_onb;
  Matrix P = W - S_onb * (S_onb.transpose() * W);  // component outside S
  Matrix C = kernel_basis(P, tol);
  if (C.cols() == 0) return Matrix(range_phi_onb.rows(), 0);
  return orthonormal_range(range_phi_onb * C, tol);
}

}  // namespace detail

inline DomRanReport dom_ran_check(const MatrixInterpolatorPair& pair,
                                  const SelectorConfig& cfg = {}, int samples = 32,
                                  std::uint64_t seed = 7) {
  (void)cfg;
  const double tol = pair.rank_tol;
  DomRanReport rep;
  rep.samples = samples;

  Matrix Kphi = kernel_basis(pair.Phi, tol);
  Matrix Kpsi = kernel_basis(pair.Psi, tol);
  Matrix RPhi = orthonormal_range(pair.Phi, tol);
  Matrix RPsi = orthonormal_range(pair.Psi, tol);
  Matrix S = orthonormal_range(pair.Psi * Kphi, tol);  // Psi(ker Phi)
  Matrix omega = pair.Psi * pseudo_inverse(pair.Phi, tol);

  // Dom(Omega) = {x in X_Phi : Omega x in Psi(ker Phi)} vs Phi(ker Psi)
  Matrix dom = detail::constrained_domain(omega, RPhi, S, tol);
  Matrix dom_oracle = orthonormal_range(pair.Phi * Kpsi, tol);
  rep.dom_gap = subspace_gap(dom, dom_oracle);

  // Ran(Omega) = Omega(X_Phi) + Psi(ker Phi) vs X_Psi = range(Psi)
  Matrix ran_pieces(pair.k(), RPhi.cols() + S.cols());
  ran_pieces << omega * RPhi, S;
  Matrix ran = orthonormal_range(ran_pieces, tol);
  rep.ran_gap = subspace_gap(ran, RPsi);

  // Symmetric membership: X_{Phi,Psi} = {(w, x): x in X_Psi, w - Omega_sym x in Phi(ker Psi)}
  Matrix omega_sym = pair.Phi * pseudo_inverse(pair.Psi, tol);
  Matrix S_sym = orthonormal_range(pair.Phi * Kpsi, tol);
  Matrix stacked(2 * pair.k(), pair.m());
  stacked << pair.Phi, pair.Psi;
  for (int t = 0; t < samples; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    // forward: a point of X_{Phi,Psi} satisfies the membership characterization
    Vector h = rng.gaussian_vector(pair.m());
    Vector w = pair.Phi * h;
    Vector x = pair.Psi * h;
    Vector d = w - omega_sym * x;
    double fwd = (d - S_sym * (S_sym.transpose() * d)).norm() / std::max(1.0, d.norm());
    // backward: a pair built from the characterization lies in X_{Phi,Psi}
    Vector xs = pair.Psi * rng.gaussian_vector(pair.m());
    Vector ws = omega_sym * xs;
    if (S_sym.cols() > 0) ws += S_sym * rng.gaussian_vector(static_cast<int>(S_sym.cols()));
    Vector rhs(2 * pair.k());
    rhs << ws, xs;
    double resid = 0.0;
    (void)min_norm_solution(stacked, rhs, tol, &resid);
    double bwd = resid / std::max(1.0, rhs.norm());
    double worst = std::max(fwd, bwd);
    rep.max_membership_residual = std::max(rep.max_membership_residual, worst);
    if (worst > 1e-9) ++rep.symmetric_membership_violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Splitting equivalences
// ---------------------------------------------------------------------------

struct SplittingReport {
  bool kernels_span_h = false;       // (1) H = ker Phi + ker Psi
  bool phi_onto_from_ker_psi = false;  // (2) range(Phi) = Phi(ker Psi)
  bool psi_onto_from_ker_phi = false;  // (3) range(Psi) = Psi(ker Phi)
  bool dom_psi_phi_full = false;     // alias of (2): Dom(Omega_{Psi,Phi}) = X_Phi
  bool dom_phi_psi_full = false;     // alias of (3): Dom(Omega_{Phi,Psi}) = X_Psi
  bool agree = false;
};

inline SplittingReport splitting_conditions(const MatrixInterpolatorPair& pair) {
  const double tol = pair.rank_tol;
  Matrix Kphi = kernel_basis(pair.Phi, tol);
  Matrix Kpsi = kernel_basis(pair.Psi, tol);
  SplittingReport rep;
  Matrix KK(pair.m(), Kphi.cols() + Kpsi.cols());
  KK << Kphi, Kpsi;
  rep.kernels_span_h = (numeric_rank(KK, tol) == pair.m());
  rep.phi_onto_from_ker_psi = (numeric_rank(pair.Phi * Kpsi, tol) == numeric_rank(pair.Phi, tol));
  rep.psi_onto_from_ker_phi = (numeric_rank(pair.Psi * Kphi, tol) == numeric_rank(pair.Psi, tol));
  rep.dom_psi_phi_full = rep.phi_onto_from_ker_psi;
  rep.dom_phi_psi_full = rep.psi_onto_from_ker_phi;
  rep.agree = (rep.kernels_span_h == rep.phi_onto_from_ker_psi) &&
              (rep.kernels_span_h == rep.psi_onto_from_ker_phi);
  return rep;
}

// ---------------------------------------------------------------------------
// Domain relative to a suitable subspace Z
// ---------------------------------------------------------------------------

// {x in X_Phi : Omega x in Z}; Z must contain Psi(ker Phi).
inline Subspace domain_with_z(const MatrixInterpolatorPair& pair, const SelectorConfig& cfg,
                              const Subspace& Z) {
  (void)cfg;
  const double tol = pair.rank_tol;
  if (Z.ambient().dim != pair.k())
    throw DimensionMismatch("domain_with_z: Z lives in the wrong ambient space");
  Matrix S = orthonormal_range(pair.Psi * kernel_basis(pair.Phi, tol), tol);
  if (S.cols() > 0) {
    Matrix ZS(pair.k(), Z.dim() + S.cols());
    ZS << Z.onb(), S;
    if (numeric_rank(ZS, tol) != Z.dim())
      throw UnsuitableZ("domain_with_z: Z does not contain Psi(ker Phi)");
  }
  Matrix RPhi = orthonormal_range(pair.Phi, tol);
  Matrix omega = pair.Psi * pseudo_inverse(pair.Phi, tol);
  Matrix dom = detail::constrained_domain(omega, RPhi, Z.onb(), tol);
  return Subspace(FiniteSpace::euclidean(pair.k()), dom, tol);
}

// Phi(Psi^{-1} Z): the image under Phi of the preimage of Z under Psi.
inline Subspace phi_of_psi_preimage(const MatrixInterpolatorPair& pair, const Subspace& Z) {
  const double tol = pair.rank_tol;
  Matrix Zperp = orthogonal_complement(Z.onb(), pair.k(), tol);
  Matrix pre = kernel_basis(Zperp.transpose() * pair.Psi, tol);
  Matrix img = orthonormal_range(pair.Phi * pre, tol);
  return Subspace(FiniteSpace::euclidean(pair.k()), img, tol);
}

// ---------------------------------------------------------------------------
// Quotient-space gap identity
// ---------------------------------------------------------------------------

struct QuotientGapReport {
  double lhs = 0.0;  // gap of the two kernel images inside the quotient
  double rhs = 0.0;  // gap(ker Phi, ker Psi) in H
  double difference = 0.0;
};

// g(Psi(ker Phi), Phi(ker Psi)) computed in H / (ker Psi cap ker Phi) with the
// quotient norm, against g(ker Phi, ker Psi) in H.  Euclidean H only: there
// the quotient norm is realized isometrically on the orthogonal complement.
inline QuotientGapReport quotient_gap_lemma(const MatrixInterpolatorPair& pair) {
  if (!pair.H_norm.is_euclidean())
    throw InvalidParameter("quotient_gap_lemma: supported for Euclidean H-norm only");
  const double tol = pair.rank_tol;
  Matrix Kphi = kernel_basis(pair.Phi, tol);
  Matrix Kpsi = kernel_basis(pair.Psi, tol);
  Matrix stacked(2 * pair.k(), pair.m());
  stacked << pair.Psi, pair.Phi;
  Matrix N = kernel_basis(stacked, tol);  // ker Psi cap ker Phi
  Matrix Q = orthogonal_complement(N, pair.m(), tol);

  Matrix A = orthonormal_range(Q.transpose() * Kphi, tol);
  Matrix B = orthonormal_range(Q.transpose() * Kpsi, tol);
  QuotientGapReport rep;
  rep.lhs = subspace_gap(A, B);
  rep.rhs = subspace_gap(orthonormal_range(Kphi, tol), orthonormal_range(Kpsi, tol));
  rep.difference = std::abs(rep.lhs - rep.rhs);
  return rep;
}

}  // namespace twistlab
