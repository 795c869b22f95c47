#pragma once

// Gap and minimum-gap geometry between subspaces, stability of
// complementation under gap perturbation, and the operator-norm distance
// between interpolators.
//
// Euclidean ambient norms get exact principal-angle computations (certified);
// general norms get seeded multi-start search values reported as lower bounds.

#include "twistlab/linalg.hpp"

namespace twistlab {

struct GapOptions {
  int restarts = 64;  // sphere-search restarts for non-Euclidean ambients
  std::uint64_t seed = 0x9a9ULL;
  OptOptions opt;  // inner distance minimization
};

// Distance from x to the subspace N in the ambient norm of N.
inline double dist_to_subspace(const Vector& x, const Subspace& N, const OptOptions& opt = {}) {
  require_dim(x, N.ambient().dim, "dist_to_subspace");
  if (N.dim() == 0) return N.ambient().norm(x);
  if (N.ambient().is_euclidean()) {
    return (x - N.onb() * (N.onb().transpose() * x)).norm();
  }
  const Matrix& B = N.onb();
  auto f = [&](const Vector& c) { return N.ambient().norm(x - B * c); };
  std::vector<Vector> starts;
  starts.push_back(Vector::Zero(N.dim()));
  starts.push_back(B.transpose() * x);  // Euclidean projection coefficients
  return multistart_minimize(f, N.dim(), starts, opt);
}

namespace detail {

// One-sided deviation sup_{x in S_M} dist(x, N); exact in the Euclidean case.
inline double one_sided_deviation(const Subspace& M, const Subspace& N, const GapOptions& go,
                                  bool* certified) {
  if (M.dim() == 0) {
    if (certified) *certified = true;
    return 0.0;  // supremum over the empty sphere
  }
  if (M.ambient().is_euclidean()) {
    if (certified) *certified = true;
    if (N.dim() == 0) return 1.0;
    Matrix resid = M.onb() - N.onb() * (N.onb().transpose() * M.onb());
    return spectral_norm(resid);
  }
  if (certified) *certified = false;
  const Matrix& B = M.onb();
  const FiniteSpace& amb = M.ambient();
  auto normalize = [&](const Vector& c) -> Vector {
    Vector cc = c;
    double nn = amb.norm(B * cc);
    if (nn == 0.0) {
      cc = Vector::Unit(M.dim(), 0);
      nn = amb.norm(B * cc);
    }
    return cc / nn;
  };
  auto value = [&](const Vector& c) { return dist_to_subspace(B * c, N, go.opt); };
  return multistart_sphere_max(value, normalize, M.dim(), go.restarts, go.seed);
}

// Minimum gap gamma(M, N) = inf_{u in M \ N} dist(u, N) / dist(u, M cap N).
// Convention: 1 when M is contained in N (empty competitor set).
inline double minimum_gap_impl(const Subspace& M, const Subspace& N, const GapOptions& go,
                               bool* certified) {
  if (M.dim() == 0) {
    if (certified) *certified = true;
    return 1.0;
  }
  if (M.ambient().is_euclidean()) {
    if (certified) *certified = true;
    Matrix I = intersection_basis(M.onb(), N.onb(), M.rank_tol());
    // M' = M cap I-perp: the directions of M transversal to the intersection
    Matrix Mp = M.onb();
    if (I.cols() > 0) Mp = orthonormal_range(M.onb() - I * (I.transpose() * M.onb()), M.rank_tol());
    if (Mp.cols() == 0) return 1.0;  // M inside N
    if (N.dim() == 0) return 1.0;
    double cos_min = spectral_norm(N.onb().transpose() * Mp);
    cos_min = std::min(cos_min, 1.0);
    return std::sqrt(std::max(0.0, 1.0 - cos_min * cos_min));
  }
  if (certified) *certified = false;
  // Sampled upper estimate of the infimum over the transversal sphere of M.
  Matrix I = intersection_basis(M.onb(), N.onb(), M.rank_tol());
  Matrix Mp = M.onb();
  if (I.cols() > 0) Mp = orthonormal_range(M.onb() - I * (I.transpose() * M.onb()), M.rank_tol());
  if (Mp.cols() == 0) return 1.0;
  Subspace Ms(M.ambient(), Mp, M.rank_tol());
  Subspace Is = I.cols() > 0 ? Subspace(M.ambient(), I, M.rank_tol())
                             : Subspace::zero(M.ambient());
  double best = kInf;
  for (int r = 0; r < go.restarts; ++r) {
    Rng rng(go.seed ^ 0x717171ULL, static_cast<std::uint64_t>(r));
    Vector u = Mp * rng.gaussian_vector(static_cast<int>(Mp.cols()));
    double denom = dist_to_subspace(u, Is, go.opt);
    if (denom <= 0) continue;
    best = std::min(best, dist_to_subspace(u, N, go.opt) / denom);
  }
  return std::isfinite(best) ? best : 1.0;
}

}  // namespace detail

struct GapReport {
  double g = 0.0;          // max of the two one-sided deviations
  double gamma_mn = 1.0;   // minimum gap gamma(M, N)
  double gamma_nm = 1.0;   // minimum gap gamma(N, M)
  double R = 0.0;          // stability radius (1/2) min(gamma_mn, gamma_nm)
  bool certified = false;  // exact (Euclidean) vs sampled bound
  int restarts = 0;
  std::uint64_t seed = 0;
};

inline GapReport gap(const Subspace& M, const Subspace& N, const GapOptions& go = {}) {
  if (M.ambient().dim != N.ambient().dim)
    throw DimensionMismatch("gap: subspaces live in different ambient dimensions");
  GapReport rep;
  bool c1 = false, c2 = false, c3 = false, c4 = false;
  double d_mn = detail::one_sided_deviation(M, N, go, &c1);
  double d_nm = detail::one_sided_deviation(N, M, go, &c2);
  rep.g = std::max(d_mn, d_nm);
  rep.gamma_mn = detail::minimum_gap_impl(M, N, go, &c3);
  rep.gamma_nm = detail::minimum_gap_impl(N, M, go, &c4);
  rep.R = 0.5 * std::min(rep.gamma_mn, rep.gamma_nm);
  rep.certified = c1 && c2 && c3 && c4;
  rep.restarts = go.restarts;
  rep.seed = go.seed;
  return rep;
}

inline double minimum_gap(const Subspace& M, const Subspace& N, const GapOptions& go = {}) {
  return detail::minimum_gap_impl(M, N, go, nullptr);
}

// Mutual-gap subspace equality test (Euclidean ambients).
inline double subspace_gap(const Matrix& A_onb, const Matrix& B_onb) {
  auto side = [](const Matrix& P, const Matrix& Q) {
    if (P.cols() == 0) return 0.0;
    if (Q.cols() == 0) return 1.0;
    return spectral_norm(P - Q * (Q.transpose() * P));
  };
  return std::max(side(A_onb, B_onb), side(B_onb, A_onb));
}

// ---------------------------------------------------------------------------
// Stability of complementation under gap perturbation
// ---------------------------------------------------------------------------

struct StabilityReport {
  double R = 0.0;
  double g_m = 0.0, g_n = 0.0;  // g(M1, M), g(N1, N)
  bool hypothesis_met = false;
  bool intersection_applicable = false;  // M cap N = {0}
  bool sum_applicable = false;           // M + N = Z
  bool intersection_preserved = false;
  bool sum_preserved = false;
  bool pass = false;
  bool certified = false;
};

inline StabilityReport stability_check(const Subspace& M, const Subspace& N, const Subspace& M1,
                                       const Subspace& N1, const GapOptions& go = {}) {
  StabilityReport rep;
  GapReport base = gap(M, N, go);
  rep.R = base.R;
  rep.certified = base.certified;
  rep.g_m = gap(M1, M, go).g;
  rep.g_n = gap(N1, N, go).g;
  rep.hypothesis_met = (rep.g_m + rep.g_n < rep.R);

  const int ambient_dim = M.ambient().dim;
  double tol = M.rank_tol();
  Matrix MN(ambient_dim, M.dim() + N.dim());
  MN << M.onb(), N.onb();
  rep.intersection_applicable = (numeric_rank(MN, tol) == M.dim() + N.dim());
  rep.sum_applicable = (numeric_rank(MN, tol) == ambient_dim);

  if (!rep.hypothesis_met) {
    rep.pass = true;  // no claim when the radius hypothesis fails
    return rep;
  }
  Matrix MN1(ambient_dim, M1.dim() + N1.dim());
  MN1 << M1.onb(), N1.onb();
  int r1 = numeric_rank(MN1, tol);
  rep.intersection_preserved = (r1 == M1.dim() + N1.dim());
  rep.sum_preserved = (r1 == ambient_dim);
  rep.pass = (!rep.intersection_applicable || rep.intersection_preserved) &&
             (!rep.sum_applicable || rep.sum_preserved);
  return rep;
}

// ---------------------------------------------------------------------------
// Krugljak-Milman metric: operator norm of Phi - Psi from H to Sigma
// ---------------------------------------------------------------------------

inline double km_metric(const Matrix& Phi, const Matrix& Psi, const FiniteSpace& h_norm,
                        const FiniteSpace& sigma_norm, const GapOptions& go = {}) {
  if (Phi.rows() != Psi.rows() || Phi.cols() != Psi.cols())
    throw DimensionMismatch("km_metric: shapes differ");
  if (Phi.cols() != h_norm.dim || Phi.rows() != sigma_norm.dim)
    throw DimensionMismatch("km_metric: norm dimensions do not match the operators");
  Matrix D = Phi - Psi;
  if (h_norm.is_euclidean() && sigma_norm.is_euclidean()) return spectral_norm(D);
  auto normalize = [&](const Vector& f) -> Vector {
    Vector ff = f;
    double nn = h_norm.norm(ff);
    if (nn == 0.0) {
      ff = Vector::Unit(h_norm.dim, 0);
      nn = h_norm.norm(ff);
    }
    return ff / nn;
  };
  auto value = [&](const Vector& f) { return sigma_norm.norm(D * f); };
  return multistart_sphere_max(value, normalize, h_norm.dim, go.restarts, go.seed);
}

}  // namespace twistlab
