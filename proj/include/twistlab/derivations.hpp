#pragma once

// Concrete derivation maps for the classical scales: the Kalton-Peck map on
// the lp scale, the rank-function combination on the Lorentz scale, the
// linear multiplier on weighted scales, the half-parameter Orlicz map, the
// concavification map, and the translation maps between evaluation points.
//
// Orientation: each kind is stored in the orientation produced by
// differentiating the canonical norm-flat extremal of its scale; the
// 'flipped' convention negates the map (this matches the sign several
// classical references print for the lp scale).  The two orientations are
// discriminated by the centered sign-average residual test.

#include "twistlab/interpolator.hpp"

#include <variant>

namespace twistlab {

// (1-theta)/p0 + theta/p1 with 1/inf = 0.
inline double interp_reciprocal(double p0, double p1, double theta) {
  double i0 = (p0 == kInf) ? 0.0 : 1.0 / p0;
  double i1 = (p1 == kInf) ? 0.0 : 1.0 / p1;
  return (1.0 - theta) * i0 + theta * i1;
}

inline void check_couple_params(double p0, double p1, double theta, const char* what) {
  if (!(p0 >= 1.0) || !(p1 >= 1.0))
    throw InvalidParameter(std::string(what) + ": endpoint exponents must be >= 1");
  if (!(theta > 0.0) || !(theta < 1.0))
    throw InvalidParameter(std::string(what) + ": theta must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Raw maps
// ---------------------------------------------------------------------------

// Kalton-Peck map in the classical printed orientation:
//   p (1/p0 - 1/p1) x log(|x| / ||x||_p),   1/p = (1-theta)/p0 + theta/p1.
inline Vector kalton_peck(double p0, double p1, double theta, const Vector& x) {
  check_couple_params(p0, p1, theta, "kalton_peck");
  require_finite(x, "kalton_peck");
  double invp = interp_reciprocal(p0, p1, theta);
  if (invp <= 0.0) throw InvalidParameter("kalton_peck: interpolated exponent is infinite");
  double p = 1.0 / invp;
  double i0 = (p0 == kInf) ? 0.0 : 1.0 / p0;
  double i1 = (p1 == kInf) ? 0.0 : 1.0 / p1;
  double factor = p * (i0 - i1);
  double nx = lp_norm(p, x);
  Vector out = Vector::Zero(x.size());
  if (nx == 0.0) return out;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = factor * mul_log_ratio(x[i], std::abs(x[i]), nx);
  return out;
}

// Rank function r_i = #{j : |x_j| > |x_i|} + #{j <= i : |x_j| = |x_i|};
// counting measure on coordinates, ties broken by index.
inline IntVector rank_function(const Vector& x) {
  require_finite(x, "rank_function");
  const Eigen::Index n = x.size();
  IntVector r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int above = 0, tied = 0;
    double ai = std::abs(x[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      double aj = std::abs(x[j]);
      if (aj > ai) ++above;
      if (aj == ai && j <= i) ++tied;
    }
    r[i] = above + tied;
  }
  return r;
}

// Kalton map kappa(x) = x r_x.
inline Vector kalton_kappa(const Vector& x) {
  IntVector r = rank_function(x);
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[i] * static_cast<double>(r[i]);
  return out;
}

// Derivation of the (L_{p0,q0}, L_{p1,q1}) scale at theta:
//   q (1/q1 - 1/q0) x log(|x| / ||x||_{p,q})
//   + ((q/p)(1/q0 - 1/q1) - (1/p0 - 1/p1)) kappa(x).
// Setting q_i = p_i collapses the kappa coefficient and leaves the lp-scale
// map in its canonical orientation.
inline Vector lorentz_derivation(double p0, double q0, double p1, double q1, double theta,
                                 const Vector& x) {
  check_couple_params(p0, p1, theta, "lorentz_derivation");
  if (!(q0 >= 1.0) || !(q1 >= 1.0))
    throw InvalidParameter("lorentz_derivation: secondary exponents must be >= 1");
  require_finite(x, "lorentz_derivation");
  double invp = interp_reciprocal(p0, p1, theta);
  double invq = interp_reciprocal(q0, q1, theta);
  if (invp <= 0.0 || invq <= 0.0)
    throw InvalidParameter("lorentz_derivation: interpolated exponent is infinite");
  double p = 1.0 / invp, q = 1.0 / invq;
  double iq0 = (q0 == kInf) ? 0.0 : 1.0 / q0;
  double iq1 = (q1 == kInf) ? 0.0 : 1.0 / q1;
  double ip0 = (p0 == kInf) ? 0.0 : 1.0 / p0;
  double ip1 = (p1 == kInf) ? 0.0 : 1.0 / p1;
  double ck = q * (iq1 - iq0);
  double ckappa = (q / p) * (iq0 - iq1) - (ip0 - ip1);
  Vector out = Vector::Zero(x.size());
  double nx = lorentz_norm(p, q, x);
  if (nx > 0.0 && ck != 0.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      out[i] = ck * mul_log_ratio(x[i], std::abs(x[i]), nx);
  }
  if (ckappa != 0.0 && nx > 0.0) out += ckappa * kalton_kappa(x);
  return out;
}

// Weighted-scale derivation: multiplication by log(w1/w0).
inline Vector weighted_derivation(const Vector& w0, const Vector& w1, const Vector& x) {
  require_dim(w1, w0.size(), "weighted_derivation");
  require_dim(x, w0.size(), "weighted_derivation");
  if ((w0.array() <= 0).any() || (w1.array() <= 0).any())
    throw InvalidParameter("weighted_derivation: weights must be > 0");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = std::log(w1[i] / w0[i]) * x[i];
  return out;
}

// The symmetric mate: multiplication by log(w1/w0)^{-1}.
inline Vector weighted_mho(const Vector& w0, const Vector& w1, const Vector& x) {
  require_dim(w1, w0.size(), "weighted_mho");
  require_dim(x, w0.size(), "weighted_mho");
  if ((w0.array() <= 0).any() || (w1.array() <= 0).any())
    throw InvalidParameter("weighted_mho: weights must be > 0");
  std::string bad;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::log(w1[i] / w0[i]) == 0.0) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
  }
  if (!bad.empty()) throw SingularWeight("weighted_mho: log-ratio vanishes at indices {" + bad + "}");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[i] / std::log(w1[i] / w0[i]);
  return out;
}

// Half-parameter Orlicz derivation
//   f_i log( phi1^{-1}(fhat_i^2) / phi0^{-1}(fhat_i^2) ),  fhat = f / ||f||_2,
// extended homogeneously through the normalization by ||f||_2.
inline Vector orlicz_half_derivation(const NFunction& phi0, const NFunction& phi1,
                                     const Vector& f) {
  require_finite(f, "orlicz_half_derivation");
  double n2 = f.norm();
  Vector out = Vector::Zero(f.size());
  if (n2 == 0.0) return out;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    double t = (f[i] / n2) * (f[i] / n2);
    double a = phi1.inverse(t), b = phi0.inverse(t);
    if (!(a > 0.0) || !(b > 0.0))
      throw NumericalFailure("orlicz_half_derivation: inverse evaluation failed");
    out[i] = f[i] * std::log(a / b);
  }
  return out;
}

// Concavification-scale derivation p x log(|x| / ||x||_X).
inline Vector concavification_derivation(double p, const FiniteSpace& base, const Vector& x) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw InvalidParameter("concavification_derivation: need finite p > 0");
  if (!base.spec.lattice_monotone())
    throw InvalidParameter("concavification_derivation: base norm must be lattice-monotone");
  require_dim(x, base.dim, "concavification_derivation");
  double nx = base.norm(x);
  Vector out = Vector::Zero(x.size());
  if (nx == 0.0) return out;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = p * mul_log_ratio(x[i], std::abs(x[i]), nx);
  return out;
}

// ---------------------------------------------------------------------------
// Fenchel functions
// ---------------------------------------------------------------------------

enum class FenchelConvention {
  consistent,  // psi(x, y) = phi(y) + phi(x - y log|y|): finite xi, matches the domain description
  literal,     // psi(x, y) = phi(y) + phi(x - y log|x|): the printed form (xi degenerates)
};

inline double fenchel_psi(const NFunction& phi, double x, double y,
                          FenchelConvention conv = FenchelConvention::consistent) {
  double lg;
  if (conv == FenchelConvention::consistent)
    lg = (y == 0.0) ? 0.0 : std::log(std::abs(y));
  else
    lg = (x == 0.0) ? ((y == 0.0) ? 0.0 : -kInf) : std::log(std::abs(x));
  double inner = x - y * lg;
  if (!std::isfinite(inner)) return kInf;
  return phi(std::abs(y)) + phi(std::abs(inner));
}

inline double fenchel_xi(const NFunction& phi, double t,
                         FenchelConvention conv = FenchelConvention::consistent) {
  return fenchel_psi(phi, 0.0, t, conv);
}

// Luxemburg-type gauge built from psi over coordinate pairs.
inline double fenchel_norm(const NFunction& phi, const std::vector<std::pair<double, double>>& pts,
                           FenchelConvention conv = FenchelConvention::consistent,
                           const LuxemburgOptions& opt = {}) {
  double m = 0.0;
  for (auto& [a, b] : pts) m = std::max({m, std::abs(a), std::abs(b)});
  if (m == 0.0) return 0.0;
  auto modular = [&](double r) {
    double s = 0.0;
    for (auto& [a, b] : pts) s += fenchel_psi(phi, a / r, b / r, conv);
    return s;
  };
  double lo = m * 1e-9, hi = m;
  int grow = 0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (++grow > 200) throw NumericalFailure("fenchel_norm: upper bracket expansion failed");
  }
  grow = 0;
  while (modular(lo) <= 1.0) {
    lo *= 0.5;
    if (++grow > 200) return 0.0;  // modular never exceeds 1: gauge is 0
  }
  for (int i = 0; i < opt.max_iter; ++i) {
    if (hi - lo <= opt.tol * std::max(1.0, hi)) break;
    double mid = 0.5 * (lo + hi);
    if (modular(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// DerivationSpec: a named homogeneous map with couple parameters
// ---------------------------------------------------------------------------

enum class SignConvention { canonical, flipped };

struct KaltonPeckParams {
  double p0, p1, theta;
};
struct WeightedLogParams {
  Vector w0, w1;
  double theta = 0.5;
  NormSpec base = NormSpec::lp(1.0);
};
struct LorentzDerivParams {
  double p0, q0, p1, q1, theta;
};
struct OrliczHalfParams {
  NFunction phi0, phi1;
};
struct ConcavificationParams {
  double p;
  FiniteSpace base;
};
struct MatrixModelParams {
  MatrixInterpolatorPair pair;
  SelectorConfig cfg;
};

class DerivationSpec {
 public:
  using Params = std::variant<KaltonPeckParams, WeightedLogParams, LorentzDerivParams,
                              OrliczHalfParams, ConcavificationParams, MatrixModelParams>;

  DerivationSpec(Params params, SignConvention sign = SignConvention::canonical)
      : params_(std::move(params)), sign_(sign) {}

  static DerivationSpec kalton_peck(double p0, double p1, double theta,
                                    SignConvention sign = SignConvention::canonical) {
    check_couple_params(p0, p1, theta, "DerivationSpec::kalton_peck");
    return DerivationSpec(KaltonPeckParams{p0, p1, theta}, sign);
  }
  static DerivationSpec weighted_log(Vector w0, Vector w1, double theta = 0.5,
                                     NormSpec base = NormSpec::lp(1.0),
                                     SignConvention sign = SignConvention::canonical) {
    return DerivationSpec(WeightedLogParams{std::move(w0), std::move(w1), theta, std::move(base)},
                          sign);
  }
  static DerivationSpec lorentz(double p0, double q0, double p1, double q1, double theta,
                                SignConvention sign = SignConvention::canonical) {
    return DerivationSpec(LorentzDerivParams{p0, q0, p1, q1, theta}, sign);
  }
  static DerivationSpec orlicz_half(NFunction phi0, NFunction phi1,
                                    SignConvention sign = SignConvention::canonical) {
    return DerivationSpec(OrliczHalfParams{std::move(phi0), std::move(phi1)}, sign);
  }
  static DerivationSpec concavification(double p, FiniteSpace base,
                                        SignConvention sign = SignConvention::canonical) {
    return DerivationSpec(ConcavificationParams{p, std::move(base)}, sign);
  }
  static DerivationSpec matrix_model(MatrixInterpolatorPair pair, SelectorConfig cfg = {},
                                     SignConvention sign = SignConvention::canonical) {
    return DerivationSpec(MatrixModelParams{std::move(pair), cfg}, sign);
  }

  SignConvention sign() const { return sign_; }
  const Params& params() const { return params_; }
  bool linear() const {
    return std::holds_alternative<WeightedLogParams>(params_) ||
           std::holds_alternative<MatrixModelParams>(params_);
  }
  bool rearrangement_invariant_scale() const {
    return std::holds_alternative<KaltonPeckParams>(params_) ||
           std::holds_alternative<LorentzDerivParams>(params_) ||
           std::holds_alternative<OrliczHalfParams>(params_);
  }

  Vector operator()(const Vector& x) const {
    double s = (sign_ == SignConvention::canonical) ? 1.0 : -1.0;
    if (auto* kp = std::get_if<KaltonPeckParams>(&params_))
      return (-s) * twistlab::kalton_peck(kp->p0, kp->p1, kp->theta, x);
    if (auto* wl = std::get_if<WeightedLogParams>(&params_))
      return s * weighted_derivation(wl->w0, wl->w1, x);
    if (auto* lz = std::get_if<LorentzDerivParams>(&params_))
      return s * lorentz_derivation(lz->p0, lz->q0, lz->p1, lz->q1, lz->theta, x);
    if (auto* oh = std::get_if<OrliczHalfParams>(&params_))
      return s * orlicz_half_derivation(oh->phi0, oh->phi1, x);
    if (auto* cc = std::get_if<ConcavificationParams>(&params_))
      return s * concavification_derivation(cc->p, cc->base, x);
    const auto& mm = std::get<MatrixModelParams>(params_);
    return s * derivation_omega(mm.pair, mm.cfg, x);
  }

  // The interpolated space the map acts on, at dimension n.
  FiniteSpace natural_space(int n) const {
    if (auto* kp = std::get_if<KaltonPeckParams>(&params_)) {
      double invp = interp_reciprocal(kp->p0, kp->p1, kp->theta);
      return FiniteSpace(n, NormSpec::lp(invp > 0 ? 1.0 / invp : kInf));
    }
    if (auto* wl = std::get_if<WeightedLogParams>(&params_)) {
      Vector wt(wl->w0.size());
      for (Eigen::Index i = 0; i < wt.size(); ++i)
        wt[i] = std::pow(wl->w0[i], 1.0 - wl->theta) * std::pow(wl->w1[i], wl->theta);
      return FiniteSpace(n, NormSpec::weighted(wl->base, wt));
    }
    if (auto* lz = std::get_if<LorentzDerivParams>(&params_)) {
      double invp = interp_reciprocal(lz->p0, lz->p1, lz->theta);
      double invq = interp_reciprocal(lz->q0, lz->q1, lz->theta);
      return FiniteSpace(n, NormSpec::lorentz(invp > 0 ? 1.0 / invp : kInf,
                                              invq > 0 ? 1.0 / invq : kInf));
    }
    if (std::holds_alternative<OrliczHalfParams>(params_)) return FiniteSpace(n, NormSpec::lp(2.0));
    if (auto* cc = std::get_if<ConcavificationParams>(&params_)) return cc->base;
    const auto& mm = std::get<MatrixModelParams>(params_);
    return mm.pair.Sigma_norm;
  }

 private:
  Params params_;
  SignConvention sign_;
};

// Empirical quasi-additivity constant
//   sup ||Omega(x+y) - Omega x - Omega y|| / (||x|| + ||y||)
// over seeded random pairs plus a few structured ones.
inline double quasilinearity_constant(const DerivationSpec& omega, const FiniteSpace& space,
                                      int n, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidParameter("quasilinearity_constant: need samples >= 1");
  if (space.dim != n) throw DimensionMismatch("quasilinearity_constant: space dim != n");
  double best = 0.0;
  auto consider = [&](const Vector& x, const Vector& y) {
    double denom = space.norm(x) + space.norm(y);
    if (denom <= 0) return;
    Vector d = omega(x + y) - omega(x) - omega(y);
    best = std::max(best, space.norm(d) / denom);
  };
  // structured pairs: disjoint halves and scale-mismatched coordinates
  if (n >= 2) {
    Vector a = Vector::Zero(n), b = Vector::Zero(n);
    for (int i = 0; i < n / 2; ++i) a[i] = 1.0;
    for (int i = n / 2; i < n; ++i) b[i] = 1.0;
    consider(a, b);
    Vector u = Vector::Unit(n, 0);
    Vector v = std::exp(-1.0) * Vector::Unit(n, 1);
    consider(u, v);
  }
  for (int t = 0; t < samples; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    Vector x = rng.gaussian_vector(n), y = rng.gaussian_vector(n);
    consider(x, y);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Derived-space quasi-norms
// ---------------------------------------------------------------------------

struct DerivedPoint {
  Vector w;
  Vector x;
};

struct DerivationContext {
  FiniteSpace Z_space;  // the suitable space carrying w - Omega x
  FiniteSpace X_space;  // X_Phi
};

inline double derived_quasi_norm(const DerivationContext& ctx, const DerivationSpec& omega,
                                 const DerivedPoint& pt) {
  require_dim(pt.w, ctx.Z_space.dim, "derived_quasi_norm");
  require_dim(pt.x, ctx.X_space.dim, "derived_quasi_norm");
  double a = ctx.Z_space.norm(pt.w - omega(pt.x));
  double b = ctx.X_space.norm(pt.x);
  if (!std::isfinite(a) || !std::isfinite(b))
    throw NotInSpace("derived_quasi_norm: non-finite component norm");
  return a + b;
}

inline double domain_norm(const DerivationContext& ctx, const DerivationSpec& omega,
                          const Vector& x) {
  return derived_quasi_norm(ctx, omega, DerivedPoint{Vector::Zero(ctx.Z_space.dim), x});
}

// Range quasi-norm inf_x ||w - Omega x||_Z + ||x||_X by multi-start
// minimization; warm-started at zero and at the closed-form decomposition
// when the derivation is the weighted multiplier.
inline double range_norm(const DerivationContext& ctx, const DerivationSpec& omega,
                         const Vector& w, const OptOptions& opt = {}) {
  require_dim(w, ctx.Z_space.dim, "range_norm");
  auto f = [&](const Vector& x) {
    return ctx.Z_space.norm(w - omega(x)) + ctx.X_space.norm(x);
  };
  std::vector<Vector> starts;
  starts.push_back(Vector::Zero(ctx.X_space.dim));
  if (auto* wl = std::get_if<WeightedLogParams>(&omega.params())) {
    Vector x0 = Vector::Zero(ctx.X_space.dim);
    double s = (omega.sign() == SignConvention::canonical) ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
      double a = s * std::log(wl->w1[i] / wl->w0[i]);
      if (std::abs(a) >= 1.0) x0[i] = w[i] / a;
    }
    starts.push_back(x0);
  }
  return multistart_minimize(f, ctx.X_space.dim, starts, opt);
}

// Closed-form descriptions of Dom and Ran for the weighted scale.
inline Vector weighted_theta_weight(const Vector& w0, const Vector& w1, double theta) {
  Vector wt(w0.size());
  for (Eigen::Index i = 0; i < w0.size(); ++i)
    wt[i] = std::pow(w0[i], 1.0 - theta) * std::pow(w1[i], theta);
  return wt;
}

// Dom = X(w_theta) cap X(w_theta |log w1/w0|) as an intersection spec.
inline NormSpec weighted_dom_spec(const NormSpec& base, const Vector& w0, const Vector& w1,
                                  double theta) {
  Vector wt = weighted_theta_weight(w0, w1, theta);
  Vector wa(wt.size());
  for (Eigen::Index i = 0; i < wt.size(); ++i) wa[i] = wt[i] * std::abs(std::log(w1[i] / w0[i]));
  return NormSpec::intersection(NormSpec::weighted(base, wt), NormSpec::weighted(base, wa));
}

// Ran = X(w_theta) + X(w_theta |log w1/w0|^{-1}) as a sum spec.
inline NormSpec weighted_ran_spec(const NormSpec& base, const Vector& w0, const Vector& w1,
                                  double theta) {
  Vector wt = weighted_theta_weight(w0, w1, theta);
  Vector wa(wt.size());
  for (Eigen::Index i = 0; i < wt.size(); ++i) wa[i] = wt[i] / std::abs(std::log(w1[i] / w0[i]));
  return NormSpec::sum(NormSpec::weighted(base, wt), NormSpec::weighted(base, wa));
}

// Single-weight collapses: intersection ~ X(w max factor), sum ~ X(w min factor).
inline NormSpec weighted_vee_spec(const NormSpec& base, const Vector& wa, const Vector& wb) {
  Vector w(wa.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = std::max(wa[i], wb[i]);
  return NormSpec::weighted(base, w);
}

inline NormSpec weighted_wedge_spec(const NormSpec& base, const Vector& wa, const Vector& wb) {
  Vector w(wa.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = std::min(wa[i], wb[i]);
  return NormSpec::weighted(base, w);
}

// ---------------------------------------------------------------------------
// Translation maps R_{theta,nu}: evaluate at theta the canonical extremal
// passing through x at nu.
// ---------------------------------------------------------------------------

inline void check_translation_params(double theta, double nu) {
  if (!(theta > 0.0) || !(theta < 1.0) || !(nu > 0.0) || !(nu < 1.0))
    throw InvalidParameter("translation_map: theta, nu must lie in (0, 1)");
}

inline Vector translation_weighted(const Vector& w0, const Vector& w1, double theta, double nu,
                                   const Vector& x) {
  check_translation_params(theta, nu);
  require_dim(w1, w0.size(), "translation_weighted");
  require_dim(x, w0.size(), "translation_weighted");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = std::pow(w1[i] / w0[i], theta - nu) * x[i];
  return out;
}

inline Vector translation_lp(double p0, double p1, double theta, double nu, const Vector& x) {
  check_translation_params(theta, nu);
  check_couple_params(p0, p1, 0.5, "translation_lp");
  require_finite(x, "translation_lp");
  if (p0 == p1 || theta == nu) return x;
  double inv_pnu = interp_reciprocal(p0, p1, nu);
  double inv_pth = interp_reciprocal(p0, p1, theta);
  if (inv_pnu <= 0.0 || inv_pth <= 0.0)
    throw InvalidParameter("translation_lp: interpolated exponent is infinite");
  double p_nu = 1.0 / inv_pnu;
  double alpha = inv_pth / inv_pnu;  // = p_nu / p_theta
  double nx = lp_norm(p_nu, x);
  if (nx == 0.0) return Vector::Zero(x.size());
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double t = std::abs(x[i]) / nx;
    double v = (t == 0.0) ? 0.0 : std::pow(t, alpha) * nx;
    out[i] = (x[i] >= 0.0) ? v : -v;
  }
  return out;
}

}  // namespace twistlab
