#pragma once

// Derivative-free convex minimization used by the general-norm code paths:
// golden-section line search plus cyclic coordinate descent with multi-start.

#include "twistlab/common.hpp"

#include <functional>

namespace twistlab {

struct OptOptions {
  int restarts = 5;        // multi-start count (first starts are deterministic warm starts)
  int max_sweeps = 200;    // coordinate-descent sweeps
  double rel_tol = 1e-8;   // relative improvement threshold for convergence
  int golden_iters = 90;   // per-line-search iterations
  std::uint64_t seed = 0x715ab5eedULL;
};

namespace detail {

// Golden-section minimization of a unimodal g on [a, b].
inline double golden_section(const std::function<double(double)>& g, double a, double b,
                             int iters, double* tmin) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = g(c), fd = g(d);
  for (int i = 0; i < iters && b - a > 0; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = g(d);
    }
  }
  double t = (fc <= fd) ? c : d;
  double ft = std::min(fc, fd);
  if (tmin) *tmin = t;
  return ft;
}

// Minimize a convex g(t) over the real line starting near t0: expand a bracket
// until both ends exceed the reference value, then golden-section inside it.
inline double line_min(const std::function<double(double)>& g, double t0, double step,
                       int golden_iters, double* tmin) {
  double f0 = g(t0);
  double a = t0 - step, b = t0 + step;
  double fa = g(a), fb = g(b);
  for (int i = 0; i < 64 && fa <= f0; ++i) {
    a = t0 - 2.0 * (t0 - a);
    fa = g(a);
  }
  for (int i = 0; i < 64 && fb <= f0; ++i) {
    b = t0 + 2.0 * (b - t0);
    fb = g(b);
  }
  double t;
  double ft = golden_section(g, a, b, golden_iters, &t);
  if (ft <= f0) {
    if (tmin) *tmin = t;
    return ft;
  }
  if (tmin) *tmin = t0;
  return f0;
}

}  // namespace detail

// Cyclic coordinate descent from a single start point.
inline double coordinate_descent(const std::function<double(const Vector&)>& f, Vector& x,
                                 const OptOptions& opt) {
  double fx = f(x);
  double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double before = fx;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double xi = x[i];
      auto g = [&](double t) {
        x[i] = t;
        double v = f(x);
        x[i] = xi;
        return v;
      };
      double step = std::max(0.5 * std::abs(xi), 0.125 * scale) + 1e-12;
      double tbest;
      double fbest = detail::line_min(g, xi, step, opt.golden_iters, &tbest);
      if (fbest < fx) {
        x[i] = tbest;
        fx = fbest;
      }
    }
    if (before - fx <= opt.rel_tol * std::max(1e-30, std::abs(fx))) break;
  }
  return fx;
}

// Multi-start coordinate descent.  `starts` supplies deterministic warm
// starts; remaining restarts use seeded Gaussian starting points.
inline double multistart_minimize(const std::function<double(const Vector&)>& f, Eigen::Index dim,
                                  const std::vector<Vector>& starts, const OptOptions& opt,
                                  Vector* argmin = nullptr) {
  double best = kInf;
  Vector best_x = Vector::Zero(dim);
  int used = 0;
  for (const Vector& s : starts) {
    if (used >= opt.restarts && used > 0) break;
    Vector x = s;
    double v = coordinate_descent(f, x, opt);
    if (v < best) {
      best = v;
      best_x = x;
    }
    ++used;
  }
  for (; used < opt.restarts; ++used) {
    Rng rng(opt.seed, static_cast<std::uint64_t>(used));
    Vector x = rng.gaussian_vector(static_cast<int>(dim));
    double v = coordinate_descent(f, x, opt);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  if (!std::isfinite(best)) throw NumericalFailure("multistart_minimize: no finite value found");
  if (argmin) *argmin = best_x;
  return best;
}

// Multi-start maximization of f over seeded Gaussian directions with a simple
// shrinking random local search.  Returns a certified *lower* bound of the sup.
inline double multistart_sphere_max(const std::function<double(const Vector&)>& value,
                                    const std::function<Vector(const Vector&)>& normalize,
                                    Eigen::Index dim, int restarts, std::uint64_t seed,
                                    int local_steps = 120) {
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed, static_cast<std::uint64_t>(r));
    Vector c = normalize(rng.gaussian_vector(static_cast<int>(dim)));
    double v = value(c);
    double step = 0.5;
    for (int it = 0; it < local_steps; ++it) {
      Vector cand = normalize(c + step * rng.gaussian_vector(static_cast<int>(dim)));
      double vc = value(cand);
      if (vc > v) {
        v = vc;
        c = cand;
      } else {
        step *= 0.9;
      }
    }
    best = std::max(best, v);
  }
  return best;
}

}  // namespace twistlab
