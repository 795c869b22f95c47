#pragma once

// Norm engines for the finite-dimensional sequence spaces: lp, weighted,
// Orlicz (Luxemburg gauge), discrete Lorentz, and the sum / intersection
// composites.  All operations are pure functions of immutable values.

#include "twistlab/common.hpp"
#include "twistlab/nfunction.hpp"
#include "twistlab/optimize.hpp"

#include <memory>

namespace twistlab {

// ---------------------------------------------------------------------------
// Primitive norms
// ---------------------------------------------------------------------------

inline double lp_norm(double p, const Vector& x) {
  if (!(p >= 1.0)) throw InvalidParameter("lp_norm: p must satisfy p >= 1");
  require_finite(x, "lp_norm");
  if (x.size() == 0) return 0.0;
  double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  if (p == kInf) return m;
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

inline Vector decreasing_rearrangement(const Vector& x) {
  Vector y = x.cwiseAbs();
  std::sort(y.data(), y.data() + y.size(), std::greater<double>());
  return y;
}

struct LuxemburgOptions {
  double tol = 1e-12;  // absolute tolerance on the gauge value
  int max_iter = 200;
};

// Luxemburg gauge inf{ r > 0 : sum phi(|x_i| / r) <= 1 }.
inline double luxemburg_norm(const NFunction& phi, const Vector& x,
                             const LuxemburgOptions& opt = {}) {
  require_finite(x, "luxemburg_norm");
  double m = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (m == 0.0) return 0.0;
  const double n = static_cast<double>(x.size());
  auto excess = [&](double r) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += phi(std::abs(x[i]) / r);
    return s - 1.0;
  };
  // Bracket [m / phi^{-1}(n), m / phi^{-1}(1/n)]: the modular is >= 1 on the
  // left endpoint and <= 1 on the right one.
  double lo = m / phi.inverse(n);
  double hi = m / phi.inverse(1.0 / n);
  if (excess(lo) < 0 || excess(hi) > 0)
    throw NumericalFailure("luxemburg_norm: invalid initial bracket [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]");
  for (int i = 0; i < opt.max_iter; ++i) {
    if (hi - lo <= opt.tol) return 0.5 * (lo + hi);
    double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo <= opt.tol) return 0.5 * (lo + hi);
  throw NumericalFailure("luxemburg_norm: no convergence after " + std::to_string(opt.max_iter) +
                         " iterations, bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
}

// Discrete Lorentz norm (sum_k (x*_k)^q Delta_k)^{1/q} with
// Delta_k = k^{q/p} - (k-1)^{q/p}.  This weight choice makes p = q collapse
// exactly to the lp norm.
inline double lorentz_norm(double p, double q, const Vector& x) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw InvalidParameter("lorentz_norm: need p, q >= 1");
  require_finite(x, "lorentz_norm");
  if (x.size() == 0) return 0.0;
  Vector s = decreasing_rearrangement(x);
  double top = s[0];
  if (top == 0.0) return 0.0;
  if (q == kInf) {
    // weak form: sup_k k^{1/p} x*_k
    double v = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
      v = std::max(v, std::pow(static_cast<double>(k + 1), 1.0 / p) * s[k]);
    return v;
  }
  double e = (p == kInf) ? 0.0 : q / p;
  double acc = 0.0, prev = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    double cur = std::pow(static_cast<double>(k + 1), e);
    acc += std::pow(s[k] / top, q) * (cur - prev);
    prev = cur;
  }
  return top * std::pow(acc, 1.0 / q);
}

// ---------------------------------------------------------------------------
// Norm specifications
// ---------------------------------------------------------------------------

enum class NormKind { lp, weighted, orlicz, lorentz, sum, intersection };

class NormSpec {
 public:
  static NormSpec lp(double p) {
    if (!(p >= 1.0)) throw InvalidParameter("NormSpec::lp: p must satisfy p >= 1");
    auto n = std::make_shared<Node>();
    n->kind = NormKind::lp;
    n->p = p;
    return NormSpec(std::move(n));
  }

  static NormSpec weighted(NormSpec base, Vector w) {
    require_finite(w, "NormSpec::weighted");
    if ((w.array() <= 0.0).any()) throw InvalidParameter("NormSpec::weighted: weights must be > 0");
    auto n = std::make_shared<Node>();
    n->kind = NormKind::weighted;
    n->a = base.node_;
    n->w = std::move(w);
    return NormSpec(std::move(n));
  }

  static NormSpec orlicz(NFunction phi) {
    auto n = std::make_shared<Node>();
    n->kind = NormKind::orlicz;
    n->phi = std::make_shared<NFunction>(std::move(phi));
    return NormSpec(std::move(n));
  }

  static NormSpec lorentz(double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw InvalidParameter("NormSpec::lorentz: need p, q >= 1");
    auto n = std::make_shared<Node>();
    n->kind = NormKind::lorentz;
    n->p = p;
    n->q = q;
    return NormSpec(std::move(n));
  }

  static NormSpec sum(NormSpec a, NormSpec b) {
    auto n = std::make_shared<Node>();
    n->kind = NormKind::sum;
    n->a = a.node_;
    n->b = b.node_;
    return NormSpec(std::move(n));
  }

  static NormSpec intersection(NormSpec a, NormSpec b) {
    auto n = std::make_shared<Node>();
    n->kind = NormKind::intersection;
    n->a = a.node_;
    n->b = b.node_;
    return NormSpec(std::move(n));
  }

  NormKind kind() const { return node_->kind; }
  double p() const { return node_->p; }
  double q() const { return node_->q; }
  const Vector& weights() const { return node_->w; }
  const NFunction& nfunction() const { return *node_->phi; }
  NormSpec first() const { return NormSpec(node_->a); }
  NormSpec second() const { return NormSpec(node_->b); }

  // Lattice monotonicity: |x| <= |y| coordinatewise implies norm(x) <= norm(y).
  bool lattice_monotone() const {
    switch (node_->kind) {
      case NormKind::lp:
      case NormKind::orlicz:
      case NormKind::lorentz:
        return true;
      case NormKind::weighted:
        return first().lattice_monotone();
      case NormKind::sum:
      case NormKind::intersection:
        return first().lattice_monotone() && second().lattice_monotone();
    }
    return false;
  }

  bool rearrangement_invariant() const {
    switch (node_->kind) {
      case NormKind::lp:
      case NormKind::orlicz:
      case NormKind::lorentz:
        return true;
      case NormKind::weighted:
        return false;
      case NormKind::sum:
      case NormKind::intersection:
        return first().rearrangement_invariant() && second().rearrangement_invariant();
    }
    return false;
  }

  bool is_euclidean() const { return node_->kind == NormKind::lp && node_->p == 2.0; }

 private:
  struct Node {
    NormKind kind = NormKind::lp;
    double p = 2.0, q = 2.0;
    Vector w;
    std::shared_ptr<NFunction> phi;
    std::shared_ptr<const Node> a, b;
  };
  explicit NormSpec(std::shared_ptr<const Node> n) : node_(std::move(n)) {
    if (!node_) throw InvalidParameter("NormSpec: empty node");
  }
  std::shared_ptr<const Node> node_;
  friend struct FiniteSpace;
  friend class NormEvaluator;
};

// ---------------------------------------------------------------------------
// FiniteSpace: a dimension plus a norm spec
// ---------------------------------------------------------------------------

struct FiniteSpace {
  int dim = 0;
  NormSpec spec = NormSpec::lp(2.0);

  FiniteSpace() = default;
  FiniteSpace(int n, NormSpec s) : dim(n), spec(std::move(s)) {
    if (n < 1) throw InvalidParameter("FiniteSpace: dimension must be >= 1");
  }

  static FiniteSpace euclidean(int n) { return FiniteSpace(n, NormSpec::lp(2.0)); }

  double norm(const Vector& x, const OptOptions& opt = {}) const;
  bool is_euclidean() const { return spec.is_euclidean(); }
};

namespace detail {

inline double norm_eval(const NormSpec& spec, const Vector& x, const OptOptions& opt);

// Sum norm inf{ ||x0||_A + ||x - x0||_B } by multi-start coordinate descent.
// Convex in x0; warm starts include the min-weight split when both branches
// are weighted versions of a common lattice base.
inline double sum_norm(const NormSpec& a, const NormSpec& b, const Vector& x,
                       const OptOptions& opt) {
  auto f = [&](const Vector& x0) {
    return norm_eval(a, x0, opt) + norm_eval(b, x - x0, opt);
  };
  std::vector<Vector> starts;
  starts.push_back(Vector::Zero(x.size()));
  starts.push_back(x);
  starts.push_back(0.5 * x);
  if (a.kind() == NormKind::weighted && b.kind() == NormKind::weighted &&
      a.weights().size() == x.size() && b.weights().size() == x.size()) {
    Vector split = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (a.weights()[i] <= b.weights()[i]) split[i] = x[i];
    starts.push_back(split);
  }
  OptOptions o = opt;
  o.restarts = std::max(opt.restarts, static_cast<int>(starts.size()));
  return multistart_minimize(f, x.size(), starts, o);
}

inline double norm_eval(const NormSpec& spec, const Vector& x, const OptOptions& opt) {
  switch (spec.kind()) {
    case NormKind::lp:
      return lp_norm(spec.p(), x);
    case NormKind::weighted: {
      require_dim(x, spec.weights().size(), "weighted norm");
      return norm_eval(spec.first(), spec.weights().cwiseProduct(x), opt);
    }
    case NormKind::orlicz:
      return luxemburg_norm(spec.nfunction(), x);
    case NormKind::lorentz:
      return lorentz_norm(spec.p(), spec.q(), x);
    case NormKind::intersection:
      return std::max(norm_eval(spec.first(), x, opt), norm_eval(spec.second(), x, opt));
    case NormKind::sum:
      return sum_norm(spec.first(), spec.second(), x, opt);
  }
  throw InvalidParameter("norm: unknown spec kind");
}

}  // namespace detail

inline double FiniteSpace::norm(const Vector& x, const OptOptions& opt) const {
  require_dim(x, dim, "FiniteSpace::norm");
  require_finite(x, "FiniteSpace::norm");
  return detail::norm_eval(spec, x, opt);
}

}  // namespace twistlab
