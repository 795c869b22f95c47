#pragma once

// Young-type N-functions: the generators of Orlicz norms.  Three concrete
// kinds are supported: pure powers t^p, power-logs t^p log^q(t+e), and
// monotone tables with piecewise-linear interpolation.

#include "twistlab/common.hpp"

namespace twistlab {

class NFunction {
 public:
  enum class Kind { power, power_log, table };

  static NFunction power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidParameter("NFunction::power: need finite p >= 1");
    NFunction f;
    f.kind_ = Kind::power;
    f.p_ = p;
    return f;
  }

  // phi(t) = t^p * log(t + e)^q
  static NFunction power_log(double p, double q) {
    if (!(p >= 1.0) || !std::isfinite(p) || !std::isfinite(q))
      throw InvalidParameter("NFunction::power_log: need finite p >= 1 and finite q");
    NFunction f;
    f.kind_ = Kind::power_log;
    f.p_ = p;
    f.q_ = q;
    return f;
  }

  // Samples (t_i, phi_i), strictly increasing, starting at phi(0) = 0.
  // Evaluation is piecewise linear; beyond the last sample the final slope
  // extends the graph.
  static NFunction table(std::vector<double> t, std::vector<double> phi) {
    if (t.size() != phi.size() || t.size() < 2)
      throw InvalidParameter("NFunction::table: need >= 2 matching samples");
    if (t.front() != 0.0 || phi.front() != 0.0)
      throw InvalidParameter("NFunction::table: first sample must be (0, 0)");
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1]) || !(phi[i] > phi[i - 1]))
        throw InvalidParameter("NFunction::table: samples must be strictly increasing");
    }
    NFunction f;
    f.kind_ = Kind::table;
    f.t_ = std::move(t);
    f.phi_ = std::move(phi);
    return f;
  }

  double operator()(double t) const {
    t = std::abs(t);
    switch (kind_) {
      case Kind::power:
        return std::pow(t, p_);
      case Kind::power_log: {
        double lg = std::log(t + 2.718281828459045235360287471353);
        return std::pow(t, p_) * std::pow(lg, q_);
      }
      case Kind::table: {
        if (t <= 0.0) return 0.0;
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - t_.begin()), t_.size() - 1);
        if (hi == 0) hi = 1;
        std::size_t lo = hi - 1;
        double slope = (phi_[hi] - phi_[lo]) / (t_[hi] - t_[lo]);
        return phi_[lo] + slope * (t - t_[lo]);
      }
    }
    return 0.0;
  }

  // Inverse by bracketed bisection: the unique t >= 0 with phi(t) = y.
  double inverse(double y) const {
    if (!(y >= 0.0) || !std::isfinite(y)) throw InvalidParameter("NFunction::inverse: need finite y >= 0");
    if (y == 0.0) return 0.0;
    double hi = 1.0;
    int grow = 0;
    while ((*this)(hi) < y) {
      hi *= 2.0;
      if (++grow > 2000) throw NumericalFailure("NFunction::inverse: bracket expansion failed");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if ((*this)(mid) < y)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Estimated Delta_2 constant sup phi(2t)/phi(t) on a log grid of the range.
  double delta2_constant(double t_lo = 1e-6, double t_hi = 1e6, int grid = 200) const {
    double c = 0.0;
    for (int i = 0; i <= grid; ++i) {
      double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / grid);
      double d = (*this)(t);
      if (d > 0) c = std::max(c, (*this)(2 * t) / d);
    }
    return c;
  }

  // Sampled check of the N-function shape on [t_lo, t_hi]: strictly
  // increasing, phi(0) = 0, phi(t)/t decreasing toward 0 and growing at the
  // top of the grid, finite Delta_2 constant.
  bool is_n_function(double t_lo = 1e-6, double t_hi = 1e6, int grid = 200) const {
    if ((*this)(0.0) != 0.0) return false;
    double prev = 0.0;
    for (int i = 0; i <= grid; ++i) {
      double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / grid);
      double v = (*this)(t);
      if (!(v > prev)) return false;
      prev = v;
    }
    double low_ratio = (*this)(t_lo) / t_lo;
    double one_ratio = (*this)(1.0);
    double high_ratio = (*this)(t_hi) / t_hi;
    if (!(low_ratio < one_ratio && one_ratio < high_ratio)) return false;
    return std::isfinite(delta2_constant(t_lo, t_hi, grid));
  }

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double q() const { return q_; }
  const std::vector<double>& table_t() const { return t_; }
  const std::vector<double>& table_phi() const { return phi_; }

 private:
  NFunction() = default;
  Kind kind_ = Kind::power;
  double p_ = 2.0;
  double q_ = 0.0;
  std::vector<double> t_, phi_;
};

}  // namespace twistlab
