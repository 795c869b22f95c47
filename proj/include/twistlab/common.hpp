#pragma once

// Core vocabulary shared by every twistlab header: vector/matrix aliases,
// the error taxonomy, a counter-based RNG for reproducible parallel sampling,
// and a handful of numeric helpers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntVector = Eigen::VectorXi;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
  invalid_parameter,
  dimension_mismatch,
  not_in_range,
  not_in_space,
  numerical_failure,
  budget_exceeded,
  singular_weight,
  unsuitable_z,
  incomplete_context,
  insufficient_dimension,
  config_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& w) : Error(ErrorKind::invalid_parameter, w) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& w) : Error(ErrorKind::dimension_mismatch, w) {}
};
struct NotInRange : Error {
  explicit NotInRange(const std::string& w) : Error(ErrorKind::not_in_range, w) {}
};
struct NotInSpace : Error {
  explicit NotInSpace(const std::string& w) : Error(ErrorKind::not_in_space, w) {}
};
struct NumericalFailure : Error {
  explicit NumericalFailure(const std::string& w) : Error(ErrorKind::numerical_failure, w) {}
};
struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& w) : Error(ErrorKind::budget_exceeded, w) {}
};
struct SingularWeight : Error {
  explicit SingularWeight(const std::string& w) : Error(ErrorKind::singular_weight, w) {}
};
struct UnsuitableZ : Error {
  explicit UnsuitableZ(const std::string& w) : Error(ErrorKind::unsuitable_z, w) {}
};
struct IncompleteContext : Error {
  explicit IncompleteContext(const std::string& w) : Error(ErrorKind::incomplete_context, w) {}
};
struct InsufficientDimension : Error {
  explicit InsufficientDimension(const std::string& w) : Error(ErrorKind::insufficient_dimension, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config_error, w) {}
};

// ---------------------------------------------------------------------------
// Counter-based RNG
// ---------------------------------------------------------------------------

// SplitMix64 keyed by (seed, stream).  Each (seed, trial) pair gets an
// independent deterministic stream, so trials can run on any number of
// threads without changing results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0xbf58476d1ce4e5b9ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal via Box-Muller (no cached spare; deterministic stream use)
  double normal() {
    double u1 = uniform(), u2 = uniform();
    u1 = std::max(u1, 0x1.0p-60);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // inclusive bounds
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  Vector gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Numeric helpers
// ---------------------------------------------------------------------------

// t * log(t) with the continuous extension 0*log(0) = 0.
inline double xlogx(double t) { return t == 0.0 ? 0.0 : t * std::log(t); }

// x * log(num/den) with 0 * log(anything) = 0.
inline double mul_log_ratio(double x, double num, double den) {
  if (x == 0.0) return 0.0;
  return x * std::log(num / den);
}

inline bool all_finite(const Vector& x) { return x.allFinite(); }

inline void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) throw InvalidParameter(std::string(what) + ": non-finite entries");
}

inline void require_dim(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(n) +
                            ", got " + std::to_string(x.size()));
}

// Deterministic pairwise summation; reduction order independent of chunking.
inline double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

// Least-squares fit of log(y) = a + e*log(x); returns exponent e.
inline double loglog_fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("loglog fit: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) continue;
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw NumericalFailure("loglog fit: fewer than 2 positive points");
  double denom = m * sxx - sx * sx;
  if (denom == 0) throw NumericalFailure("loglog fit: degenerate abscissae");
  return (m * sxy - sx * sy) / denom;
}

}  // namespace twistlab
