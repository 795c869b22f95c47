#pragma once

// Growth parameters of disjoint, successive, and sign-averaged families, the
// centered sign-average residual estimate, and the restricted-growth and
// incomparability evidence checks built from them.

#include "twistlab/derivations.hpp"

namespace twistlab {

enum class PiKind { M, A, beta };
enum class EstimatorKind { exact, closed_form, lower_bound_search, monte_carlo };

inline const char* estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::exact:
      return "exact";
    case EstimatorKind::closed_form:
      return "closed-form";
    case EstimatorKind::lower_bound_search:
      return "lower-bound-search";
    case EstimatorKind::monte_carlo:
      return "monte-carlo";
  }
  return "?";
}

struct PiValue {
  double value = 0.0;
  EstimatorKind estimator = EstimatorKind::closed_form;
  int samples = 0;
  double std_error = 0.0;
};

struct PiOptions {
  int search_samples = 64;  // random families per structured search
  std::uint64_t seed = 0x9142ULL;
  int mc_sign_samples = 10000;  // Monte Carlo sign draws for pi_beta
};

namespace detail {

// Evaluate ||x_1 + ... + x_n|| for a disjointly supported normalized family.
inline double family_sum_norm(const FiniteSpace& sp, const std::vector<Vector>& blocks) {
  Vector s = Vector::Zero(sp.dim);
  for (const Vector& b : blocks) s += b;
  return sp.norm(s);
}

// Structured disjoint families inside dimension `dim`: normalized single
// coordinates (several index choices), equal blocks, and seeded random blocks.
inline double disjoint_family_search(const FiniteSpace& sp, int n, const PiOptions& opt,
                                     int support_offset = 0) {
  const int dim = sp.dim;
  if (support_offset + n > dim)
    throw InsufficientDimension("pi search: dimension budget too small");
  double best = 0.0;

  auto consider_single_coords = [&](std::vector<int> idx) {
    std::vector<Vector> blocks;
    for (int i : idx) {
      Vector e = Vector::Unit(dim, i);
      double ne = sp.norm(e);
      if (ne <= 0) return;
      blocks.push_back(e / ne);
    }
    best = std::max(best, family_sum_norm(sp, blocks));
  };

  // first n admissible coordinates, last n, and cheapest-norm n
  {
    std::vector<int> first, last, cheap;
    for (int i = 0; i < n; ++i) first.push_back(support_offset + i);
    for (int i = 0; i < n; ++i) last.push_back(dim - n + i);
    std::vector<std::pair<double, int>> cost;
    for (int i = support_offset; i < dim; ++i)
      cost.emplace_back(sp.norm(Vector::Unit(dim, i)), i);
    std::sort(cost.begin(), cost.end());
    for (int i = 0; i < n; ++i) cheap.push_back(cost[i].second);
    std::sort(cheap.begin(), cheap.end());
    consider_single_coords(first);
    if (support_offset == 0) consider_single_coords(last);
    consider_single_coords(cheap);
  }

  // equal blocks of the largest size that fits
  int bs = std::max(1, (dim - support_offset) / n);
  for (int size : {1, std::min(2, bs), bs}) {
    if (size < 1 || support_offset + n * size > dim) continue;
    std::vector<Vector> blocks;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      Vector b = Vector::Zero(dim);
      for (int t = 0; t < size; ++t) b[support_offset + j * size + t] = 1.0;
      double nb = sp.norm(b);
      if (nb <= 0) ok = false;
      else blocks.push_back(b / nb);
    }
    if (ok) best = std::max(best, family_sum_norm(sp, blocks));
  }

  // seeded random disjoint blocks
  for (int s = 0; s < opt.search_samples; ++s) {
    Rng rng(opt.seed, static_cast<std::uint64_t>(s));
    int size = std::max(1, std::min(bs, 1 + static_cast<int>(rng.next_u64() % 3)));
    if (support_offset + n * size > dim) size = 1;
    std::vector<Vector> blocks;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      Vector b = Vector::Zero(dim);
      for (int t = 0; t < size; ++t) b[support_offset + j * size + t] = rng.normal();
      double nb = sp.norm(b);
      if (nb <= 0) ok = false;
      else blocks.push_back(b / nb);
    }
    if (ok) best = std::max(best, family_sum_norm(sp, blocks));
  }
  return best;
}

}  // namespace detail

// pi^M: sup ||x_1 + ... + x_n|| over disjointly supported normalized families.
inline PiValue pi_M(const FiniteSpace& sp, int n, const PiOptions& opt = {}) {
  if (n < 1) throw InvalidParameter("pi_M: need n >= 1");
  if (n > sp.dim) throw InsufficientDimension("pi_M: n exceeds the dimension budget");
  switch (sp.spec.kind()) {
    case NormKind::lp: {
      double p = sp.spec.p();
      double v = (p == kInf) ? 1.0 : std::pow(static_cast<double>(n), 1.0 / p);
      return {v, EstimatorKind::closed_form, 0, 0.0};
    }
    case NormKind::orlicz: {
      const NFunction& phi = sp.spec.nfunction();
      double v = phi.inverse(1.0) / phi.inverse(1.0 / n);
      return {v, EstimatorKind::closed_form, 0, 0.0};
    }
    case NormKind::lorentz: {
      // n disjoint unit coordinates: the Delta weights telescope to n^{q/p}
      double v = std::pow(static_cast<double>(n), 1.0 / sp.spec.p());
      return {v, EstimatorKind::closed_form, 0, 0.0};
    }
    default:
      return {detail::disjoint_family_search(sp, n, opt), EstimatorKind::lower_bound_search, 0,
              0.0};
  }
}

// pi^A: successive normalized blocks supported after coordinate n.
inline PiValue pi_A(const FiniteSpace& sp, int n, int block_size = 1, const PiOptions& opt = {}) {
  if (n < 1) throw InvalidParameter("pi_A: need n >= 1");
  if (block_size < 1) throw InvalidParameter("pi_A: need block size >= 1");
  if (sp.dim < n + n * block_size)
    throw InsufficientDimension("pi_A: need dimension >= n + n * block_size");
  if (sp.spec.rearrangement_invariant()) {
    // successive families rearrange onto the pi^M families
    PiValue v = pi_M(sp, n, opt);
    if (v.estimator == EstimatorKind::lower_bound_search) return v;
    return {v.value, EstimatorKind::closed_form, 0, 0.0};
  }
  return {detail::disjoint_family_search(sp, n, opt, n), EstimatorKind::lower_bound_search, 0,
          0.0};
}

enum class SignAverageMode { exact, monte_carlo };

inline constexpr int kExactSignBudget = 14;

namespace detail {

// Average over sign patterns of ||sum +- x_j||; exact enumeration or seeded
// Monte Carlo with a deterministic pairwise reduction.
inline std::pair<double, double> sign_average(const FiniteSpace& sp,
                                              const std::vector<Vector>& blocks,
                                              SignAverageMode mode, int mc_samples,
                                              std::uint64_t seed) {
  const int n = static_cast<int>(blocks.size());
  if (mode == SignAverageMode::exact) {
    if (n > kExactSignBudget)
      throw BudgetExceeded("sign_average: exact mode limited to n <= " +
                           std::to_string(kExactSignBudget));
    const std::uint64_t total = 1ull << n;
    std::vector<double> vals(total);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      Vector s = Vector::Zero(sp.dim);
      for (int j = 0; j < n; ++j) s += ((mask >> j) & 1u) ? blocks[j] : Vector(-blocks[j]);
      vals[mask] = sp.norm(s);
    }
    return {pairwise_sum(vals) / static_cast<double>(total), 0.0};
  }
  std::vector<double> vals(mc_samples);
  for (int t = 0; t < mc_samples; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    Vector s = Vector::Zero(sp.dim);
    for (int j = 0; j < n; ++j) s += rng.sign() * blocks[j];
    vals[t] = sp.norm(s);
  }
  double mean = pairwise_sum(vals) / mc_samples;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= std::max(1, mc_samples - 1);
  return {mean, std::sqrt(var / mc_samples)};
}

}  // namespace detail

// pi^beta: sup over searched unit families of the sign-average of the sum.
inline PiValue pi_beta(const FiniteSpace& sp, int n, SignAverageMode mode, const PiOptions& opt = {}) {
  if (n < 1) throw InvalidParameter("pi_beta: need n >= 1");
  std::vector<std::vector<Vector>> families;
  // disjoint normalized coordinates
  if (n <= sp.dim) {
    std::vector<Vector> fam;
    for (int i = 0; i < n; ++i) {
      Vector e = Vector::Unit(sp.dim, i);
      fam.push_back(e / sp.norm(e));
    }
    families.push_back(std::move(fam));
  }
  // n aligned copies of one normalized coordinate
  {
    Vector e = Vector::Unit(sp.dim, 0);
    families.push_back(std::vector<Vector>(n, e / sp.norm(e)));
  }
  // seeded random normalized vectors
  for (int s = 0; s < std::max(1, opt.search_samples / 8); ++s) {
    std::vector<Vector> fam;
    for (int j = 0; j < n; ++j) {
      Rng rng(opt.seed ^ 0xfadeULL, static_cast<std::uint64_t>(s * 1024 + j));
      Vector v = rng.gaussian_vector(sp.dim);
      double nv = sp.norm(v);
      if (nv <= 0) {
        v = Vector::Unit(sp.dim, 0);
        nv = sp.norm(v);
      }
      fam.push_back(v / nv);
    }
    families.push_back(std::move(fam));
  }
  PiValue out;
  out.estimator = (mode == SignAverageMode::exact) ? EstimatorKind::exact : EstimatorKind::monte_carlo;
  out.samples = (mode == SignAverageMode::exact) ? (1 << std::min(n, kExactSignBudget)) : opt.mc_sign_samples;
  for (std::size_t f = 0; f < families.size(); ++f) {
    auto [mean, se] =
        detail::sign_average(sp, families[f], mode, opt.mc_sign_samples,
                             opt.seed + 0x5157ULL * static_cast<std::uint64_t>(f));
    if (mean > out.value) {
      out.value = mean;
      out.std_error = se;
    }
  }
  return out;
}

struct PiTableRow {
  int n = 0;
  PiValue value;
};

struct PiTable {
  PiKind kind = PiKind::M;
  std::vector<PiTableRow> rows;
};

inline PiTable pi_table(const FiniteSpace& sp, PiKind kind, const std::vector<int>& ns,
                        SignAverageMode beta_mode = SignAverageMode::monte_carlo,
                        const PiOptions& opt = {}) {
  PiTable table;
  table.kind = kind;
  for (int n : ns) {
    PiTableRow row;
    row.n = n;
    switch (kind) {
      case PiKind::M:
        row.value = pi_M(sp, n, opt);
        break;
      case PiKind::A:
        row.value = pi_A(sp, n, 1, opt);
        break;
      case PiKind::beta:
        row.value = pi_beta(sp, n, n <= kExactSignBudget ? SignAverageMode::exact : beta_mode, opt);
        break;
    }
    table.rows.push_back(row);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Centered sign-average residual (the singularity estimate's left side)
// ---------------------------------------------------------------------------

struct DisjointFamily {
  std::vector<Vector> blocks;  // pairwise disjointly supported, norms <= 1 in X_theta
};

// Validates disjointness of supports.
inline void check_disjoint(const DisjointFamily& fam, int dim) {
  std::vector<bool> used(dim, false);
  for (const Vector& b : fam.blocks) {
    if (b.size() != dim) throw DimensionMismatch("DisjointFamily: block dimension mismatch");
    for (int i = 0; i < dim; ++i) {
      if (b[i] != 0.0) {
        if (used[i]) throw InvalidParameter("DisjointFamily: overlapping supports");
        used[i] = true;
      }
    }
  }
}

struct EmeConfig {
  FiniteSpace x0_trunc;   // endpoint truncation X_0
  FiniteSpace x1_trunc;   // endpoint truncation X_1
  FiniteSpace x_theta;    // interpolated truncation (residual norm)
  double theta = 0.5;
  SignAverageMode mode = SignAverageMode::exact;
  int mc_samples = 2000;
  std::uint64_t seed = 11;
};

struct EmeReport {
  int n = 0;
  double lambda_n = 0.0;
  double residual = 0.0;
  double rhs_scale = 0.0;
  double ratio = 0.0;
  EstimatorKind estimator = EstimatorKind::exact;
};

// Average over signs of || Omega(sum +- x_i) - sum Omega(+- x_i) - lambda_n sum +- x_i ||
// with lambda_n = log(pi_{X0}(n) / pi_{X1}(n)); the right-hand scale is
// pi_{X0}(n)^{1-theta} pi_{X1}(n)^theta.
inline EmeReport eme_residual(const EmeConfig& cfg, const DerivationSpec& omega,
                              const DisjointFamily& fam) {
  const int n = static_cast<int>(fam.blocks.size());
  if (n < 1) throw InvalidParameter("eme_residual: empty family");
  check_disjoint(fam, cfg.x_theta.dim);
  for (const Vector& b : fam.blocks)
    if (cfg.x_theta.norm(b) > 1.0 + 1e-9)
      throw InvalidParameter("eme_residual: block norm exceeds 1");
  double pi0 = pi_M(cfg.x0_trunc, n).value;
  double pi1 = pi_M(cfg.x1_trunc, n).value;
  EmeReport rep;
  rep.n = n;
  rep.lambda_n = std::log(pi0 / pi1);
  rep.rhs_scale = std::pow(pi0, 1.0 - cfg.theta) * std::pow(pi1, cfg.theta);

  auto value = [&](const std::vector<double>& signs) {
    Vector s = Vector::Zero(cfg.x_theta.dim);
    Vector sum_omega = Vector::Zero(cfg.x_theta.dim);
    for (int j = 0; j < n; ++j) {
      Vector t = signs[j] * fam.blocks[j];
      s += t;
      sum_omega += omega(t);
    }
    return cfg.x_theta.norm(omega(s) - sum_omega - rep.lambda_n * s);
  };

  if (cfg.mode == SignAverageMode::exact) {
    if (n > kExactSignBudget)
      throw BudgetExceeded("eme_residual: exact mode limited to n <= " +
                           std::to_string(kExactSignBudget));
    const std::uint64_t total = 1ull << n;
    std::vector<double> vals(total);
    std::vector<double> signs(n);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (int j = 0; j < n; ++j) signs[j] = ((mask >> j) & 1u) ? 1.0 : -1.0;
      vals[mask] = value(signs);
    }
    rep.residual = pairwise_sum(vals) / static_cast<double>(total);
    rep.estimator = EstimatorKind::exact;
  } else {
    std::vector<double> vals(cfg.mc_samples);
    std::vector<double> signs(n);
    for (int t = 0; t < cfg.mc_samples; ++t) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(t));
      for (int j = 0; j < n; ++j) signs[j] = rng.sign();
      vals[t] = value(signs);
    }
    rep.residual = pairwise_sum(vals) / cfg.mc_samples;
    rep.estimator = EstimatorKind::monte_carlo;
  }
  rep.ratio = (rep.rhs_scale > 0) ? rep.residual / rep.rhs_scale : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Restricted-growth evidence (est) and incomparability ratios
// ---------------------------------------------------------------------------

struct WFamilySpec {
  enum class Kind { unit_coords, equal_blocks } kind = Kind::unit_coords;
  int block_size = 1;
};

struct EstRow {
  int n = 0;
  double lambda_abs = 0.0;
  double pi_w = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct EstReport {
  std::vector<EstRow> rows;
  bool evidence = false;       // ratio diverges: no uniform constant can hold
  double log_fit_exponent = 0.0;  // exponent of ratio ~ (log n)^e
};

namespace detail {

inline bool diverges(const std::vector<double>& v) {
  if (v.size() < 3) return false;
  std::size_t m = v.size();
  bool tail_increasing = v[m - 1] > v[m - 2] && v[m - 2] > v[m - 3];
  double base = 0.0;
  for (double t : v) {
    if (t > 0) {
      base = t;
      break;
    }
  }
  return tail_increasing && base > 0.0 && v[m - 1] >= 1.5 * base;
}

}  // namespace detail

inline EstReport est_check(const WFamilySpec& wspec, const FiniteSpace& x0, const FiniteSpace& x1,
                           double theta, const FiniteSpace& x_theta, const std::vector<int>& ns) {
  if (!(theta > 0) || !(theta < 1)) throw InvalidParameter("est_check: theta in (0,1)");
  EstReport rep;
  std::vector<double> ratios;
  for (int n : ns) {
    int bs = (wspec.kind == WFamilySpec::Kind::equal_blocks) ? wspec.block_size : 1;
    if (n * bs > x_theta.dim)
      throw InsufficientDimension("est_check: family exceeds the dimension budget");
    std::vector<Vector> blocks;
    for (int j = 0; j < n; ++j) {
      Vector b = Vector::Zero(x_theta.dim);
      for (int t = 0; t < bs; ++t) b[j * bs + t] = 1.0;
      blocks.push_back(b / x_theta.norm(b));
    }
    EstRow row;
    row.n = n;
    double pi0 = pi_M(x0, n).value;
    double pi1 = pi_M(x1, n).value;
    row.lambda_abs = std::abs(std::log(pi0 / pi1));
    row.pi_w = detail::family_sum_norm(x_theta, blocks);
    row.lhs = row.lambda_abs * row.pi_w;
    row.rhs = std::pow(pi0, 1.0 - theta) * std::pow(pi1, theta);
    row.ratio = (row.rhs > 0) ? row.lhs / row.rhs : 0.0;
    ratios.push_back(row.ratio);
    rep.rows.push_back(row);
  }
  rep.evidence = detail::diverges(ratios);
  // fit ratio ~ (log n)^e over the positive entries
  std::vector<double> xs, ys;
  for (const EstRow& r : rep.rows) {
    if (r.ratio > 0 && r.n >= 3) {
      xs.push_back(std::log(static_cast<double>(r.n)));
      ys.push_back(r.ratio);
    }
  }
  rep.log_fit_exponent = (xs.size() >= 2) ? loglog_fit_exponent(xs, ys) : 0.0;
  return rep;
}

struct IncompRow {
  int n = 0;
  double ratio = 0.0;       // (pi1 / pi0)^{theta - t}
  double divergence = 0.0;  // max(ratio, 1/ratio)
};

struct IncompReport {
  std::vector<IncompRow> rows;
  bool evidence = false;
  double fit_exponent = 0.0;  // divergence ~ n^e
};

inline IncompReport incomparability_ratio(const FiniteSpace& x0, const FiniteSpace& x1,
                                          double theta, double t, const std::vector<int>& ns) {
  if (!(theta > 0) || !(theta < 1) || !(t > 0) || !(t < 1))
    throw InvalidParameter("incomparability_ratio: parameters must lie in (0,1)");
  if (theta == t) throw InvalidParameter("incomparability_ratio: theta == t");
  IncompReport rep;
  std::vector<double> xs, ds;
  for (int n : ns) {
    double pi0 = pi_M(x0, n).value;
    double pi1 = pi_M(x1, n).value;
    IncompRow row;
    row.n = n;
    row.ratio = std::pow(pi1 / pi0, theta - t);
    row.divergence = std::max(row.ratio, 1.0 / row.ratio);
    rep.rows.push_back(row);
    xs.push_back(static_cast<double>(n));
    ds.push_back(row.divergence);
  }
  rep.evidence = detail::diverges(ds);
  rep.fit_exponent = (xs.size() >= 2) ? loglog_fit_exponent(xs, ds) : 0.0;
  return rep;
}

}  // namespace twistlab
