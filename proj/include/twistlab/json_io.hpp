#pragma once

// JSON (de)serialization for norm specs, interpolator pairs, derivation
// specs, scale operators, and reports.  Schemas are documented in docs/.

#include "twistlab/commutators.hpp"
#include "twistlab/geometry.hpp"
#include "twistlab/singularity.hpp"

#include <json.hpp>

#include <sstream>

namespace twistlab {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

namespace jsonio {

inline double parse_extended_real(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
  }
  throw ConfigError(std::string(what) + ": expected a number or \"inf\"");
}

inline json dump_extended_real(double p) {
  if (p == kInf) return json("inf");
  return json(p);
}

inline Vector parse_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + ": non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline json dump_vector(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// row-major flat array
inline Matrix parse_matrix(const json& j, int rows, int cols, const char* what) {
  Vector flat = parse_vector(j, what);
  if (flat.size() != static_cast<Eigen::Index>(rows) * cols)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(rows * cols) +
                      " entries");
  Matrix M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = flat[r * cols + c];
  return M;
}

inline json dump_matrix(const Matrix& M) {
  json a = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c) a.push_back(M(r, c));
  return a;
}

template <typename T>
T require_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace jsonio

// ---------------------------------------------------------------------------
// NFunction
// ---------------------------------------------------------------------------

inline json to_json(const NFunction& f) {
  switch (f.kind()) {
    case NFunction::Kind::power:
      return json{{"kind", "power"}, {"p", f.p()}};
    case NFunction::Kind::power_log:
      return json{{"kind", "power_log"}, {"p", f.p()}, {"q", f.q()}};
    case NFunction::Kind::table:
      return json{{"kind", "table"}, {"t", f.table_t()}, {"phi", f.table_phi()}};
  }
  throw ConfigError("NFunction: unknown kind");
}

inline NFunction nfunction_from_json(const json& j) {
  std::string kind = jsonio::require_field<std::string>(j, "kind");
  try {
    if (kind == "power") return NFunction::power(jsonio::require_field<double>(j, "p"));
    if (kind == "power_log")
      return NFunction::power_log(jsonio::require_field<double>(j, "p"),
                                  jsonio::require_field<double>(j, "q"));
    if (kind == "table")
      return NFunction::table(jsonio::require_field<std::vector<double>>(j, "t"),
                              jsonio::require_field<std::vector<double>>(j, "phi"));
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("nfunction: ") + e.what());
  }
  throw ConfigError("nfunction: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// NormSpec / FiniteSpace
// ---------------------------------------------------------------------------

inline json to_json(const NormSpec& s) {
  switch (s.kind()) {
    case NormKind::lp:
      return json{{"kind", "lp"}, {"p", jsonio::dump_extended_real(s.p())}};
    case NormKind::weighted:
      return json{{"kind", "weighted"},
                  {"base", to_json(s.first())},
                  {"weights", jsonio::dump_vector(s.weights())}};
    case NormKind::orlicz:
      return json{{"kind", "orlicz"}, {"phi", to_json(s.nfunction())}};
    case NormKind::lorentz:
      return json{{"kind", "lorentz"}, {"p", s.p()}, {"q", s.q()}};
    case NormKind::sum:
      return json{{"kind", "sum"}, {"first", to_json(s.first())}, {"second", to_json(s.second())}};
    case NormKind::intersection:
      return json{{"kind", "intersection"},
                  {"first", to_json(s.first())},
                  {"second", to_json(s.second())}};
  }
  throw ConfigError("NormSpec: unknown kind");
}

inline NormSpec norm_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("norm spec: expected an object");
  std::string kind = jsonio::require_field<std::string>(j, "kind");
  try {
    if (kind == "lp") {
      if (!j.contains("p")) throw ConfigError("norm spec lp: missing 'p'");
      return NormSpec::lp(jsonio::parse_extended_real(j.at("p"), "lp.p"));
    }
    if (kind == "weighted") {
      if (!j.contains("base")) throw ConfigError("norm spec weighted: missing 'base'");
      if (!j.contains("weights")) throw ConfigError("norm spec weighted: missing 'weights'");
      return NormSpec::weighted(norm_spec_from_json(j.at("base")),
                                jsonio::parse_vector(j.at("weights"), "weighted.weights"));
    }
    if (kind == "orlicz") {
      if (!j.contains("phi")) throw ConfigError("norm spec orlicz: missing 'phi'");
      return NormSpec::orlicz(nfunction_from_json(j.at("phi")));
    }
    if (kind == "lorentz")
      return NormSpec::lorentz(jsonio::require_field<double>(j, "p"),
                               jsonio::require_field<double>(j, "q"));
    if (kind == "sum" || kind == "intersection") {
      if (!j.contains("first") || !j.contains("second"))
        throw ConfigError("norm spec " + kind + ": missing 'first'/'second'");
      NormSpec a = norm_spec_from_json(j.at("first"));
      NormSpec b = norm_spec_from_json(j.at("second"));
      return kind == "sum" ? NormSpec::sum(a, b) : NormSpec::intersection(a, b);
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("norm spec: ") + e.what());
  }
  throw ConfigError("norm spec: unknown kind '" + kind + "'");
}

inline json to_json(const FiniteSpace& sp) {
  return json{{"dim", sp.dim}, {"spec", to_json(sp.spec)}};
}

inline FiniteSpace finite_space_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("finite space: expected an object");
  int dim = jsonio::require_field<int>(j, "dim");
  if (!j.contains("spec")) throw ConfigError("finite space: missing 'spec'");
  try {
    return FiniteSpace(dim, norm_spec_from_json(j.at("spec")));
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("finite space: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// MatrixInterpolatorPair / SelectorConfig
// ---------------------------------------------------------------------------

inline json to_json(const MatrixInterpolatorPair& pair) {
  return json{{"m", pair.m()},
              {"k", pair.k()},
              {"Psi", jsonio::dump_matrix(pair.Psi)},
              {"Phi", jsonio::dump_matrix(pair.Phi)},
              {"H_norm", to_json(pair.H_norm)},
              {"Sigma_norm", to_json(pair.Sigma_norm)},
              {"rank_tol", pair.rank_tol}};
}

inline MatrixInterpolatorPair pair_from_json(const json& j) {
  int m = jsonio::require_field<int>(j, "m");
  int k = jsonio::require_field<int>(j, "k");
  if (!j.contains("Psi") || !j.contains("Phi"))
    throw ConfigError("pair: missing 'Psi' or 'Phi'");
  Matrix Psi = jsonio::parse_matrix(j.at("Psi"), k, m, "pair.Psi");
  Matrix Phi = jsonio::parse_matrix(j.at("Phi"), k, m, "pair.Phi");
  FiniteSpace h = j.contains("H_norm") ? finite_space_from_json(j.at("H_norm"))
                                       : FiniteSpace::euclidean(m);
  FiniteSpace s = j.contains("Sigma_norm") ? finite_space_from_json(j.at("Sigma_norm"))
                                           : FiniteSpace::euclidean(k);
  double tol = j.value("rank_tol", kDefaultRankTol);
  try {
    return MatrixInterpolatorPair(std::move(Psi), std::move(Phi), std::move(h), std::move(s), tol);
  } catch (const Error& e) {
    throw ConfigError(std::string("pair: ") + e.what());
  }
}

inline SelectorConfig selector_from_json(const json& j) {
  SelectorConfig cfg;
  cfg.epsilon = j.value("epsilon", 0.0);
  std::string method = j.value("method", std::string("exact_euclidean"));
  if (method == "exact_euclidean")
    cfg.method = SelectorMethod::exact_euclidean;
  else if (method == "convex_minimize")
    cfg.method = SelectorMethod::convex_minimize;
  else
    throw ConfigError("selector: unknown method '" + method + "'");
  return cfg;
}

// ---------------------------------------------------------------------------
// DerivationSpec
// ---------------------------------------------------------------------------

inline json to_json(const DerivationSpec& d) {
  json j;
  j["sign"] = (d.sign() == SignConvention::canonical) ? "canonical" : "flipped";
  if (auto* kp = std::get_if<KaltonPeckParams>(&d.params())) {
    j["kind"] = "kalton-peck";
    j["p0"] = jsonio::dump_extended_real(kp->p0);
    j["p1"] = jsonio::dump_extended_real(kp->p1);
    j["theta"] = kp->theta;
  } else if (auto* wl = std::get_if<WeightedLogParams>(&d.params())) {
    j["kind"] = "weighted-log";
    j["w0"] = jsonio::dump_vector(wl->w0);
    j["w1"] = jsonio::dump_vector(wl->w1);
    j["theta"] = wl->theta;
    j["base"] = to_json(wl->base);
  } else if (auto* lz = std::get_if<LorentzDerivParams>(&d.params())) {
    j["kind"] = "lorentz";
    j["p0"] = jsonio::dump_extended_real(lz->p0);
    j["q0"] = jsonio::dump_extended_real(lz->q0);
    j["p1"] = jsonio::dump_extended_real(lz->p1);
    j["q1"] = jsonio::dump_extended_real(lz->q1);
    j["theta"] = lz->theta;
  } else if (auto* oh = std::get_if<OrliczHalfParams>(&d.params())) {
    j["kind"] = "orlicz-half";
    j["phi0"] = to_json(oh->phi0);
    j["phi1"] = to_json(oh->phi1);
  } else if (auto* cc = std::get_if<ConcavificationParams>(&d.params())) {
    j["kind"] = "concavification";
    j["p"] = cc->p;
    j["base_space"] = to_json(cc->base);
  } else if (auto* mm = std::get_if<MatrixModelParams>(&d.params())) {
    j["kind"] = "matrix-model";
    j["pair"] = to_json(mm->pair);
  }
  return j;
}

inline DerivationSpec derivation_from_json(const json& j) {
  std::string kind = jsonio::require_field<std::string>(j, "kind");
  std::string sign_s = j.value("sign", std::string("canonical"));
  SignConvention sign;
  if (sign_s == "canonical")
    sign = SignConvention::canonical;
  else if (sign_s == "flipped")
    sign = SignConvention::flipped;
  else
    throw ConfigError("derivation: unknown sign convention '" + sign_s + "'");
  try {
    if (kind == "kalton-peck") {
      return DerivationSpec::kalton_peck(jsonio::parse_extended_real(j.at("p0"), "p0"),
                                         jsonio::parse_extended_real(j.at("p1"), "p1"),
                                         jsonio::require_field<double>(j, "theta"), sign);
    }
    if (kind == "weighted-log") {
      NormSpec base = j.contains("base") ? norm_spec_from_json(j.at("base")) : NormSpec::lp(1.0);
      return DerivationSpec::weighted_log(jsonio::parse_vector(j.at("w0"), "w0"),
                                          jsonio::parse_vector(j.at("w1"), "w1"),
                                          j.value("theta", 0.5), base, sign);
    }
    if (kind == "lorentz") {
      return DerivationSpec::lorentz(
          jsonio::parse_extended_real(j.at("p0"), "p0"), jsonio::parse_extended_real(j.at("q0"), "q0"),
          jsonio::parse_extended_real(j.at("p1"), "p1"), jsonio::parse_extended_real(j.at("q1"), "q1"),
          jsonio::require_field<double>(j, "theta"), sign);
    }
    if (kind == "orlicz-half") {
      if (!j.contains("phi0") || !j.contains("phi1"))
        throw ConfigError("derivation orlicz-half: missing phi0/phi1");
      return DerivationSpec::orlicz_half(nfunction_from_json(j.at("phi0")),
                                         nfunction_from_json(j.at("phi1")), sign);
    }
    if (kind == "concavification") {
      if (!j.contains("base_space")) throw ConfigError("derivation concavification: missing base_space");
      return DerivationSpec::concavification(jsonio::require_field<double>(j, "p"),
                                             finite_space_from_json(j.at("base_space")), sign);
    }
    if (kind == "matrix-model") {
      if (!j.contains("pair")) throw ConfigError("derivation matrix-model: missing pair");
      SelectorConfig cfg =
          j.contains("selector") ? selector_from_json(j.at("selector")) : SelectorConfig{};
      return DerivationSpec::matrix_model(pair_from_json(j.at("pair")), cfg, sign);
    }
  } catch (const json::exception&) {
    throw ConfigError("derivation: malformed fields for kind '" + kind + "'");
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("derivation: ") + e.what());
  }
  throw ConfigError("derivation: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// ScaleOperator
// ---------------------------------------------------------------------------

inline json to_json(const ScaleOperator& op, int n) {
  switch (op.kind()) {
    case ScaleOperator::Kind::diagonal:
      return json{{"kind", "diagonal"}, {"d", jsonio::dump_vector(op.apply(Vector::Ones(n)))}};
    default:
      break;
  }
  json j;
  j["kind"] = "matrix";
  j["n"] = n;
  j["matrix"] = jsonio::dump_matrix(op.to_matrix(n));
  return j;
}

inline ScaleOperator scale_operator_from_json(const json& j) {
  std::string kind = jsonio::require_field<std::string>(j, "kind");
  try {
    if (kind == "diagonal") {
      if (!j.contains("d")) throw ConfigError("tau diagonal: missing 'd'");
      return ScaleOperator::diagonal(jsonio::parse_vector(j.at("d"), "tau.d"));
    }
    if (kind == "permutation")
      return ScaleOperator::permutation(jsonio::require_field<std::vector<int>>(j, "sigma"));
    if (kind == "shift") return ScaleOperator::shift(jsonio::require_field<int>(j, "offset"));
    if (kind == "band") {
      int n = jsonio::require_field<int>(j, "n");
      int bw = jsonio::require_field<int>(j, "bandwidth");
      if (!j.contains("matrix")) throw ConfigError("tau band: missing 'matrix'");
      return ScaleOperator::band(jsonio::parse_matrix(j.at("matrix"), n, n, "tau.matrix"), bw);
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("tau: ") + e.what());
  }
  throw ConfigError("tau: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json to_json(const GapReport& r) {
  return json{{"g", r.g},           {"gamma_mn", r.gamma_mn}, {"gamma_nm", r.gamma_nm},
              {"R", r.R},           {"certified", r.certified}, {"restarts", r.restarts},
              {"seed", r.seed}};
}

inline json to_json(const CommutatorReport& r) {
  return json{{"empirical", r.empirical},
              {"bound", r.bound},
              {"pass", r.pass},
              {"samples", r.samples},
              {"seed", r.seed}};
}

inline json to_json(const DomRanReport& r) {
  return json{{"dom_gap", r.dom_gap},
              {"ran_gap", r.ran_gap},
              {"symmetric_membership_violations", r.symmetric_membership_violations},
              {"max_membership_residual", r.max_membership_residual},
              {"samples", r.samples}};
}

inline json to_json(const EmeReport& r) {
  return json{{"n", r.n},
              {"lambda_n", r.lambda_n},
              {"residual", r.residual},
              {"rhs_scale", r.rhs_scale},
              {"ratio", r.ratio},
              {"estimator", estimator_name(r.estimator)}};
}

// Parse a JSON document from text, mapping parse failures to ConfigError.
inline json parse_json_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(std::string(what) + ": malformed JSON");
  return j;
}

}  // namespace twistlab
