// twistlab command-line tool: norm evaluation, derivation maps, subspace
// gaps, commutator checks, singularity scans, and the seeded experiment
// runner.
//
// Exit codes: 0 all assertions pass, 1 assertion failure, 2 config error,
// 3 numerical failure / budget exceeded.

#include "twistlab/twistlab.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace twistlab;

constexpr int kExitPass = 0;
constexpr int kExitAssert = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json_text(text, path.c_str());
}

Vector load_vector_file(const std::string& path) {
  json j = load_json_file(path);
  if (j.is_object() && j.contains("x")) j = j.at("x");
  return jsonio::parse_vector(j, path.c_str());
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  out << text;
}

std::vector<int> parse_n_range(const std::string& s) {
  // "a..b" inclusive doubling from a, or a comma list
  std::vector<int> ns;
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    int a = std::stoi(s.substr(0, dots));
    int b = std::stoi(s.substr(dots + 2));
    if (a < 1 || b < a) throw ConfigError("bad range '" + s + "'");
    for (int n = a; n <= b; n *= 2) {
      ns.push_back(n);
      if (n == b) break;
      if (n * 2 > b) {
        ns.push_back(b);
        break;
      }
    }
    return ns;
  }
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    ns.push_back(std::stoi(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (ns.empty()) throw ConfigError("bad n list '" + s + "'");
  return ns;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"twistlab: finite-dimensional interpolation-derivation laboratory"};
  app.require_subcommand(1);

  // ---- norm eval ----
  auto* norm_cmd = app.add_subcommand("norm", "norm engines");
  auto* norm_eval = norm_cmd->add_subcommand("eval", "evaluate a norm spec on a vector");
  std::string norm_space, norm_input, norm_out;
  norm_eval->add_option("--space", norm_space, "FiniteSpace JSON file")->required();
  norm_eval->add_option("--input", norm_input, "vector JSON file")->required();
  norm_eval->add_option("--out", norm_out, "output path (default stdout)");

  // ---- deriv eval ----
  auto* deriv_cmd = app.add_subcommand("deriv", "derivation maps");
  auto* deriv_eval = deriv_cmd->add_subcommand("eval", "evaluate a derivation spec on a vector");
  std::string deriv_spec, deriv_input, deriv_out;
  deriv_eval->add_option("--spec", deriv_spec, "DerivationSpec JSON file")->required();
  deriv_eval->add_option("--input", deriv_input, "vector JSON file")->required();
  deriv_eval->add_option("--out", deriv_out, "output path (default stdout)");

  // ---- gap ----
  auto* gap_cmd = app.add_subcommand("gap", "subspace gap geometry");
  auto* gap_compute = gap_cmd->add_subcommand("compute", "gap report for two subspaces");
  std::string gap_ambient, gap_m, gap_n, gap_out;
  std::uint64_t gap_seed = 0x9a9ULL;
  gap_compute->add_option("--ambient", gap_ambient, "FiniteSpace JSON file")->required();
  gap_compute->add_option("--m", gap_m, "basis JSON (row-major with rows/cols)")->required();
  gap_compute->add_option("--n", gap_n, "basis JSON (row-major with rows/cols)")->required();
  gap_compute->add_option("--seed", gap_seed, "search seed");
  gap_compute->add_option("--out", gap_out, "output path");

  // ---- comm check ----
  auto* comm_cmd = app.add_subcommand("comm", "commutator checks");
  auto* comm_check = comm_cmd->add_subcommand("check", "empirical commutator norm vs bound");
  std::string comm_tau, comm_omega, comm_x0, comm_x1, comm_out;
  int comm_n = 128, comm_samples = 10000;
  std::uint64_t comm_seed = 7;
  comm_check->add_option("--tau", comm_tau, "ScaleOperator JSON file")->required();
  comm_check->add_option("--omega", comm_omega, "DerivationSpec JSON file")->required();
  comm_check->add_option("--x0", comm_x0, "endpoint norm spec JSON file");
  comm_check->add_option("--x1", comm_x1, "endpoint norm spec JSON file");
  comm_check->add_option("--n", comm_n, "dimension");
  comm_check->add_option("--samples", comm_samples, "sample count");
  comm_check->add_option("--seed", comm_seed, "seed");
  comm_check->add_option("--out", comm_out, "output path");

  // ---- sing ----
  auto* sing_cmd = app.add_subcommand("sing", "singularity parameters and estimates");
  auto* sing_pi = sing_cmd->add_subcommand("pi", "pi growth scan (CSV)");
  std::string pi_space, pi_kind = "M", pi_n = "1..256", pi_mode = "auto", pi_out;
  std::uint64_t pi_seed = 11;
  sing_pi->add_option("--space", pi_space, "FiniteSpace JSON file")->required();
  sing_pi->add_option("--kind", pi_kind, "M | A | beta");
  sing_pi->add_option("--n", pi_n, "range a..b (doubling) or comma list");
  sing_pi->add_option("--mode", pi_mode, "exact | montecarlo | auto (beta only)");
  sing_pi->add_option("--seed", pi_seed, "seed");
  sing_pi->add_option("--out", pi_out, "output path");

  auto* sing_eme = sing_cmd->add_subcommand("eme", "centered sign-average residual");
  std::string eme_config, eme_out;
  sing_eme->add_option("--config", eme_config, "eme experiment config JSON")->required();
  sing_eme->add_option("--out", eme_out, "output path");

  auto* sing_est = sing_cmd->add_subcommand("est", "restricted-growth estimate");
  std::string est_config, est_out;
  sing_est->add_option("--config", est_config, "est experiment config JSON")->required();
  sing_est->add_option("--out", est_out, "output path");

  // ---- experiment ----
  auto* exp_cmd = app.add_subcommand("experiment", "seeded batch experiments");
  auto* exp_list = exp_cmd->add_subcommand("list", "list experiment kinds");
  bool list_json = false;
  exp_list->add_flag("--json", list_json, "machine-readable registry");
  auto* exp_run = exp_cmd->add_subcommand("run", "run an experiment config");
  std::string run_config, run_out;
  exp_run->add_option("--config", run_config, "ExperimentConfig JSON file")->required();
  exp_run->add_option("--out", run_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  if (*norm_eval) {
    FiniteSpace sp = finite_space_from_json(load_json_file(norm_space));
    Vector x = load_vector_file(norm_input);
    json out{{"norm", sp.norm(x)}};
    emit(out.dump(2) + "\n", norm_out);
    return kExitPass;
  }
  if (*deriv_eval) {
    DerivationSpec d = derivation_from_json(load_json_file(deriv_spec));
    Vector x = load_vector_file(deriv_input);
    json out{{"omega", jsonio::dump_vector(d(x))}};
    emit(out.dump(2) + "\n", deriv_out);
    return kExitPass;
  }
  if (*gap_compute) {
    FiniteSpace amb = finite_space_from_json(load_json_file(gap_ambient));
    auto load_basis = [&](const std::string& path) {
      json j = load_json_file(path);
      int rows = jsonio::require_field<int>(j, "rows");
      int cols = jsonio::require_field<int>(j, "cols");
      if (!j.contains("data")) throw ConfigError(path + ": missing 'data'");
      return jsonio::parse_matrix(j.at("data"), rows, cols, path.c_str());
    };
    GapOptions go;
    go.seed = gap_seed;
    Subspace M(amb, load_basis(gap_m)), N(amb, load_basis(gap_n));
    emit(to_json(gap(M, N, go)).dump(2) + "\n", gap_out);
    return kExitPass;
  }
  if (*comm_check) {
    ScaleOperator tau = scale_operator_from_json(load_json_file(comm_tau));
    DerivationSpec omega = derivation_from_json(load_json_file(comm_omega));
    NormSpec x0 = comm_x0.empty() ? NormSpec::lp(1.0) : norm_spec_from_json(load_json_file(comm_x0));
    NormSpec x1 = comm_x1.empty() ? NormSpec::lp(kInf) : norm_spec_from_json(load_json_file(comm_x1));
    FiniteSpace x_theta = omega.natural_space(comm_n);
    CommutatorReport rep =
        check_commutator_theorem(tau, omega, FiniteSpace(comm_n, x0), FiniteSpace(comm_n, x1),
                                 x_theta, comm_n, comm_samples, comm_seed);
    emit(to_json(rep).dump(2) + "\n", comm_out);
    return rep.pass ? kExitPass : kExitAssert;
  }
  if (*sing_pi) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::pi_scan;
    cfg.seed = pi_seed;
    cfg.params = json{{"space", load_json_file(pi_space)},
                      {"kind", pi_kind},
                      {"mode", pi_mode},
                      {"n_list", parse_n_range(pi_n)}};
    ExperimentOutcome out = run_experiment(cfg);
    emit(out.body, pi_out);
    return out.all_pass ? kExitPass : kExitAssert;
  }
  auto run_config_experiment = [&](const std::string& path, const std::string& out_path,
                                   const char* expected_kind) {
    ExperimentConfig cfg = experiment_config_from_json(load_json_file(path));
    if (expected_kind && experiment_info(cfg.kind).name != std::string(expected_kind))
      throw ConfigError(std::string("config is not a '") + expected_kind + "' experiment");
    ExperimentOutcome out = run_experiment(cfg);
    emit(out.body, out_path);
    return out.all_pass ? kExitPass : kExitAssert;
  };
  if (*sing_eme) return run_config_experiment(eme_config, eme_out, "eme");
  if (*sing_est) return run_config_experiment(est_config, est_out, "est");
  if (*exp_list) {
    if (list_json) {
      json arr = json::array();
      for (const auto& e : experiment_registry())
        arr.push_back(json{{"name", e.name}, {"description", e.description}, {"checks", e.checks}});
      std::cout << arr.dump(2) << "\n";
    } else {
      for (const auto& e : experiment_registry()) {
        std::printf("%-14s %s\n", e.name, e.description);
        std::printf("%-14s   checks: %s\n", "", e.checks);
      }
    }
    return kExitPass;
  }
  if (*exp_run) return run_config_experiment(run_config, run_out, nullptr);
  std::cerr << "no subcommand action\n";
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const twistlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const twistlab::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const twistlab::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const twistlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
