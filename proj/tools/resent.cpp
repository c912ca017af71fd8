// resent: command-line front end for concurrence and residual entanglement.
//
//   resent compute FILE [--restarts N] [--seed S] [--max-iter N] [--tol X] [--output PATH]
//   resent concurrence FILE --focus 0,1 [--output PATH]
//   resent random --dims 2,2,2 [--seed S] [--out PATH]
//   resent verify --suite identities|monogamy|reduction|oracle [--trials N] [--dims ...]
//
// Exit codes: 0 success, 1 validation error, 2 property/monogamy failure,
// 3 optimizer non-convergence.

#include <resent/resent.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kPropertyFailure = 2, kNotConverged = 3 };

struct OptimizerFlags {
  int restarts = 32;
  int max_iter = 1000;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool allow_nonconverged = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts", restarts, "optimizer restarts")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "base seed; restart k uses seed + k")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "iterations per smoothing stage")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "required objective gain over 10 iterations")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_flag("--allow-nonconverged", allow_nonconverged,
                  "exit 0 even when an optimizer run hit its iteration cap");
  }

  resent::OptimizerConfig config() const {
    resent::OptimizerConfig c;
    c.restarts = restarts;
    c.max_iter = max_iter;
    c.tol = tol;
    c.seed = seed;
    return c;
  }
};

std::string fixed6(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string focus_string(const std::vector<int>& parties) {
  std::string s = "{";
  for (std::size_t k = 0; k < parties.size(); ++k) s += (k ? "," : "") + std::to_string(parties[k]);
  return s + "}";
}

std::string concurrence_json(const resent::Dims& dims, bool pure, const std::vector<int>& focus,
                             double c2, bool converged) {
  using resent::detail::fmt_bool;
  using resent::detail::fmt_double;
  using resent::detail::fmt_int_list;
  return std::string("{\n  \"tool\": \"") + resent::kToolName + "\",\n  \"version\": \"" +
         resent::kToolVersion + "\",\n  \"kind\": \"" + (pure ? "pure" : "density") +
         "\",\n  \"dims\": " + fmt_int_list(dims) + ",\n  \"focus\": " + fmt_int_list(focus) +
         ",\n  \"c2\": " + fmt_double(c2) + ",\n  \"lower_bound_semantics\": " + fmt_bool(!pure) +
         ",\n  \"converged\": " + fmt_bool(converged) + "\n}\n";
}

struct BipartiteValue {
  double c2 = 0.0;
  bool converged = true;
};

BipartiteValue bipartite_c2(const resent::State& state, const resent::Bipartition& bip,
                            const resent::OptimizerConfig& cfg) {
  if (const auto* psi = std::get_if<resent::PureState>(&state)) {
    return {resent::pure_concurrence_sq(*psi, bip), true};
  }
  const auto& rho = std::get<resent::DensityMatrix>(state);
  const resent::MixedConcurrence m =
      resent::mixed_concurrence_sq(resent::group_bipartition(rho, bip), cfg);
  return {m.value, m.converged};
}

int run_compute(const std::string& input, const OptimizerFlags& flags, const std::string& output) {
  const resent::State state = resent::load_state_file(input).to_state();
  const resent::Dims& dims = resent::state_dims(state);
  const bool pure = resent::is_pure(state);
  const resent::OptimizerConfig cfg = flags.config();

  if (dims.size() < 2) {
    std::cerr << "error: " << input << ": a single party has no entanglement structure\n";
    return kValidation;
  }
  if (dims.size() == 2) {
    std::cout << "notice: two-party input; computing the concurrence across 0|1 instead of a "
                 "residual entanglement\n";
    const auto bip = resent::Bipartition::make(2, {0});
    const BipartiteValue v = bipartite_c2(state, bip, cfg);
    std::cout << "C^2 = " << fixed6(v.c2) << "\n";
    if (!output.empty()) {
      resent::write_text_file(output, concurrence_json(dims, pure, bip.focus(), v.c2, v.converged));
    }
    if (!v.converged && !flags.allow_nonconverged) {
      std::cerr << "error: optimizer did not converge\n";
      return kNotConverged;
    }
    return kOk;
  }

  const resent::TangleReport report = resent::residual_entanglement(state, cfg);
  if (!report.pure) {
    std::cout << "notice: mixed input; totals use the mixed-state lower bound\n";
  }
  std::cout << "focus        total_sq      sum_pair_sq   tau\n";
  for (const auto& f : report.foci) {
    double pairs = 0.0;
    for (const auto& p : f.pair_sq) pairs += p.c2;
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %-13.9f %-13.9f %.9f%s\n", focus_string(f.focus).c_str(),
                  f.total_sq, pairs, f.tau, f.converged ? "" : "  (not converged)");
    std::cout << line;
  }
  std::cout << "residual = " << fixed6(report.residual) << "\n";
  std::cout << "argmin focus = " << focus_string(report.minimizer().focus) << "\n";
  if (!output.empty()) resent::write_text_file(output, resent::write_report(report));

  if (report.monogamy_violation) {
    std::cerr << "error: monogamy violated beyond " << resent::tol::kMonogamy
              << " (raw residual " << report.residual_raw << ")\n";
    return kPropertyFailure;
  }
  if (!report.all_converged && !flags.allow_nonconverged) {
    std::cerr << "error: at least one optimizer run did not converge\n";
    return kNotConverged;
  }
  return kOk;
}

int run_concurrence(const std::string& input, const std::vector<int>& focus,
                    const OptimizerFlags& flags, const std::string& output) {
  const resent::State state = resent::load_state_file(input).to_state();
  const resent::Dims& dims = resent::state_dims(state);
  const auto bip = resent::Bipartition::make(static_cast<int>(dims.size()), focus);
  const BipartiteValue v = bipartite_c2(state, bip, flags.config());
  std::cout << fixed6(v.c2) << "\n";
  if (!output.empty()) {
    resent::write_text_file(
        output, concurrence_json(dims, resent::is_pure(state), bip.focus(), v.c2, v.converged));
  }
  if (!v.converged && !flags.allow_nonconverged) {
    std::cerr << "error: optimizer did not converge\n";
    return kNotConverged;
  }
  return kOk;
}

int run_random(const resent::Dims& dims, std::uint64_t seed, const std::string& out,
               const std::string& label) {
  if (dims.size() < 2) {
    std::cerr << "error: --dims needs at least two parties (a single party has no entanglement "
                 "structure)\n";
    return kValidation;
  }
  resent::StateFile file = resent::StateFile::from_state(resent::random_pure(dims, seed));
  file.seed = seed;
  if (!label.empty()) file.label = label;
  const std::string text = resent::write_state_file(file);
  if (out.empty()) {
    std::cout << text;
  } else {
    resent::write_text_file(out, text);
  }
  return kOk;
}

int run_verify(const std::string& suite, resent::SuiteOptions opt) {
  const resent::SuiteResult result = resent::run_suite(suite, opt);
  std::cout << "suite " << result.suite << ", " << result.rows.size() << " trials, seed "
            << opt.seed << "\n";
  std::cout << "trial";
  for (const auto& c : result.columns) std::cout << "  " << c;
  std::cout << "  status\n";
  for (const auto& row : result.rows) {
    std::cout << row.trial;
    for (double v : row.values) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %.3e", v);
      std::cout << buf;
    }
    std::cout << (row.pass ? "  PASS\n" : "  FAIL\n");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", result.worst);
  std::cout << result.suite << ": worst " << buf << " (" << result.criterion << ") "
            << (result.pass ? "PASS" : "FAIL") << "\n";
  return result.pass ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite concurrence and residual entanglement of multipartite states"};
  app.set_version_flag("--version", std::string(resent::kToolVersion));
  app.require_subcommand(1);

  std::string input, output;
  OptimizerFlags flags;

  auto* compute = app.add_subcommand("compute", "residual entanglement report for a state file");
  compute->add_option("input", input, "state file")->required();
  compute->add_option("--output", output, "write the JSON report here");
  flags.attach(compute);

  std::vector<int> focus;
  auto* concurrence = app.add_subcommand("concurrence", "squared concurrence across focus|rest");
  concurrence->add_option("input", input, "state file")->required();
  concurrence->add_option("--focus", focus, "focus parties, e.g. 0,2")->required()->delimiter(',');
  concurrence->add_option("--output", output, "write a JSON record here");
  flags.attach(concurrence);

  resent::Dims dims;
  std::uint64_t random_seed = 0;
  std::string random_out, label;
  auto* random = app.add_subcommand("random", "write a Haar-random pure state file");
  random->add_option("--dims", dims, "party dimensions, e.g. 2,2,2")->required()->delimiter(',')
      ->check(CLI::Range(2, 1 << 20));
  random->add_option("--seed", random_seed)->capture_default_str();
  random->add_option("--out", random_out, "output path (stdout when omitted)");
  random->add_option("--label", label, "metadata label");

  std::string suite;
  resent::SuiteOptions suite_opt;
  auto* verify = app.add_subcommand("verify", "run a randomized property sweep");
  verify->add_option("--suite", suite, "identities | monogamy | reduction | oracle")->required()
      ->check(CLI::IsMember({"identities", "monogamy", "reduction", "oracle"}));
  verify->add_option("--trials", suite_opt.trials)->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--dims", suite_opt.dims, "party dimensions")->delimiter(',')
      ->check(CLI::Range(2, 1 << 20));
  verify->add_option("--roof-trials", suite_opt.roof_trials, "decompositions per oracle trial")
      ->capture_default_str()->check(CLI::PositiveNumber);
  flags.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*compute) return run_compute(input, flags, output);
    if (*concurrence) return run_concurrence(input, focus, flags, output);
    if (*random) return run_random(dims, random_seed, random_out, label);
    if (*verify) {
      suite_opt.seed = flags.seed;
      suite_opt.optimizer = flags.config();
      return run_verify(suite, suite_opt);
    }
  } catch (const resent::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}
