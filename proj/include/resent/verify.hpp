#pragma once

// Randomized property sweeps behind `resent verify`.

#include <resent/concurrence.hpp>
#include <resent/tangle.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace resent {

struct SuiteRow {
  int trial = 0;
  std::vector<double> values;  // one per SuiteResult::columns entry
  bool pass = true;
};

struct SuiteResult {
  std::string suite;
  std::vector<std::string> columns;
  std::vector<SuiteRow> rows;
  std::string criterion;  // human-readable pass rule
  double worst = 0.0;     // the value the criterion is judged on
  bool pass = true;
};

struct SuiteOptions {
  int trials = 100;
  Dims dims;                 // empty: suite default
  std::uint64_t seed = 0;
  int roof_trials = 2000;    // oracle suite only
  OptimizerConfig optimizer;
};

inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kReductionTolerance = 1e-6;
inline constexpr double kPathAgreement = 1e-10;
inline constexpr double kWoottersTolerance = 1e-9;
inline constexpr double kRoofTolerance = 1e-6;

namespace detail {

inline std::string fmt_tol(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", x);
  return buf;
}

}  // namespace detail

/// Three-party overlap identity: |lhs_ab + lhs_ac - rhs| <= 1e-9.
inline SuiteResult verify_identities(const SuiteOptions& opt) {
  const Dims dims = opt.dims.empty() ? Dims{2, 2, 2} : opt.dims;
  if (dims.size() != 3) throw InvalidArgument("identities suite: dims must list 3 parties");
  SuiteResult out{"identities", {"lhs_ab", "lhs_ac", "rhs", "deviation"}, {},
                  "max deviation <= " + detail::fmt_tol(kIdentityTolerance)};
  Rng rng(opt.seed);
  for (int t = 0; t < opt.trials; ++t) {
    const TildeOverlapSums s = tilde_overlap_sums(random_pure(dims, rng));
    const double dev = std::abs(s.lhs_ab + s.lhs_ac - s.rhs);
    out.rows.push_back({t, {s.lhs_ab, s.lhs_ac, s.rhs, dev}, dev <= kIdentityTolerance});
    out.worst = std::max(out.worst, dev);
  }
  out.pass = out.worst <= kIdentityTolerance;
  return out;
}

/// Smallest tau over all foci of random pure states: >= -1e-6.
inline SuiteResult verify_monogamy(const SuiteOptions& opt) {
  const Dims dims = opt.dims.empty() ? Dims{2, 2, 2} : opt.dims;
  SuiteResult out{"monogamy", {"min_slack", "argmin_focus_index"}, {},
                  "min slack >= -" + detail::fmt_tol(tol::kMonogamy)};
  out.worst = std::numeric_limits<double>::infinity();
  const auto foci = enumerate_foci(static_cast<int>(dims.size()));
  Rng rng(opt.seed);
  for (int t = 0; t < opt.trials; ++t) {
    const PureState psi = random_pure(dims, rng);
    double lowest = std::numeric_limits<double>::infinity();
    std::size_t where = 0;
    for (std::size_t k = 0; k < foci.size(); ++k) {
      const double slack = monogamy_slack(psi, foci[k], opt.optimizer);
      if (slack < lowest) {
        lowest = slack;
        where = k;
      }
    }
    out.rows.push_back({t, {lowest, double(where)}, lowest >= -tol::kMonogamy});
    out.worst = std::min(out.worst, lowest);
  }
  out.pass = out.worst >= -tol::kMonogamy;
  return out;
}

/// Three qubits: residual equals the contraction three-tangle (1e-6), and the
/// contraction agrees with the concurrence-based three-tangle (1e-10).
inline SuiteResult verify_reduction(const SuiteOptions& opt) {
  if (!opt.dims.empty() && opt.dims != Dims{2, 2, 2}) {
    throw InvalidArgument("reduction suite: only dims 2,2,2 are meaningful");
  }
  SuiteResult out{"reduction", {"residual", "three_tangle", "deviation", "path_gap"}, {},
                  "max |residual - three_tangle| <= " + detail::fmt_tol(kReductionTolerance) +
                      " and path gap <= " + detail::fmt_tol(kPathAgreement)};
  Rng rng(opt.seed);
  for (int t = 0; t < opt.trials; ++t) {
    const PureState psi = random_pure({2, 2, 2}, rng);
    const double residual = residual_entanglement(psi, opt.optimizer).residual_raw;
    const double tangle = ckw_three_tangle(psi);
    const double dev = std::abs(residual - tangle);
    const double gap = std::abs(tangle - three_tangle_from_concurrences(psi));
    const bool ok = dev <= kReductionTolerance && gap <= kPathAgreement;
    out.rows.push_back({t, {residual, tangle, dev, gap}, ok});
    out.worst = std::max(out.worst, dev);
    out.pass = out.pass && ok;
  }
  return out;
}

/// Mixed-state bound against its oracles. Two qubits: equals the squared
/// Wootters concurrence (1e-9). Any dims: never exceeds the sampled convex
/// roof (1e-6).
inline SuiteResult verify_oracle(const SuiteOptions& opt) {
  const Dims dims = opt.dims.empty() ? Dims{2, 2} : opt.dims;
  if (dims.size() != 2) throw InvalidArgument("oracle suite: dims must list 2 parties");
  const bool qubits = dims == Dims{2, 2};
  SuiteResult out{"oracle", {"bound", "wootters_sq", "roof_sample", "wootters_gap", "roof_excess"},
                  {},
                  "bound - roof <= " + detail::fmt_tol(kRoofTolerance) +
                      (qubits ? ", |bound - wootters^2| <= " + detail::fmt_tol(kWoottersTolerance)
                              : std::string())};
  const int side = static_cast<int>(dims_product(dims));
  Rng rng(opt.seed);
  for (int t = 0; t < opt.trials; ++t) {
    const int env = 1 + t % side;
    const DensityMatrix rho = random_mixed(dims, env, rng);
    const double bound = mixed_concurrence_sq(rho, opt.optimizer).value;
    double w2 = std::numeric_limits<double>::quiet_NaN();
    double gap = 0.0;
    if (qubits) {
      const double c = wootters_concurrence(rho);
      w2 = c * c;
      gap = std::abs(bound - w2);
    }
    const double roof = convex_roof_sample(rho, opt.roof_trials, opt.seed + 7919u * (t + 1));
    const double excess = bound - roof;
    const bool ok = gap <= kWoottersTolerance && excess <= kRoofTolerance;
    out.rows.push_back({t, {bound, w2, roof, gap, excess}, ok});
    out.worst = std::max({out.worst, gap, excess});
    out.pass = out.pass && ok;
  }
  return out;
}

inline SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
  if (opt.trials < 1) throw InvalidArgument("verify: trials must be >= 1");
  if (name == "identities") return verify_identities(opt);
  if (name == "monogamy") return verify_monogamy(opt);
  if (name == "reduction") return verify_reduction(opt);
  if (name == "oracle") return verify_oracle(opt);
  throw InvalidArgument("verify: unknown suite '" + name +
                        "' (expected identities, monogamy, reduction or oracle)");
}

}  // namespace resent
