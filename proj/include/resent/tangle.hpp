#pragma once

// Residual entanglement of multipartite states.
//
// For a focus set S the squared concurrence across S|rest is split into the
// pairwise pieces C^2_{S,j} (S grouped as one object against each single
// remaining party j) plus a remainder:
//     tau_S = C^2_{S(rest)} - sum_j C^2_{S,j}.
// The residual entanglement is the minimum of tau_S over every focus of size
// 1..floor(n/2).

#include <resent/concurrence.hpp>
#include <resent/tensor_core.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

namespace resent {

using State = std::variant<PureState, DensityMatrix>;

inline const Dims& state_dims(const State& s) {
  return std::visit([](const auto& v) -> const Dims& { return v.dims(); }, s);
}

inline bool is_pure(const State& s) { return std::holds_alternative<PureState>(s); }

/// Every focus of size 1..floor(n/2), ordered by size then lexicographically.
inline std::vector<Bipartition> enumerate_foci(int n_parties) {
  if (n_parties < 3) {
    throw InvalidArgument("enumerate_foci: residual entanglement needs at least 3 parties, got " +
                          std::to_string(n_parties));
  }
  std::vector<Bipartition> out;
  for (int size = 1; size <= n_parties / 2; ++size) {
    std::vector<int> pick(size);
    for (int k = 0; k < size; ++k) pick[k] = k;
    while (true) {
      out.push_back(Bipartition::make(n_parties, pick));
      int k = size - 1;
      while (k >= 0 && pick[k] == n_parties - size + k) --k;
      if (k < 0) break;
      ++pick[k];
      for (int m = k + 1; m < size; ++m) pick[m] = pick[m - 1] + 1;
    }
  }
  return out;
}

struct PairTerm {
  int party = 0;
  double c2 = 0.0;

  friend bool operator==(const PairTerm&, const PairTerm&) = default;
};

struct FocusTangle {
  std::vector<int> focus;
  std::vector<int> rest;
  double total_sq = 0.0;         // C^2 across focus | rest
  std::vector<PairTerm> pair_sq; // one per party outside the focus, ascending
  double tau = 0.0;
  bool converged = true;

  friend bool operator==(const FocusTangle&, const FocusTangle&) = default;
};

struct TangleReport {
  Dims dims;
  bool pure = true;               // false: totals use the mixed-state lower bound
  std::vector<FocusTangle> foci;
  double residual_raw = 0.0;
  double residual = 0.0;          // residual_raw clamped at 0
  std::size_t argmin = 0;
  bool monogamy_violation = false;
  bool all_converged = true;
  OptimizerConfig config;
  double runtime_seconds = 0.0;

  const FocusTangle& minimizer() const { return foci.at(argmin); }

  friend bool operator==(const TangleReport&, const TangleReport&) = default;
};

namespace detail {

/// C^2 of the reduced state on S + {j}, grouped as (S | j).
template <class Source>
MixedConcurrence pair_concurrence(const Source& state, const Bipartition& bip, int j,
                                  const OptimizerConfig& cfg) {
  std::vector<int> keep = bip.focus();
  keep.push_back(j);
  std::sort(keep.begin(), keep.end());

  DensityMatrix reduced = [&] {
    if constexpr (std::is_same_v<Source, PureState>) {
      return reduced_density(state, keep);
    } else {
      return partial_trace(state, complement(keep, state.parties()));
    }
  }();
  const int position = static_cast<int>(std::find(keep.begin(), keep.end(), j) - keep.begin());
  std::vector<int> focus_positions;
  for (int p = 0; p < static_cast<int>(keep.size()); ++p)
    if (p != position) focus_positions.push_back(p);
  const Bipartition local = Bipartition::make(static_cast<int>(keep.size()), focus_positions);
  return mixed_concurrence_sq(group_bipartition(reduced, local), cfg);
}

}  // namespace detail

inline FocusTangle tau_for_focus(const State& state, const Bipartition& bip,
                                 const OptimizerConfig& cfg = {}) {
  const Dims& dims = state_dims(state);
  if (bip.parties() != static_cast<int>(dims.size())) {
    throw InvalidArgument("tau_for_focus: focus built for " + std::to_string(bip.parties()) +
                          " parties, state has " + std::to_string(dims.size()));
  }
  FocusTangle out;
  out.focus = bip.focus();
  out.rest = bip.rest();
  std::visit(
      [&](const auto& s) {
        using Source = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<Source, PureState>) {
          out.total_sq = pure_concurrence_sq(s, bip);
        } else {
          const MixedConcurrence total = mixed_concurrence_sq(group_bipartition(s, bip), cfg);
          out.total_sq = total.value;
          out.converged = out.converged && total.converged;
        }
        for (int j : bip.rest()) {
          const MixedConcurrence pair = detail::pair_concurrence(s, bip, j, cfg);
          out.pair_sq.push_back({j, pair.value});
          out.converged = out.converged && pair.converged;
        }
      },
      state);
  double pairs = 0.0;
  for (const PairTerm& t : out.pair_sq) pairs += t.c2;
  out.tau = out.total_sq - pairs;
  return out;
}

/// tau for one focus of a pure state; nonnegative up to optimizer noise.
inline double monogamy_slack(const PureState& psi, const Bipartition& bip,
                             const OptimizerConfig& cfg = {}) {
  return tau_for_focus(State{psi}, bip, cfg).tau;
}

inline TangleReport residual_entanglement(const State& state, const OptimizerConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  TangleReport report;
  report.dims = state_dims(state);
  report.pure = is_pure(state);
  report.config = cfg;

  for (const Bipartition& bip : enumerate_foci(static_cast<int>(report.dims.size()))) {
    report.foci.push_back(tau_for_focus(state, bip, cfg));
  }
  for (std::size_t k = 0; k < report.foci.size(); ++k) {
    const FocusTangle& f = report.foci[k];
    if (f.tau < report.foci[report.argmin].tau) report.argmin = k;
    report.all_converged = report.all_converged && f.converged;
    if (report.pure && f.tau < -tol::kMonogamy) report.monogamy_violation = true;
  }
  report.residual_raw = report.foci[report.argmin].tau;
  report.residual = std::max(0.0, report.residual_raw);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Three qubits

namespace detail {
inline void require_three_qubits(const PureState& psi, const char* what) {
  if (psi.dims() != Dims{2, 2, 2}) {
    throw InvalidArgument(std::string(what) + ": needs dims (2,2,2), got " +
                          dims_to_string(psi.dims()));
  }
}
}  // namespace detail

/// Three-tangle 2 |sum a_ijk a_i'j'm a_npk' a_n'p'm' e_ii' e_jj' e_kk' e_mm' e_nn' e_pp'|
/// with e_01 = -e_10 = 1.
inline double ckw_three_tangle(const PureState& psi) {
  detail::require_three_qubits(psi, "ckw_three_tangle");
  const CVector& a = psi.amplitudes();
  auto amp = [&](int i, int j, int k) { return a(4 * i + 2 * j + k); };
  auto sign = [](int i) { return i == 0 ? 1.0 : -1.0; };  // e_{i, 1-i}
  Complex acc = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m)
          for (int n = 0; n < 2; ++n)
            for (int p = 0; p < 2; ++p) {
              const double s = sign(i) * sign(j) * sign(k) * sign(m) * sign(n) * sign(p);
              acc += s * amp(i, j, k) * amp(1 - i, 1 - j, m) * amp(n, p, 1 - k) *
                     amp(1 - n, 1 - p, 1 - m);
            }
  return 2.0 * std::abs(acc);
}

/// 4 det(rho_A) - C^2_AB - C^2_AC with two-qubit concurrences.
inline double three_tangle_from_concurrences(const PureState& psi) {
  detail::require_three_qubits(psi, "three_tangle_from_concurrences");
  const DensityMatrix rho_a = reduced_density(psi, {0});
  const double det_a = rho_a.matrix().determinant().real();
  const double c_ab = wootters_concurrence(reduced_density(psi, {0, 1}));
  const double c_ac = wootters_concurrence(reduced_density(psi, {0, 2}));
  return 4.0 * det_a - c_ab * c_ab - c_ac * c_ac;
}

}  // namespace resent
