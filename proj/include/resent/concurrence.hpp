#pragma once

// Bipartite concurrence in arbitrary finite dimensions.
//
// Pure states: C^2 = 2 (1 - Tr rho_focus^2) = sum_ab |<psi| (L_a (x) L_b) |psi*>|^2.
//
// Mixed states: with rho = Phi M Phi^dagger (rank-truncated) and
// A_ab = M^{1/2} Phi^T S_ab Phi M^{1/2}, S_ab = L_a (x) L_b, the value
//     C^2(rho) = max(0, max_z [s_1(z) - sum_{i>1} s_i(z)])^2
// where s_i(z) are the singular values of Q(z) = sum_ab z_ab A_ab and z runs
// over complex unit vectors. For every unit z the bracket bounds the convex
// roof of the pure-state C^2 from below, so the maximum does too.

#include <resent/so_generators.hpp>
#include <resent/sphere_ascent.hpp>
#include <resent/tensor_core.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace resent {

namespace detail {

/// Signed support of a generator: (row, col, sign) for its two entries.
inline std::array<std::array<int, 3>, 2> generator_entries(const GeneratorIndex& g) {
  return {{{g.i, g.j, +1}, {g.j, g.i, -1}}};
}

inline void require_two_party(const Dims& dims, const char* what) {
  if (dims.size() != 2) {
    throw InvalidArgument(std::string(what) + ": expected a two-party object, got dims " +
                          dims_to_string(dims));
  }
}

/// 2 (1 - Tr rho_A^2) for a unit vector laid out row-major as (ds x dr).
inline double pure_concurrence_sq_raw(const CVector& v, Eigen::Index ds, Eigen::Index dr) {
  Eigen::Map<const CMatrix> coeff_t(v.data(), dr, ds);
  const CMatrix rho = ds <= dr ? CMatrix(coeff_t.transpose() * coeff_t.conjugate())
                               : CMatrix(coeff_t * coeff_t.adjoint());
  return 2.0 * (1.0 - rho.squaredNorm());
}

inline RVector singular_values(const CMatrix& q) {
  Eigen::JacobiSVD<CMatrix> svd(q);
  return svd.singularValues();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pure states

/// 1 - Tr(rho_focus^2).
inline double linear_entropy(const PureState& psi, const Bipartition& bip) {
  const CMatrix c = coefficient_matrix(psi, bip);
  const CMatrix rho = c.rows() <= c.cols() ? CMatrix(c * c.adjoint()) : CMatrix(c.transpose() * c.conjugate());
  return 1.0 - rho.squaredNorm();
}

inline double pure_concurrence_sq(const PureState& psi, const Bipartition& bip) {
  return 2.0 * linear_entropy(psi, bip);
}

struct ConcurrenceVector {
  int left_dim = 0;
  int right_dim = 0;
  std::vector<Complex> entries;  // product-generator order

  double squared_norm() const {
    double acc = 0.0;
    for (const Complex& c : entries) acc += std::norm(c);
    return acc;
  }
};

/// Components <psi| (L_a (x) L_b) |psi*> across `bip`.
inline ConcurrenceVector pure_concurrence_vector(const PureState& psi, const Bipartition& bip) {
  const CMatrix c = coefficient_matrix(psi, bip);
  const ProductGeneratorSet gens(static_cast<int>(c.rows()), static_cast<int>(c.cols()));
  ConcurrenceVector out;
  out.left_dim = static_cast<int>(c.rows());
  out.right_dim = static_cast<int>(c.cols());
  out.entries.reserve(gens.size());
  for (const auto& ga : gens.left().indices()) {
    const auto ea = detail::generator_entries(ga);
    for (const auto& gb : gens.right().indices()) {
      const auto eb = detail::generator_entries(gb);
      Complex acc = 0.0;
      for (const auto& [i, k, s] : ea)
        for (const auto& [j, l, t] : eb) acc += double(s * t) * std::conj(c(i, j) * c(k, l));
      out.entries.push_back(acc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mixed states

struct AMatrixSet {
  Dims dims;                      // (d_left, d_right)
  int rank = 0;
  std::vector<CMatrix> matrices;  // rank x rank, product-generator order
  EigDecomposition eig;
};

/// A_ab = M^{1/2} Phi^T S_ab Phi M^{1/2} over the rank-truncated spectrum.
inline AMatrixSet a_matrices(const DensityMatrix& rho,
                             double threshold = tol::kEigenTruncation) {
  detail::require_two_party(rho.dims(), "a_matrices");
  AMatrixSet out;
  out.dims = rho.dims();
  out.eig = eig_psd(rho, threshold);
  out.rank = out.eig.rank;

  // Rows of V = Phi M^{1/2} indexed by the basis state (i, j) of the two parties.
  const CMatrix v = out.eig.kept_vectors() *
                    out.eig.kept_values().cwiseSqrt().cast<Complex>().asDiagonal();
  const int dr = out.dims[1];
  const ProductGeneratorSet gens(out.dims[0], out.dims[1]);
  out.matrices.reserve(gens.size());
  for (const auto& ga : gens.left().indices()) {
    const auto ea = detail::generator_entries(ga);
    for (const auto& gb : gens.right().indices()) {
      const auto eb = detail::generator_entries(gb);
      CMatrix a = CMatrix::Zero(out.rank, out.rank);
      for (const auto& [i, k, s] : ea)
        for (const auto& [j, l, t] : eb)
          a.noalias() += double(s * t) * v.row(i * dr + j).transpose() * v.row(k * dr + l);
      out.matrices.push_back(std::move(a));
    }
  }
  return out;
}

/// Coefficients z over the product generators with unit Euclidean norm.
class OptimizerPoint {
 public:
  explicit OptimizerPoint(std::vector<Complex> z) : z_(std::move(z)) {
    double n2 = 0.0;
    for (const Complex& c : z_) n2 += std::norm(c);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) {
      throw InvalidArgument("OptimizerPoint: coefficients must have unit norm");
    }
  }

  /// Nonnegative real weights y with sum y^2 = 1.
  static OptimizerPoint from_weights(std::span<const double> y) {
    std::vector<Complex> z;
    for (double w : y) {
      if (w < 0.0) throw InvalidArgument("OptimizerPoint: weights must be nonnegative");
      z.emplace_back(w, 0.0);
    }
    return OptimizerPoint(std::move(z));
  }

  const std::vector<Complex>& coefficients() const { return z_; }
  std::size_t size() const { return z_.size(); }

 private:
  std::vector<Complex> z_;
};

inline CMatrix combine(const AMatrixSet& ams, std::span<const Complex> z) {
  if (z.size() != ams.matrices.size()) {
    throw InvalidArgument("sv_objective: " + std::to_string(z.size()) + " coefficients for " +
                          std::to_string(ams.matrices.size()) + " generator pairs");
  }
  CMatrix q = CMatrix::Zero(ams.rank, ams.rank);
  for (std::size_t k = 0; k < z.size(); ++k) q += z[k] * ams.matrices[k];
  return q;
}

/// s_1 - sum_{i>1} s_i for the singular values of sum_k z_k A_k.
inline double sv_objective(const AMatrixSet& ams, std::span<const Complex> z) {
  const RVector s = detail::singular_values(combine(ams, z));
  return s(0) - s.tail(s.size() - 1).sum();
}

inline double sv_objective(const AMatrixSet& ams, const OptimizerPoint& point) {
  return sv_objective(ams, point.coefficients());
}

struct MixedConcurrence {
  double value = 0.0;      // max(0, objective)^2
  double objective = 0.0;  // best s_1 - sum s_i found
  bool converged = true;
  int best_restart = -1;   // -1 when no search was needed
  int rank = 0;
  std::vector<Complex> z;
};

/// Squared concurrence of a two-party density matrix (lower bound on the
/// convex roof for mixed input, exact for pure input and for two qubits).
inline MixedConcurrence mixed_concurrence_sq(const DensityMatrix& rho,
                                             const OptimizerConfig& cfg = {}) {
  const AMatrixSet ams = a_matrices(rho);
  const std::size_t pairs = ams.matrices.size();
  MixedConcurrence out;
  out.rank = ams.rank;

  if (pairs == 1) {
    // One generator pair: z is a bare phase and cannot change singular values.
    out.z = {Complex(1.0, 0.0)};
    out.objective = sv_objective(ams, out.z);
  } else if (ams.rank == 1) {
    // 1x1 matrices: max over unit z of |sum z_k a_k| is ||a||, at z = conj(a)/||a||.
    double n2 = 0.0;
    for (const CMatrix& a : ams.matrices) n2 += std::norm(a(0, 0));
    const double n = std::sqrt(n2);
    out.objective = n;
    out.z.resize(pairs, Complex(0.0, 0.0));
    if (n > 0.0) {
      for (std::size_t k = 0; k < pairs; ++k) out.z[k] = std::conj(ams.matrices[k](0, 0)) / n;
    } else {
      out.z[0] = 1.0;
    }
  } else {
    const auto p = static_cast<Eigen::Index>(pairs);
    // x = (Re z, Im z) up to scale. With Q = U S V^H, d s_i = Re(u_i^H dQ v_i).
    auto objective = [&](const RVector& x, double mu, RVector* grad) {
      const double norm = x.norm();
      CMatrix q = CMatrix::Zero(ams.rank, ams.rank);
      for (Eigen::Index k = 0; k < p; ++k)
        q += Complex(x(k) / norm, x(p + k) / norm) * ams.matrices[k];
      if (!grad) {
        const RVector s = detail::singular_values(q);
        double value = s(0);
        for (Eigen::Index i = 1; i < s.size(); ++i) value -= std::sqrt(s(i) * s(i) + mu * mu);
        return value;
      }
      const Eigen::JacobiSVD<CMatrix> svd(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const RVector& s = svd.singularValues();
      RVector weight(s.size());
      double value = s(0);
      weight(0) = 1.0;
      for (Eigen::Index i = 1; i < s.size(); ++i) {
        const double soft = std::sqrt(s(i) * s(i) + mu * mu);
        value -= soft;
        weight(i) = soft > 0.0 ? -s(i) / soft : 0.0;
      }
      // dF/dQ contracted as sum_i weight_i conj(u_i) v_i^T.
      const CMatrix w = svd.matrixU().conjugate() * weight.cast<Complex>().asDiagonal() *
                        svd.matrixV().transpose();
      RVector g(2 * p);
      for (Eigen::Index k = 0; k < p; ++k) {
        const Complex t = w.cwiseProduct(ams.matrices[k]).sum();
        g(k) = t.real();
        g(p + k) = -t.imag();
      }
      const RVector unit = x / norm;
      *grad = (g - unit * unit.dot(g)) / norm;
      return value;
    };
    const AscentResult best = maximize_on_sphere(objective, 2 * p, cfg);
    out.objective = best.value;
    out.converged = best.converged;
    out.best_restart = best.restart;
    out.z.resize(pairs);
    for (Eigen::Index k = 0; k < p; ++k) out.z[k] = Complex(best.x(k), best.x(p + k));
  }
  const double clamped = std::max(0.0, out.objective);
  out.value = clamped * clamped;
  return out;
}

// ---------------------------------------------------------------------------
// Oracles and identities

/// Two-qubit concurrence max(0, l1 - l2 - l3 - l4), l_i the singular values
/// of sqrt(rho) sqrt(rho~), rho~ = (Y (x) Y) rho* (Y (x) Y).
inline double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) {
    throw InvalidArgument("wootters_concurrence: needs dims (2,2), got " +
                          dims_to_string(rho.dims()));
  }
  const EigDecomposition eig = eig_psd(rho);
  RVector roots = RVector::Zero(4);
  for (int k = 0; k < eig.rank; ++k) roots(k) = std::sqrt(eig.eigenvalues(k));
  const CMatrix sqrt_rho =
      eig.eigenvectors * roots.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();

  CMatrix yy = CMatrix::Zero(4, 4);  // sigma_y (x) sigma_y
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const CMatrix sqrt_flipped = yy * sqrt_rho.conjugate() * yy;
  const RVector l = detail::singular_values(sqrt_rho * sqrt_flipped);
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

struct TildeOverlapSums {
  double lhs_ab = 0.0;  // sum_ab Tr(rho_01 S rho_01* S)
  double lhs_ac = 0.0;  // sum_ab Tr(rho_02 S rho_02* S)
  double rhs = 0.0;     // sum_ab |<psi|psi~_ab>|^2 across 0|(12)
};

/// Both sides of the three-party overlap identity lhs_ab + lhs_ac = rhs,
/// focus on party 0.
inline TildeOverlapSums tilde_overlap_sums(const PureState& psi) {
  if (psi.parties() != 3) {
    throw InvalidArgument("tilde_overlap_sums: needs exactly 3 parties, got " +
                          std::to_string(psi.parties()));
  }
  auto flipped_overlap = [](const DensityMatrix& rho) {
    const ProductGeneratorSet gens(rho.dims()[0], rho.dims()[1]);
    const CMatrix& m = rho.matrix();
    double acc = 0.0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const CMatrix s = gens.matrix(k).cast<Complex>();
      acc += (m * s * m.conjugate() * s).trace().real();
    }
    return acc;
  };
  TildeOverlapSums out;
  out.lhs_ab = flipped_overlap(reduced_density(psi, {0, 1}));
  out.lhs_ac = flipped_overlap(reduced_density(psi, {0, 2}));
  out.rhs = pure_concurrence_vector(psi, Bipartition::make(3, {0})).squared_norm();
  return out;
}

/// Smallest decomposition-averaged pure-state C^2 over `trials` random
/// decompositions rho = sum_k w_k |psi_k><psi_k|. Each decomposition comes
/// from a random right-unitary T (r x K, T T^dagger = 1) through
/// [sqrt(w_k) psi_k] = Phi M^{1/2} T. An upper bound on the convex roof.
inline double convex_roof_sample(const DensityMatrix& rho, int trials, std::uint64_t seed) {
  detail::require_two_party(rho.dims(), "convex_roof_sample");
  if (trials < 1) throw InvalidArgument("convex_roof_sample: trials must be >= 1");
  const EigDecomposition eig = eig_psd(rho);
  const int r = eig.rank;
  const CMatrix v =
      eig.kept_vectors() * eig.kept_values().cwiseSqrt().cast<Complex>().asDiagonal();
  const Eigen::Index ds = rho.dims()[0];
  const Eigen::Index dr = rho.dims()[1];

  Rng rng(seed);
  std::uniform_int_distribution<int> extra(0, r);
  double best = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    const int k_count = r + extra(rng);
    const CMatrix u = random_unitary(k_count, rng);
    const CMatrix columns = v * u.topRows(r);
    double average = 0.0;
    for (int k = 0; k < k_count; ++k) {
      const double weight = columns.col(k).squaredNorm();
      if (weight <= 0.0) continue;
      const CVector psi_k = columns.col(k) / std::sqrt(weight);
      average += weight * detail::pure_concurrence_sq_raw(psi_k, ds, dr);
    }
    best = std::min(best, average);
  }
  return best;
}

}  // namespace resent
