#pragma once

// State containers and tensor-index bookkeeping shared by every other header.
//
// Basis ordering is row-major over parties: for dims (d_0, ..., d_{n-1}) the
// basis vector |i_0 ... i_{n-1}> sits at index sum_k i_k * prod_{l>k} d_l, so
// the last party varies fastest.

#include <resent/types.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace resent {

namespace detail {

inline void require_dims(const Dims& dims, const char* what) {
  if (dims.empty()) throw InvalidArgument(std::string(what) + ": dims must not be empty");
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] < 2) {
      throw InvalidArgument(std::string(what) + ": party " + std::to_string(k) +
                            " has dimension " + std::to_string(dims[k]) + " (< 2)");
    }
  }
}

inline double hermitian_deviation(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// For the party reordering `order` (new party p is old party order[p]),
/// returns map[new_index] = old_index.
inline std::vector<std::size_t> permutation_index_map(const Dims& dims,
                                                      const std::vector<int>& order) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> old_stride(n, 1);
  for (std::size_t k = n; k-- > 1;) old_stride[k - 1] = old_stride[k] * dims[k];

  const std::size_t total = dims_product(dims);
  std::vector<std::size_t> map(total);
  std::vector<int> digit(n, 0);  // digits in the new ordering, last fastest
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t old_index = 0;
    for (std::size_t p = 0; p < n; ++p) old_index += digit[p] * old_stride[order[p]];
    map[idx] = old_index;
    for (std::size_t p = n; p-- > 0;) {
      if (++digit[p] < dims[order[p]]) break;
      digit[p] = 0;
    }
  }
  return map;
}

inline Dims permuted_dims(const Dims& dims, const std::vector<int>& order) {
  Dims out(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) out[p] = dims[order[p]];
  return out;
}

inline std::vector<int> inverse_order(const std::vector<int>& order) {
  std::vector<int> inv(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) inv[order[p]] = static_cast<int>(p);
  return inv;
}

inline std::vector<int> checked_party_set(std::vector<int> parties, int n_parties,
                                          const char* what) {
  std::sort(parties.begin(), parties.end());
  for (std::size_t k = 0; k < parties.size(); ++k) {
    if (parties[k] < 0 || parties[k] >= n_parties) {
      throw InvalidArgument(std::string(what) + ": party index " + std::to_string(parties[k]) +
                            " out of range [0, " + std::to_string(n_parties) + ")");
    }
    if (k > 0 && parties[k] == parties[k - 1]) {
      throw InvalidArgument(std::string(what) + ": party index " + std::to_string(parties[k]) +
                            " listed twice");
    }
  }
  return parties;
}

inline std::vector<int> complement(const std::vector<int>& sorted_set, int n_parties) {
  std::vector<int> out;
  for (int p = 0; p < n_parties; ++p) {
    if (!std::binary_search(sorted_set.begin(), sorted_set.end(), p)) out.push_back(p);
  }
  return out;
}

}  // namespace detail

/// Normalized pure state over a list of parties.
class PureState {
 public:
  PureState(Dims dims, CVector amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    detail::require_dims(dims_, "PureState");
    if (static_cast<std::size_t>(amps_.size()) != dims_product(dims_)) {
      throw InvalidArgument("PureState: " + std::to_string(amps_.size()) +
                            " amplitudes do not match dims " + dims_to_string(dims_));
    }
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > tol::kNorm) {
      throw InvalidArgument("PureState: amplitude norm " + std::to_string(norm) + " is not 1");
    }
  }

  /// Rescales `amplitudes` to unit norm before validating.
  static PureState normalized(Dims dims, CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (norm == 0.0) throw InvalidArgument("PureState: zero vector cannot be normalized");
    return PureState(std::move(dims), amplitudes / norm);
  }

  const Dims& dims() const { return dims_; }
  const CVector& amplitudes() const { return amps_; }
  int parties() const { return static_cast<int>(dims_.size()); }
  std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }

 private:
  Dims dims_;
  CVector amps_;
};

/// Hermitian, positive semidefinite, unit-trace operator over a list of parties.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, CMatrix matrix) : dims_(std::move(dims)), m_(std::move(matrix)) {
    if (dims_.empty()) throw InvalidArgument("DensityMatrix: dims must not be empty");
    for (int d : dims_) {
      if (d < 1) throw InvalidArgument("DensityMatrix: nonpositive dimension");
    }
    const auto side = static_cast<Eigen::Index>(dims_product(dims_));
    if (m_.rows() != side || m_.cols() != side) {
      throw InvalidArgument("DensityMatrix: matrix is " + std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()) + ", dims " + dims_to_string(dims_) +
                            " need side " + std::to_string(side));
    }
    const double herm = detail::hermitian_deviation(m_);
    if (herm > tol::kHermitian) {
      throw InvalidArgument("DensityMatrix: not Hermitian (max deviation " +
                            std::to_string(herm) + ")");
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol::kTrace) {
      throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m_, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues()(0);
    if (lowest < -tol::kNegativeEigen) {
      throw InvalidArgument("DensityMatrix: negative eigenvalue " + std::to_string(lowest));
    }
  }

  const Dims& dims() const { return dims_; }
  const CMatrix& matrix() const { return m_; }
  int parties() const { return static_cast<int>(dims_.size()); }
  Eigen::Index side() const { return m_.rows(); }

 private:
  Dims dims_;
  CMatrix m_;
};

/// Spectral decomposition rho = Phi M Phi^dagger with eigenvalues descending.
struct EigDecomposition {
  RVector eigenvalues;   // clipped at zero, descending
  CMatrix eigenvectors;  // columns, same order as eigenvalues
  int rank = 0;          // eigenvalues above the truncation threshold

  CMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
  /// Leading `rank` eigenvector columns.
  CMatrix kept_vectors() const { return eigenvectors.leftCols(rank); }
  RVector kept_values() const { return eigenvalues.head(rank); }
};

/// Split of the parties into a focus set and the remaining parties.
class Bipartition {
 public:
  static Bipartition make(int n_parties, std::vector<int> focus) {
    if (n_parties < 2) throw InvalidArgument("Bipartition: need at least two parties");
    Bipartition b;
    b.n_ = n_parties;
    b.focus_ = detail::checked_party_set(std::move(focus), n_parties, "Bipartition");
    if (b.focus_.empty()) throw InvalidArgument("Bipartition: focus is empty");
    b.rest_ = detail::complement(b.focus_, n_parties);
    if (b.rest_.empty()) throw InvalidArgument("Bipartition: focus covers every party");
    return b;
  }

  const std::vector<int>& focus() const { return focus_; }
  const std::vector<int>& rest() const { return rest_; }
  int parties() const { return n_; }

  /// Party order placing the focus first, both halves ascending.
  std::vector<int> order() const {
    std::vector<int> out = focus_;
    out.insert(out.end(), rest_.begin(), rest_.end());
    return out;
  }

  /// (d_focus, d_rest) for the given party dimensions.
  std::pair<int, int> split_dims(const Dims& dims) const {
    if (static_cast<int>(dims.size()) != n_) {
      throw InvalidArgument("Bipartition: built for " + std::to_string(n_) +
                            " parties, state has " + std::to_string(dims.size()));
    }
    int ds = 1, dr = 1;
    for (int p : focus_) ds *= dims[p];
    for (int p : rest_) dr *= dims[p];
    return {ds, dr};
  }

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

 private:
  Bipartition() = default;
  int n_ = 0;
  std::vector<int> focus_;
  std::vector<int> rest_;
};

inline DensityMatrix density_from_pure(const PureState& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(psi.dims(), a * a.adjoint());
}

inline double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

/// Reorders parties so that new party p is old party order[p].
inline PureState permute_parties(const PureState& psi, const std::vector<int>& order) {
  detail::checked_party_set(order, psi.parties(), "permute_parties");
  if (static_cast<int>(order.size()) != psi.parties()) {
    throw InvalidArgument("permute_parties: order must list every party once");
  }
  const auto map = detail::permutation_index_map(psi.dims(), order);
  CVector out(psi.amplitudes().size());
  for (std::size_t i = 0; i < map.size(); ++i) out(i) = psi.amplitudes()(map[i]);
  return PureState(detail::permuted_dims(psi.dims(), order), std::move(out));
}

inline DensityMatrix permute_parties(const DensityMatrix& rho, const std::vector<int>& order) {
  detail::checked_party_set(order, rho.parties(), "permute_parties");
  if (static_cast<int>(order.size()) != rho.parties()) {
    throw InvalidArgument("permute_parties: order must list every party once");
  }
  const auto map = detail::permutation_index_map(rho.dims(), order);
  const auto side = static_cast<Eigen::Index>(map.size());
  CMatrix out(side, side);
  for (Eigen::Index c = 0; c < side; ++c)
    for (Eigen::Index r = 0; r < side; ++r) out(r, c) = rho.matrix()(map[r], map[c]);
  return DensityMatrix(detail::permuted_dims(rho.dims(), order), std::move(out));
}

/// Traces out the listed parties. Remaining parties keep their relative order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> traced) {
  traced = detail::checked_party_set(std::move(traced), rho.parties(), "partial_trace");
  if (traced.empty()) return rho;
  if (static_cast<int>(traced.size()) == rho.parties()) {
    throw InvalidArgument("partial_trace: cannot trace out every party");
  }
  std::vector<int> order = detail::complement(traced, rho.parties());
  Dims kept_dims = detail::permuted_dims(rho.dims(), order);
  order.insert(order.end(), traced.begin(), traced.end());

  const auto map = detail::permutation_index_map(rho.dims(), order);
  const auto dk = static_cast<Eigen::Index>(dims_product(kept_dims));
  const auto dt = static_cast<Eigen::Index>(map.size()) / dk;
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index b = 0; b < dk; ++b)
    for (Eigen::Index a = 0; a < dk; ++a) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < dt; ++t) acc += rho.matrix()(map[a * dt + t], map[b * dt + t]);
      out(a, b) = acc;
    }
  return DensityMatrix(std::move(kept_dims), std::move(out));
}

/// Reduced state on `kept` (ascending order) computed directly from amplitudes.
inline DensityMatrix reduced_density(const PureState& psi, std::vector<int> kept) {
  kept = detail::checked_party_set(std::move(kept), psi.parties(), "reduced_density");
  if (kept.empty()) throw InvalidArgument("reduced_density: nothing kept");
  const std::vector<int> traced = detail::complement(kept, psi.parties());
  std::vector<int> order = kept;
  order.insert(order.end(), traced.begin(), traced.end());
  Dims kept_dims = detail::permuted_dims(psi.dims(), kept);

  const PureState moved = permute_parties(psi, order);
  const auto dk = static_cast<Eigen::Index>(dims_product(kept_dims));
  const auto dt = static_cast<Eigen::Index>(moved.size()) / dk;
  // Row-major dk x dt coefficient matrix viewed column-major is its transpose.
  Eigen::Map<const CMatrix> coeff_t(moved.amplitudes().data(), dt, dk);
  CMatrix rho = coeff_t.transpose() * coeff_t.conjugate();
  return DensityMatrix(std::move(kept_dims), std::move(rho));
}

/// Row-major (d_focus x d_rest) coefficient matrix of a pure state across `bip`.
inline CMatrix coefficient_matrix(const PureState& psi, const Bipartition& bip) {
  const auto [ds, dr] = bip.split_dims(psi.dims());
  const PureState moved = permute_parties(psi, bip.order());
  Eigen::Map<const CMatrix> coeff_t(moved.amplitudes().data(), dr, ds);
  return coeff_t.transpose();
}

/// Two-party view (d_focus, d_rest) with the focus parties in the slow slot.
inline PureState group_bipartition(const PureState& psi, const Bipartition& bip) {
  const auto [ds, dr] = bip.split_dims(psi.dims());
  PureState moved = permute_parties(psi, bip.order());
  return PureState({ds, dr}, moved.amplitudes());
}

inline DensityMatrix group_bipartition(const DensityMatrix& rho, const Bipartition& bip) {
  const auto [ds, dr] = bip.split_dims(rho.dims());
  DensityMatrix moved = permute_parties(rho, bip.order());
  return DensityMatrix({ds, dr}, moved.matrix());
}

/// Inverse of group_bipartition given the original party dimensions.
inline PureState ungroup_bipartition(const PureState& grouped, const Bipartition& bip,
                                     const Dims& original) {
  const auto [ds, dr] = bip.split_dims(original);
  if (grouped.dims() != Dims{ds, dr}) {
    throw InvalidArgument("ungroup_bipartition: grouped dims " + dims_to_string(grouped.dims()) +
                          " do not match the bipartition of " + dims_to_string(original));
  }
  const std::vector<int> order = bip.order();
  PureState spread(detail::permuted_dims(original, order), grouped.amplitudes());
  return permute_parties(spread, detail::inverse_order(order));
}

inline DensityMatrix ungroup_bipartition(const DensityMatrix& grouped, const Bipartition& bip,
                                         const Dims& original) {
  const auto [ds, dr] = bip.split_dims(original);
  if (grouped.dims() != Dims{ds, dr}) {
    throw InvalidArgument("ungroup_bipartition: grouped dims " + dims_to_string(grouped.dims()) +
                          " do not match the bipartition of " + dims_to_string(original));
  }
  const std::vector<int> order = bip.order();
  DensityMatrix spread(detail::permuted_dims(original, order), grouped.matrix());
  return permute_parties(spread, detail::inverse_order(order));
}

// ---------------------------------------------------------------------------
// Random states. Everything is driven by an explicit seed.

using Rng = std::mt19937_64;

inline CVector random_gaussian_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix with
/// the phases of R's diagonal moved into Q.
inline CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  CMatrix g(n, n);
  for (Eigen::Index c = 0; c < n; ++c) g.col(c) = random_gaussian_vector(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

inline PureState random_pure(const Dims& dims, Rng& rng) {
  detail::require_dims(dims, "random_pure");
  return PureState::normalized(dims, random_gaussian_vector(dims_product(dims), rng));
}

inline PureState random_pure(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(dims, rng);
}

/// Reduced state of a Haar-random purification with an `env_dim`-level
/// environment; rank is at most env_dim.
inline DensityMatrix random_mixed(const Dims& dims, int env_dim, Rng& rng) {
  detail::require_dims(dims, "random_mixed");
  if (env_dim < 1) throw InvalidArgument("random_mixed: environment dimension must be >= 1");
  const auto side = static_cast<Eigen::Index>(dims_product(dims));
  CVector v = random_gaussian_vector(side * env_dim, rng);
  v /= v.norm();
  Eigen::Map<const CMatrix> coeff_t(v.data(), env_dim, side);
  CMatrix rho = coeff_t.transpose() * coeff_t.conjugate();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(dims, std::move(rho));
}

inline DensityMatrix random_mixed(const Dims& dims, int env_dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_mixed(dims, env_dim, rng);
}

// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian PSD matrix. Eigenvalues are clipped at
/// zero; `rank` counts those above `threshold * trace`.
inline EigDecomposition eig_psd(const CMatrix& m, double threshold = tol::kEigenTruncation) {
  if (m.rows() != m.cols()) throw InvalidArgument("eig_psd: matrix is not square");
  const double herm = detail::hermitian_deviation(m);
  if (herm > tol::kHermitian) {
    throw InvalidArgument("eig_psd: matrix is not Hermitian (max deviation " +
                          std::to_string(herm) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  const Eigen::Index n = m.rows();
  EigDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = std::max(0.0, solver.eigenvalues()(n - 1 - k));
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  const double cut = threshold * std::max(m.trace().real(), 0.0);
  out.rank = static_cast<int>((out.eigenvalues.array() > cut).count());
  return out;
}

inline EigDecomposition eig_psd(const DensityMatrix& rho,
                                double threshold = tol::kEigenTruncation) {
  return eig_psd(rho.matrix(), threshold);
}

}  // namespace resent
