#include "oracles.hpp"

#include <resent/concurrence.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace resent;

namespace {

const Bipartition kFirst = Bipartition::make(2, {0});

PureState bell() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState({2, 2}, v);
}

DensityMatrix ghz_ab() {
  return reduced_density(PureState({2, 2, 2}, oracle::ghz(3)), {0, 1});
}

DensityMatrix w_ab() {
  return reduced_density(PureState({2, 2, 2}, oracle::w_like({1, 1, 1})), {0, 1});
}

DensityMatrix werner(double p) {
  CVector s(4);
  s << 0.0, 1.0, -1.0, 0.0;
  s /= std::sqrt(2.0);
  return DensityMatrix({2, 2}, p * s * s.adjoint() + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0);
}

DensityMatrix local_rotate(const DensityMatrix& rho, Rng& rng) {
  const CMatrix ua = random_unitary(rho.dims()[0], rng);
  const CMatrix ub = random_unitary(rho.dims()[1], rng);
  CMatrix u(ua.rows() * ub.rows(), ua.cols() * ub.cols());
  for (Eigen::Index i = 0; i < ua.rows(); ++i)
    for (Eigen::Index j = 0; j < ua.cols(); ++j)
      u.block(i * ub.rows(), j * ub.cols(), ub.rows(), ub.cols()) = ua(i, j) * ub;
  CMatrix m = u * rho.matrix() * u.adjoint();
  m = (m + m.adjoint()).eval() / 2.0;
  return DensityMatrix(rho.dims(), m);
}

double flipped_overlap(const CMatrix& rho, const RMatrix& s) {
  const CMatrix sc = s.cast<Complex>();
  return (rho * sc * rho.conjugate() * sc).trace().real();
}

}  // namespace

TEST(PureConcurrence, FrozenExamples) {
  EXPECT_NEAR(linear_entropy(bell(), kFirst), 0.5, 1e-15);
  EXPECT_NEAR(pure_concurrence_sq(bell(), kFirst), 1.0, 1e-15);

  CVector zero = CVector::Zero(4);
  zero(0) = 1.0;
  EXPECT_NEAR(pure_concurrence_sq(PureState({2, 2}, zero), kFirst), 0.0, 1e-15);

  const PureState ghz({2, 2, 2}, oracle::ghz(3));
  EXPECT_NEAR(pure_concurrence_sq(ghz, Bipartition::make(3, {0})), 1.0, 1e-15);
  const PureState w({2, 2, 2}, oracle::w_like({1, 1, 1}));
  EXPECT_NEAR(pure_concurrence_sq(w, Bipartition::make(3, {0})), 8.0 / 9.0, 1e-15);

  CVector max33 = CVector::Zero(9);
  for (int k = 0; k < 3; ++k) max33(4 * k) = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(pure_concurrence_sq(PureState({3, 3}, max33), kFirst), 4.0 / 3.0, 1e-14);
}

TEST(PureConcurrence, VectorMatchesDenseOracleAndEntropy) {
  Rng rng(17);
  const std::vector<Dims> shapes = {{2, 2}, {2, 3}, {3, 3}, {3, 4}, {2, 2, 2}, {2, 3, 2}};
  for (int trial = 0; trial < 200; ++trial) {
    const Dims& dims = shapes[trial % shapes.size()];
    const PureState psi = random_pure(dims, rng);
    const Bipartition bip = Bipartition::make(psi.parties(), {psi.parties() - 1});
    const PureState grouped = group_bipartition(psi, bip);
    const ConcurrenceVector c = pure_concurrence_vector(psi, bip);
    const auto ref = oracle::concurrence_vector(grouped.amplitudes(), grouped.dims()[0],
                                                grouped.dims()[1]);
    ASSERT_EQ(c.entries.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_LE(std::abs(c.entries[k] - ref[k]), 1e-13);
    EXPECT_NEAR(c.squared_norm(), 2.0 * linear_entropy(psi, bip), 1e-12);
    EXPECT_NEAR(c.squared_norm(), pure_concurrence_sq(psi, bip), 1e-12);
    const double entropy_ref =
        1.0 - oracle::partial_trace(psi.amplitudes() * psi.amplitudes().adjoint(), dims,
                                    {psi.parties() - 1})
                  .squaredNorm();
    EXPECT_NEAR(linear_entropy(psi, bip), entropy_ref, 1e-12);
  }
}

TEST(AMatrices, SymmetricAndGramMatchesOracle) {
  Rng rng(23);
  const std::vector<Dims> shapes = {{2, 2}, {2, 3}, {3, 3}, {2, 4}};
  for (int trial = 0; trial < 40; ++trial) {
    const Dims& dims = shapes[trial % shapes.size()];
    const int side = dims[0] * dims[1];
    const DensityMatrix rho = random_mixed(dims, 1 + trial % side, rng);
    const AMatrixSet ams = a_matrices(rho);
    const auto ref = oracle::a_matrices(rho.matrix(), dims[0], dims[1]);
    const auto gens = product_generators(dims[0], dims[1]).matrices();
    ASSERT_EQ(ams.matrices.size(), ref.size());
    EXPECT_EQ(ams.rank, std::min(1 + trial % side, side));
    for (std::size_t k = 0; k < ref.size(); ++k) {
      EXPECT_LE((ams.matrices[k] - ams.matrices[k].transpose()).norm(), 1e-14);
      for (std::size_t l = 0; l < ref.size(); ++l) {
        // Tr(A_k A_l^dagger) is independent of the eigenbasis choice.
        const Complex mine = (ams.matrices[k] * ams.matrices[l].adjoint()).trace();
        const Complex theirs = (ref[k] * ref[l].adjoint()).trace();
        EXPECT_LE(std::abs(mine - theirs), 1e-12);
      }
      EXPECT_NEAR(ams.matrices[k].squaredNorm(), flipped_overlap(rho.matrix(), gens[k]), 1e-12);
    }
  }
}

TEST(AMatrices, GhzAndMaximallyMixedSpectra) {
  const AMatrixSet g = a_matrices(ghz_ab());
  ASSERT_EQ(g.rank, 2);
  ASSERT_EQ(g.matrices.size(), 1u);
  const RVector sg = detail::singular_values(g.matrices[0]);
  EXPECT_NEAR(sg(0), 0.5, 1e-14);
  EXPECT_NEAR(sg(1), 0.5, 1e-14);
  EXPECT_NEAR(sv_objective(g, OptimizerPoint({Complex(1.0)})), 0.0, 1e-14);

  const AMatrixSet mm = a_matrices(DensityMatrix({2, 2}, CMatrix::Identity(4, 4) / 4.0));
  ASSERT_EQ(mm.rank, 4);
  const RVector sm = detail::singular_values(mm.matrices[0]);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(sm(k), 0.25, 1e-14);
  EXPECT_NEAR(sv_objective(mm, OptimizerPoint({Complex(1.0)})), -0.5, 1e-14);
}

TEST(AMatrices, RejectsNonBipartite) {
  const DensityMatrix rho = density_from_pure(PureState({2, 2, 2}, oracle::ghz(3)));
  EXPECT_THROW(a_matrices(rho), InvalidArgument);
}

TEST(OptimizerPoint, Validation) {
  EXPECT_THROW(OptimizerPoint({Complex(0.5), Complex(0.5)}), InvalidArgument);
  const std::vector<double> neg = {-1.0};
  EXPECT_THROW(OptimizerPoint::from_weights(neg), InvalidArgument);
  const std::vector<double> ok = {0.6, 0.8};
  EXPECT_EQ(OptimizerPoint::from_weights(ok).size(), 2u);
  const AMatrixSet g = a_matrices(ghz_ab());
  EXPECT_THROW(sv_objective(g, OptimizerPoint::from_weights(ok)), InvalidArgument);
}

TEST(MixedConcurrence, FrozenTwoQubitValues) {
  EXPECT_NEAR(mixed_concurrence_sq(ghz_ab()).value, 0.0, 1e-12);
  EXPECT_NEAR(mixed_concurrence_sq(w_ab()).value, 4.0 / 9.0, 1e-12);
  EXPECT_NEAR(mixed_concurrence_sq(density_from_pure(bell())).value, 1.0, 1e-12);
  EXPECT_NEAR(mixed_concurrence_sq(werner(0.9)).value, 0.7225, 1e-12);
  EXPECT_NEAR(mixed_concurrence_sq(werner(0.2)).value, 0.0, 1e-12);
}

TEST(MixedConcurrence, PureInputIsConsistent) {
  Rng rng(31);
  for (const Dims& dims : std::vector<Dims>{{2, 2}, {2, 3}, {3, 3}, {3, 4}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const PureState psi = random_pure(dims, rng);
      const MixedConcurrence m = mixed_concurrence_sq(density_from_pure(psi));
      EXPECT_EQ(m.rank, 1);
      EXPECT_NEAR(m.value, pure_concurrence_sq(psi, kFirst), 1e-10);
    }
  }
}

TEST(MixedConcurrence, MatchesWoottersOnTwoQubits) {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = random_mixed({2, 2}, 1 + trial % 4, rng);
    const double c = wootters_concurrence(rho);
    EXPECT_NEAR(mixed_concurrence_sq(rho).value, c * c, 1e-9);
  }
}

TEST(Wootters, MatchesEigenvalueOracle) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix rho = random_mixed({2, 2}, 1 + trial % 4, rng);
    EXPECT_NEAR(wootters_concurrence(rho), oracle::wootters(rho.matrix()), 1e-6);
  }
  EXPECT_NEAR(wootters_concurrence(werner(0.9)), 0.85, 1e-12);
  EXPECT_NEAR(wootters_concurrence(density_from_pure(bell())), 1.0, 1e-12);
  EXPECT_THROW(wootters_concurrence(DensityMatrix({2, 3}, CMatrix::Identity(6, 6) / 6.0)),
               InvalidArgument);
}

TEST(MixedConcurrence, LocalUnitaryInvariance) {
  Rng rng(43);
  for (const Dims& dims : std::vector<Dims>{{2, 3}, {3, 3}}) {
    for (int env : {2, 3}) {
      const DensityMatrix rho = random_mixed(dims, env, rng);
      const double before = mixed_concurrence_sq(rho).value;
      const double after = mixed_concurrence_sq(local_rotate(rho, rng)).value;
      EXPECT_NEAR(before, after, 1e-6) << dims_to_string(dims) << " env " << env;
    }
  }
}

TEST(MixedConcurrence, NeverExceedsSampledRoof) {
  Rng rng(47);
  for (const Dims& dims : std::vector<Dims>{{2, 3}, {3, 3}}) {
    for (int env : {2, 3}) {
      const DensityMatrix rho = random_mixed(dims, env, rng);
      const double bound = mixed_concurrence_sq(rho).value;
      EXPECT_LE(bound, convex_roof_sample(rho, 500, 99 + env) + 1e-6);
    }
  }
}

TEST(MixedConcurrence, MoreRestartsNeverLower) {
  const DensityMatrix rho = random_mixed({3, 3}, 2, std::uint64_t{53});
  OptimizerConfig few;
  few.restarts = 4;
  OptimizerConfig many = few;
  many.restarts = 16;
  const MixedConcurrence a = mixed_concurrence_sq(rho, few);
  const MixedConcurrence b = mixed_concurrence_sq(rho, many);
  EXPECT_GE(b.objective, a.objective);
  EXPECT_TRUE(b.converged);
  const MixedConcurrence again = mixed_concurrence_sq(rho, few);
  EXPECT_EQ(again.objective, a.objective);
  EXPECT_EQ(again.best_restart, a.best_restart);
}

TEST(ConvexRoof, Examples) {
  const PureState psi = random_pure({2, 3}, std::uint64_t{59});
  EXPECT_NEAR(convex_roof_sample(density_from_pure(psi), 20, 1), pure_concurrence_sq(psi, kFirst),
              1e-12);
  const double w = convex_roof_sample(werner(0.9), 2000, 3);
  EXPECT_GE(w, 0.7225 - 1e-6);
  EXPECT_THROW(convex_roof_sample(werner(0.9), 0, 3), InvalidArgument);
}

TEST(TildeOverlap, IdentityHoldsOnRandomStates) {
  Rng rng(61);
  for (const Dims& dims : std::vector<Dims>{{2, 2, 2}, {2, 3, 2}, {3, 2, 2}}) {
    for (int trial = 0; trial < 20; ++trial) {
      const TildeOverlapSums s = tilde_overlap_sums(random_pure(dims, rng));
      EXPECT_NEAR(s.lhs_ab + s.lhs_ac, s.rhs, 1e-9) << dims_to_string(dims);
    }
  }
  EXPECT_THROW(tilde_overlap_sums(bell()), InvalidArgument);
}

TEST(TildeOverlap, GhzAndW) {
  const TildeOverlapSums g = tilde_overlap_sums(PureState({2, 2, 2}, oracle::ghz(3)));
  // rho_AB = (|00><00| + |11><11|) / 2 is invariant under the flip.
  EXPECT_NEAR(g.lhs_ab, 0.5, 1e-15);
  EXPECT_NEAR(g.lhs_ac, 0.5, 1e-15);
  EXPECT_NEAR(g.rhs, 1.0, 1e-15);
  const TildeOverlapSums w = tilde_overlap_sums(PureState({2, 2, 2}, oracle::w_like({1, 1, 1})));
  EXPECT_NEAR(w.rhs, 8.0 / 9.0, 1e-14);
  EXPECT_NEAR(w.lhs_ab, w.lhs_ac, 1e-15);
}
