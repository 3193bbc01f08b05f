#include "crossnorm/channels.hpp"
#include "crossnorm/errors.hpp"
#include "crossnorm/gamma.hpp"
#include "crossnorm/random.hpp"
#include "crossnorm/states.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace crossnorm;
using crossnorm::testing::ket;
using crossnorm::testing::ketbra;
using crossnorm::testing::max_abs;

TEST(ValidateChannel, UnitaryIsTracePreserving) {
  Rng rng(1);
  const KrausChannel c = unitary_channel(random_unitary(3, rng));
  EXPECT_TRUE(c.trace_preserving);
  EXPECT_GE(c.choi_min_eigenvalue, -1e-9);
  EXPECT_FALSE(c.warning.has_value());
}

TEST(ValidateChannel, ProjectorPairIsTracePreserving) {
  EXPECT_TRUE(validate_channel({ketbra(2, 0, 0), ketbra(2, 1, 1)}).trace_preserving);
}

TEST(ValidateChannel, RejectsEffectAboveIdentity) {
  EXPECT_THROW(validate_channel({std::sqrt(1.5) * CMatrix::Identity(2, 2)}), InvalidChannelError);
  EXPECT_THROW(validate_channel({}), InvalidChannelError);
  EXPECT_THROW(validate_channel({CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)}), InvalidChannelError);
}

TEST(EffectOf, LudersAndSingleProjector) {
  EXPECT_LT(max_abs(effect_of(luders_channel(block_luders(3, {1, 2}))) - CMatrix::Identity(3, 3)), 1e-15);
  const CMatrix p = ketbra(3, 1, 1) + ketbra(3, 2, 2);
  EXPECT_LT(max_abs(effect_of(validate_channel({p})) - p), 1e-15);
}

TEST(EffectOf, RandomChannelBetweenZeroAndOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RVector ev = eigh_hermitian(effect_of(random_channel(3, 2, 2, seed % 2 == 0, seed))).values;
    EXPECT_GE(ev.minCoeff(), -1e-9);
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-9);
  }
}

TEST(EffectOf, IndependentOfKrausRepresentation) {
  Rng rng(3);
  const KrausChannel c = random_channel(3, 3, 2, true, 8);
  // Isometric mixing B_j = sum_k V_jk A_k with V^H V = 1.
  const CMatrix v = random_unitary(3, rng).leftCols(2);
  std::vector<CMatrix> mixed;
  for (int j = 0; j < 3; ++j) mixed.push_back(v(j, 0) * c.kraus[0] + v(j, 1) * c.kraus[1]);
  EXPECT_LT(max_abs(effect_of(validate_channel(mixed)) - effect_of(c)), 1e-10);
}

TEST(ApplyChannel, UnitaryConjugationKeepsSpectrum) {
  Rng rng(4);
  const CMatrix u = random_unitary(3, rng);
  const DensityOperator rho = make_random_density({3}, 2);
  const CMatrix out = apply_channel(unitary_channel(u), rho);
  EXPECT_LT(max_abs(out - u.adjoint() * rho.matrix() * u), 1e-14);
  EXPECT_LT((eigh_hermitian(out).values - eigh_hermitian(rho.matrix()).values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyChannel, LudersPreservesTrace) {
  const DensityOperator rho = make_random_density({2, 2}, 6);
  const CMatrix out = apply_channel(luders_channel(random_luders(4, {1, 3}, 2)), rho);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
  EXPECT_NO_THROW(validate_density(out, {2, 2}));
}

TEST(ApplyChannel, DepolarizingGivesMaximallyMixed) {
  const CMatrix out = apply_channel(depolarizing_channel(3), make_random_density({3}, 4));
  EXPECT_LT(max_abs(out - CMatrix::Identity(3, 3) / 3.0), 1e-14);
}

TEST(ApplyChannel, ShapeMismatch) {
  EXPECT_THROW(apply_channel(identity_channel(2), CMatrix::Identity(3, 3)), InvalidInputError);
}

TEST(ApplyChannel, TraceNonIncreasing) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix out = apply_channel(random_channel(4, 3, 2, false, seed), make_random_density({4}, seed));
    EXPECT_LE(out.trace().real(), 1.0 + 1e-10);
  }
}

TEST(ApplyLocal, IdentityLeavesStateUnchanged) {
  const DensityOperator rho = make_random_density({2, 3}, 1);
  const LocalOutput out = apply_local(identity_channel(2), identity_channel(3), rho);
  ASSERT_TRUE(out.state.has_value());
  EXPECT_LT(max_abs(out.matrix - rho.matrix()), 1e-15);
}

TEST(ApplyLocal, DepolarizedBellIsSeparable) {
  const LocalOutput out = apply_local(depolarizing_channel(2), identity_channel(2), make_bell().density());
  ASSERT_TRUE(out.state.has_value());
  EXPECT_LT(max_abs(out.matrix - CMatrix::Identity(4, 4) / 4.0), 1e-15);
  const GammaBracket b = gamma_bracket(*out.state);
  EXPECT_NEAR(b.lower, 1.0, 1e-9);
  EXPECT_NEAR(b.upper, 1.0, 1e-9);
}

TEST(ApplyLocal, LocalUnitariesKeepLowerBound) {
  Rng rng(9);
  const DensityOperator rho = make_random_density({2, 3}, 12);
  const LocalOutput out =
      apply_local(unitary_channel(random_unitary(2, rng)), unitary_channel(random_unitary(3, rng)), rho);
  EXPECT_NEAR(gamma_lower(*out.state), gamma_lower(rho), 1e-9);
}

TEST(Pushforward, IdentityKeepsDecomposition) {
  const UpperBound u = gamma_upper(make_bell().density());
  const TensorDecomposition p = pushforward_decomposition(identity_channel(2), identity_channel(2), u.witness);
  EXPECT_NEAR(p.cost(), u.cost, 1e-15);
  EXPECT_LT(p.residual(make_bell().density().matrix()), 1e-12);
}

TEST(Pushforward, DepolarizedBellWitness) {
  const UpperBound u = gamma_upper(make_bell().density());
  const TensorDecomposition p = pushforward_decomposition(depolarizing_channel(2), identity_channel(2), u.witness);
  EXPECT_LE(p.cost(), 1.0 + 1e-9);
  EXPECT_LT(p.residual(CMatrix::Identity(4, 4) / 4.0), 1e-12);
}

TEST(Pushforward, RandomChannelsDoNotIncreaseCost) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityOperator rho = make_random_density({3, 2}, seed);
    const TensorDecomposition d = operator_schmidt_witness(rho.matrix(), rho.dims());
    const KrausChannel t1 = random_channel(3, 2, 2, seed % 2 == 0, seed + 100);
    const KrausChannel t2 = random_channel(2, 3, 1, false, seed + 200);
    const TensorDecomposition p = pushforward_decomposition(t1, t2, d);
    EXPECT_LE(p.cost(), d.cost() + 1e-10);
    EXPECT_LT(p.residual(apply_local(t1, t2, rho).matrix), 1e-8);
  }
}

TEST(Luders, ValidationRequiresCompleteOrthogonalProjectors) {
  EXPECT_THROW(validate_luders({ketbra(2, 0, 0)}), InvalidInputError);
  EXPECT_THROW(validate_luders({ketbra(2, 0, 1), ketbra(2, 1, 0)}), InvalidInputError);
  EXPECT_NO_THROW(validate_luders({ketbra(2, 0, 0), ketbra(2, 1, 1)}));
}

TEST(Luders, BellInComputationalBasis) {
  const LudersOperation z = block_luders(2, {1, 1});
  const MeasurementOutcome m = luders_outcomes(z, z, make_bell().density());
  ASSERT_EQ(m.branches.size(), 2u);
  EXPECT_EQ(m.branches[0].i, 0);
  EXPECT_EQ(m.branches[0].j, 0);
  EXPECT_EQ(m.branches[1].i, 1);
  EXPECT_EQ(m.branches[1].j, 1);
  double average = 0.0;
  for (const Branch& b : m.branches) {
    EXPECT_NEAR(b.probability, 0.5, 1e-15);
    average += b.probability * (gamma_lower(b.state) - 1.0);
  }
  EXPECT_NEAR(average, 0.0, 1e-12);
  EXPECT_NEAR(m.total_probability, 1.0, 1e-12);
}

TEST(Luders, TrivialFamiliesGiveOneBranch) {
  const DensityOperator rho = make_random_density({2, 3}, 3);
  const MeasurementOutcome m = luders_outcomes(block_luders(2, {2}), block_luders(3, {3}), rho);
  ASSERT_EQ(m.branches.size(), 1u);
  EXPECT_NEAR(m.branches[0].probability, 1.0, 1e-12);
  EXPECT_LT(max_abs(m.branches[0].state.matrix() - rho.matrix()), 1e-12);
}

TEST(Luders, BranchesReconstructPinching) {
  const DensityOperator rho = make_random_density({3, 2}, 8);
  const LudersOperation l1 = random_luders(3, {1, 2}, 1), l2 = random_luders(2, {1, 1}, 2);
  const MeasurementOutcome m = luders_outcomes(l1, l2, rho);
  CMatrix sum = CMatrix::Zero(6, 6);
  for (const Branch& b : m.branches) sum += b.probability * b.state.matrix();
  CMatrix direct = CMatrix::Zero(6, 6);
  for (const CMatrix& p : l1.projectors)
    for (const CMatrix& q : l2.projectors) direct += kron(p, q) * rho.matrix() * kron(p, q);
  EXPECT_LT(max_abs(sum - direct), 1e-10);
}

TEST(PostSelect, AntisymmetricBranchOfRhoEps) {
  const CMatrix p12 = ketbra(3, 1, 1) + ketbra(3, 2, 2);
  const DensityOperator s = post_select(validate_channel({kron(p12, p12)}), make_rho_eps(0.01));
  CVector anti = (kron(ket(3, 1), ket(3, 2)) - kron(ket(3, 2), ket(3, 1))) / std::sqrt(2.0);
  EXPECT_LT(max_abs(s.matrix() - anti * anti.adjoint()), 1e-12);
}

TEST(PostSelect, TracePreservingChannelKeepsState) {
  const DensityOperator rho = make_random_density({2, 2}, 4);
  EXPECT_LT(max_abs(post_select(identity_channel(4), rho).matrix() - rho.matrix()), 1e-12);
}

TEST(PostSelect, ZeroProbabilityBranch) {
  const DensityOperator rho = make_product_density({ketbra(2, 0, 0), ketbra(2, 0, 0)});
  EXPECT_THROW(post_select(validate_channel({kron(ketbra(2, 1, 1), ketbra(2, 1, 1))}), rho), DegenerateBranchError);
}
