#include "crossnorm/errors.hpp"
#include "crossnorm/tensor_decomposition.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace crossnorm;
using crossnorm::testing::ketbra;

namespace {

// Four-term witness of the Bell projector, cost 2.
TensorDecomposition bell_witness() {
  std::vector<TensorTerm> terms;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) terms.push_back({{0.5 * ketbra(2, i, j), ketbra(2, i, j)}});
  return TensorDecomposition({2, 2}, terms);
}

TensorDecomposition product_witness(int i) {
  return TensorDecomposition({2, 2}, {TensorTerm{{ketbra(2, i, i), ketbra(2, i, i)}}});
}

}  // namespace

TEST(TensorDecomposition, CostIsSumOfProductsOfTraceNorms) {
  EXPECT_NEAR(bell_witness().cost(), 2.0, 1e-15);
  EXPECT_NEAR(product_witness(0).cost(), 1.0, 1e-15);
}

TEST(TensorDecomposition, DropsZeroTermsAndChecksShapes) {
  const TensorDecomposition d({2, 2}, {TensorTerm{{CMatrix::Zero(2, 2), ketbra(2, 0, 0)}}});
  EXPECT_EQ(d.size(), 0u);
  EXPECT_THROW(TensorDecomposition({2, 2}, {TensorTerm{{ketbra(3, 0, 0), ketbra(2, 0, 0)}}}), InvalidInputError);
}

TEST(TensorDecomposition, ResidualAgainstTarget) {
  CMatrix bell = CMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  EXPECT_LT(bell_witness().residual(bell), 1e-15);
  EXPECT_TRUE(bell_witness().certifies(bell));
  EXPECT_FALSE(product_witness(0).certifies(bell));
}

TEST(MixDecompositions, BoundaryKeepsFirst) {
  const TensorDecomposition m = mix_decompositions(bell_witness(), product_witness(0), 1.0);
  EXPECT_EQ(m.size(), bell_witness().size());
  EXPECT_NEAR(m.cost(), 2.0, 1e-15);
}

TEST(MixDecompositions, HalfOfTwoProducts) {
  const TensorDecomposition m = mix_decompositions(product_witness(0), product_witness(1), 0.5);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_NEAR(m.cost(), 1.0, 1e-15);
}

TEST(MixDecompositions, AffineCost) {
  EXPECT_NEAR(mix_decompositions(bell_witness(), product_witness(0), 0.3).cost(), 1.3, 1e-15);
  EXPECT_THROW(mix_decompositions(bell_witness(), product_witness(0), 1.5), InvalidInputError);
}

TEST(MergeParallelTerms, CombinesProportionalTerms) {
  const TensorDecomposition d({2, 2}, {TensorTerm{{ketbra(2, 0, 1), ketbra(2, 1, 0)}},
                                       TensorTerm{{Complex(0.0, 2.0) * ketbra(2, 0, 1), 0.5 * ketbra(2, 1, 0)}},
                                       TensorTerm{{ketbra(2, 0, 0), ketbra(2, 1, 1)}}});
  const TensorDecomposition m = merge_parallel_terms(d);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_LT(m.residual(d.reconstruct()), 1e-15);
  EXPECT_NEAR(m.cost(), std::abs(Complex(1.0, 1.0)) + 1.0, 1e-15);
  EXPECT_LE(m.cost(), d.cost());
}

TEST(EmbedDecomposition, PadsFactors) {
  const TensorDecomposition e = embed_decomposition(bell_witness(), {3, 2});
  EXPECT_EQ(e.dims(), FactorDims({3, 2}));
  EXPECT_NEAR(e.cost(), 2.0, 1e-15);
  EXPECT_THROW(embed_decomposition(bell_witness(), {1, 2}), InvalidInputError);
}
