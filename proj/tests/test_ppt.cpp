#include "oracles.hpp"
#include "schmidt/ppt.hpp"
#include "schmidt/states.hpp"

#include <gtest/gtest.h>

using namespace schmidt;

namespace {
const Bipartition kAB = Bipartition::first_vs_rest(2);
}

TEST(PartialTranspose, MatchesIndexLoops) {
  Rng rng = stream_rng(31, 0);
  const DensityOp r = random_mixed(DimVec{2, 3}, 4, rng);
  EXPECT_LT(max_abs(partial_transpose(r.matrix(), r.dims(), {0}) - oracle::pt_a(r.matrix(), 2, 3)), 1e-15);
  EXPECT_LT(max_abs(partial_transpose(r.matrix(), r.dims(), {1}) - oracle::pt_b(r.matrix(), 2, 3)), 1e-15);
  EXPECT_LT(max_abs(gamma(r, kAB) - oracle::pt_a(r.matrix(), 2, 3)), 1e-15);
}

TEST(PartialTranspose, InvolutionAndFullTranspose) {
  Rng rng = stream_rng(32, 0);
  const DensityOp r = random_mixed(DimVec{2, 2, 3}, 5, rng);
  const Mat g = partial_transpose(r.matrix(), r.dims(), {0, 2});
  EXPECT_LT(max_abs(partial_transpose(g, r.dims(), {0, 2}) - r.matrix()), 1e-15);
  EXPECT_LT(max_abs(partial_transpose(r.matrix(), r.dims(), {0, 1, 2}) - Mat(r.matrix().transpose())), 1e-15);
}

TEST(Ppt, BellIsNpt) {
  const PptVerdict v = ppt_check(bell_density(), kAB);
  EXPECT_FALSE(v.is_ppt);
  EXPECT_NEAR(v.min_eig_gamma, oracle::min_eig(oracle::pt_a(bell_density().matrix(), 2, 2)), 1e-12);
  EXPECT_NEAR(v.min_eig_gamma, -0.5, 1e-12);
}

TEST(Ppt, TilesIsPptWithBirankFourFour) {
  const DensityOp t = tiles_state();
  const PptVerdict v = ppt_check(t, kAB);
  EXPECT_TRUE(v.is_ppt);
  EXPECT_GE(v.min_eig_gamma, -1e-9);
  const BiRank b = birank(t, kAB);
  EXPECT_EQ(b.rank_rho, oracle::rank(t.matrix()));
  EXPECT_EQ(b.rank_gamma, oracle::rank(oracle::pt_a(t.matrix(), 3, 3)));
  EXPECT_EQ(b, (BiRank{4, 4}));
}

TEST(Reduction, BellViolatesBothSides) {
  const ReductionResult r = reduction_check(bell_density(), kAB);
  EXPECT_TRUE(r.violated);
  // I (x) rho_B - rho for the Bell state: rho_B = I/2, so spectrum {1/2 x3, -1/2}.
  const Mat rhob = oracle::trace_a(bell_density().matrix(), 2, 2);
  const double want = oracle::min_eig(oracle::kron(Mat::Identity(2, 2), rhob) - bell_density().matrix());
  EXPECT_NEAR(r.min_eig_a, want, 1e-12);
  EXPECT_NEAR(r.min_eig_b, -0.5, 1e-12);
}

TEST(Reduction, MaximallyMixedAndTilesHold) {
  EXPECT_FALSE(reduction_check(maximally_mixed(DimVec{2, 2}), kAB).violated);
  const ReductionResult t = reduction_check(tiles_state(), kAB);
  EXPECT_FALSE(t.violated);
  EXPECT_GE(t.min_eig_a, -1e-12);
  EXPECT_GE(t.min_eig_b, -1e-12);
}

TEST(LowDim, Verdicts) {
  EXPECT_EQ(lowdim_separability(werner(2, -1.0), kAB), Separability::entangled);
  const DensityOp diag = DensityOp::trusted(projector(ket(2, {0, 0})) + projector(ket(2, {1, 1})), DimVec{2, 2});
  EXPECT_EQ(lowdim_separability(diag, kAB), Separability::separable);
  EXPECT_EQ(lowdim_separability(tiles_state(), kAB), Separability::undecided);
  // A 2x2 state embedded in 4x4 is decided by its local ranks.
  EXPECT_EQ(lowdim_separability(embed(diag, 4, 4, 1, 2), kAB), Separability::separable);
}

TEST(TensorNpt, NamedPairs) {
  const DensityOp sep = DensityOp::trusted(projector(ket(2, {0, 1})), DimVec{2, 2});
  EXPECT_TRUE(tensor_npt_check(bell_density(), bell_density()).npt);
  EXPECT_FALSE(tensor_npt_check(sep, sep).npt);
  const TensorNptResult m = tensor_npt_check(bell_density(), maximally_mixed(DimVec{2, 2}));
  EXPECT_TRUE(m.npt);
  EXPECT_TRUE(m.predicted_npt);
  EXPECT_THROW(tensor_npt_check(tiles_state(), bell_density()), InputError);
}

TEST(TensorNpt, CompositeSpectrumIsProductOfSpectra) {
  Rng rng = stream_rng(33, 0);
  const DensityOp r1 = random_mixed(DimVec{2, 2}, 2, rng), r2 = random_mixed(DimVec{2, 3}, 3, rng);
  const DensityOp prod = regrouped_product({r1, r2});
  const Mat g = gamma(prod, kAB);
  Eigen::SelfAdjointEigenSolver<Mat> e1(oracle::pt_a(r1.matrix(), 2, 2)), e2(oracle::pt_a(r2.matrix(), 2, 3));
  double want = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) want = std::min(want, e1.eigenvalues()(i) * e2.eigenvalues()(j));
  EXPECT_NEAR(oracle::min_eig(g), want, 1e-12);
}

TEST(Support, RestrictionKeepsSpectrum) {
  const DensityOp diag = DensityOp::trusted(projector(ket(2, {0, 0})) + projector(ket(2, {1, 1})), DimVec{2, 2});
  const DensityOp big = embed(diag, 5, 4, 2, 1);
  const SupportRestriction s = restrict_to_support(big);
  EXPECT_EQ(s.restricted.dims(), (DimVec{2, 2}));
  EXPECT_NEAR(s.restricted.trace(), 2.0, 1e-14);
  const LocalRanks lr = local_ranks(big);
  EXPECT_EQ(lr.a, 2);
  EXPECT_EQ(lr.b, 2);
}
