#include "oracles.hpp"
#include "schmidt/projections.hpp"
#include "schmidt/states.hpp"

#include <gtest/gtest.h>

using namespace schmidt;

TEST(LocalProjector, Validation) {
  Mat notp = Mat::Identity(3, 3);
  notp(0, 0) = 0.5;
  EXPECT_THROW(LocalProjector{notp}, InputError);
  Mat nonherm = Mat::Zero(2, 2);
  nonherm(0, 0) = 1.0;
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(LocalProjector{nonherm}, InputError);
  EXPECT_THROW(LocalProjector{Mat(Mat::Zero(3, 3))}, InputError);
  const LocalProjector p = LocalProjector::coordinate(4, {0, 2});
  EXPECT_EQ(p.rank(), 2);
  EXPECT_EQ(p.kernel_dim(), 2);
  Rng rng = stream_rng(61, 0);
  const LocalProjector h = LocalProjector::haar(5, 3, rng);
  EXPECT_EQ(oracle::rank(h.matrix()), 3);
  EXPECT_LT(max_abs(h.matrix() * h.matrix() - h.matrix()), 1e-12);
}

TEST(ApplyLocal, MatchesExplicitConjugation) {
  Rng rng = stream_rng(62, 0);
  const DensityOp r = random_mixed(DimVec{3, 4}, 3, rng);
  const LocalProjector pa = LocalProjector::haar(3, 2, rng), pb = LocalProjector::haar(4, 2, rng);
  const Mat ka = oracle::kron(pa.matrix(), Mat(Mat::Identity(4, 4)));
  const Mat kb = oracle::kron(Mat(Mat::Identity(3, 3)), pb.matrix());
  EXPECT_LT(max_abs(apply_local(r, pa, Side::A).matrix - ka * r.matrix() * ka), 1e-13);
  EXPECT_LT(max_abs(apply_local(r, pb, Side::B).matrix - kb * r.matrix() * kb), 1e-13);
  EXPECT_THROW(apply_local(r, pb, Side::A), InputError);
}

TEST(ApplyLocal, DegenerateProjectionIsFlagged) {
  const DensityOp z = DensityOp::trusted(projector(ket(2, {0, 0})), DimVec{2, 2});
  const Projected s = apply_local(z, LocalProjector::coordinate(2, {1}), Side::A);
  EXPECT_TRUE(s.degenerate);
  EXPECT_THROW(s.state(), PreconditionError);
  const ProjBoundReport r = check_proj_bounds(z, LocalProjector::coordinate(2, {1}), Side::A);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.sn_sigma.has_value());
}

TEST(ProjectionBounds, FullRankPureStateLosesExactlyK) {
  Rng rng = stream_rng(63, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const PureState p = random_schmidt_rank_state(4, 5, 4, rng);
    const int keep = 1 + trial % 3;
    const LocalProjector proj = LocalProjector::haar(4, keep, rng);
    const ProjBoundReport r = check_proj_bounds(DensityOp::from_pure(p), proj, Side::A);
    ASSERT_TRUE(r.sn_sigma.has_value());
    EXPECT_EQ(r.sn_sigma->lo, keep);
    EXPECT_EQ(r.sn_sigma->hi, keep);
    EXPECT_TRUE(r.lower_ok);
    EXPECT_TRUE(r.upper_ok);
    ASSERT_TRUE(r.exact_full_rank.has_value());
    EXPECT_TRUE(*r.exact_full_rank);
    // Independent check of the projected Schmidt rank.
    const Vec v = oracle::kron(proj.matrix(), Mat(Mat::Identity(5, 5))) * p.amplitudes();
    EXPECT_EQ(oracle::schmidt_rank(v, 4, 5), keep);
  }
}

TEST(ProjectionBounds, TilesRankTwoCoordinateProjection) {
  const ProjBoundReport r = check_proj_bounds(tiles_state(), LocalProjector::coordinate(3, {0, 1}), Side::B);
  ASSERT_TRUE(r.sn_sigma.has_value());
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(r.sn_sigma->hi, 1);  // 3x2 PPT of low rank
  EXPECT_TRUE(r.lower_ok);
  EXPECT_TRUE(r.upper_ok);
}

TEST(ProjectionBounds, IntervalPredicates) {
  SnBound rho, sigma;
  rho.lo = rho.hi = 3;
  sigma.lo = sigma.hi = 1;
  EXPECT_TRUE(proj_lower_ok(rho, sigma, 2));
  EXPECT_FALSE(proj_lower_ok(rho, sigma, 1));
  sigma.lo = sigma.hi = 3;
  EXPECT_FALSE(proj_upper_ok(rho, sigma, 4, 2));
  EXPECT_TRUE(proj_upper_ok(rho, sigma, 4, 1));
}

TEST(SnMinMax, IsotropicSandwich) {
  Budget b;
  b.restarts = 8;
  const SnMinMax r = snminmax_estimate(isotropic(3, 0.9), 1, 6, b);
  EXPECT_TRUE(r.sandwich_ok);
  // Six Haar projectors plus the three coordinate projectors of rank 2.
  EXPECT_EQ(r.samples + r.degenerate, 6 + 3);
  EXPECT_LE(r.max_est.hi, 2);
  EXPECT_GE(r.min_est.lo, 2);
  EXPECT_THROW(snminmax_estimate(isotropic(3, 0.9), 3, 2, b), InputError);
}

TEST(RankSweep, BellCoversOneAndTwo) {
  const RankSweep s = rank_sweep(bell_density(), 3);
  EXPECT_TRUE(s.consistent);
  EXPECT_EQ(s.achieved_a, (std::set<int>{1, 2}));
  EXPECT_EQ(s.achieved_b, (std::set<int>{1, 2}));
}

TEST(ProductBound, PureFactorsMultiply) {
  const SnBound a = sn_bounds(bell_density(), Bipartition::first_vs_rest(2));
  const SnBound p = product_bound(a, a, DimVec{2, 2}, DimVec{2, 2});
  EXPECT_EQ(p.lo, 4);
  EXPECT_EQ(p.hi, 4);
  // Mixed factors only give an interval.
  const SnBound t = sn_bounds(tiles_state(), Bipartition::first_vs_rest(2));
  const SnBound q = product_bound(t, t, DimVec{3, 3}, DimVec{3, 3});
  EXPECT_EQ(q.lo, 2);
  EXPECT_EQ(q.hi, 4);
}

TEST(TwoCopy, BellProjectedToOneDimension) {
  const TwoCopyReport r = two_copy_bound_check(bell_density(), LocalProjector::coordinate(2, {0}), Side::A);
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.sn_rho2.lo, 4);
  EXPECT_EQ(r.sn_sigma.hi, 1);
  EXPECT_EQ(r.sn_sigma2.hi, 1);
  EXPECT_TRUE(r.two_tensors_ok);
  EXPECT_TRUE(r.two_tensors2_ok);
}
