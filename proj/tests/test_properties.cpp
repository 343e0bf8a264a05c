// Randomized invariants. Every loop is seeded, so failures reproduce.

#include "oracles.hpp"
#include "schmidt/certify.hpp"
#include "schmidt/projections.hpp"
#include "schmidt/states.hpp"

#include <gtest/gtest.h>

using namespace schmidt;

namespace {

const Bipartition kAB = Bipartition::first_vs_rest(2);

bool intersect(const SnBound& a, const SnBound& b) { return std::max(a.lo, b.lo) <= std::min(a.hi, b.hi); }

Budget quick() {
  Budget b;
  b.restarts = 8;
  b.iters = 300;
  b.ces_restarts = 10;
  b.overlap_restarts = 8;
  return b;
}

}  // namespace

TEST(Property, PartialTransposeKeepsTraceAndHermiticity) {
  for (int t = 0; t < 40; ++t) {
    Rng rng = stream_rng(101, t);
    const int m = 2 + t % 3, n = 2 + (t / 3) % 3;
    const DensityOp r = random_mixed(DimVec{m, n}, 1 + t % 5, rng);
    const Mat g = gamma(r, kAB);
    EXPECT_NEAR(g.trace().real(), r.trace(), 1e-12);
    EXPECT_LT(max_abs(g - g.adjoint()), 1e-14);
    EXPECT_LT(max_abs(g - oracle::pt_a(r.matrix(), m, n)), 1e-15);
  }
}

TEST(Property, PtSpectrumInvariantUnderLocalUnitaries) {
  for (int t = 0; t < 20; ++t) {
    Rng rng = stream_rng(102, t);
    const DensityOp r = random_mixed(DimVec{2, 3}, 3, rng);
    const Mat u = kron(haar_unitary(2, rng), haar_unitary(3, rng));
    const DensityOp ru = DensityOp::trusted(u * r.matrix() * u.adjoint(), r.dims());
    EXPECT_NEAR(ppt_check(r, kAB).min_eig_gamma, ppt_check(ru, kAB).min_eig_gamma, 1e-12);
  }
}

TEST(Property, PureSnEqualsOracleRankUnderLocalInvertibles) {
  for (int t = 0; t < 30; ++t) {
    Rng rng = stream_rng(103, t);
    const int m = 2 + t % 3, n = 2 + (t / 3) % 4, k = 1 + t % std::min(m, n);
    PureState p = random_schmidt_rank_state(m, n, k, rng);
    p = apply_local(apply_local(p, 0, random_invertible(m, rng)), 1, random_invertible(n, rng)).normalized();
    const SnBound b = sn_bounds(DensityOp::from_pure(p), kAB);
    EXPECT_EQ(b.lo, oracle::schmidt_rank(p.amplitudes(), m, n));
    EXPECT_EQ(b.hi, b.lo);
  }
}

TEST(Property, SeparableStatesNeverCertifiedEntangled) {
  for (int t = 0; t < 25; ++t) {
    Rng rng = stream_rng(104, t);
    const int d = 2 + t % 2;
    const DensityOp s = random_separable(DimVec{d, d + (t % 2)}, 1 + t % 6, rng);
    const SnBound b = sn_bounds(s, kAB, quick());
    EXPECT_EQ(b.lo, 1) << "trial " << t;
  }
}

TEST(Property, ReductionWitnessNonnegativeOnSeparable) {
  for (int t = 0; t < 25; ++t) {
    Rng rng = stream_rng(110, t);
    const int d = 2 + t % 3;
    const DensityOp s = random_separable(DimVec{d, d}, 1 + t % 6, rng);
    EXPECT_GE(oracle::pairing(s.normalized().matrix(), reduction_choi(d).matrix), -1e-12);
  }
}

TEST(Property, OverlapBoundedBySchmidtRankOverDim) {
  for (int t = 0; t < 20; ++t) {
    Rng rng = stream_rng(105, t);
    const int m = 3, k = 1 + t % 3;
    const PureState p = random_schmidt_rank_state(m, m, k, rng);
    const OverlapResult r = max_entangled_overlap(DensityOp::from_pure(p));
    // |<Phi|psi>|^2 <= k / m when psi has Schmidt rank k.
    EXPECT_LE(r.value, static_cast<double>(k) / m + 1e-10);
    EXPECT_LE(sn_lower_from_overlap(r.value, m), k);
  }
}

TEST(Property, BoundsAgreeOnLocallyRotatedCopies) {
  for (int t = 0; t < 8; ++t) {
    Rng rng = stream_rng(106, t);
    const DensityOp r = random_mixed(DimVec{3, 3}, 2 + t % 3, rng).normalized();
    const Mat u = kron(haar_unitary(3, rng), haar_unitary(3, rng));
    const DensityOp ru = DensityOp::trusted(u * r.matrix() * u.adjoint(), r.dims());
    const SnBound a = sn_bounds(r, kAB, quick()), b = sn_bounds(ru, kAB, quick());
    EXPECT_TRUE(intersect(a, b)) << "trial " << t << ": [" << a.lo << "," << a.hi << "] vs [" << b.lo << "," << b.hi << "]";
  }
}

TEST(Property, ReturnedDecompositionsReconstruct) {
  for (int t = 0; t < 8; ++t) {
    Rng rng = stream_rng(107, t);
    const DensityOp r = random_mixed(DimVec{2 + t % 2, 3}, 2, rng).normalized();
    const SnBound b = sn_bounds(r, kAB, quick());
    if (!b.decomposition) continue;
    EXPECT_TRUE(verify_decomposition(r, *b.decomposition, b.hi));
    for (const auto& s : b.decomposition->states)
      EXPECT_LE(oracle::schmidt_rank(s.amplitudes(), r.dims()[0], r.dims()[1], 1e-6), b.hi);
  }
}

TEST(Property, ProjectionSandwichOnRandomStates) {
  for (int t = 0; t < 15; ++t) {
    Rng rng = stream_rng(108, t);
    const DensityOp r = DensityOp::from_pure(random_pure(DimVec{3, 4}, rng));
    const LocalProjector p = LocalProjector::haar(3, 1 + t % 2, rng);
    const ProjBoundReport rep = check_proj_bounds(r, p, Side::A, quick());
    EXPECT_TRUE(rep.lower_ok);
    EXPECT_TRUE(rep.upper_ok);
  }
}

TEST(Property, DirectSumOfPureBlocksTakesMaximum) {
  for (int t = 0; t < 10; ++t) {
    Rng rng = stream_rng(109, t);
    const int k1 = 1 + t % 2, k2 = 1 + (t / 2) % 2;
    const DensityOp a = DensityOp::from_pure(random_schmidt_rank_state(2, 2, k1, rng));
    const DensityOp b = DensityOp::from_pure(random_schmidt_rank_state(2, 2, k2, rng));
    const SnBound s = sn_bounds(direct_sum_b(a, b), kAB, quick());
    EXPECT_EQ(s.lo, std::max(k1, k2));
    EXPECT_EQ(s.hi, std::max(k1, k2));
  }
}
