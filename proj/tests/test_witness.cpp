#include "oracles.hpp"
#include "schmidt/states.hpp"
#include "schmidt/witness.hpp"

#include <gtest/gtest.h>

using namespace schmidt;

TEST(Choi, ReductionMapFormula) {
  // Lambda(a) = tr(a) I - a has Choi matrix I_9 - sum_ij |ii><jj|.
  const ChoiMatrix c = reduction_choi(3);
  const Vec phi = std::sqrt(3.0) * max_entangled(3).amplitudes();
  EXPECT_LT(max_abs(c.matrix - (Mat::Identity(9, 9) - phi * phi.adjoint())), 1e-15);
  EXPECT_EQ(c.in_dim, 3);
  EXPECT_EQ(c.out_dim, 3);
}

TEST(Choi, IdentityAndTranspose) {
  const Vec phi = std::sqrt(2.0) * max_entangled(2).amplitudes();
  EXPECT_LT(max_abs(choi_matrix(identity_map(), 2).matrix - phi * phi.adjoint()), 1e-15);
  EXPECT_LT(max_abs(choi_matrix(transpose_map(), 2).matrix - swap_operator(2)), 1e-15);
}

TEST(Choi, RejectsInconsistentMaps) {
  auto bad = [](const Mat& a) { return a(0, 0) == cplx(1.0) ? Mat(Mat::Identity(2, 2)) : Mat(Mat::Identity(3, 3)); };
  EXPECT_THROW(choi_matrix(bad, 2), InputError);
}

TEST(Pairing, AgreesWithTraceFormula) {
  Rng rng = stream_rng(41, 0);
  const DensityOp r = random_mixed(DimVec{3, 3}, 4, rng);
  const ChoiMatrix c = reduction_choi(3);
  EXPECT_NEAR(pairing(r, c), oracle::pairing(r.matrix(), c.matrix), 1e-13);
  EXPECT_THROW(pairing(bell_density(), c), InputError);
}

TEST(Pairing, ReductionOnBellProductAndTiles) {
  const ChoiMatrix c2 = reduction_choi(2);
  // tr(Phi C^T) with C = I - 2 Phi: 1 - 2 = -1.
  EXPECT_NEAR(pairing(bell_density(), c2), oracle::pairing(bell_density().matrix(), c2.matrix), 1e-15);
  EXPECT_NEAR(pairing(bell_density(), c2), -1.0, 1e-14);
  EXPECT_GE(pairing(DensityOp::trusted(projector(ket(2, {0, 0})), DimVec{2, 2}), c2), -1e-15);
  EXPECT_GE(pairing(tiles_state(), reduction_choi(3)), 0.0);
}

TEST(Margin, BellExamples) {
  const ChoiMatrix c = reduction_choi(2);
  const DensityOp bell = bell_density();
  EXPECT_TRUE(std::isinf(perturbation_margin(bell, bell, c)));
  // pairing(I/4) = (4 - 2)/4 = 1/2, so eps* = 1 / (1/2) = 2.
  EXPECT_NEAR(oracle::pairing(maximally_mixed(DimVec{2, 2}).matrix(), c.matrix), 0.5, 1e-15);
  EXPECT_NEAR(perturbation_margin(bell, maximally_mixed(DimVec{2, 2}), c), 2.0, 1e-14);
  // |00><00| pairs to zero with this witness.
  const DensityOp z = DensityOp::trusted(projector(ket(2, {0, 0})), DimVec{2, 2});
  EXPECT_TRUE(std::isinf(perturbation_margin(bell, z, c)));
  EXPECT_THROW(perturbation_margin(z, bell, c), PreconditionError);
}

TEST(Overlap, IsotropicReachesAnalyticValue) {
  const OverlapResult r = max_entangled_overlap(isotropic(3, 0.9));
  EXPECT_GE(r.value, 0.9 + 0.1 / 9 - 1e-6);
  EXPECT_TRUE(r.monotone);
  EXPECT_EQ(sn_lower_from_overlap(r.value, 3), 3);
}

TEST(Overlap, MaximallyEntangledAndMixed) {
  for (int m = 2; m <= 4; ++m) {
    const OverlapResult r = max_entangled_overlap(DensityOp::from_pure(max_entangled(m)));
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_EQ(sn_lower_from_overlap(r.value, m), m);
  }
  const OverlapResult r = max_entangled_overlap(maximally_mixed(DimVec{3, 3}));
  EXPECT_NEAR(r.value, 1.0 / 9, 1e-14);
  EXPECT_EQ(sn_lower_from_overlap(r.value, 3), 1);
}

TEST(Overlap, RotatedMaximallyEntangledFoundFromRandomStarts) {
  // (U x I)|Phi> is found even though restart 0 starts at the identity.
  Rng rng = stream_rng(42, 0);
  const Mat u = haar_unitary(3, rng);
  const Vec v = kron(u, Mat::Identity(3, 3)) * max_entangled(3).amplitudes();
  const OverlapResult r = max_entangled_overlap(DensityOp::from_pure(PureState(v, DimVec{3, 3})));
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_NEAR(overlap_of_unitary(projector(v), r.unitary), r.value, 1e-10);
}

TEST(Overlap, RejectsUnequalDims) {
  EXPECT_THROW(max_entangled_overlap(maximally_mixed(DimVec{2, 3})), InputError);
}

TEST(OverlapBound, Examples) {
  EXPECT_EQ(sn_lower_from_overlap(1.0, 3), 3);
  EXPECT_EQ(sn_lower_from_overlap(0.911111, 3), 3);
  EXPECT_EQ(sn_lower_from_overlap(1.0 / 3, 3), 1);
  EXPECT_EQ(sn_lower_from_overlap(0.5 + 1e-6, 2), 2);
  EXPECT_EQ(sn_lower_from_overlap(0.5, 2), 1);
}
