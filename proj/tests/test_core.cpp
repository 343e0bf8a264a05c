#include "oracles.hpp"
#include "schmidt/states.hpp"

#include <gtest/gtest.h>

using namespace schmidt;

TEST(DimVec, RejectsEmptyAndNonPositive) {
  EXPECT_THROW(DimVec(std::vector<int>{}), InputError);
  EXPECT_THROW((DimVec{2, 0}), InputError);
  const DimVec d{2, 3, 4};
  EXPECT_EQ(d.total(), 24u);
  EXPECT_EQ(d.stride(0), 12u);
  EXPECT_EQ(d.stride(2), 1u);
}

TEST(Bipartition, ValidatesSides) {
  EXPECT_THROW(Bipartition({}, 3), InputError);
  EXPECT_THROW(Bipartition({0, 1, 2}, 3), InputError);
  EXPECT_THROW(Bipartition({3}, 3), InputError);
  const Bipartition b({2, 0}, 3);
  EXPECT_EQ(b.left(), (std::vector<int>{0, 2}));
  EXPECT_EQ(b.right(), (std::vector<int>{1}));
  EXPECT_EQ(b.ordering(), (std::vector<int>{0, 2, 1}));
}

TEST(Capacity, AmbientLimit) {
  EXPECT_NO_THROW(check_capacity(4096));
  EXPECT_THROW(check_capacity(4097), CapacityError);
  EXPECT_THROW(PureState(Vec::Zero(8192), DimVec{64, 128}), CapacityError);
}

TEST(Reshape, BigEndianRowMajor) {
  // |ij> sits at index i * n + j.
  Vec v = Vec::Zero(6);
  v(1 * 3 + 2) = 1.0;
  const Mat c = reshape(v, 2, 3);
  EXPECT_EQ(c(1, 2), cplx(1.0));
  EXPECT_EQ(flatten(c), v);
}

TEST(PureState, Validation) {
  EXPECT_THROW(PureState(Vec::Zero(3), DimVec{2, 2}), InputError);
  Vec v = Vec::Ones(4);
  EXPECT_THROW(PureState(v, DimVec{2, 2}, true), InputError);
  EXPECT_NEAR(PureState(v, DimVec{2, 2}).normalized().norm(), 1.0, 1e-15);
  Vec bad = Vec::Ones(4);
  bad(0) = cplx(std::numeric_limits<double>::quiet_NaN(), 0);
  EXPECT_THROW(PureState(bad, DimVec{2, 2}), InputError);
}

TEST(DensityOp, Validation) {
  Mat m = Mat::Identity(4, 4);
  m(0, 1) = cplx(0.0, 1.0);
  EXPECT_THROW(DensityOp(m, DimVec{2, 2}), InputError);  // not Hermitian
  Mat neg = Mat::Identity(4, 4);
  neg(0, 0) = -1.0;
  EXPECT_THROW(DensityOp(neg, DimVec{2, 2}), InputError);
  EXPECT_THROW(DensityOp(Mat::Zero(4, 4), DimVec{2, 2}), InputError);
  EXPECT_THROW(DensityOp(Mat::Identity(4, 4), DimVec{2, 3}), InputError);
  // Tiny anti-Hermitian noise is symmetrized away.
  Mat near = Mat::Identity(4, 4);
  near(0, 1) = 1e-14;
  const DensityOp d(near, DimVec{2, 2});
  EXPECT_EQ(d.matrix()(0, 1), d.matrix()(1, 0));
}

TEST(PartialTrace, MatchesLoops) {
  Rng rng = stream_rng(3, 0);
  const DensityOp rho = random_mixed(DimVec{3, 4}, 5, rng);
  EXPECT_LT(max_abs(partial_trace(rho, {0}).matrix() - oracle::trace_b(rho.matrix(), 3, 4)), 1e-13);
  EXPECT_LT(max_abs(partial_trace(rho, {1}).matrix() - oracle::trace_a(rho.matrix(), 3, 4)), 1e-13);
}

TEST(PartialTrace, ThreePartiesOfProduct) {
  Rng rng = stream_rng(4, 0);
  const DensityOp a = random_mixed(DimVec{2}, 2, rng), b = random_mixed(DimVec{3}, 2, rng), c = random_mixed(DimVec{2}, 1, rng);
  const DensityOp abc = tensor_product(tensor_product(a, b), c);
  const Mat want = oracle::kron(a.matrix(), c.matrix()) * b.trace();
  EXPECT_LT(max_abs(partial_trace(abc, {0, 2}).matrix() - want), 1e-13);
}

TEST(Permute, SwapTwoParties) {
  Rng rng = stream_rng(5, 0);
  const Vec a = random_unit_vector(2, rng), b = random_unit_vector(3, rng);
  const PureState ab(oracle::kron(a, b), DimVec{2, 3});
  const PureState ba = permute_systems(ab, std::vector<int>{1, 0});
  EXPECT_EQ(ba.dims(), (DimVec{3, 2}));
  EXPECT_LT((ba.amplitudes() - oracle::kron(b, a)).norm(), 1e-14);
  EXPECT_THROW(permute_systems(ab, std::vector<int>{0, 0}), InputError);
}

TEST(Schmidt, DecomposeAndReconstruct) {
  Rng rng = stream_rng(6, 0);
  for (int r = 1; r <= 3; ++r) {
    const PureState psi = random_schmidt_rank_state(3, 4, r, rng);
    const SchmidtDecomp sd = schmidt_decompose(psi, Bipartition::first_vs_rest(2));
    EXPECT_EQ(sd.rank, r);
    EXPECT_EQ(oracle::schmidt_rank(psi.amplitudes(), 3, 4), r);
    Vec back = Vec::Zero(12);
    for (int i = 0; i < sd.rank; ++i)
      back += sd.coefficients(i) * oracle::kron(Vec(sd.left_vectors.col(i)), Vec(sd.right_vectors.col(i)));
    EXPECT_LT((back - psi.amplitudes()).norm(), 1e-12);
  }
}

TEST(Schmidt, RankAcrossTripartiteCut) {
  // GHZ across {0}:{1,2} has Schmidt rank d.
  const PureState g = ghz(3, 3);
  EXPECT_EQ(schmidt_decompose(g, Bipartition({0}, 3)).rank, 3);
  EXPECT_EQ(schmidt_decompose(g, Bipartition({0, 2}, 3)).rank, 3);
}

TEST(Embed, DirectSumBlocks) {
  const DensityOp a = bell_density();
  const DensityOp b = DensityOp::trusted(projector(ket(2, {1, 0})), DimVec{2, 2});
  const DensityOp s = direct_sum_b(a, b);
  EXPECT_EQ(s.dims(), (DimVec{2, 4}));
  EXPECT_LT(max_abs(b_block(s, 0, 2) - a.matrix()), 1e-15);
  EXPECT_LT(max_abs(b_block(s, 2, 2) - b.matrix()), 1e-15);
  EXPECT_NEAR(s.trace(), 2.0, 1e-15);
}

TEST(Overlap, RequiresNormalized) {
  const PureState u(Vec::Ones(4), DimVec{2, 2});
  EXPECT_THROW(overlap(u, bell_density()), InputError);
  EXPECT_NEAR(overlap(max_entangled(2), bell_density()), 1.0, 1e-14);
}

TEST(Spectral, KernelAndRangeComplementary) {
  const DensityOp t = tiles_state();
  const Mat r = range_basis(t.matrix()), k = kernel_basis(t.matrix());
  EXPECT_EQ(r.cols(), 4);
  EXPECT_EQ(k.cols(), 5);
  EXPECT_LT(max_abs(r.adjoint() * k), 1e-12);
}

TEST(LocalOps, ApplyInvertibleKeepsRank) {
  Rng rng = stream_rng(7, 0);
  const PureState psi = random_schmidt_rank_state(3, 3, 2, rng);
  const PureState v = apply_local(apply_local(psi, 0, random_invertible(3, rng)), 1, random_invertible(3, rng));
  EXPECT_EQ(oracle::schmidt_rank(v.amplitudes(), 3, 3), 2);
}
