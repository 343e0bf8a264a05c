#include "oracles.hpp"
#include "schmidt/states.hpp"

#include <gtest/gtest.h>

using namespace schmidt;

TEST(Registry, ListsNamedStatesAndValidatesParams) {
  std::set<std::string> names;
  for (const auto& e : state_registry()) names.insert(e.name);
  for (const char* n : {"tiles_state", "shifts3_state", "isotropic", "werner", "ghz", "w_state", "problems_rho",
                        "proj_example", "expansion_vi", "jsn_example", "example1_dsum", "nonconvex_mix"})
    EXPECT_TRUE(names.count(n)) << n;
  EXPECT_THROW(construct({"no_such_state", {}}), RegistryError);
  EXPECT_THROW(construct({"isotropic", {{"d", 3}}}), InputError);  // p missing
  EXPECT_THROW(construct({"isotropic", {{"d", 3}, {"p", 0.5}, {"q", 1}}}), InputError);
  EXPECT_THROW(construct({"isotropic", {{"d", 3}, {"p", 1.5}}}), InputError);
  const ConstructedState c = construct({"isotropic", {{"d", 3}, {"p", 0.9}}});
  EXPECT_EQ(c.dims(), (DimVec{3, 3}));
  EXPECT_NEAR(c.density().trace(), 1.0, 1e-14);
}

TEST(Registry, SeededRandomStatesAreReproducible) {
  const auto a = construct({"random_mixed", {{"m", 2}, {"n", 3}, {"rank", 2}, {"seed", 11}}});
  const auto b = construct({"random_mixed", {{"m", 2}, {"n", 3}, {"rank", 2}, {"seed", 11}}});
  const auto c = construct({"random_mixed", {{"m", 2}, {"n", 3}, {"rank", 2}, {"seed", 12}}});
  EXPECT_EQ(a.density().matrix(), b.density().matrix());
  EXPECT_GT(max_abs(a.density().matrix() - c.density().matrix()), 1e-3);
}

TEST(Tiles, VectorsOrthogonalProductsAndUnextendible) {
  const auto upb = tiles_upb();
  ASSERT_EQ(upb.size(), 5u);
  std::vector<Vec> flat;
  for (const auto& u : upb) {
    ASSERT_EQ(u.factors.size(), 2u);
    flat.push_back(oracle::kron(u.factors[0], u.factors[1]));
  }
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = 0; j < flat.size(); ++j)
      EXPECT_NEAR(std::abs(flat[i].dot(flat[j])), i == j ? 1.0 : 0.0, 1e-14);
  // No product vector is orthogonal to all five.
  EXPECT_GT(oracle::min_product_overlap(flat, 3, 3, 60, 99), 1e-3);
}

TEST(Tiles, ComplementSpectrum) {
  const DensityOp t = tiles_state();
  EXPECT_NEAR(t.trace(), 1.0, 1e-14);
  Eigen::SelfAdjointEigenSolver<Mat> es(t.matrix());
  int quarter = 0, zero = 0;
  for (int i = 0; i < 9; ++i) {
    const double v = es.eigenvalues()(i);
    quarter += std::abs(v - 0.25) < 1e-12;
    zero += std::abs(v) < 1e-12;
  }
  EXPECT_EQ(quarter, 4);
  EXPECT_EQ(zero, 5);
}

TEST(Shifts, VectorsOrthogonalAndComplementRankFour) {
  const auto upb = shifts_upb();
  ASSERT_EQ(upb.size(), 4u);
  for (std::size_t i = 0; i < upb.size(); ++i)
    for (std::size_t j = i + 1; j < upb.size(); ++j) EXPECT_NEAR(std::abs(upb[i].flatten().dot(upb[j].flatten())), 0.0, 1e-14);
  EXPECT_EQ(oracle::rank(shifts3_state().matrix()), 4);
}

TEST(Named, GhzAndW) {
  const PureState g = ghz(2, 3);
  EXPECT_NEAR(std::abs(g.amplitudes()(0)), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(g.amplitudes()(7)), 1 / std::sqrt(2.0), 1e-15);
  const PureState w = w_state(3);
  for (int idx : {1, 2, 4}) EXPECT_NEAR(std::abs(w.amplitudes()(idx)), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(w.norm(), 1.0, 1e-15);
}

TEST(Named, WernerAndIsotropicTraceOne) {
  for (double w : {-1.0, -0.3, 0.0, 0.7}) {
    const DensityOp r = werner(3, w);
    EXPECT_NEAR(r.trace(), 1.0, 1e-14);
    EXPECT_GE(oracle::min_eig(r.matrix()), -1e-14);
  }
  const DensityOp iso = isotropic(3, 0.9);
  EXPECT_NEAR(overlap(max_entangled(3), iso), 0.9 + 0.1 / 9, 1e-14);
}

TEST(Named, AntisymmetricProjector) {
  const DensityOp a = antisym3();
  EXPECT_EQ(oracle::rank(a.matrix()), 3);
  // SWAP acts as -1 on the range.
  EXPECT_LT(max_abs(swap_operator(3) * a.matrix() + a.matrix()), 1e-14);
}

TEST(Named, ProblemsStateBlocks) {
  const DensityOp r = problems_rho();
  EXPECT_EQ(r.dims(), (DimVec{7, 7}));
  EXPECT_EQ(oracle::rank(r.matrix()), 3);
  EXPECT_NEAR(r.trace(), 2 + 3 + 3, 1e-13);
  const Mat p = problems_projector();
  EXPECT_NEAR(p.trace().real(), 3.0, 0);
}

TEST(Named, NonconvexPairSumsToDiagonal) {
  // alpha/2 + beta/2 = 2|00><00| + 2|11><11| + |22><22| by direct expansion.
  Mat want = Mat::Zero(9, 9);
  want(0, 0) = 2;
  want(4, 4) = 2;
  want(8, 8) = 1;
  EXPECT_LT(max_abs(nonconvex_mix().matrix() - want), 1e-14);
}

TEST(Regroup, ProductVectorOrdering) {
  Rng rng = stream_rng(21, 0);
  const Vec a1 = random_unit_vector(2, rng), b1 = random_unit_vector(3, rng);
  const Vec a2 = random_unit_vector(2, rng), b2 = random_unit_vector(2, rng);
  const Vec v = regrouped_product_vector({oracle::kron(a1, b1), oracle::kron(a2, b2)}, {DimVec{2, 3}, DimVec{2, 2}});
  // A1 A2 : B1 B2 regrouping.
  const Vec want = oracle::kron(oracle::kron(a1, a2), oracle::kron(b1, b2));
  EXPECT_LT((v - want).norm(), 1e-14);
}

TEST(Regroup, ExpansionViRanks) {
  const DensityOp e = expansion_vi(2, 2);
  EXPECT_EQ(e.dims(), (DimVec{4, 4}));
  EXPECT_EQ(oracle::rank(e.matrix()), 2);
  EXPECT_EQ(oracle::rank(oracle::trace_b(e.matrix(), 4, 4)), 4);
  EXPECT_EQ(oracle::rank(oracle::trace_a(e.matrix(), 4, 4)), 4);
}

TEST(Named, Example1IsTwoOrthogonalTiles) {
  const DensityOp e = example1_dsum();
  EXPECT_EQ(e.dims(), (DimVec{6, 6}));
  EXPECT_EQ(oracle::rank(e.matrix()), 8);
  EXPECT_NEAR(e.trace(), 1.0, 1e-14);
}

TEST(Named, JsnExampleAmplitudes) {
  const PureState p = jsn_example();
  EXPECT_EQ(p.dims(), (DimVec{2, 2, 4}));
  EXPECT_NEAR(p.amplitudes().squaredNorm(), 4.0, 1e-15);
}
