#pragma once

// Seeded sampling helpers. Every stochastic routine takes an explicit seed;
// independent streams (restarts, samples) derive their generator from
// (seed, stream index) so results do not depend on evaluation order.

#include "schmidt/core.hpp"

#include <cstdint>
#include <random>

namespace schmidt {

using Rng = std::mt19937_64;

/// splitmix64 finalizer over (seed, stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

inline Mat ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
inline Mat haar_unitary(Eigen::Index n, Rng& rng) {
  const Mat g = ginibre(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double a = std::abs(d);
    if (a > 0.0) q.col(i) *= d / a;
  }
  return q;
}

inline Vec random_unit_vector(Eigen::Index n, Rng& rng) {
  Vec v = ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

inline PureState random_pure(const DimVec& dims, Rng& rng) {
  return PureState(random_unit_vector(static_cast<Eigen::Index>(dims.total()), rng), dims, true);
}

/// Trace-one mixture of `rank` Haar-random pure states with random weights.
inline DensityOp random_mixed(const DimVec& dims, int rank, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dims.total());
  const Mat g = ginibre(d, rank, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOp::trusted(std::move(rho), dims);
}

inline Vec random_product_vector(const DimVec& dims, Rng& rng) {
  Vec v = random_unit_vector(dims[0], rng);
  for (std::size_t p = 1; p < dims.size(); ++p) v = kron(v, random_unit_vector(dims[p], rng));
  return v;
}

/// Trace-one mixture of `terms` random fully product pure states.
inline DensityOp random_separable(const DimVec& dims, int terms, Rng& rng) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  const auto d = static_cast<Eigen::Index>(dims.total());
  Mat rho = Mat::Zero(d, d);
  for (int t = 0; t < terms; ++t) {
    const Vec v = random_product_vector(dims, rng);
    rho += w(rng) * v * v.adjoint();
  }
  rho /= rho.trace().real();
  return DensityOp::trusted(std::move(rho), dims);
}

/// Pure M x N state of exactly the given Schmidt rank, with random local bases.
inline PureState random_schmidt_rank_state(int m, int n, int rank, Rng& rng) {
  if (rank < 1 || rank > std::min(m, n)) throw InputError("requested Schmidt rank out of range");
  std::uniform_real_distribution<double> c(0.2, 1.0);
  const Mat ua = haar_unitary(m, rng), ub = haar_unitary(n, rng);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < rank; ++i) v += c(rng) * kron(Vec(ua.col(i)), Vec(ub.col(i)));
  return PureState(v / v.norm(), DimVec{m, n}, true);
}

/// First `rank` columns of a Haar unitary, as an orthogonal projector.
inline Mat haar_projector(int dim, int rank, Rng& rng) {
  const Mat u = haar_unitary(dim, rng);
  const Mat v = u.leftCols(rank);
  return v * v.adjoint();
}

/// Random invertible matrix (Ginibre shifted away from singularity).
inline Mat random_invertible(int dim, Rng& rng) {
  Mat g = ginibre(dim, dim, rng);
  g += 2.0 * std::sqrt(static_cast<double>(dim)) * Mat::Identity(dim, dim);
  return g;
}

}  // namespace schmidt
