#pragma once

// Partial transposition, PPT/NPT verdicts, birank, the reduction criterion
// and the two-qubit / qubit-qutrit separability shortcut.

#include "schmidt/core.hpp"

namespace schmidt {

struct BiRank {
  int rank_rho = 0;
  int rank_gamma = 0;
  friend bool operator==(const BiRank&, const BiRank&) = default;
};

struct PptVerdict {
  bool is_ppt = false;
  double min_eig_gamma = 0.0;
  double tolerance = 0.0;  // absolute threshold actually applied (tol_psd * trace)
};

/// Transposes the indices of every subsystem listed in `parties`.
inline Mat partial_transpose(const Mat& m, const DimVec& dims, const std::vector<int>& parties) {
  const auto strides = dims.strides();
  const auto total = static_cast<Eigen::Index>(dims.total());
  if (m.rows() != total || m.cols() != total) throw InputError("partial transpose: size mismatch");
  std::vector<bool> mark(dims.size(), false);
  for (int p : parties) {
    if (p < 0 || static_cast<std::size_t>(p) >= dims.size()) throw InputError("partial transpose: party out of range");
    mark[static_cast<std::size_t>(p)] = true;
  }
  // Contribution of the transposed parties to each flat index.
  std::vector<Eigen::Index> part(static_cast<std::size_t>(total), 0);
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index s = 0;
    for (std::size_t p = 0; p < dims.size(); ++p)
      if (mark[p]) {
        const auto st = static_cast<Eigen::Index>(strides[p]);
        s += ((i / st) % dims[p]) * st;
      }
    part[static_cast<std::size_t>(i)] = s;
  }
  Mat out(total, total);
  for (Eigen::Index j = 0; j < total; ++j) {
    const Eigen::Index pj = part[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < total; ++i) {
      const Eigen::Index pi = part[static_cast<std::size_t>(i)];
      out(i - pi + pj, j - pj + pi) = m(i, j);
    }
  }
  return out;
}

inline HermitianOp partial_transpose(const HermitianOp& rho, const std::vector<int>& parties) {
  return HermitianOp(partial_transpose(rho.matrix(), rho.dims(), parties), rho.dims());
}

/// rho^Gamma for a cut: transposition of the left parties.
inline Mat gamma(const DensityOp& rho, const Bipartition& cut) {
  return partial_transpose(rho.matrix(), rho.dims(), cut.left());
}

inline PptVerdict ppt_check(const DensityOp& rho, const Bipartition& cut, const Tolerances& tol = {}) {
  const RVec ev = hermitian_eigen(gamma(rho, cut)).values;
  PptVerdict v;
  v.min_eig_gamma = ev(0);
  v.tolerance = tol.psd * rho.trace();
  v.is_ppt = v.min_eig_gamma >= -v.tolerance;
  return v;
}

inline PptVerdict ppt_check(const DensityOp& rho, const Tolerances& tol = {}) {
  return ppt_check(rho, Bipartition::first_vs_rest(rho.dims().size()), tol);
}

/// rho^Gamma of a PPT operator as a density operator.
inline DensityOp gamma_density(const DensityOp& rho, const Bipartition& cut, const Tolerances& tol = {}) {
  const PptVerdict v = ppt_check(rho, cut, tol);
  if (!v.is_ppt) throw PreconditionError("partial transpose is not positive semidefinite");
  return DensityOp::trusted(gamma(rho, cut), rho.dims());
}

inline BiRank birank(const DensityOp& rho, const Bipartition& cut, const Tolerances& tol = {}) {
  return {numerical_rank(rho.matrix(), tol.rank), numerical_rank(gamma(rho, cut), tol.rank)};
}

struct ReductionResult {
  double min_eig_a = 0.0;  // I_A x rho_B - rho
  double min_eig_b = 0.0;  // rho_A x I_B - rho
  bool violated = false;
};

inline ReductionResult reduction_check(const DensityOp& rho, const Bipartition& cut, const Tolerances& tol = {}) {
  const DensityOp b = to_bipartite(rho, cut);
  const int m = b.dims()[0], n = b.dims()[1];
  const Mat ra = partial_trace(b, {0}).matrix();
  const Mat rb = partial_trace(b, {1}).matrix();
  ReductionResult r;
  r.min_eig_a = hermitian_eigen(kron(Mat::Identity(m, m), rb) - b.matrix()).values(0);
  r.min_eig_b = hermitian_eigen(kron(ra, Mat::Identity(n, n)) - b.matrix()).values(0);
  const double thr = -tol.psd * b.trace();
  r.violated = r.min_eig_a < thr || r.min_eig_b < thr;
  return r;
}

struct LocalRanks {
  int a = 0;
  int b = 0;
};

inline LocalRanks local_ranks(const DensityOp& bip, const Tolerances& tol = {}) {
  return {numerical_rank(partial_trace(bip, {0}).matrix(), tol.rank),
          numerical_rank(partial_trace(bip, {1}).matrix(), tol.rank)};
}

/// Restricts a bipartite operator to the supports of its marginals. Returns
/// the restricted operator on rank(rho_A) x rank(rho_B) together with the
/// isometries (columns span the supports).
struct SupportRestriction {
  DensityOp restricted;
  Mat va;  // M x rA
  Mat vb;  // N x rB
};

inline SupportRestriction restrict_to_support(const DensityOp& bip, const Tolerances& tol = {}) {
  const Mat va = range_basis(partial_trace(bip, {0}).matrix(), tol.rank);
  const Mat vb = range_basis(partial_trace(bip, {1}).matrix(), tol.rank);
  const Mat k = kron(Mat(va.adjoint()), Mat(vb.adjoint()));
  return {DensityOp::trusted(k * bip.matrix() * k.adjoint(),
                             DimVec{static_cast<int>(va.cols()), static_cast<int>(vb.cols())}),
          va, vb};
}

enum class Separability { separable, entangled, undecided };

inline const char* to_string(Separability s) {
  switch (s) {
    case Separability::separable: return "separable";
    case Separability::entangled: return "entangled";
    default: return "undecided";
  }
}

/// PPT decides separability when the local ranks multiply to at most 6.
/// A local rank of one means a product with a pure factor, hence separable.
inline Separability lowdim_separability(const DensityOp& rho, const Bipartition& cut, const Tolerances& tol = {}) {
  const DensityOp b = to_bipartite(rho, cut);
  const PptVerdict v = ppt_check(b, Bipartition::first_vs_rest(2), tol);
  if (!v.is_ppt) return Separability::entangled;
  const LocalRanks r = local_ranks(b, tol);
  if (std::min(r.a, r.b) <= 1) return Separability::separable;
  if (r.a * r.b <= 6) return Separability::separable;
  return Separability::undecided;
}

struct TensorNptResult {
  bool npt = false;            // eigenvalue check on the regrouped composite
  bool predicted_npt = false;  // from the product of the two partial-transpose spectra
  double min_eig = 0.0;
};

/// NPT test for rho1 x rho2 on A1A2 : B1B2, for local dimensions in {2, 3}
/// with m + n < 6 per factor.
inline TensorNptResult tensor_npt_check(const DensityOp& rho1, const DensityOp& rho2, const Tolerances& tol = {}) {
  for (const DensityOp* r : {&rho1, &rho2}) {
    if (r->dims().size() != 2) throw InputError("tensor_npt_check: bipartite factors expected");
    const int m = r->dims()[0], n = r->dims()[1];
    if (m < 2 || m > 3 || n < 2 || n > 3 || m + n >= 6)
      throw InputError("tensor_npt_check: factor dimensions must be 2x2, 2x3 or 3x2");
  }
  const DimVec d4{rho1.dims()[0], rho1.dims()[1], rho2.dims()[0], rho2.dims()[1]};
  const Mat prod = kron(rho1.matrix(), rho2.matrix());
  // Regroup to A1 A2 B1 B2 and transpose A1 A2.
  const std::vector<int> order{0, 2, 1, 3};
  const Mat regrouped = permute_matrix(prod, d4, order);
  const DimVec rd = detail::permuted_dims(d4, order);
  const RVec ev = hermitian_eigen(partial_transpose(regrouped, rd, {0, 1})).values;
  TensorNptResult r;
  r.min_eig = ev(0);
  r.npt = ev(0) < -tol.psd * rho1.trace() * rho2.trace();

  const Bipartition ab = Bipartition::first_vs_rest(2);
  const RVec e1 = hermitian_eigen(gamma(rho1, ab)).values;
  const RVec e2 = hermitian_eigen(gamma(rho2, ab)).values;
  const double thr = tol.psd * rho1.trace() * rho2.trace();
  r.predicted_npt = std::min(e1(0) * e2(e2.size() - 1), e1(e1.size() - 1) * e2(0)) < -thr;
  return r;
}

}  // namespace schmidt
