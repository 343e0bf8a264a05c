#pragma once

// Multipartite pure and mixed states: joint Schmidt numbers, tensor-rank
// intervals, coarse graining, purification and the expansion rank chain.
//
// Tensor-rank upper bounds beyond the flattening product come from a
// regularized complex CP-ALS fit. The regularizer keeps factor norms bounded,
// and a fit is accepted only when both the residual and the norm ratio
// sum_j prod_p |a_pj| / |psi| are small; this rejects border-rank
// approximations such as the W state at rank 2, whose factors blow up.

#include "schmidt/certify.hpp"

#include <map>

namespace schmidt {

struct JsnTuple {
  std::vector<int> ranks;
  friend bool operator==(const JsnTuple&, const JsnTuple&) = default;
};

inline JsnTuple jsn(const PureState& psi, const Tolerances& tol = {}) {
  const std::size_t n = psi.dims().size();
  if (n < 2) throw InputError("jsn: at least two parties required");
  JsnTuple t;
  for (std::size_t l = 0; l < n; ++l)
    t.ranks.push_back(schmidt_decompose(psi, Bipartition({static_cast<int>(l)}, n), tol.rank).rank);
  return t;
}

/// Dominance order: every component of a is at most the matching one of b.
inline bool jsn_leq(const JsnTuple& a, const JsnTuple& b) {
  if (a.ranks.size() != b.ranks.size()) throw InputError("jsn_leq: party counts differ");
  for (std::size_t i = 0; i < a.ranks.size(); ++i)
    if (a.ranks[i] > b.ranks[i]) return false;
  return true;
}

/// min_l prod_{i != l} s_i.
inline int jsn_product_bound(const JsnTuple& t) {
  long best = std::numeric_limits<long>::max();
  for (std::size_t l = 0; l < t.ranks.size(); ++l) {
    long p = 1;
    for (std::size_t i = 0; i < t.ranks.size(); ++i)
      if (i != l) p *= t.ranks[i];
    best = std::min(best, p);
  }
  return static_cast<int>(best);
}

// ---------------------------------------------------------------------------
// CP decompositions

struct CpDecomposition {
  std::vector<Mat> factors;  // factors[p] is d_p x r; term j is the product of column j
  int rank() const { return factors.empty() ? 0 : static_cast<int>(factors[0].cols()); }

  Vec reconstruct() const {
    Vec out;
    for (int j = 0; j < rank(); ++j) {
      Vec t = factors[0].col(j);
      for (std::size_t p = 1; p < factors.size(); ++p) t = kron(t, Vec(factors[p].col(j)));
      out = j == 0 ? t : Vec(out + t);
    }
    return out;
  }

  double norm_sum() const {
    double s = 0.0;
    for (int j = 0; j < rank(); ++j) {
      double prod = 1.0;
      for (const auto& f : factors) prod *= f.col(j).norm();
      s += prod;
    }
    return s;
  }
};

struct CpOptions {
  int restarts = 8;
  int iters = 3000;
  std::uint64_t seed = 0;
  double tol_cp = 1e-8;         // relative residual
  double max_norm_ratio = 1e2;  // border-rank guard
};

struct CpFit {
  bool accepted = false;
  double residual = 1.0;  // relative
  double norm_ratio = 0.0;
  CpDecomposition decomposition;
};

namespace detail {

/// Khatri-Rao rows over all parties except p, in big-endian order of the
/// remaining indices.
inline Mat khatri_rao_except(const std::vector<Mat>& f, std::size_t p) {
  const Eigen::Index r = f[0].cols();
  Mat k = Mat::Ones(1, r);
  for (std::size_t q = 0; q < f.size(); ++q) {
    if (q == p) continue;
    Mat nk(k.rows() * f[q].rows(), r);
    for (Eigen::Index a = 0; a < k.rows(); ++a)
      for (Eigen::Index b = 0; b < f[q].rows(); ++b) nk.row(a * f[q].rows() + b) = k.row(a).cwiseProduct(f[q].row(b));
    k = std::move(nk);
  }
  return k;
}

/// Mode-p unfolding: rows indexed by party p, columns by the others in order.
inline Mat unfold(const Vec& psi, const DimVec& dims, std::size_t p) {
  std::vector<int> order{static_cast<int>(p)};
  for (std::size_t q = 0; q < dims.size(); ++q)
    if (q != p) order.push_back(static_cast<int>(q));
  const PureState moved = permute_systems(PureState(psi, dims), order);
  return reshape(moved.amplitudes(), dims[p], static_cast<int>(dims.total() / static_cast<std::size_t>(dims[p])));
}

}  // namespace detail

/// Regularized ALS fit of psi with r product terms.
inline CpFit cp_als(const PureState& psi, int r, const CpOptions& opt = {}) {
  const DimVec& dims = psi.dims();
  const std::size_t n = dims.size();
  const Vec& v = psi.amplitudes();
  const double nv = v.norm();
  std::vector<Mat> unf;
  for (std::size_t p = 0; p < n; ++p) unf.push_back(detail::unfold(v, dims, p));
  CpFit best;
  for (int s = 0; s < opt.restarts; ++s) {
    Rng rng = stream_rng(opt.seed, static_cast<std::uint64_t>(s));
    std::vector<Mat> f;
    const double scale = std::pow(nv / r, 1.0 / static_cast<double>(n));
    for (std::size_t p = 0; p < n; ++p) f.push_back(ginibre(dims[p], r, rng) * (scale / std::sqrt(2.0 * dims[p])));
    double lambda = 1e-6 * nv * nv;
    double res = 1.0;
    for (int it = 0; it < opt.iters; ++it) {
      if (it >= 200 && it % 50 == 0) lambda *= 0.1;
      for (std::size_t p = 0; p < n; ++p) {
        const Mat k = detail::khatri_rao_except(f, p);
        Mat g = k.transpose() * k.conjugate();
        g += lambda * Mat::Identity(r, r);
        // Solve f_p g = unf_p conj(k)  =>  g^T f_p^T = (unf_p conj(k))^T
        const Mat rhs = unf[p] * k.conjugate();
        f[p] = g.transpose().ldlt().solve(rhs.transpose()).transpose();
      }
      if (it % 10 == 9 || it == opt.iters - 1) {
        CpDecomposition d{f};
        res = (d.reconstruct() - v).norm() / nv;
        if (res < opt.tol_cp * 1e-2) break;
      }
    }
    CpDecomposition d{f};
    CpFit fit;
    fit.residual = (d.reconstruct() - v).norm() / nv;
    fit.norm_ratio = d.norm_sum() / nv;
    fit.accepted = fit.residual < opt.tol_cp && fit.norm_ratio <= opt.max_norm_ratio;
    fit.decomposition = std::move(d);
    if (fit.accepted) return fit;
    if (!best.accepted && fit.residual < best.residual) best = std::move(fit);
  }
  return best;
}

/// Cayley hyperdeterminant of a 2 x 2 x 2 tensor. A tensor with all three
/// flattening ranks equal to 2 has rank 2 when it is nonzero and rank 3 when
/// it vanishes.
inline cplx hyperdeterminant_222(const Vec& a) {
  if (a.size() != 8) throw InputError("hyperdeterminant: 2x2x2 tensor expected");
  const cplx a000 = a(0), a001 = a(1), a010 = a(2), a011 = a(3), a100 = a(4), a101 = a(5), a110 = a(6), a111 = a(7);
  return a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 + a010 * a010 * a101 * a101 +
         a100 * a100 * a011 * a011 -
         2.0 * (a000 * a001 * a110 * a111 + a000 * a010 * a101 * a111 + a000 * a100 * a011 * a111 +
                a001 * a010 * a101 * a110 + a001 * a100 * a011 * a110 + a010 * a100 * a011 * a101) +
         4.0 * (a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111);
}

struct TensorRankBound {
  int lo = 1;
  int hi = 1;
  std::string lo_source = "flattening";  // flattening | hyperdeterminant
  std::string hi_source = "jsn-product";  // jsn-product | cp-decomposition | schmidt
  JsnTuple jsn;
  std::optional<CpDecomposition> certificate;
  std::map<int, double> rejected_residuals;  // r -> best residual of a rejected fit
};

inline TensorRankBound tensor_rank_bounds(const PureState& psi, const CpOptions& opt = {}, const Tolerances& tol = {}) {
  TensorRankBound b;
  b.jsn = jsn(psi, tol);
  b.lo = *std::max_element(b.jsn.ranks.begin(), b.jsn.ranks.end());
  if (psi.dims().size() == 2) {
    b.hi = b.lo;
    b.hi_source = "schmidt";
    return b;
  }
  b.hi = jsn_product_bound(b.jsn);
  if (psi.dims() == DimVec{2, 2, 2} && b.jsn.ranks == std::vector<int>{2, 2, 2}) {
    const double n2 = psi.amplitudes().squaredNorm();
    if (std::abs(hyperdeterminant_222(psi.amplitudes())) <= 1e-12 * n2 * n2) {
      b.lo = 3;
      b.lo_source = "hyperdeterminant";
    }
  }
  for (int r = b.hi - 1; r >= b.lo; --r) {
    CpFit fit = cp_als(psi, r, opt);
    if (!fit.accepted) {
      b.rejected_residuals[r] = fit.residual;
      break;
    }
    // Independent reconstruction check before the bound is taken.
    const double res = (fit.decomposition.reconstruct() - psi.amplitudes()).norm() / psi.amplitudes().norm();
    if (res >= opt.tol_cp) break;
    b.hi = r;
    b.hi_source = "cp-decomposition";
    b.certificate = std::move(fit.decomposition);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Coarse graining, purification, expansions

namespace detail {

inline std::vector<int> partition_order(const std::vector<std::vector<int>>& groups, std::size_t n,
                                        std::vector<std::size_t>& sizes) {
  std::vector<bool> seen(n, false);
  std::vector<int> order;
  for (const auto& g : groups) {
    if (g.empty()) throw InputError("coarse_grain: empty group");
    for (int i : g) {
      if (i < 0 || static_cast<std::size_t>(i) >= n || seen[static_cast<std::size_t>(i)])
        throw InputError("coarse_grain: groups must be disjoint indices in range");
      seen[static_cast<std::size_t>(i)] = true;
      order.push_back(i);
    }
    sizes.push_back(g.size());
  }
  if (order.size() != n) throw InputError("coarse_grain: groups must cover every party");
  return order;
}

}  // namespace detail

inline PureState coarse_grain(const PureState& s, const std::vector<std::vector<int>>& groups) {
  std::vector<std::size_t> sizes;
  const auto order = detail::partition_order(groups, s.dims().size(), sizes);
  const PureState p = permute_systems(s, order);
  return PureState(p.amplitudes(), merged_dims(p.dims(), sizes), p.is_normalized());
}

inline DensityOp coarse_grain(const DensityOp& s, const std::vector<std::vector<int>>& groups) {
  std::vector<std::size_t> sizes;
  const auto order = detail::partition_order(groups, s.dims().size(), sizes);
  const DensityOp p = permute_systems(s, order);
  return DensityOp::trusted(p.matrix(), merged_dims(p.dims(), sizes));
}

/// |psi>_ABC = sum_i sqrt(p_i) |a_i>|i>, with C of dimension rank(rho).
inline PureState purify(const DensityOp& rho, const Tolerances& tol = {}) {
  const Mat a = spectral_factor(rho.matrix(), tol.rank);
  const int r = static_cast<int>(a.cols());
  return PureState(flatten(a), concat(rho.dims(), DimVec{r}));
}

/// sum_j w_j |b_j><b_j| (x) |j><j|: an expansion whose AB marginal is the target.
inline DensityOp expansion_from_decomposition(const Decomposition& d) {
  if (d.states.empty()) throw InputError("expansion_from_decomposition: empty decomposition");
  const int m = static_cast<int>(d.size());
  const DimVec dims = concat(d.states[0].dims(), DimVec{m});
  check_capacity(dims.total());
  const auto dd = static_cast<Eigen::Index>(dims.total());
  Mat out = Mat::Zero(dd, dd);
  for (int j = 0; j < m; ++j) {
    const Vec v = kron(d.states[static_cast<std::size_t>(j)].amplitudes(), basis_vector(m, j));
    out += d.weights[static_cast<std::size_t>(j)] * v * v.adjoint();
  }
  return DensityOp::trusted(std::move(out), dims);
}

/// Interval [lo, hi]; comparisons are sound-violation tests.
struct Interval {
  int lo = 0;
  int hi = 0;
  bool exact() const { return lo == hi; }
};

struct ExpansionChain {
  int rank_ab = 0, rank_a = 0, rank_b = 0;
  SnBound sn;
  TensorRankBound purification_rank;
  Interval first;   // min{sn * rank_ab, rank_a * rank_b}
  int max_rank = 0;  // max{rank_ab, rank_a, rank_b}
  bool chain_ok = true;
  // Equalities: set only when both sides are exactly known.
  std::optional<bool> eq_first, eq_second, eq_last;
  bool is_ppt = false;
  std::optional<bool> iv_ok;  // PPT: first two equalities <=> rank_a rank_b == rank_ab or sn == 1
  std::optional<bool> v_ok;   // PPT: all three <=> rank_a == rank_b == 1
};

inline ExpansionChain expansion_chain_check(const DensityOp& rho, const Budget& budget = {}, const CpOptions& cp = {},
                                            const std::vector<ProductVector>& hints = {}) {
  if (rho.dims().size() != 2) throw InputError("expansion_chain_check: bipartite operator expected");
  const Tolerances& tol = budget.tol;
  ExpansionChain c;
  c.rank_ab = numerical_rank(rho.matrix(), tol.rank);
  const LocalRanks lr = local_ranks(rho, tol);
  c.rank_a = lr.a;
  c.rank_b = lr.b;
  c.sn = sn_bounds(rho, Bipartition::first_vs_rest(2), budget, hints);
  c.purification_rank = tensor_rank_bounds(purify(rho, tol), cp, tol);
  const int ab = c.rank_a * c.rank_b;
  c.first = {std::min(c.sn.lo * c.rank_ab, ab), std::min(c.sn.hi * c.rank_ab, ab)};
  c.max_rank = std::max({c.rank_ab, c.rank_a, c.rank_b});
  const auto& t = c.purification_rank;
  c.chain_ok = !(c.first.hi < t.lo) && !(t.hi < c.max_rank) && !(c.max_rank < c.sn.lo);
  if (c.first.exact() && t.lo == t.hi) c.eq_first = c.first.lo == t.lo;
  if (t.lo == t.hi) c.eq_second = t.lo == c.max_rank;
  if (c.sn.exact()) c.eq_last = c.max_rank == c.sn.lo;
  c.is_ppt = ppt_check(rho, tol).is_ppt;
  if (c.is_ppt && c.eq_first && c.eq_second && c.sn.exact()) {
    const bool lhs = *c.eq_first && *c.eq_second;
    const bool rhs = ab == c.rank_ab || c.sn.lo == 1;
    c.iv_ok = lhs == rhs;
  }
  if (c.is_ppt && c.eq_first && c.eq_second && c.eq_last)
    c.v_ok = (*c.eq_first && *c.eq_second && *c.eq_last) == (c.rank_a == 1 && c.rank_b == 1);
  return c;
}

// ---------------------------------------------------------------------------
// Tensor products of completely entangled ranges

struct ProductCesBound {
  int factors = 0;
  int lower = 1;                 // sound lower bound n + 1
  std::optional<int> claimed;    // exact value asserted in the literature when applicable
};

/// Each factor must carry a certified 1-CES range; the regrouped product then
/// has Schmidt number at least n + 1.
inline ProductCesBound product_ces_lower_bound(const std::vector<DensityOp>& factors,
                                               const std::vector<CesCertificate>& certificates,
                                               const Tolerances& tol = {}) {
  if (factors.empty() || factors.size() != certificates.size())
    throw PreconditionError("product_ces_lower_bound: one certificate per factor required");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!certificates[i].certified) throw PreconditionError("product_ces_lower_bound: factor lacks a CES certificate");
    if (!members_in_kernel(factors[i].matrix(), certificates[i].members) ||
        product_extension(certificates[i].members, factors[i].dims()).extendible)
      throw PreconditionError("product_ces_lower_bound: certificate does not re-verify");
  }
  ProductCesBound b;
  b.factors = static_cast<int>(factors.size());
  b.lower = b.factors + 1;
  if (factors.size() == 2) {
    bool qutrit4 = true;
    for (const auto& f : factors)
      qutrit4 = qutrit4 && f.dims() == DimVec{3, 3} && numerical_rank(f.matrix(), tol.rank) == 4 && ppt_check(f, tol).is_ppt;
    if (qutrit4) b.claimed = 4;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Multipartite PPT

struct CutVerdict {
  Bipartition cut;
  PptVerdict verdict;
};

/// All bipartitions with party 0 on the left.
inline std::vector<Bipartition> all_bipartitions(std::size_t n) {
  std::vector<Bipartition> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << (n - 1)); ++mask) {
    // party 0 always left; mask selects additional right parties among 1..n-1
    std::vector<int> left{0};
    for (std::size_t q = 1; q < n; ++q)
      if (!(mask & (std::size_t{1} << (q - 1)))) left.push_back(static_cast<int>(q));
    out.emplace_back(left, n);
  }
  return out;
}

struct MultipartitePpt {
  std::vector<CutVerdict> cuts;
  bool all_ppt = true;
};

inline MultipartitePpt multipartite_ppt_check(const DensityOp& rho, const Tolerances& tol = {}) {
  const std::size_t n = rho.dims().size();
  if (n < 2) throw InputError("multipartite_ppt_check: at least two parties required");
  MultipartitePpt r;
  for (const auto& cut : all_bipartitions(n)) {
    r.cuts.push_back({cut, ppt_check(rho, cut, tol)});
    r.all_ppt = r.all_ppt && r.cuts.back().verdict.is_ppt;
  }
  return r;
}

/// Multipartite Schmidt number interval for a mixed state: lo from a
/// fully-product-free range or any cut's certified lo; hi from the
/// tensor-rank bounds of the eigenvectors.
struct MultiSnBound {
  int lo = 1;
  int hi = 1;
  std::string lo_certificate = "trivial";
  std::vector<SnBound> cuts;
};

inline MultiSnBound multipartite_sn_bounds(const DensityOp& rho, const Budget& budget = {},
                                           const std::vector<ProductVector>& hints = {}, const CpOptions& cp = {}) {
  MultiSnBound b;
  for (const auto& cut : all_bipartitions(rho.dims().size())) {
    b.cuts.push_back(sn_bounds(rho, cut, budget, hints));
    if (b.cuts.back().lo > b.lo) {
      b.lo = b.cuts.back().lo;
      b.lo_certificate = "cut";
    }
  }
  if (b.lo < 2 && !hints.empty() && ces_certify(rho, hints).certified) {
    b.lo = 2;
    b.lo_certificate = "ces";
  }
  const Mat a = spectral_factor(rho.matrix(), budget.tol.rank);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    b.hi = std::max(b.hi, tensor_rank_bounds(PureState(a.col(j), rho.dims()), cp, budget.tol).hi);
  return b;
}

}  // namespace schmidt
