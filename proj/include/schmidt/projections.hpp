#pragma once

// Local projections and the projection bounds on the Schmidt number:
//   max{1, sn(rho) - k} <= sn(sigma) <= min{sn(rho), M - k}
// for sigma = (P x I) rho (P x I)^dagger with P of rank M - k. Bounds are
// checked under interval semantics: a check fails only when no values inside
// the certified intervals satisfy it.

#include "schmidt/certify.hpp"

#include <set>

namespace schmidt {

enum class Side { A = 0, B = 1 };

inline const char* to_string(Side s) { return s == Side::A ? "A" : "B"; }

class LocalProjector {
 public:
  explicit LocalProjector(Mat matrix, const Tolerances& tol = {}) : m_(std::move(matrix)) {
    if (m_.cols() < 1 || m_.rows() < 1) throw InputError("projector: empty matrix");
    if (m_.rows() != m_.cols()) throw InputError("projector: matrix is not square");
    if (!m_.allFinite()) throw InputError("projector: non-finite entries");
    if (max_abs(m_ - m_.adjoint()) > tol.herm) throw InputError("projector: matrix is not Hermitian");
    if (max_abs(m_ * m_ - m_) > tol.recon) throw InputError("projector: matrix is not idempotent");
    rank_ = numerical_rank(m_, tol.rank);
    if (rank_ == 0) throw InputError("projector: zero operator");
    kernel_dim_ = static_cast<int>(m_.cols()) - rank_;
  }

  /// Orthogonal projector onto the span of the given columns.
  static LocalProjector onto(const Mat& columns) {
    const Mat q = Eigen::HouseholderQR<Mat>(columns).householderQ() * Mat::Identity(columns.rows(), columns.cols());
    return LocalProjector(q * q.adjoint());
  }

  /// Coordinate projector onto the listed basis indices.
  static LocalProjector coordinate(int dim, const std::vector<int>& keep) {
    Mat p = Mat::Zero(dim, dim);
    for (int i : keep) p(i, i) = 1.0;
    return LocalProjector(p);
  }

  static LocalProjector haar(int dim, int rank, Rng& rng) { return LocalProjector(haar_projector(dim, rank, rng)); }

  const Mat& matrix() const { return m_; }
  int rank() const { return rank_; }
  int kernel_dim() const { return kernel_dim_; }
  int dim() const { return static_cast<int>(m_.cols()); }

 private:
  Mat m_;
  int rank_ = 0;
  int kernel_dim_ = 0;
};

struct Projected {
  Mat matrix;
  DimVec dims;
  bool degenerate = false;  // P annihilates the support of rho

  DensityOp state() const {
    if (degenerate) throw PreconditionError("projected state is zero");
    return DensityOp::trusted(matrix, dims);
  }
};

inline Projected apply_local(const DensityOp& rho, const LocalProjector& p, Side side, const Tolerances& tol = {}) {
  if (rho.dims().size() != 2) throw InputError("apply_local: bipartite operator expected");
  const std::size_t party = side == Side::A ? 0 : 1;
  if (p.dim() != rho.dims()[party]) throw InputError("apply_local: projector dimension does not match side");
  auto [m, d] = conjugate_local(rho.matrix(), rho.dims(), party, p.matrix());
  Projected out{std::move(m), std::move(d), false};
  out.degenerate = !(out.matrix.trace().real() > tol.psd * rho.trace());
  return out;
}

struct ProjBoundReport {
  int k = 0;
  int m = 0;  // dimension of the projected side
  SnBound sn_rho;
  std::optional<SnBound> sn_sigma;  // empty when sigma = 0
  bool degenerate = false;
  bool lower_ok = true;
  bool upper_ok = true;
  std::optional<bool> exact_full_rank;  // pure rho of full Schmidt rank M: sn(sigma) == M - k
};

/// Interval checks of the projection sandwich.
inline bool proj_lower_ok(const SnBound& rho, const SnBound& sigma, int k) {
  return std::max(1, rho.lo - k) <= sigma.hi;
}

inline bool proj_upper_ok(const SnBound& rho, const SnBound& sigma, int m, int k) {
  return sigma.lo <= std::min(rho.hi, m - k);
}

inline ProjBoundReport check_proj_bounds(const DensityOp& rho, const SnBound& rho_bound, const LocalProjector& p,
                                         Side side, const Budget& budget = {}) {
  ProjBoundReport r;
  r.k = p.kernel_dim();
  r.m = p.dim();
  r.sn_rho = rho_bound;
  const Projected s = apply_local(rho, p, side, budget.tol);
  if (s.degenerate) {
    r.degenerate = true;
    return r;
  }
  r.sn_sigma = sn_bounds(s.state(), Bipartition::first_vs_rest(2), budget);
  r.lower_ok = proj_lower_ok(r.sn_rho, *r.sn_sigma, r.k);
  r.upper_ok = proj_upper_ok(r.sn_rho, *r.sn_sigma, r.m, r.k);
  if (rho_bound.exact() && rho_bound.hi_certificate == "pure-rank" && rho_bound.hi == r.m)
    r.exact_full_rank = r.sn_sigma->exact() && r.sn_sigma->lo == r.m - r.k;
  return r;
}

inline ProjBoundReport check_proj_bounds(const DensityOp& rho, const LocalProjector& p, Side side,
                                         const Budget& budget = {}) {
  return check_proj_bounds(rho, sn_bounds(rho, Bipartition::first_vs_rest(2), budget), p, side, budget);
}

// ---------------------------------------------------------------------------
// Sampled extremes over projectors with a k-dimensional kernel

struct SnMinMax {
  int k = 0;
  int samples = 0;
  SnBound max_est;  // lo: achieved by some sampled projector; hi: min{sn(rho).hi, M - k}
  SnBound min_est;  // lo: max{1, sn(rho).lo - k}; hi: achieved by some sampled projector
  int degenerate = 0;
  bool sandwich_ok = true;  // max{1, sn - k} <= min_est and max_est <= min{sn, M - k}, as intervals
};

namespace detail {

inline std::vector<std::vector<int>> subsets(int n, int size, std::size_t limit) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (out.size() >= limit) return;
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Haar samples followed by coordinate projectors (all of them when there
/// are at most `coord_limit`).
inline std::vector<LocalProjector> sample_projectors(int dim, int k, int samples, std::uint64_t seed,
                                                     std::size_t coord_limit = 20) {
  std::vector<LocalProjector> out;
  for (int s = 0; s < samples; ++s) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(s));
    out.push_back(LocalProjector::haar(dim, dim - k, rng));
  }
  for (const auto& keep : subsets(dim, dim - k, coord_limit)) out.push_back(LocalProjector::coordinate(dim, keep));
  return out;
}

}  // namespace detail

inline SnMinMax snminmax_estimate(const DensityOp& rho, const SnBound& rho_bound, int k, int samples,
                                  const Budget& budget = {}, Side side = Side::A) {
  if (rho.dims().size() != 2) throw InputError("snminmax_estimate: bipartite operator expected");
  const int m = rho.dims()[side == Side::A ? 0 : 1];
  if (k < 1 || k > m - 1) throw InputError("snminmax_estimate: k must lie in [1, M-1]");
  SnMinMax r;
  r.k = k;
  r.max_est.lo = 1;
  r.max_est.hi = std::min(rho_bound.hi, m - k);
  r.max_est.lo_certificate = "construction";
  r.max_est.hi_certificate = "projection-bound";
  r.min_est.lo = std::max(1, rho_bound.lo - k);
  r.min_est.hi = m - k;
  r.min_est.lo_certificate = "projection-bound";
  r.min_est.hi_certificate = "construction";
  for (const auto& p : detail::sample_projectors(m, k, samples, budget.seed)) {
    const Projected s = apply_local(rho, p, side, budget.tol);
    if (s.degenerate) {
      ++r.degenerate;
      continue;
    }
    ++r.samples;
    const SnBound b = sn_bounds(s.state(), Bipartition::first_vs_rest(2), budget);
    r.max_est.lo = std::max(r.max_est.lo, b.lo);
    r.min_est.hi = std::min(r.min_est.hi, b.hi);
  }
  r.sandwich_ok = r.max_est.lo <= r.max_est.hi && r.min_est.lo <= r.min_est.hi;
  r.max_est.exhausted = !r.max_est.exact();
  r.min_est.exhausted = !r.min_est.exact();
  return r;
}

inline SnMinMax snminmax_estimate(const DensityOp& rho, int k, int samples, const Budget& budget = {},
                                  Side side = Side::A) {
  return snminmax_estimate(rho, sn_bounds(rho, Bipartition::first_vs_rest(2), budget), k, samples, budget, side);
}

// ---------------------------------------------------------------------------
// Rank sweep

struct SweepEntry {
  Side side = Side::A;
  int k = 0;
  std::vector<std::pair<int, int>> intervals;  // distinct achieved [lo, hi]
  std::set<int> exact;                         // values certified exactly
};

struct RankSweep {
  SnBound sn_rho;
  std::vector<SweepEntry> entries;
  std::set<int> achieved_a;  // union over k of exactly certified values, side A
  std::set<int> achieved_b;
  bool consistent = true;    // exact values stay within [1, sn_rho.hi] and both sides cover {1..sn_rho.lo}
};

inline RankSweep rank_sweep(const DensityOp& rho, int samples, const Budget& budget = {}) {
  if (rho.dims().size() != 2) throw InputError("rank_sweep: bipartite operator expected");
  RankSweep r;
  r.sn_rho = sn_bounds(rho, Bipartition::first_vs_rest(2), budget);
  for (Side side : {Side::A, Side::B}) {
    const int m = rho.dims()[side == Side::A ? 0 : 1];
    for (int k = 0; k < m; ++k) {
      SweepEntry e;
      e.side = side;
      e.k = k;
      std::set<std::pair<int, int>> seen;
      const auto projs = k == 0 ? std::vector<LocalProjector>{LocalProjector(Mat::Identity(m, m))}
                                : detail::sample_projectors(m, k, samples, derive_seed(budget.seed, static_cast<std::uint64_t>(k)));
      for (const auto& p : projs) {
        const Projected s = apply_local(rho, p, side, budget.tol);
        if (s.degenerate) continue;
        const SnBound b = k == 0 ? r.sn_rho : sn_bounds(s.state(), Bipartition::first_vs_rest(2), budget);
        seen.insert({b.lo, b.hi});
        if (b.exact()) e.exact.insert(b.lo);
      }
      e.intervals.assign(seen.begin(), seen.end());
      (side == Side::A ? r.achieved_a : r.achieved_b).insert(e.exact.begin(), e.exact.end());
      r.entries.push_back(std::move(e));
    }
  }
  for (const auto* set : {&r.achieved_a, &r.achieved_b}) {
    for (int v : *set)
      if (v < 1 || v > r.sn_rho.hi) r.consistent = false;
    for (int v = 1; v <= r.sn_rho.lo; ++v)
      if (!set->count(v)) r.consistent = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Two copies

/// Bounds for rho (x) rho' regrouped, from bounds of the factors:
/// hi multiplies (product decompositions), lo is at least the larger lo
/// (local projection back onto one factor cannot raise the Schmidt number).
inline SnBound product_bound(const SnBound& a, const SnBound& b, const DimVec& da, const DimVec& db) {
  SnBound out;
  out.lo = std::max(a.lo, b.lo);
  out.lo_certificate = "product";
  out.hi = std::min({a.hi * b.hi, da[0] * db[0], da[1] * db[1]});
  out.hi_certificate = "product";
  if (a.hi_certificate == "pure-rank" && b.hi_certificate == "pure-rank") {
    out.lo = out.hi = a.hi * b.hi;
    out.lo_certificate = out.hi_certificate = "pure-rank";
  }
  out.exhausted = out.lo < out.hi;
  return out;
}

struct TwoCopyReport {
  int k = 0;
  int m = 0;
  SnBound sn_rho;
  SnBound sn_sigma;
  SnBound sn_rho2;
  SnBound sn_sigma2;
  bool degenerate = false;
  bool two_tensors_ok = true;   // sn(sigma^2) <= min{sn(rho^2), (M-k)^2}
  bool two_tensors2_ok = true;  // sn(rho^2) <= (sn(sigma) + k)^2
};

inline TwoCopyReport two_copy_bound_check(const DensityOp& rho, const LocalProjector& p, Side side,
                                          const Budget& budget = {}) {
  check_capacity(rho.dims().total() * rho.dims().total());
  TwoCopyReport r;
  r.k = p.kernel_dim();
  r.m = p.dim();
  r.sn_rho = sn_bounds(rho, Bipartition::first_vs_rest(2), budget);
  r.sn_rho2 = product_bound(r.sn_rho, r.sn_rho, rho.dims(), rho.dims());
  const Projected s = apply_local(rho, p, side, budget.tol);
  if (s.degenerate) {
    r.degenerate = true;
    return r;
  }
  const DensityOp sigma = s.state();
  r.sn_sigma = sn_bounds(sigma, Bipartition::first_vs_rest(2), budget);
  r.sn_sigma2 = product_bound(r.sn_sigma, r.sn_sigma, sigma.dims(), sigma.dims());
  const int mk = r.m - r.k;
  r.two_tensors_ok = r.sn_sigma2.lo <= std::min(r.sn_rho2.hi, mk * mk);
  r.two_tensors2_ok = r.sn_rho2.lo <= (r.sn_sigma.hi + r.k) * (r.sn_sigma.hi + r.k);
  return r;
}

}  // namespace schmidt
