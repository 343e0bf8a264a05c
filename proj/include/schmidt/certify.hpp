#pragma once

// Certified Schmidt-number intervals.
//
// Upper bounds come from explicit decompositions whose members all have
// Schmidt rank <= k; the search parameterizes decompositions by a
// row-orthonormal mixing matrix V acting on the spectral factor of rho and
// minimizes the squared tail singular values by majorize-minimize steps
// (truncate every member, then V <- polar(A^dagger T)). Lower bounds come
// only from sound certificates: partial transposition and reduction
// witnesses, overlap with maximally entangled states, and completely
// entangled ranges verified through unextendible product sets in the kernel.
// A failed search is never turned into a lower bound.

#include "schmidt/core.hpp"
#include "schmidt/ppt.hpp"
#include "schmidt/random.hpp"
#include "schmidt/states.hpp"
#include "schmidt/witness.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>

namespace schmidt {

struct Budget {
  int restarts = 32;
  int iters = 500;
  std::uint64_t seed = 0;
  bool deep = false;
  Tolerances tol;
  double tol_cert = 1e-12;   // penalty threshold relative to trace^2
  int ces_restarts = 40;     // kernel product-vector discovery
  int overlap_restarts = 32;
};

// ---------------------------------------------------------------------------
// Decompositions

struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> states;  // normalized members on the bipartite dims
  double target_residual = 0.0;   // ||sum w |b><b| - rho||_F / tr rho
  int max_schmidt_rank = 0;

  std::size_t size() const { return states.size(); }

  Mat reconstruct() const {
    const auto d = states.at(0).amplitudes().size();
    Mat out = Mat::Zero(d, d);
    for (std::size_t j = 0; j < states.size(); ++j)
      out += weights[j] * states[j].amplitudes() * states[j].amplitudes().adjoint();
    return out;
  }
};

/// Recomputes residual and member ranks from scratch.
inline bool verify_decomposition(const DensityOp& bip, const Decomposition& d, int k, const Tolerances& tol = {}) {
  if (d.states.empty() || bip.dims().size() != 2) return false;
  const int m = bip.dims()[0], n = bip.dims()[1];
  for (std::size_t j = 0; j < d.states.size(); ++j) {
    if (!(d.weights[j] > 0.0)) return false;
    if (!(d.states[j].dims() == bip.dims())) return false;
    if (schmidt_rank(d.states[j].amplitudes(), m, n, tol.rank) > k) return false;
  }
  return frobenius(d.reconstruct() - bip.matrix()) <= tol.recon * bip.trace();
}

struct SearchOptions {
  int m = 0;  // columns; 0 selects rank * (k + 1)
  bool grow = true;
  int restarts = 16;
  int iters = 500;
  std::uint64_t seed = 0;
  Tolerances tol;
  double tol_cert = 1e-12;
};

struct DecompositionSearchResult {
  bool found = false;
  std::optional<Decomposition> decomposition;
  double best_penalty = std::numeric_limits<double>::infinity();
  int columns = 0;
  int restarts_run = 0;
};

namespace detail {

struct TailResult {
  double tail = 0.0;  // sum of squared singular values beyond k
  Vec truncated;      // flattened best rank-k approximation
};

inline TailResult truncate_rank(const Vec& v, int m, int n, int k) {
  Eigen::JacobiSVD<Mat> svd(reshape(v, m, n), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  TailResult r;
  const int kk = std::min<int>(k, static_cast<int>(s.size()));
  for (Eigen::Index i = kk; i < s.size(); ++i) r.tail += s(i) * s(i);
  const Mat t = svd.matrixU().leftCols(kk) * s.head(kk).asDiagonal() * svd.matrixV().leftCols(kk).adjoint();
  r.truncated = flatten(t);
  return r;
}

/// One majorize-minimize run from a given V. Returns final penalty and the
/// truncated members (columns of T).
struct MmRun {
  double penalty = 0.0;
  Mat t;
  bool success = false;
};

inline MmRun mm_decompose(const Mat& a, Mat v, int m, int n, int k, int iters, double tol_cert) {
  const Eigen::Index cols = v.cols();
  MmRun run;
  Mat t(a.rows(), cols);
  std::vector<double> history;
  auto evaluate = [&](const Mat& vv) {
    const Mat b = a * vv;
    double f = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const TailResult tr = truncate_rank(b.col(j), m, n, k);
      f += tr.tail;
      t.col(j) = tr.truncated;
    }
    return f;
  };
  double f = evaluate(v);
  int it = 0;
  for (; it < iters && f >= tol_cert; ++it) {
    v = polar_factor(a.adjoint() * t);
    f = evaluate(v);
    history.push_back(f);
    const std::size_t h = history.size();
    if (h > 60 && history[h - 51] - f <= 1e-8 * history[h - 51]) break;  // plateau
  }
  if (f < tol_cert) {
    run.success = true;
    // Polish far below the acceptance threshold so the truncated members
    // reconstruct rho to working precision.
    const int polish = std::max(20 * iters, 2000);
    history.clear();
    for (int p = 0; p < polish && f > 1e-26; ++p) {
      v = polar_factor(a.adjoint() * t);
      f = evaluate(v);
      history.push_back(f);
      const std::size_t h = history.size();
      if (h > 60 && history[h - 51] - f <= 1e-3 * history[h - 51]) break;
    }
  }
  run.penalty = f;
  run.t = t;
  return run;
}

inline Mat initial_mixing(int r, int cols, int restart, std::uint64_t seed) {
  if (restart == 0) {
    Mat v = Mat::Zero(r, cols);
    for (int i = 0; i < r; ++i) v(i, i) = 1.0;
    return v;
  }
  Rng rng = stream_rng(seed, static_cast<std::uint64_t>(restart));
  return haar_unitary(cols, rng).topRows(r);
}

}  // namespace detail

/// Searches for a decomposition of a bipartite rho whose members all have
/// Schmidt rank <= k. A returned decomposition has been re-verified.
inline DecompositionSearchResult decomposition_search(const DensityOp& rho, int k, const SearchOptions& opt = {}) {
  if (rho.dims().size() != 2) throw InputError("decomposition_search: bipartite operator expected");
  const int m = rho.dims()[0], n = rho.dims()[1];
  if (k < 1 || k > std::min(m, n)) throw InputError("decomposition_search: k out of range");
  const double tr = rho.trace();
  const Mat a = spectral_factor(rho.matrix() / tr, opt.tol.rank);
  const int r = static_cast<int>(a.cols());
  int cols = opt.m > 0 ? opt.m : r * (k + 1);
  if (cols < r) throw InputError("decomposition_search: need at least rank(rho) columns");
  const int max_cols = opt.grow ? std::max(8 * r, cols) : cols;

  DecompositionSearchResult res;
  for (; cols <= max_cols; cols *= 2) {
    res.columns = cols;
    for (int s = 0; s < opt.restarts; ++s) {
      ++res.restarts_run;
      const detail::MmRun run =
          detail::mm_decompose(a, detail::initial_mixing(r, cols, s, opt.seed), m, n, k, opt.iters, opt.tol_cert);
      res.best_penalty = std::min(res.best_penalty, run.penalty);
      if (!run.success) continue;
      Decomposition d;
      for (Eigen::Index j = 0; j < run.t.cols(); ++j) {
        const double w = run.t.col(j).squaredNorm();
        if (w <= 1e-14) continue;
        d.weights.push_back(w * tr);
        d.states.emplace_back(run.t.col(j) / std::sqrt(w), rho.dims(), true);
      }
      if (d.states.empty()) continue;
      d.target_residual = frobenius(d.reconstruct() - rho.matrix()) / tr;
      for (const auto& st : d.states)
        d.max_schmidt_rank = std::max(d.max_schmidt_rank, schmidt_rank(st.amplitudes(), m, n, opt.tol.rank));
      if (!verify_decomposition(rho, d, k, opt.tol)) continue;
      res.found = true;
      res.decomposition = std::move(d);
      return res;
    }
  }
  return res;
}

/// Decomposition of rho into its own eigenvectors; always valid, with
/// max Schmidt rank of the eigenvectors.
inline Decomposition spectral_decomposition(const DensityOp& bip, const Tolerances& tol = {}) {
  const Mat a = spectral_factor(bip.matrix(), tol.rank);
  Decomposition d;
  const int m = bip.dims()[0], n = bip.dims()[1];
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double w = a.col(j).squaredNorm();
    d.weights.push_back(w);
    d.states.emplace_back(a.col(j) / std::sqrt(w), bip.dims(), true);
    d.max_schmidt_rank = std::max(d.max_schmidt_rank, schmidt_rank(a.col(j), m, n, tol.rank));
  }
  d.target_residual = frobenius(d.reconstruct() - bip.matrix()) / bip.trace();
  return d;
}

/// Members of two decompositions combined as products, regrouped A1A2:B1B2.
inline Decomposition product_decomposition(const Decomposition& d1, const Decomposition& d2) {
  Decomposition d;
  const DimVec& a = d1.states.at(0).dims();
  const DimVec& b = d2.states.at(0).dims();
  const DimVec out{a[0] * b[0], a[1] * b[1]};
  check_capacity(out.total());
  for (std::size_t i = 0; i < d1.size(); ++i)
    for (std::size_t j = 0; j < d2.size(); ++j) {
      d.weights.push_back(d1.weights[i] * d2.weights[j]);
      d.states.emplace_back(regrouped_product_vector({d1.states[i].amplitudes(), d2.states[j].amplitudes()}, {a, b}),
                            out, true);
    }
  d.max_schmidt_rank = 0;
  for (const auto& s : d.states)
    d.max_schmidt_rank = std::max(d.max_schmidt_rank, schmidt_rank(s.amplitudes(), out[0], out[1]));
  return d;
}

// ---------------------------------------------------------------------------
// Low Schmidt rank vectors in a subspace

struct RangeSearchResult {
  bool found = false;
  Vec vector;                 // rank <= l vector (snapped), unit norm
  double best_penalty = 1.0;  // tail weight of the best unit vector in the subspace
  double distance = 0.0;      // distance of the snapped vector from the subspace
};

namespace detail {

/// Alternating descent from a start vector c: T <- rank-l truncation of E c,
/// c <- E^dagger T / |E^dagger T|. Each step cannot increase the tail weight.
inline RangeSearchResult range_descent(const Mat& e, int m, int n, int l, Vec c, const SearchOptions& opt) {
  RangeSearchResult res;
  TailResult tr = truncate_rank(e * c, m, n, l);
  double g = tr.tail;
  std::vector<double> hist;
  for (int it = 0; it < opt.iters && g >= opt.tol_cert; ++it) {
    const Vec nc = e.adjoint() * tr.truncated;
    const double nn = nc.norm();
    if (nn == 0.0) break;
    c = nc / nn;
    tr = truncate_rank(e * c, m, n, l);
    g = tr.tail;
    hist.push_back(g);
    const std::size_t h = hist.size();
    if (h > 60 && hist[h - 51] - g <= 1e-8 * hist[h - 51]) break;
  }
  res.best_penalty = g;
  if (g >= opt.tol_cert) return res;
  hist.clear();
  for (int p = 0; p < std::max(20 * opt.iters, 2000) && g > 1e-26; ++p) {
    const Vec nc = e.adjoint() * tr.truncated;
    c = nc / nc.norm();
    tr = truncate_rank(e * c, m, n, l);
    g = tr.tail;
    hist.push_back(g);
    const std::size_t h = hist.size();
    if (h > 60 && hist[h - 51] - g <= 1e-3 * hist[h - 51]) break;
  }
  res.found = true;
  res.best_penalty = g;
  res.vector = tr.truncated / tr.truncated.norm();
  res.distance = (res.vector - e * (e.adjoint() * res.vector)).norm();
  return res;
}

}  // namespace detail

/// Looks for a unit vector in span(E) (orthonormal columns, vectors on
/// M x N) with Schmidt rank <= l. Found vectors lie within `distance` of
/// the subspace; not-found is not a certificate.
inline RangeSearchResult min_schmidt_in_range(const Mat& e, int m, int n, int l, const SearchOptions& opt = {}) {
  if (l < 1) throw InputError("min_schmidt_in_range: l must be >= 1");
  if (e.rows() != static_cast<Eigen::Index>(m) * n) throw InputError("min_schmidt_in_range: basis size mismatch");
  RangeSearchResult best;
  const Eigen::Index d = e.cols();
  if (d == 0) return best;
  for (int s = 0; s < opt.restarts; ++s) {
    Vec c;
    if (s == 0) {
      c = Vec::Zero(d);
      c(0) = 1.0;
    } else {
      Rng rng = stream_rng(opt.seed, static_cast<std::uint64_t>(s));
      c = random_unit_vector(d, rng);
    }
    const RangeSearchResult r = detail::range_descent(e, m, n, l, c, opt);
    if (r.found) return r;
    best.best_penalty = std::min(best.best_penalty, r.best_penalty);
  }
  return best;
}

inline RangeSearchResult min_schmidt_in_range(const DensityOp& bip, int l, const SearchOptions& opt = {}) {
  if (bip.dims().size() != 2) throw InputError("min_schmidt_in_range: bipartite operator expected");
  return min_schmidt_in_range(range_basis(bip.matrix(), opt.tol.rank), bip.dims()[0], bip.dims()[1], l, opt);
}

// ---------------------------------------------------------------------------
// Completely entangled ranges via unextendible product sets

/// Is there a nonzero fully product vector orthogonal to every member?
/// Member i can be orthogonal to a product vector only through some party p
/// whose factor is orthogonal to member i's factor p. Such a vector exists
/// iff the members can be assigned to parties so that each party's
/// assigned factors span less than its full local dimension.
struct ExtensionResult {
  bool extendible = false;
  std::vector<Vec> witness;  // local factors of an orthogonal product vector
};

inline ExtensionResult product_extension(const std::vector<ProductVector>& members, const DimVec& dims,
                                         double tol_rank = 1e-8) {
  const std::size_t parties = dims.size();
  for (const auto& u : members)
    if (u.factors.size() != parties) throw InputError("product_extension: factor count mismatch");
  std::vector<std::vector<std::size_t>> assigned(parties);
  auto span_rank = [&](std::size_t p) {
    Mat s(dims[p], static_cast<Eigen::Index>(assigned[p].size()));
    for (std::size_t c = 0; c < assigned[p].size(); ++c)
      s.col(static_cast<Eigen::Index>(c)) = members[assigned[p][c]].factors[p].normalized();
    return s.cols() == 0 ? 0 : numerical_rank(s, tol_rank);
  };
  ExtensionResult res;
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == members.size()) return true;
    for (std::size_t p = 0; p < parties; ++p) {
      assigned[p].push_back(i);
      const bool ok = span_rank(p) < dims[p];
      if (ok && dfs(i + 1)) return true;
      assigned[p].pop_back();
    }
    return false;
  };
  if (!dfs(0)) return res;
  res.extendible = true;
  for (std::size_t p = 0; p < parties; ++p) {
    Mat s(dims[p], static_cast<Eigen::Index>(assigned[p].size()));
    for (std::size_t c = 0; c < assigned[p].size(); ++c)
      s.col(static_cast<Eigen::Index>(c)) = members[assigned[p][c]].factors[p];
    if (s.cols() == 0) {
      res.witness.push_back(basis_vector(dims[p], 0));
    } else {
      // A vector orthogonal to the span of the assigned factors.
      Eigen::JacobiSVD<Mat> svd(s.adjoint(), Eigen::ComputeFullV);
      res.witness.push_back(svd.matrixV().col(dims[p] - 1));
    }
  }
  return res;
}

/// Product vectors regrouped across a cut: left factors multiplied into one
/// factor, right factors into the other.
inline ProductVector group_product(const ProductVector& u, const Bipartition& cut) {
  Vec l = u.factors.at(static_cast<std::size_t>(cut.left()[0]));
  for (std::size_t i = 1; i < cut.left().size(); ++i) l = kron(l, u.factors[static_cast<std::size_t>(cut.left()[i])]);
  Vec r = u.factors.at(static_cast<std::size_t>(cut.right()[0]));
  for (std::size_t i = 1; i < cut.right().size(); ++i) r = kron(r, u.factors[static_cast<std::size_t>(cut.right()[i])]);
  return {{l, r}};
}

/// Factorizes a rank-one vector on M x N.
inline ProductVector factor_product(const Vec& v, int m, int n) {
  Eigen::JacobiSVD<Mat> svd(reshape(v, m, n), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s = svd.singularValues()(0);
  return {{Vec(svd.matrixU().col(0) * s), Vec(svd.matrixV().col(0).conjugate())}};
}

struct CesCertificate {
  bool certified = false;
  std::string method;  // "upb-hint" or "kernel-discovery"
  std::vector<ProductVector> members;
};

/// Members must be (numerically) in the kernel of rho.
inline bool members_in_kernel(const Mat& rho, const std::vector<ProductVector>& members, double tol = 1e-9) {
  const double scale = rho.norm();
  for (const auto& u : members) {
    const Vec v = u.flatten();
    if ((rho * v).norm() > tol * scale * v.norm()) return false;
  }
  return true;
}

/// Certifies that the range of rho contains no fully product vector (1-CES
/// across all listed parties of `dims`), using the given product vectors or,
/// for two parties, product vectors discovered in the kernel.
inline CesCertificate ces_certify(const DensityOp& rho, const std::vector<ProductVector>& hints,
                                  const SearchOptions& opt = {}) {
  CesCertificate c;
  const DimVec& dims = rho.dims();
  if (!hints.empty() && members_in_kernel(rho.matrix(), hints) && !product_extension(hints, dims).extendible) {
    c.certified = true;
    c.method = "upb-hint";
    c.members = hints;
    return c;
  }
  if (dims.size() != 2) return c;
  const Mat ker = kernel_basis(rho.matrix(), opt.tol.rank);
  if (ker.cols() == 0) return c;
  const int m = dims[0], n = dims[1];
  std::vector<ProductVector> found;
  for (int s = 0; s < opt.restarts; ++s) {
    Rng rng = stream_rng(opt.seed, static_cast<std::uint64_t>(s) + 7919);
    const RangeSearchResult r =
        detail::range_descent(ker, m, n, 1, random_unit_vector(ker.cols(), rng), opt);
    if (!r.found || r.distance > 1e-7) continue;
    found.push_back(factor_product(r.vector, m, n));
    if (static_cast<int>(found.size()) >= m + n - 1 && !product_extension(found, dims).extendible) {
      c.certified = true;
      c.method = "kernel-discovery";
      c.members = found;
      return c;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Bounds

struct SnBound {
  int lo = 1;
  int hi = 1;
  std::string lo_certificate = "trivial";  // trivial | witness | ces | ppt-corollary | pure-rank | direct-sum | construction
  std::string hi_certificate = "local-rank";  // decomposition | pure-rank | local-rank | lowdim-ppt | ppt-corollary | direct-sum | product
  bool exhausted = false;
  std::vector<std::string> notes;
  std::map<std::string, double> evidence;
  std::optional<Decomposition> decomposition;
  std::optional<CesCertificate> ces;
  std::vector<SnBound> parts;  // direct-sum blocks

  bool exact() const { return lo == hi; }
  bool contains(int v) const { return lo <= v && v <= hi; }
};

namespace detail {

/// Connected components of the B computational indices (or A when
/// side == 0) under "some entry of rho couples them".
inline std::vector<std::vector<int>> index_blocks(const DensityOp& bip, int side, double tol) {
  const int m = bip.dims()[0], n = bip.dims()[1];
  const int d = side == 1 ? n : m;
  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]); };
  const Mat& r = bip.matrix();
  const double thr = tol * max_abs(r);
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      if (std::abs(r(i, j)) <= thr) continue;
      const int x = static_cast<int>(side == 1 ? i % n : i / n);
      const int y = static_cast<int>(side == 1 ? j % n : j / n);
      used[static_cast<std::size_t>(x)] = used[static_cast<std::size_t>(y)] = true;
      parent[static_cast<std::size_t>(find(x))] = find(y);
    }
  std::map<int, std::vector<int>> groups;
  for (int x = 0; x < d; ++x)
    if (used[static_cast<std::size_t>(x)]) groups[find(x)].push_back(x);
  std::vector<std::vector<int>> out;
  for (auto& [root, g] : groups) out.push_back(g);
  return out;
}

inline DensityOp coordinate_block(const DensityOp& bip, int side, const std::vector<int>& idx) {
  const int m = bip.dims()[0], n = bip.dims()[1];
  const int d = side == 1 ? n : m;
  Mat q = Mat::Zero(static_cast<Eigen::Index>(idx.size()), d);
  for (std::size_t c = 0; c < idx.size(); ++c) q(static_cast<Eigen::Index>(c), idx[c]) = 1.0;
  const Mat k = side == 1 ? kron(Mat::Identity(m, m), q) : kron(q, Mat::Identity(n, n));
  const DimVec nd = side == 1 ? DimVec{m, static_cast<int>(idx.size())} : DimVec{static_cast<int>(idx.size()), n};
  return DensityOp::trusted(k * bip.matrix() * k.adjoint(), nd);
}

}  // namespace detail

/// Orthogonal-support blocks of a bipartite operator (B side first, then A);
/// a single block means no direct-sum structure was found.
inline std::vector<DensityOp> direct_sum_blocks(const DensityOp& bip, const Tolerances& tol = {}) {
  for (int side : {1, 0}) {
    const auto groups = detail::index_blocks(bip, side, tol.rank);
    if (groups.size() > 1) {
      std::vector<DensityOp> out;
      for (const auto& g : groups) out.push_back(detail::coordinate_block(bip, side, g));
      return out;
    }
  }
  return {bip};
}

inline SearchOptions search_options(const Budget& b) {
  SearchOptions o;
  o.restarts = b.restarts;
  o.iters = b.iters;
  o.seed = b.seed;
  o.tol = b.tol;
  o.tol_cert = b.tol_cert;
  return o;
}

inline Decomposition lift_decomposition(const Decomposition& d, const Mat& va, const Mat& vb, const DimVec& dims) {
  Decomposition out = d;
  const Mat k = kron(va, vb);
  for (auto& s : out.states) s = PureState(k * s.amplitudes(), dims, true);
  return out;
}

/// Certified interval for the Schmidt number of rho across `cut`. UPB hints
/// (product vectors in the kernel, one factor per party of rho) enable the
/// algebraic completely-entangled-range certificate.
inline SnBound sn_bounds(const DensityOp& rho, const Bipartition& cut, const Budget& budget = {},
                         const std::vector<ProductVector>& hints = {}) {
  const DensityOp b = to_bipartite(rho, cut);
  std::vector<ProductVector> bhints;
  for (const auto& h : hints) bhints.push_back(h.factors.size() == 2 && cut.parties() == 2 ? h : group_product(h, cut));
  const Tolerances& tol = budget.tol;
  SnBound out;
  const int rank = numerical_rank(b.matrix(), tol.rank);
  out.evidence["rank"] = rank;

  if (rank == 1) {
    const int s = schmidt_rank(dominant_vector(b), b.dims()[0], b.dims()[1], tol.rank);
    out.lo = out.hi = s;
    out.lo_certificate = out.hi_certificate = "pure-rank";
    out.decomposition = spectral_decomposition(b, tol);
    return out;
  }

  const auto blocks = direct_sum_blocks(b, tol);
  if (blocks.size() > 1) {
    out.lo = 1;
    out.hi = 1;
    for (const auto& blk : blocks) {
      SnBound p = sn_bounds(blk, Bipartition::first_vs_rest(2), budget);
      out.lo = std::max(out.lo, p.lo);
      out.hi = std::max(out.hi, p.hi);
      out.parts.push_back(std::move(p));
    }
    out.lo_certificate = out.hi_certificate = "direct-sum";
    out.evidence["blocks"] = static_cast<double>(blocks.size());
    out.exhausted = out.lo < out.hi;
    return out;
  }

  const SupportRestriction sr = restrict_to_support(b, tol);
  const int ra = sr.restricted.dims()[0], rb = sr.restricted.dims()[1];
  out.evidence["local_rank_a"] = ra;
  out.evidence["local_rank_b"] = rb;
  out.hi = std::min(ra, rb);
  out.hi_certificate = "local-rank";
  if (out.hi == 1) return out;

  const Bipartition ab = Bipartition::first_vs_rest(2);
  const PptVerdict ppt = ppt_check(sr.restricted, ab, tol);
  out.evidence["min_eig_gamma"] = ppt.min_eig_gamma;
  if (!ppt.is_ppt) {
    out.lo = 2;
    out.lo_certificate = "witness";
    out.notes.push_back("partial transpose has a negative eigenvalue");
  }
  const ReductionResult red = reduction_check(sr.restricted, ab, tol);
  if (ra == rb) out.evidence["reduction_pairing"] = pairing(sr.restricted.matrix(), reduction_choi(ra));
  if (red.violated && out.lo < 2) {
    out.lo = 2;
    out.lo_certificate = "witness";
  }

  if (ra * rb <= 6) {
    if (ppt.is_ppt) {
      out.lo = out.hi = 1;
      out.hi_certificate = "lowdim-ppt";
    }
    return out;
  }

  // Overlap witness on the support, padded to equal local dimensions.
  {
    const int kdim = std::max(ra, rb);
    const DensityOp sq = embed(sr.restricted, kdim, kdim, 0, 0);
    OverlapOptions oo;
    oo.restarts = budget.overlap_restarts;
    oo.max_iters = budget.iters;
    oo.seed = budget.seed;
    const OverlapResult ov = max_entangled_overlap(sq, oo);
    out.evidence["overlap"] = ov.value;
    const int lw = std::min(sn_lower_from_overlap(ov.value, kdim), out.hi);
    if (lw > out.lo) {
      out.lo = lw;
      out.lo_certificate = "witness";
    }
  }

  if (out.lo < 2) {
    SearchOptions co = search_options(budget);
    co.restarts = budget.ces_restarts;
    // rho = (P_A x P_B) rho (P_A x P_B), so projected kernel vectors stay in the kernel.
    std::vector<ProductVector> rh;
    for (const auto& h : bhints) {
      const Vec fa = sr.va.adjoint() * h.factors[0], fb = sr.vb.adjoint() * h.factors[1];
      if (fa.norm() > 1e-9 && fb.norm() > 1e-9) rh.push_back({{fa, fb}});
    }
    CesCertificate ces = ces_certify(sr.restricted, rh, co);
    if (ces.certified) {
      out.lo = 2;
      out.lo_certificate = "ces";
      // Report members in the original local bases.
      for (auto& u : ces.members) {
        u.factors[0] = (sr.va * u.factors[0]).normalized();
        u.factors[1] = (sr.vb * u.factors[1]).normalized();
      }
      out.ces = std::move(ces);
    }
  }

  const bool corollary = ppt.is_ppt && ra == 3 && rb == 3 && out.lo >= 2;
  for (int k = std::max(out.lo, 1); k < out.hi; ++k) {
    const DecompositionSearchResult ds = decomposition_search(sr.restricted, k, search_options(budget));
    out.evidence["search_penalty_k" + std::to_string(k)] = ds.best_penalty;
    if (ds.found) {
      out.hi = k;
      out.hi_certificate = "decomposition";
      out.decomposition = lift_decomposition(*ds.decomposition, sr.va, sr.vb, b.dims());
      break;
    }
  }
  if (corollary && out.hi > 2) {
    out.hi = 2;
    out.hi_certificate = "ppt-corollary";
  }
  if (corollary) out.notes.push_back("3x3 PPT entangled: Schmidt number exactly 2");
  out.exhausted = out.lo < out.hi;
  return out;
}

inline SnBound sn_bounds(const DensityOp& rho, const Budget& budget = {}, const std::vector<ProductVector>& hints = {}) {
  return sn_bounds(rho, Bipartition::first_vs_rest(rho.dims().size()), budget, hints);
}

struct BsnBound {
  SnBound sn_rho;
  SnBound sn_gamma;
  bool consistent = true;  // false if both intervals lie in {1,2} but do not intersect
};

/// Schmidt-number bounds for a PPT rho and for rho^Gamma. When both
/// intervals lie within {1, 2} the two numbers coincide, so the intervals are
/// intersected.
inline BsnBound bsn_bounds(const DensityOp& rho, const Bipartition& cut, const Budget& budget = {},
                           const std::vector<ProductVector>& hints = {}) {
  const PptVerdict v = ppt_check(rho, cut, budget.tol);
  if (!v.is_ppt) throw PreconditionError("bi-Schmidt number is defined for PPT states only");
  const DensityOp g = DensityOp::trusted(gamma(rho, cut), rho.dims());
  // Transposing the left parties conjugates their factors.
  std::vector<ProductVector> ghints = hints;
  for (auto& h : ghints)
    for (int p : cut.left()) h.factors[static_cast<std::size_t>(p)] = h.factors[static_cast<std::size_t>(p)].conjugate();
  BsnBound out{sn_bounds(rho, cut, budget, hints), sn_bounds(g, cut, budget, ghints), true};
  if (out.sn_rho.hi <= 2 && out.sn_gamma.hi <= 2) {
    const int lo = std::max(out.sn_rho.lo, out.sn_gamma.lo);
    const int hi = std::min(out.sn_rho.hi, out.sn_gamma.hi);
    if (lo > hi) {
      out.consistent = false;
    } else {
      for (SnBound* s : {&out.sn_rho, &out.sn_gamma}) {
        if (s->lo < lo) {
          s->lo = lo;
          s->lo_certificate = "bsn-consistency";
        }
        if (s->hi > hi) {
          s->hi = hi;
          s->hi_certificate = "bsn-consistency";
        }
        s->exhausted = s->lo < s->hi;
      }
    }
  }
  return out;
}

/// log2 of the upper end: an entanglement-of-formation upper bound in ebits.
inline double eof_bound(const SnBound& b) { return std::log2(static_cast<double>(b.hi)); }

}  // namespace schmidt
