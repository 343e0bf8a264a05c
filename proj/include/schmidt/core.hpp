#pragma once

// Dense complex state substrate: dimension vectors, pure states, density
// operators, subsystem permutations, partial traces and Schmidt
// decompositions.
//
// Amplitude flattening is big-endian over subsystems: the first subsystem
// varies slowest, so |i_0 i_1 ... i_{n-1}> sits at
// sum_p i_p * prod_{q>p} d_q. A bipartite M x N vector therefore reshapes
// row-major into an M x N matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schmidt {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, bad permutations, out-of-range parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Ambient dimension beyond the configured limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an input that violates its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Relative tolerances. Every threshold scales with the trace, the largest
/// singular value or the largest entry of the operand.
struct Tolerances {
  double rank = 1e-9;
  double psd = 1e-9;
  double herm = 1e-10;
  double recon = 1e-8;
  double orth = 1e-10;
};

inline constexpr std::size_t kMaxAmbientDim = 4096;

// ---------------------------------------------------------------------------
// DimVec

class DimVec {
 public:
  DimVec() = default;
  DimVec(std::initializer_list<int> dims) : DimVec(std::vector<int>(dims)) {}
  explicit DimVec(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InputError("dimension vector is empty");
    for (int d : dims_) {
      if (d < 1) throw InputError("subsystem dimension must be >= 1");
    }
  }

  std::size_t size() const { return dims_.size(); }
  int operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<int>& values() const { return dims_; }

  std::size_t total() const {
    std::size_t t = 1;
    for (int d : dims_) t *= static_cast<std::size_t>(d);
    return t;
  }

  /// Stride of subsystem p in the flattened index.
  std::size_t stride(std::size_t p) const {
    std::size_t s = 1;
    for (std::size_t q = p + 1; q < dims_.size(); ++q) s *= static_cast<std::size_t>(dims_[q]);
    return s;
  }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(dims_.size());
    std::size_t acc = 1;
    for (std::size_t q = dims_.size(); q-- > 0;) {
      s[q] = acc;
      acc *= static_cast<std::size_t>(dims_[q]);
    }
    return s;
  }

  friend bool operator==(const DimVec&, const DimVec&) = default;

 private:
  std::vector<int> dims_;
};

inline DimVec concat(const DimVec& a, const DimVec& b) {
  std::vector<int> d = a.values();
  d.insert(d.end(), b.values().begin(), b.values().end());
  return DimVec(std::move(d));
}

inline void check_capacity(std::size_t ambient, std::size_t limit = kMaxAmbientDim) {
  if (ambient > limit) {
    throw CapacityError("ambient dimension " + std::to_string(ambient) + " exceeds limit " +
                        std::to_string(limit));
  }
}

// ---------------------------------------------------------------------------
// Bipartition

class Bipartition {
 public:
  Bipartition(std::vector<int> left, std::size_t parties) : parties_(parties) {
    std::sort(left.begin(), left.end());
    left.erase(std::unique(left.begin(), left.end()), left.end());
    if (left.empty()) throw InputError("bipartition: left side is empty");
    for (int i : left) {
      if (i < 0 || static_cast<std::size_t>(i) >= parties)
        throw InputError("bipartition: index out of range");
    }
    for (std::size_t i = 0; i < parties; ++i) {
      if (!std::binary_search(left.begin(), left.end(), static_cast<int>(i)))
        right_.push_back(static_cast<int>(i));
    }
    if (right_.empty()) throw InputError("bipartition: right side is empty");
    left_ = std::move(left);
  }

  /// First subsystem against the rest; for two parties this is A:B.
  static Bipartition first_vs_rest(std::size_t parties) { return Bipartition({0}, parties); }

  const std::vector<int>& left() const { return left_; }
  const std::vector<int>& right() const { return right_; }
  std::size_t parties() const { return parties_; }

  /// Permutation that lists the left parties first.
  std::vector<int> ordering() const {
    std::vector<int> p = left_;
    p.insert(p.end(), right_.begin(), right_.end());
    return p;
  }

 private:
  std::vector<int> left_;
  std::vector<int> right_;
  std::size_t parties_ = 0;
};

// ---------------------------------------------------------------------------
// Linear-algebra helpers

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Row-major reshape of a length M*N vector into an M x N matrix.
inline Mat reshape(const Vec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) throw InputError("reshape: size mismatch");
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(static_cast<Eigen::Index>(i) * cols + j);
  return m;
}

inline Vec flatten(const Mat& m) {
  Vec v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

inline RVec singular_values(const Mat& m) {
  if (m.size() == 0) return RVec();
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues();
}

/// Number of singular values above tol_rank * sigma_max; 0 for the zero matrix.
inline int numerical_rank(const Mat& m, double tol_rank = Tolerances{}.rank) {
  const RVec s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol_rank * s(0)) ++r;
  return r;
}

/// Unitary (or row/column-isometric) polar factor U V^dagger of m.
/// Zero singular values are completed by whatever orthonormal vectors the
/// SVD returns, which keeps the factor isometric.
inline Mat polar_factor(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

struct HermEig {
  RVec values;   // ascending
  Mat vectors;   // columns
};

inline HermEig hermitian_eigen(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Vec basis_vector(Eigen::Index dim, Eigen::Index i) {
  Vec v = Vec::Zero(dim);
  v(i) = 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// PureState

class PureState {
 public:
  PureState(Vec amplitudes, DimVec dims, bool normalized = false)
      : amps_(std::move(amplitudes)), dims_(std::move(dims)), normalized_(normalized) {
    if (static_cast<std::size_t>(amps_.size()) != dims_.total())
      throw InputError("pure state: amplitude count does not match dimensions");
    check_capacity(dims_.total());
    if (!amps_.allFinite()) throw InputError("pure state: non-finite amplitude");
    if (normalized_ && std::abs(amps_.norm() - 1.0) > 1e-10)
      throw InputError("pure state: flagged normalized but norm differs from 1");
  }

  const Vec& amplitudes() const { return amps_; }
  const DimVec& dims() const { return dims_; }
  bool is_normalized() const { return normalized_; }
  double norm() const { return amps_.norm(); }

  PureState normalized() const {
    const double n = amps_.norm();
    if (n == 0.0) throw InputError("cannot normalize the zero vector");
    return PureState(amps_ / n, dims_, true);
  }

 private:
  Vec amps_;
  DimVec dims_;
  bool normalized_;
};

// ---------------------------------------------------------------------------
// Hermitian operators and density operators

/// Hermitian operator with subsystem structure; not required to be PSD.
class HermitianOp {
 public:
  HermitianOp(Mat matrix, DimVec dims, const Tolerances& tol = {})
      : m_(std::move(matrix)), dims_(std::move(dims)) {
    if (m_.rows() != m_.cols()) throw InputError("operator is not square");
    if (static_cast<std::size_t>(m_.rows()) != dims_.total())
      throw InputError("operator size does not match dimensions");
    if (!m_.allFinite()) throw InputError("operator has non-finite entries");
    const double scale = max_abs(m_);
    if (max_abs(m_ - m_.adjoint()) > tol.herm * scale)
      throw InputError("operator is not Hermitian within tolerance");
    m_ = ((m_ + m_.adjoint()) * 0.5).eval();
  }

  const Mat& matrix() const { return m_; }
  const DimVec& dims() const { return dims_; }
  double trace() const { return m_.trace().real(); }
  RVec eigenvalues() const { return hermitian_eigen(m_).values; }

 protected:
  struct Trusted {};
  HermitianOp(Trusted, Mat matrix, DimVec dims) : m_(std::move(matrix)), dims_(std::move(dims)) {
    m_ = ((m_ + m_.adjoint()) * 0.5).eval();
  }

  Mat m_;
  DimVec dims_;
};

/// Positive semidefinite operator with positive trace. Not necessarily
/// trace one.
class DensityOp : public HermitianOp {
 public:
  DensityOp(Mat matrix, DimVec dims, const Tolerances& tol = {})
      : HermitianOp(std::move(matrix), std::move(dims), tol) {
    check_capacity(dims_.total());
    const double tr = trace();
    if (!(tr > 0.0)) throw InputError("density operator must have positive trace");
    const double lmin = hermitian_eigen(m_).values(0);
    if (lmin < -tol.psd * tr) throw InputError("density operator is not positive semidefinite");
  }

  /// Skips the eigenvalue check; for results of operations that preserve
  /// positivity (products, partial traces, congruences).
  static DensityOp trusted(Mat matrix, DimVec dims) {
    return DensityOp(Trusted{}, std::move(matrix), std::move(dims));
  }

  static DensityOp from_pure(const PureState& psi) {
    const Vec& v = psi.amplitudes();
    return trusted(v * v.adjoint(), psi.dims());
  }

  DensityOp normalized() const { return trusted(m_ / trace(), dims_); }

 private:
  DensityOp(Trusted t, Mat matrix, DimVec dims) : HermitianOp(t, std::move(matrix), std::move(dims)) {
    if (!(trace() > 0.0)) throw InputError("density operator must have positive trace");
  }
};

inline DensityOp operator+(const DensityOp& a, const DensityOp& b) {
  if (!(a.dims() == b.dims())) throw InputError("sum of operators with different dimensions");
  return DensityOp::trusted(a.matrix() + b.matrix(), a.dims());
}

inline DensityOp scaled(const DensityOp& a, double s) {
  if (!(s > 0.0)) throw InputError("scale factor must be positive");
  return DensityOp::trusted(a.matrix() * s, a.dims());
}

// ---------------------------------------------------------------------------
// Products and permutations

inline PureState tensor_product(const PureState& a, const PureState& b,
                                std::size_t limit = kMaxAmbientDim) {
  check_capacity(a.dims().total() * b.dims().total(), limit);
  return PureState(kron(a.amplitudes(), b.amplitudes()), concat(a.dims(), b.dims()),
                   a.is_normalized() && b.is_normalized());
}

inline DensityOp tensor_product(const DensityOp& a, const DensityOp& b,
                                std::size_t limit = kMaxAmbientDim) {
  check_capacity(a.dims().total() * b.dims().total(), limit);
  return DensityOp::trusted(kron(a.matrix(), b.matrix()), concat(a.dims(), b.dims()));
}

namespace detail {

inline void validate_permutation(std::span<const int> perm, std::size_t n) {
  if (perm.size() != n) throw InputError("permutation length does not match subsystem count");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[static_cast<std::size_t>(p)])
      throw InputError("not a permutation of subsystem indices");
    seen[static_cast<std::size_t>(p)] = true;
  }
}

/// For each old flat index, its position after moving subsystem perm[q] to slot q.
inline std::vector<Eigen::Index> permutation_map(const DimVec& dims, std::span<const int> perm) {
  const std::size_t n = dims.size();
  std::vector<int> newd(n);
  for (std::size_t q = 0; q < n; ++q) newd[q] = dims[static_cast<std::size_t>(perm[q])];
  const DimVec nd(newd);
  const auto ns = nd.strides();
  std::vector<std::size_t> stride_of_old(n);
  for (std::size_t q = 0; q < n; ++q) stride_of_old[static_cast<std::size_t>(perm[q])] = ns[q];
  const std::size_t total = dims.total();
  std::vector<Eigen::Index> map(total);
  std::vector<int> digit(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t target = 0;
    for (std::size_t p = 0; p < n; ++p) target += static_cast<std::size_t>(digit[p]) * stride_of_old[p];
    map[idx] = static_cast<Eigen::Index>(target);
    for (std::size_t p = n; p-- > 0;) {
      if (++digit[p] < dims[p]) break;
      digit[p] = 0;
    }
  }
  return map;
}

inline DimVec permuted_dims(const DimVec& dims, std::span<const int> perm) {
  std::vector<int> d(perm.size());
  for (std::size_t q = 0; q < perm.size(); ++q) d[q] = dims[static_cast<std::size_t>(perm[q])];
  return DimVec(d);
}

}  // namespace detail

/// Reorders subsystems so that result subsystem q is input subsystem perm[q].
inline PureState permute_systems(const PureState& s, std::span<const int> perm) {
  detail::validate_permutation(perm, s.dims().size());
  const auto map = detail::permutation_map(s.dims(), perm);
  Vec out(s.amplitudes().size());
  for (std::size_t i = 0; i < map.size(); ++i) out(map[i]) = s.amplitudes()(static_cast<Eigen::Index>(i));
  return PureState(std::move(out), detail::permuted_dims(s.dims(), perm), s.is_normalized());
}

inline Mat permute_matrix(const Mat& m, const DimVec& dims, std::span<const int> perm) {
  detail::validate_permutation(perm, dims.size());
  const auto map = detail::permutation_map(dims, perm);
  Mat out(m.rows(), m.cols());
  const auto n = static_cast<Eigen::Index>(map.size());
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(map[i], map[j]) = m(i, j);
  return out;
}

inline DensityOp permute_systems(const DensityOp& s, std::span<const int> perm) {
  return DensityOp::trusted(permute_matrix(s.matrix(), s.dims(), perm),
                            detail::permuted_dims(s.dims(), perm));
}

inline std::vector<int> inverse_permutation(std::span<const int> perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t q = 0; q < perm.size(); ++q) inv[static_cast<std::size_t>(perm[q])] = static_cast<int>(q);
  return inv;
}

/// Merges the parties listed in `groups` (each group contiguous after the
/// permutation) into single subsystems.
inline DimVec merged_dims(const DimVec& permuted, const std::vector<std::size_t>& group_sizes) {
  std::vector<int> d;
  std::size_t pos = 0;
  for (std::size_t g : group_sizes) {
    int prod = 1;
    for (std::size_t i = 0; i < g; ++i) prod *= permuted[pos + i];
    d.push_back(prod);
    pos += g;
  }
  return DimVec(d);
}

/// Two-party view across a cut: left parties first, dims merged to [dL, dR].
inline DensityOp to_bipartite(const DensityOp& rho, const Bipartition& cut) {
  if (cut.parties() != rho.dims().size()) throw InputError("cut does not match subsystem count");
  const auto order = cut.ordering();
  DensityOp p = permute_systems(rho, order);
  return DensityOp::trusted(p.matrix(), merged_dims(p.dims(), {cut.left().size(), cut.right().size()}));
}

inline PureState to_bipartite(const PureState& psi, const Bipartition& cut) {
  if (cut.parties() != psi.dims().size()) throw InputError("cut does not match subsystem count");
  const auto order = cut.ordering();
  PureState p = permute_systems(psi, order);
  return PureState(p.amplitudes(), merged_dims(p.dims(), {cut.left().size(), cut.right().size()}),
                   p.is_normalized());
}

/// Trace over every subsystem not in `keep`; kept subsystems retain their order.
inline DensityOp partial_trace(const DensityOp& rho, std::vector<int> keep) {
  if (keep.empty()) throw InputError("partial trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const std::size_t n = rho.dims().size();
  for (int k : keep)
    if (k < 0 || static_cast<std::size_t>(k) >= n) throw InputError("partial trace: index out of range");
  std::vector<int> order = keep;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(keep.begin(), keep.end(), static_cast<int>(i))) order.push_back(static_cast<int>(i));
  const DensityOp p = permute_systems(rho, order);
  std::vector<int> kd;
  Eigen::Index dk = 1;
  for (std::size_t q = 0; q < keep.size(); ++q) {
    kd.push_back(p.dims()[q]);
    dk *= p.dims()[q];
  }
  const Eigen::Index dt = static_cast<Eigen::Index>(p.dims().total()) / dk;
  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx s = 0.0;
      for (Eigen::Index t = 0; t < dt; ++t) s += p.matrix()(i * dt + t, j * dt + t);
      out(i, j) = s;
    }
  return DensityOp::trusted(std::move(out), DimVec(kd));
}

/// Applies op (rows x d_party) to one subsystem: (I..X..I) rho (I..X..I)^dagger.
/// A rectangular op changes that subsystem's dimension to op.rows().
inline Mat local_operator(const DimVec& dims, std::size_t party, const Mat& op) {
  if (party >= dims.size()) throw InputError("local operator: party out of range");
  if (op.cols() != dims[party]) throw InputError("local operator: dimension mismatch");
  Eigen::Index before = 1, after = 1;
  for (std::size_t q = 0; q < party; ++q) before *= dims[q];
  for (std::size_t q = party + 1; q < dims.size(); ++q) after *= dims[q];
  return kron(kron(Mat::Identity(before, before), op), Mat::Identity(after, after));
}

inline DimVec replaced_dim(const DimVec& dims, std::size_t party, int d) {
  std::vector<int> v = dims.values();
  v[party] = d;
  return DimVec(v);
}

/// Congruence by a local operator. The result may be the zero operator, so it
/// is returned as a raw matrix together with its dimensions.
inline std::pair<Mat, DimVec> conjugate_local(const Mat& rho, const DimVec& dims, std::size_t party,
                                              const Mat& op) {
  const Mat k = local_operator(dims, party, op);
  return {k * rho * k.adjoint(), replaced_dim(dims, party, static_cast<int>(op.rows()))};
}

inline PureState apply_local(const PureState& psi, std::size_t party, const Mat& op) {
  const Mat k = local_operator(psi.dims(), party, op);
  return PureState(k * psi.amplitudes(), replaced_dim(psi.dims(), party, static_cast<int>(op.rows())));
}

/// Places a bipartite operator into larger local spaces at the given basis offsets.
inline DensityOp embed(const DensityOp& rho, int new_m, int new_n, int offset_a, int offset_b) {
  if (rho.dims().size() != 2) throw InputError("embed: bipartite operator expected");
  const int m = rho.dims()[0], n = rho.dims()[1];
  if (offset_a < 0 || offset_b < 0 || offset_a + m > new_m || offset_b + n > new_n)
    throw InputError("embed: target space too small");
  Mat ea = Mat::Zero(new_m, m), eb = Mat::Zero(new_n, n);
  for (int i = 0; i < m; ++i) ea(offset_a + i, i) = 1.0;
  for (int j = 0; j < n; ++j) eb(offset_b + j, j) = 1.0;
  const Mat k = kron(ea, eb);
  return DensityOp::trusted(k * rho.matrix() * k.adjoint(), DimVec{new_m, new_n});
}

/// B-direct sum: alpha and beta act on orthogonal B subspaces of a shared A space.
inline DensityOp direct_sum_b(const DensityOp& alpha, const DensityOp& beta) {
  if (alpha.dims().size() != 2 || beta.dims().size() != 2)
    throw InputError("direct_sum_b: bipartite operators expected");
  if (alpha.dims()[0] != beta.dims()[0]) throw InputError("direct_sum_b: A dimensions differ");
  const int m = alpha.dims()[0];
  const int na = alpha.dims()[1], nb = beta.dims()[1];
  return embed(alpha, m, na + nb, 0, 0) + embed(beta, m, na + nb, 0, na);
}

/// Block projector of a B-direct sum: (I_A x Q) rho (I_A x Q)^dagger with Q
/// the coordinate isometry onto B indices [offset, offset + size).
inline Mat b_block(const DensityOp& rho, int offset, int size) {
  const int m = rho.dims()[0], n = rho.dims()[1];
  Mat q = Mat::Zero(size, n);
  for (int j = 0; j < size; ++j) q(j, offset + j) = 1.0;
  const Mat k = kron(Mat::Identity(m, m), q);
  return k * rho.matrix() * k.adjoint();
}

// ---------------------------------------------------------------------------
// Schmidt decomposition

struct SchmidtDecomp {
  RVec coefficients;  // nonincreasing, all above tol_rank * max
  Mat left_vectors;   // columns
  Mat right_vectors;  // columns
  int rank = 0;

  Vec reconstruct() const {
    Vec v = Vec::Zero(left_vectors.rows() * right_vectors.rows());
    for (int i = 0; i < rank; ++i)
      v += coefficients(i) * kron(Vec(left_vectors.col(i)), Vec(right_vectors.col(i)));
    return v;
  }
};

inline SchmidtDecomp schmidt_decompose_matrix(const Mat& m, double tol_rank) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) throw InputError("Schmidt decomposition of the zero vector");
  int r = 0;
  while (r < s.size() && s(r) > tol_rank * s(0)) ++r;
  SchmidtDecomp d;
  d.rank = r;
  d.coefficients = s.head(r);
  d.left_vectors = svd.matrixU().leftCols(r);
  d.right_vectors = svd.matrixV().leftCols(r).conjugate();
  return d;
}

inline SchmidtDecomp schmidt_decompose(const PureState& psi, const Bipartition& cut,
                                       double tol_rank = Tolerances{}.rank) {
  const PureState b = to_bipartite(psi, cut);
  return schmidt_decompose_matrix(reshape(b.amplitudes(), b.dims()[0], b.dims()[1]), tol_rank);
}

/// Schmidt rank of a vector on an M x N space; zero vectors have rank 0.
inline int schmidt_rank(const Vec& v, int m, int n, double tol_rank = Tolerances{}.rank) {
  return numerical_rank(reshape(v, m, n), tol_rank);
}

/// <psi|rho|psi> for a normalized psi.
inline double overlap(const PureState& psi, const DensityOp& rho) {
  if (psi.dims().total() != rho.dims().total()) throw InputError("overlap: dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InputError("overlap: state must be normalized");
  const cplx v = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return v.real();
}

/// Top eigenvector scaled by sqrt of its eigenvalue, for rank-one operators.
inline Vec dominant_vector(const DensityOp& rho) {
  const HermEig e = hermitian_eigen(rho.matrix());
  const Eigen::Index last = e.values.size() - 1;
  return e.vectors.col(last) * std::sqrt(std::max(0.0, e.values(last)));
}

/// Spectral factor A with rho = A A^dagger; columns sqrt(p_i)|a_i> for
/// eigenvalues above tol_rank * lambda_max, largest first.
inline Mat spectral_factor(const Mat& rho, double tol_rank = Tolerances{}.rank) {
  const HermEig e = hermitian_eigen(rho);
  const Eigen::Index n = e.values.size();
  const double lmax = e.values(n - 1);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n; i-- > 0;)
    if (e.values(i) > tol_rank * lmax) keep.push_back(i);
  Mat a(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    a.col(static_cast<Eigen::Index>(c)) = e.vectors.col(keep[c]) * std::sqrt(e.values(keep[c]));
  return a;
}

/// Orthonormal basis of the range of a PSD matrix.
inline Mat range_basis(const Mat& rho, double tol_rank = Tolerances{}.rank) {
  Mat a = spectral_factor(rho, tol_rank);
  for (Eigen::Index c = 0; c < a.cols(); ++c) a.col(c).normalize();
  return a;
}

/// Orthonormal basis of the kernel of a Hermitian PSD matrix.
inline Mat kernel_basis(const Mat& rho, double tol_rank = Tolerances{}.rank) {
  const HermEig e = hermitian_eigen(rho);
  const Eigen::Index n = e.values.size();
  const double lmax = e.values(n - 1);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (e.values(i) <= tol_rank * lmax) keep.push_back(i);
  Mat k(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) k.col(static_cast<Eigen::Index>(c)) = e.vectors.col(keep[c]);
  return k;
}

inline double frobenius(const Mat& m) { return m.norm(); }

}  // namespace schmidt
