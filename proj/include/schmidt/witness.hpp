#pragma once

// Witness lower bounds: Choi matrices of linear maps, the state/map pairing,
// perturbation margins, and see-saw maximization of the overlap with
// maximally entangled states.

#include "schmidt/core.hpp"
#include "schmidt/random.hpp"

#include <functional>
#include <limits>

namespace schmidt {

struct ChoiMatrix {
  Mat matrix;
  int in_dim = 0;
  int out_dim = 0;
};

using LinearMap = std::function<Mat(const Mat&)>;

/// C = sum_{ij} |i><j| (x) phi(|i><j|).
inline ChoiMatrix choi_matrix(const LinearMap& phi, int m) {
  if (m < 1) throw InputError("choi_matrix: input dimension must be >= 1");
  Eigen::Index n = -1;
  Mat c;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Mat unit = Mat::Zero(m, m);
      unit(i, j) = 1.0;
      const Mat out = phi(unit);
      if (out.rows() != out.cols()) throw InputError("choi_matrix: map output is not square");
      if (n < 0) {
        n = out.rows();
        c = Mat::Zero(m * n, m * n);
      } else if (out.rows() != n) {
        throw InputError("choi_matrix: inconsistent output dimensions across matrix units");
      }
      c.block(i * n, j * n, n, n) = out;
    }
  return {c, m, static_cast<int>(n)};
}

inline LinearMap identity_map() {
  return [](const Mat& a) { return a; };
}

inline LinearMap transpose_map() {
  return [](const Mat& a) { return Mat(a.transpose()); };
}

/// Lambda(a) = tr(a) I - a.
inline LinearMap reduction_map() {
  return [](const Mat& a) { return Mat(a.trace() * Mat::Identity(a.rows(), a.cols()) - a); };
}

inline ChoiMatrix reduction_choi(int m) { return choi_matrix(reduction_map(), m); }

/// tr(rho C^T).
inline double pairing(const Mat& rho, const ChoiMatrix& c) {
  if (rho.rows() != c.matrix.rows() || rho.cols() != c.matrix.cols())
    throw InputError("pairing: dimension mismatch");
  // tr(rho C^T) = sum_ij rho_ij C_ij
  return (rho.array() * c.matrix.array()).sum().real();
}

inline double pairing(const DensityOp& rho, const ChoiMatrix& c) { return pairing(rho.matrix(), c); }

/// Largest eps with pairing(rho + t sigma) < 0 for all 0 <= t < eps; +inf if
/// sigma does not push the pairing upward.
inline double perturbation_margin(const DensityOp& rho, const DensityOp& sigma, const ChoiMatrix& c) {
  const double p = pairing(rho, c);
  if (!(p < 0.0)) throw PreconditionError("perturbation_margin: witness does not fire on rho");
  const double q = pairing(sigma, c);
  if (q > 0.0) return -p / q;
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// See-saw over maximally entangled states

struct OverlapOptions {
  int restarts = 32;
  int max_iters = 500;
  std::uint64_t seed = 0;
  double stop_gain = 1e-12;
  int stop_window = 10;
};

struct OverlapResult {
  double value = 0.0;       // for the trace-normalized input
  Mat unitary;              // U with Psi_U = (U x I)|Phi_M>
  int iterations = 0;       // of the winning restart
  int restarts = 0;
  int best_restart = 0;
  bool converged = false;   // winning restart met the stopping rule
  bool monotone = true;     // every restart's objective sequence was nondecreasing
};

/// Psi_U = vec(U)/sqrt(M), row-major.
inline Vec psi_of_unitary(const Mat& u) { return flatten(u) / std::sqrt(static_cast<double>(u.rows())); }

inline double overlap_of_unitary(const Mat& rho, const Mat& u) {
  const Vec psi = psi_of_unitary(u);
  return psi.dot(rho * psi).real();
}

/// Maximizes <Psi_U|rho|Psi_U> over unitaries U for a trace-normalized copy
/// of rho. The objective is convex in U for PSD rho, so the update
/// U <- polar(reshape(rho Psi_U)) never decreases it.
inline OverlapResult max_entangled_overlap(const DensityOp& rho, const OverlapOptions& opt = {}) {
  if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1])
    throw InputError("max_entangled_overlap: equal local dimensions required");
  if (opt.restarts < 1 || opt.max_iters < 0) throw InputError("max_entangled_overlap: bad budget");
  const int m = rho.dims()[0];
  const Mat r = rho.matrix() / rho.trace();
  OverlapResult best;
  best.value = -1.0;
  best.restarts = opt.restarts;
  bool all_monotone = true;
  for (int s = 0; s < opt.restarts; ++s) {
    Mat u;
    if (s == 0) {
      u = Mat::Identity(m, m);
    } else {
      Rng rng = stream_rng(opt.seed, static_cast<std::uint64_t>(s));
      u = haar_unitary(m, rng);
    }
    double f = overlap_of_unitary(r, u);
    int small = 0, it = 0;
    bool conv = false;
    for (; it < opt.max_iters; ++it) {
      const Vec g = r * psi_of_unitary(u);
      const Mat un = polar_factor(reshape(g, m, m));
      const double fn = overlap_of_unitary(r, un);
      if (fn < f - 1e-13 * std::max(1.0, std::abs(f))) all_monotone = false;
      const double gain = fn - f;
      u = un;
      f = fn;
      small = gain < opt.stop_gain ? small + 1 : 0;
      if (small >= opt.stop_window) {
        conv = true;
        ++it;
        break;
      }
    }
    if (f > best.value) {
      best.value = f;
      best.unitary = u;
      best.iterations = it;
      best.converged = conv;
      best.best_restart = s;
    }
  }
  best.monotone = all_monotone;
  return best;
}

/// 1 + max{k : value > k/N + tol}, clamped to [1, N].
inline int sn_lower_from_overlap(double value, int n, double tol = 1e-9) {
  if (n < 1) throw InputError("sn_lower_from_overlap: N must be >= 1");
  int k = 0;
  for (int j = 0; j < n; ++j)
    if (value > static_cast<double>(j) / n + tol) k = j;
  return std::clamp(1 + k, 1, n);
}

}  // namespace schmidt
