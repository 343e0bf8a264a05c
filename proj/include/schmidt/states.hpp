#pragma once

// Named states and counterexamples, plus the registry that maps a recipe
// (name + numeric parameters) to a concrete state.
//
// Named families (isotropic, Werner, UPB complements, GHZ, W, ...) are
// returned normalized. States quoted as literal ket sums (nonconvex_*,
// problems_rho, proj_example, expansion_vi, jsn_example) keep their literal
// unnormalized amplitudes.

#include "schmidt/core.hpp"
#include "schmidt/random.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace schmidt {

class RegistryError : public Error {
 public:
  using Error::Error;
};

/// One member of a product basis: one local factor per party.
struct ProductVector {
  std::vector<Vec> factors;

  Vec flatten() const {
    Vec v = factors.at(0);
    for (std::size_t p = 1; p < factors.size(); ++p) v = kron(v, factors[p]);
    return v;
  }
};

struct StateRecipe {
  std::string name;
  std::map<std::string, double> params;
};

struct ConstructedState {
  std::string name;
  std::variant<PureState, DensityOp> state;
  std::vector<ProductVector> upb;  // populated for UPB complements

  bool is_pure() const { return std::holds_alternative<PureState>(state); }
  const DimVec& dims() const {
    return is_pure() ? std::get<PureState>(state).dims() : std::get<DensityOp>(state).dims();
  }
  DensityOp density() const {
    return is_pure() ? DensityOp::from_pure(std::get<PureState>(state)) : std::get<DensityOp>(state);
  }
  const PureState& pure() const { return std::get<PureState>(state); }
};

// ---------------------------------------------------------------------------
// Basis-vector helpers

/// |i_0 i_1 ...> on local dimension d for every party.
inline Vec ket(int d, std::initializer_list<int> digits) {
  Eigen::Index idx = 0;
  for (int x : digits) {
    if (x < 0 || x >= d) throw InputError("ket digit out of range");
    idx = idx * d + x;
  }
  Eigen::Index total = 1;
  for (std::size_t i = 0; i < digits.size(); ++i) total *= d;
  return basis_vector(total, idx);
}

inline Vec ket_dims(const DimVec& dims, const std::vector<int>& digits) {
  if (digits.size() != dims.size()) throw InputError("ket: digit count mismatch");
  Eigen::Index idx = 0;
  for (std::size_t p = 0; p < dims.size(); ++p) {
    if (digits[p] < 0 || digits[p] >= dims[p]) throw InputError("ket digit out of range");
    idx = idx * dims[p] + digits[p];
  }
  return basis_vector(static_cast<Eigen::Index>(dims.total()), idx);
}

inline Mat projector(const Vec& v) { return v * v.adjoint(); }

inline Mat swap_operator(int d) {
  Mat s = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

// ---------------------------------------------------------------------------
// Constructors

inline PureState max_entangled(int d) {
  if (d < 1) throw InputError("max_entangled: d must be >= 1");
  Vec v = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i) * d + i) = 1.0;
  return PureState(v / std::sqrt(static_cast<double>(d)), DimVec{d, d}, true);
}

inline DensityOp bell_density() { return DensityOp::from_pure(max_entangled(2)); }

inline DensityOp maximally_mixed(const DimVec& dims) {
  const auto d = static_cast<Eigen::Index>(dims.total());
  return DensityOp::trusted(Mat::Identity(d, d) / static_cast<double>(d), dims);
}

/// Normalized projector onto the antisymmetric subspace of C^3 x C^3.
inline DensityOp antisym3() {
  Mat rho = Mat::Zero(9, 9);
  for (int j = 0; j < 3; ++j)
    for (int k = j + 1; k < 3; ++k) rho += projector(ket(3, {j, k}) - ket(3, {k, j}));
  return DensityOp::trusted(rho / rho.trace().real(), DimVec{3, 3});
}

/// Five-member Tiles UPB in C^3 x C^3, each member normalized.
inline std::vector<ProductVector> tiles_upb() {
  const Vec e0 = basis_vector(3, 0), e1 = basis_vector(3, 1), e2 = basis_vector(3, 2);
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  const Vec s = (e0 + e1 + e2) / r3;
  return {
      {{e0, (e0 - e1) / r2}},
      {{e2, (e1 - e2) / r2}},
      {{(e0 - e1) / r2, e2}},
      {{(e1 - e2) / r2, e0}},
      {{s, s}},
  };
}

/// Four-member Shifts UPB on three qubits: |000>, |+1->, |1-+>, |-+1>.
inline std::vector<ProductVector> shifts_upb() {
  const Vec z = basis_vector(2, 0), o = basis_vector(2, 1);
  const double r2 = std::sqrt(2.0);
  const Vec p = (z + o) / r2, m = (z - o) / r2;
  return {{{z, z, z}}, {{p, o, m}}, {{o, m, p}}, {{m, p, o}}};
}

/// Normalized complement of a product basis: (I - sum |u><u|) / (D - |U|).
inline DensityOp upb_complement(const std::vector<ProductVector>& upb, const DimVec& dims) {
  const auto d = static_cast<Eigen::Index>(dims.total());
  Mat rho = Mat::Identity(d, d);
  for (const auto& u : upb) {
    const Vec v = u.flatten();
    rho -= projector(v) / v.squaredNorm();
  }
  return DensityOp(rho / rho.trace().real(), dims);
}

inline DensityOp tiles_state() { return upb_complement(tiles_upb(), DimVec{3, 3}); }
inline DensityOp shifts3_state() { return upb_complement(shifts_upb(), DimVec{2, 2, 2}); }

inline PureState ghz(int d, int n) {
  if (d < 1 || n < 2) throw InputError("ghz: need d >= 1 and n >= 2");
  std::vector<int> dims(static_cast<std::size_t>(n), d);
  const DimVec dv(dims);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dv.total()));
  for (int j = 0; j < d; ++j) v += ket_dims(dv, std::vector<int>(static_cast<std::size_t>(n), j));
  return PureState(v / std::sqrt(static_cast<double>(d)), dv, true);
}

inline PureState w_state(int n) {
  if (n < 2) throw InputError("w_state: need n >= 2");
  const DimVec dv(std::vector<int>(static_cast<std::size_t>(n), 2));
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dv.total()));
  for (int p = 0; p < n; ++p) {
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    digits[static_cast<std::size_t>(p)] = 1;
    v += ket_dims(dv, digits);
  }
  return PureState(v / std::sqrt(static_cast<double>(n)), dv, true);
}

/// p |Phi_d><Phi_d| + (1 - p) I / d^2.
inline DensityOp isotropic(int d, double p) {
  if (d < 2) throw InputError("isotropic: d must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("isotropic: p must lie in [0, 1]");
  const Vec phi = max_entangled(d).amplitudes();
  const Eigen::Index D = static_cast<Eigen::Index>(d) * d;
  Mat rho = p * projector(phi) + (1.0 - p) * Mat::Identity(D, D) / static_cast<double>(D);
  return DensityOp::trusted(std::move(rho), DimVec{d, d});
}

/// (I + w SWAP) / (d^2 + w d), w in [-1, 1].
inline DensityOp werner(int d, double w) {
  if (d < 2) throw InputError("werner: d must be >= 2");
  if (!(w >= -1.0 && w <= 1.0)) throw InputError("werner: w must lie in [-1, 1]");
  const Eigen::Index D = static_cast<Eigen::Index>(d) * d;
  Mat rho = Mat::Identity(D, D) + w * swap_operator(d);
  return DensityOp::trusted(rho / (static_cast<double>(D) + w * d), DimVec{d, d});
}

/// alpha = 2(|00>+|11>)(..) + (|00>-|11>+|22>)(..), unnormalized.
inline DensityOp nonconvex_alpha() {
  const Vec u = ket(3, {0, 0}) + ket(3, {1, 1});
  const Vec w = ket(3, {0, 0}) - ket(3, {1, 1}) + ket(3, {2, 2});
  return DensityOp::trusted(2.0 * projector(u) + projector(w), DimVec{3, 3});
}

/// beta = (|00>-|11>-|22>)(..), unnormalized.
inline DensityOp nonconvex_beta() {
  return DensityOp::trusted(projector(ket(3, {0, 0}) - ket(3, {1, 1}) - ket(3, {2, 2})), DimVec{3, 3});
}

/// alpha/2 + beta/2 with the literal unnormalized alpha and beta.
inline DensityOp nonconvex_mix() {
  return DensityOp::trusted(0.5 * nonconvex_alpha().matrix() + 0.5 * nonconvex_beta().matrix(),
                            DimVec{3, 3});
}

/// p |a><a| + (1-p) |b><b| with |a>, |b> = (|00> +- |11>)/sqrt(2).
inline DensityOp p_mix_bell(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("p_mix_bell: p must lie in [0, 1]");
  const double r2 = std::sqrt(2.0);
  const Vec a = (ket(2, {0, 0}) + ket(2, {1, 1})) / r2;
  const Vec b = (ket(2, {0, 0}) - ket(2, {1, 1})) / r2;
  return DensityOp::trusted(p * projector(a) + (1.0 - p) * projector(b), DimVec{2, 2});
}

/// psi = |11>+|22>, phi = |33>+|44>+|55>, omega = |33>-|44>+|66> on 7 x 7
/// local spaces with index 0 unused; rho = sum of the three projectors.
struct ProblemsVectors {
  Vec psi, phi, omega;
};

inline ProblemsVectors problems_vectors() {
  return {ket(7, {1, 1}) + ket(7, {2, 2}), ket(7, {3, 3}) + ket(7, {4, 4}) + ket(7, {5, 5}),
          ket(7, {3, 3}) - ket(7, {4, 4}) + ket(7, {6, 6})};
}

inline DensityOp problems_rho() {
  const auto v = problems_vectors();
  return DensityOp::trusted(projector(v.psi) + projector(v.phi) + projector(v.omega), DimVec{7, 7});
}

/// P = |1><1| + |3><3| + |4><4| on the 7-dimensional A space.
inline Mat problems_projector() {
  Mat p = Mat::Zero(7, 7);
  for (int i : {1, 3, 4}) p(i, i) = 1.0;
  return p;
}

/// |psi><psi| + |03><03| with psi = |00>+|11>+|22> on C^3 x C^4.
inline DensityOp proj_example() {
  const DimVec d{3, 4};
  const Vec psi = ket_dims(d, {0, 0}) + ket_dims(d, {1, 1}) + ket_dims(d, {2, 2});
  return DensityOp::trusted(projector(psi) + projector(ket_dims(d, {0, 3})), d);
}

/// n-fold (or mixed) tensor product regrouped as A_1..A_n : B_1..B_n.
inline DensityOp regrouped_product(const std::vector<DensityOp>& factors,
                                   std::size_t limit = kMaxAmbientDim) {
  if (factors.empty()) throw InputError("regrouped_product: no factors");
  std::size_t total = 1;
  for (const auto& f : factors) {
    if (f.dims().size() != 2) throw InputError("regrouped_product: bipartite factors expected");
    total *= f.dims().total();
  }
  check_capacity(total, limit);
  DensityOp acc = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor_product(acc, factors[i], limit);
  const int n = static_cast<int>(factors.size());
  std::vector<int> order;
  for (int c = 0; c < n; ++c) order.push_back(2 * c);
  for (int c = 0; c < n; ++c) order.push_back(2 * c + 1);
  const DensityOp p = permute_systems(acc, order);
  return DensityOp::trusted(p.matrix(), merged_dims(p.dims(), {factors.size(), factors.size()}));
}

/// Same regrouping for vectors; dims[i] = {M_i, N_i}.
inline Vec regrouped_product_vector(const std::vector<Vec>& vs, const std::vector<DimVec>& dims) {
  Vec acc = vs.at(0);
  std::vector<int> all = dims.at(0).values();
  for (std::size_t i = 1; i < vs.size(); ++i) {
    acc = kron(acc, vs[i]);
    all.insert(all.end(), dims[i].values().begin(), dims[i].values().end());
  }
  const int n = static_cast<int>(vs.size());
  std::vector<int> order;
  for (int c = 0; c < n; ++c) order.push_back(2 * c);
  for (int c = 0; c < n; ++c) order.push_back(2 * c + 1);
  return permute_systems(PureState(acc, DimVec(all)), order).amplitudes();
}

inline DensityOp tensor_power_regrouped(const DensityOp& rho, int n, std::size_t limit = kMaxAmbientDim) {
  if (n < 1) throw InputError("tensor power: n must be >= 1");
  if (n == 1) return rho;
  return regrouped_product(std::vector<DensityOp>(static_cast<std::size_t>(n), rho), limit);
}

/// |Phi_d><Phi_d| (unnormalized, sum_j |jj>) on A1B1 times sum_i |ii><ii| on
/// A2B2, regrouped as A1A2 : B1B2.
inline DensityOp expansion_vi(int d = 2, int m = 2) {
  if (d < 1 || m < 1) throw InputError("expansion_vi: d, m must be >= 1");
  Vec psi = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) psi(static_cast<Eigen::Index>(j) * d + j) = 1.0;
  Mat classical = Mat::Zero(static_cast<Eigen::Index>(m) * m, static_cast<Eigen::Index>(m) * m);
  for (int i = 0; i < m; ++i) classical(static_cast<Eigen::Index>(i) * m + i, static_cast<Eigen::Index>(i) * m + i) = 1.0;
  return regrouped_product({DensityOp::trusted(projector(psi), DimVec{d, d}),
                            DensityOp::trusted(classical, DimVec{m, m})});
}

/// |111>+|122>+|213>+|224> on C^2 x C^2 x C^4 (labels shifted down by one).
inline PureState jsn_example() {
  const DimVec d{2, 2, 4};
  const Vec v = ket_dims(d, {0, 0, 0}) + ket_dims(d, {0, 1, 1}) + ket_dims(d, {1, 0, 2}) +
                ket_dims(d, {1, 1, 3});
  return PureState(v, d);
}

/// Two Tiles states on orthogonal A and B supports of C^6 x C^6.
inline DensityOp example1_dsum() {
  const DensityOp t = tiles_state();
  return scaled(embed(t, 6, 6, 0, 0) + embed(t, 6, 6, 3, 3), 0.5);
}

// ---------------------------------------------------------------------------
// Registry

struct RegistryEntry {
  std::string name;
  std::string description;
  std::map<std::string, double> defaults;   // optional parameters
  std::vector<std::string> required;        // required parameters
  std::function<ConstructedState(const std::map<std::string, double>&)> build;
};

namespace detail {

inline int as_int(const std::map<std::string, double>& p, const std::string& key) {
  const double v = p.at(key);
  if (std::floor(v) != v) throw InputError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

inline ConstructedState make(std::string name, PureState s) { return {std::move(name), std::move(s), {}}; }
inline ConstructedState make(std::string name, DensityOp s, std::vector<ProductVector> upb = {}) {
  return {std::move(name), std::move(s), std::move(upb)};
}

}  // namespace detail

inline const std::vector<RegistryEntry>& state_registry() {
  using P = std::map<std::string, double>;
  using detail::as_int;
  using detail::make;
  static const std::vector<RegistryEntry> reg = {
      {"max_entangled", "(|00>+...+|d-1,d-1>)/sqrt(d)", {}, {"d"},
       [](const P& p) { return make("max_entangled", max_entangled(as_int(p, "d"))); }},
      {"bell", "normalized (|00>+|11>)/sqrt(2) as a density operator", {}, {},
       [](const P&) { return make("bell", bell_density()); }},
      {"maximally_mixed", "I/(m n)", {{"m", 2}, {"n", 2}}, {},
       [](const P& p) { return make("maximally_mixed", maximally_mixed(DimVec{as_int(p, "m"), as_int(p, "n")})); }},
      {"antisym3", "normalized antisymmetric projector on C^3 x C^3", {}, {},
       [](const P&) { return make("antisym3", antisym3()); }},
      {"tiles_state", "normalized complement of the Tiles UPB (3x3, rank 4)", {}, {},
       [](const P&) { return make("tiles_state", tiles_state(), tiles_upb()); }},
      {"shifts3_state", "normalized complement of the Shifts UPB (2x2x2, rank 4)", {}, {},
       [](const P&) { return make("shifts3_state", shifts3_state(), shifts_upb()); }},
      {"ghz", "sum_j |j...j>/sqrt(d) on n parties", {{"d", 2}, {"n", 3}}, {},
       [](const P& p) { return make("ghz", ghz(as_int(p, "d"), as_int(p, "n"))); }},
      {"w_state", "n-qubit W state", {{"n", 3}}, {},
       [](const P& p) { return make("w_state", w_state(as_int(p, "n"))); }},
      {"isotropic", "p |Phi_d><Phi_d| + (1-p) I/d^2", {}, {"d", "p"},
       [](const P& p) { return make("isotropic", isotropic(as_int(p, "d"), p.at("p"))); }},
      {"werner", "(I + w SWAP)/(d^2 + w d)", {}, {"d", "w"},
       [](const P& p) { return make("werner", werner(as_int(p, "d"), p.at("w"))); }},
      {"nonconvex_alpha", "2(|00>+|11>)(..) + (|00>-|11>+|22>)(..)", {}, {},
       [](const P&) { return make("nonconvex_alpha", nonconvex_alpha()); }},
      {"nonconvex_beta", "(|00>-|11>-|22>)(..)", {}, {},
       [](const P&) { return make("nonconvex_beta", nonconvex_beta()); }},
      {"nonconvex_mix", "alpha/2 + beta/2", {}, {},
       [](const P&) { return make("nonconvex_mix", nonconvex_mix()); }},
      {"p_mix_bell", "p|Phi+><Phi+| + (1-p)|Phi-><Phi-|", {}, {"p"},
       [](const P& p) { return make("p_mix_bell", p_mix_bell(p.at("p"))); }},
      {"problems_rho", "|psi><psi|+|phi><phi|+|omega><omega| on 7x7 (index 0 unused)", {}, {},
       [](const P&) { return make("problems_rho", problems_rho()); }},
      {"proj_example", "|psi><psi| + |03><03| on 3x4", {}, {},
       [](const P&) { return make("proj_example", proj_example()); }},
      {"expansion_vi", "(sum_j |jj>)(..) x sum_i |ii><ii|, regrouped", {{"d", 2}, {"m", 2}}, {},
       [](const P& p) { return make("expansion_vi", expansion_vi(as_int(p, "d"), as_int(p, "m"))); }},
      {"jsn_example", "|111>+|122>+|213>+|224> on 2x2x4", {}, {},
       [](const P&) { return make("jsn_example", jsn_example()); }},
      {"example1_dsum", "Tiles (+) Tiles on orthogonal supports of 6x6", {}, {},
       [](const P&) { return make("example1_dsum", example1_dsum()); }},
      {"random_pure", "Haar-random pure state on m x n", {{"seed", 0}}, {"m", "n"},
       [](const P& p) {
         Rng rng(static_cast<std::uint64_t>(as_int(p, "seed")));
         return make("random_pure", random_pure(DimVec{as_int(p, "m"), as_int(p, "n")}, rng));
       }},
      {"random_mixed", "random rank-r mixed state on m x n", {{"seed", 0}}, {"m", "n", "rank"},
       [](const P& p) {
         Rng rng(static_cast<std::uint64_t>(as_int(p, "seed")));
         return make("random_mixed", random_mixed(DimVec{as_int(p, "m"), as_int(p, "n")}, as_int(p, "rank"), rng));
       }},
  };
  return reg;
}

inline const RegistryEntry& registry_entry(const std::string& name) {
  for (const auto& e : state_registry())
    if (e.name == name) return e;
  throw RegistryError("unknown state constructor '" + name + "'");
}

inline ConstructedState construct(const StateRecipe& recipe) {
  const RegistryEntry& e = registry_entry(recipe.name);
  std::map<std::string, double> params = e.defaults;
  for (const auto& [k, v] : recipe.params) {
    const bool known = e.defaults.count(k) > 0 ||
                       std::find(e.required.begin(), e.required.end(), k) != e.required.end();
    if (!known) throw InputError("constructor '" + e.name + "' has no parameter '" + k + "'");
    params[k] = v;
  }
  for (const auto& r : e.required)
    if (!params.count(r)) throw InputError("constructor '" + e.name + "' requires parameter '" + r + "'");
  return e.build(params);
}

}  // namespace schmidt
