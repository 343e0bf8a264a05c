#pragma once

// State files and JSON encodings of results.
//
// State file, version 1:
//   { "format": 1, "name": ..., "dims": [..], "kind": "density" | "kets",
//     "matrix": [[[re, im], ...], ...]            (kind = density, row-major)
//     "kets": [{"weight": w, "amplitudes": [[re, im], ...]}, ...]   (kind = kets)
//     "upb": [{"factors": [[[re, im], ...], ...]}, ...]              (optional)
//     "metadata": {...} }
// A ket list with a single entry loads as a pure state with amplitudes
// sqrt(weight) * amplitudes; longer lists load as sum_j w_j |k_j><k_j|.

#include "json.hpp"
#include "schmidt/multipartite.hpp"
#include "schmidt/projections.hpp"

#include <fstream>
#include <sstream>

namespace schmidt {

using Json = nlohmann::json;

/// Malformed or invalid state file; `where` is a JSON pointer into the document.
class StateFileError : public InputError {
 public:
  StateFileError(const std::string& where, const std::string& what)
      : InputError(where.empty() ? what : where + ": " + what) {}
};

struct LoadedState {
  std::string name;
  std::variant<PureState, DensityOp> state;
  std::vector<ProductVector> upb;
  Json metadata = Json::object();

  bool is_pure() const { return std::holds_alternative<PureState>(state); }
  const DimVec& dims() const {
    return is_pure() ? std::get<PureState>(state).dims() : std::get<DensityOp>(state).dims();
  }
  DensityOp density() const {
    return is_pure() ? DensityOp::from_pure(std::get<PureState>(state)) : std::get<DensityOp>(state);
  }
};

// ---------------------------------------------------------------------------
// Numbers

/// Finite doubles as numbers, non-finite ones as "inf" / "-inf" / "nan".
inline Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline Json encode_complex(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json encode_vector(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(encode_complex(v(i)));
  return a;
}

inline Json encode_matrix(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(encode_complex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline cplx decode_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw StateFileError(where, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Vec decode_vector(const Json& j, Eigen::Index n, const std::string& where) {
  if (!j.is_array()) throw StateFileError(where, "expected an array of [re, im] pairs");
  if (static_cast<Eigen::Index>(j.size()) != n)
    throw StateFileError(where, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = decode_complex(j[static_cast<std::size_t>(i)], where + "/" + std::to_string(i));
  return v;
}

inline const Json& field(const Json& doc, const char* key, const std::string& where = "") {
  if (!doc.contains(key)) throw StateFileError(where, std::string("missing field '") + key + "'");
  return doc[key];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// State files

inline Json encode_upb(const std::vector<ProductVector>& upb) {
  Json a = Json::array();
  for (const auto& u : upb) {
    Json f = Json::array();
    for (const auto& v : u.factors) f.push_back(encode_vector(v));
    a.push_back(Json{{"factors", f}});
  }
  return a;
}

inline Json encode_state(const std::string& name, const std::variant<PureState, DensityOp>& state,
                         const std::vector<ProductVector>& upb = {}, const Json& metadata = Json::object()) {
  Json doc;
  doc["format"] = 1;
  doc["name"] = name;
  if (std::holds_alternative<PureState>(state)) {
    const PureState& p = std::get<PureState>(state);
    doc["dims"] = p.dims().values();
    doc["kind"] = "kets";
    doc["kets"] = Json::array({Json{{"weight", 1.0}, {"amplitudes", encode_vector(p.amplitudes())}}});
  } else {
    const DensityOp& d = std::get<DensityOp>(state);
    doc["dims"] = d.dims().values();
    doc["kind"] = "density";
    doc["matrix"] = encode_matrix(d.matrix());
  }
  if (!upb.empty()) doc["upb"] = encode_upb(upb);
  doc["metadata"] = metadata;
  return doc;
}

inline std::string dump_state(const Json& doc) { return doc.dump(1) + "\n"; }

inline LoadedState decode_state(const Json& doc) {
  if (!doc.is_object()) throw StateFileError("", "state file must be a JSON object");
  const Json& fmt = detail::field(doc, "format");
  if (!fmt.is_number_integer() || fmt.get<int>() != 1) throw StateFileError("/format", "unsupported format (expected 1)");
  const Json& jd = detail::field(doc, "dims");
  if (!jd.is_array() || jd.empty()) throw StateFileError("/dims", "expected a nonempty array of positive integers");
  std::vector<int> dv;
  for (std::size_t i = 0; i < jd.size(); ++i) {
    if (!jd[i].is_number_integer() || jd[i].get<long>() < 1 || jd[i].get<long>() > static_cast<long>(kMaxAmbientDim))
      throw StateFileError("/dims/" + std::to_string(i), "expected a positive integer");
    dv.push_back(jd[i].get<int>());
  }
  const DimVec dims(dv);
  check_capacity(dims.total());
  const auto n = static_cast<Eigen::Index>(dims.total());
  LoadedState out{doc.value("name", std::string("unnamed")), PureState(Vec::Zero(n), dims), {}, Json::object()};
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) throw StateFileError("/metadata", "expected an object");
    out.metadata = doc["metadata"];
  }
  const Json& kind = detail::field(doc, "kind");
  if (kind == "density") {
    const Json& jm = detail::field(doc, "matrix");
    if (!jm.is_array() || static_cast<Eigen::Index>(jm.size()) != n)
      throw StateFileError("/matrix", "expected " + std::to_string(n) + " rows");
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      m.row(i) = detail::decode_vector(jm[static_cast<std::size_t>(i)], n, "/matrix/" + std::to_string(i)).transpose();
    try {
      out.state = DensityOp(std::move(m), dims);
    } catch (const InputError& e) {
      throw StateFileError("/matrix", e.what());
    }
  } else if (kind == "kets") {
    const Json& jk = detail::field(doc, "kets");
    if (!jk.is_array() || jk.empty()) throw StateFileError("/kets", "expected a nonempty array");
    std::vector<std::pair<double, Vec>> kets;
    for (std::size_t i = 0; i < jk.size(); ++i) {
      const std::string w = "/kets/" + std::to_string(i);
      if (!jk[i].is_object()) throw StateFileError(w, "expected an object");
      const Json& jw = detail::field(jk[i], "weight", w);
      if (!jw.is_number() || !(jw.get<double>() > 0.0)) throw StateFileError(w + "/weight", "expected a positive number");
      kets.emplace_back(jw.get<double>(), detail::decode_vector(detail::field(jk[i], "amplitudes", w), n, w + "/amplitudes"));
    }
    if (kets.size() == 1) {
      const Vec v = kets[0].second * std::sqrt(kets[0].first);
      if (v.norm() == 0.0) throw StateFileError("/kets/0/amplitudes", "zero vector");
      out.state = PureState(v, dims, std::abs(v.norm() - 1.0) <= 1e-12);
    } else {
      Mat m = Mat::Zero(n, n);
      for (const auto& [w, v] : kets) m += w * v * v.adjoint();
      try {
        out.state = DensityOp(std::move(m), dims);
      } catch (const InputError& e) {
        throw StateFileError("/kets", e.what());
      }
    }
  } else {
    throw StateFileError("/kind", "expected \"density\" or \"kets\"");
  }
  if (doc.contains("upb")) {
    const Json& ju = doc["upb"];
    if (!ju.is_array()) throw StateFileError("/upb", "expected an array");
    for (std::size_t i = 0; i < ju.size(); ++i) {
      const std::string w = "/upb/" + std::to_string(i) + "/factors";
      const Json& jf = detail::field(ju[i], "factors", "/upb/" + std::to_string(i));
      if (!jf.is_array() || jf.size() != dims.size()) throw StateFileError(w, "expected one factor per party");
      ProductVector u;
      for (std::size_t p = 0; p < dims.size(); ++p)
        u.factors.push_back(detail::decode_vector(jf[p], dims[p], w + "/" + std::to_string(p)));
      out.upb.push_back(std::move(u));
    }
  }
  return out;
}

inline LoadedState parse_state_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw StateFileError("", std::string("malformed JSON (") + e.what() + ")");
  }
  return decode_state(doc);
}

inline LoadedState parse_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open state file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_state_text(ss.str());
  } catch (const StateFileError& e) {
    throw StateFileError("", path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Result encodings

inline Json to_json(const Tolerances& t) {
  return {{"herm", t.herm}, {"orth", t.orth}, {"psd", t.psd}, {"rank", t.rank}, {"recon", t.recon}};
}

inline Json to_json(const Decomposition& d, bool members) {
  Json j{{"terms", d.size()}, {"max_schmidt_rank", d.max_schmidt_rank}, {"residual", num(d.target_residual)}};
  if (members) {
    Json a = Json::array();
    for (std::size_t i = 0; i < d.size(); ++i)
      a.push_back(Json{{"weight", d.weights[i]}, {"amplitudes", encode_vector(d.states[i].amplitudes())}});
    j["members"] = a;
  }
  return j;
}

inline Json to_json(const CesCertificate& c, bool members) {
  Json j{{"certified", c.certified}, {"method", c.method}, {"product_vectors", c.members.size()}};
  if (members) j["members"] = encode_upb(c.members);
  return j;
}

inline Json to_json(const SnBound& b, bool certificates = false) {
  Json j{{"lo", b.lo},
         {"hi", b.hi},
         {"lo_certificate", b.lo_certificate},
         {"hi_certificate", b.hi_certificate},
         {"exhausted", b.exhausted}};
  if (!b.notes.empty()) j["notes"] = b.notes;
  Json ev = Json::object();
  for (const auto& [k, v] : b.evidence) ev[k] = num(v);
  if (!ev.empty()) j["evidence"] = ev;
  if (b.decomposition) j["decomposition"] = to_json(*b.decomposition, certificates);
  if (b.ces) j["ces"] = to_json(*b.ces, certificates);
  if (!b.parts.empty()) {
    Json p = Json::array();
    for (const auto& x : b.parts) p.push_back(to_json(x, certificates));
    j["parts"] = p;
  }
  return j;
}

inline Json to_json(const PptVerdict& v) {
  return {{"is_ppt", v.is_ppt}, {"min_eig_gamma", num(v.min_eig_gamma)}, {"tolerance", num(v.tolerance)}};
}

inline Json to_json(const BiRank& b) { return Json::array({b.rank_rho, b.rank_gamma}); }

inline Json to_json(const ReductionResult& r) {
  return {{"min_eig_a", num(r.min_eig_a)}, {"min_eig_b", num(r.min_eig_b)}, {"violated", r.violated}};
}

inline Json to_json(const OverlapResult& r) {
  return {{"value", num(r.value)},     {"iterations", r.iterations}, {"restarts", r.restarts},
          {"best_restart", r.best_restart}, {"converged", r.converged}, {"monotone", r.monotone}};
}

inline Json to_json(const TensorRankBound& b, bool certificates = false) {
  Json j{{"lo", b.lo}, {"hi", b.hi}, {"lo_source", b.lo_source}, {"hi_source", b.hi_source}, {"jsn", b.jsn.ranks}};
  Json rej = Json::object();
  for (const auto& [r, res] : b.rejected_residuals) rej[std::to_string(r)] = num(res);
  if (!rej.empty()) j["rejected_fits"] = rej;
  if (b.certificate && certificates) {
    Json f = Json::array();
    for (const auto& m : b.certificate->factors) f.push_back(encode_matrix(m));
    j["cp_factors"] = f;
  }
  return j;
}

inline Json to_json(const ProjBoundReport& r) {
  Json j{{"k", r.k}, {"m", r.m}, {"sn_rho", to_json(r.sn_rho)}, {"degenerate", r.degenerate},
         {"lower_ok", r.lower_ok}, {"upper_ok", r.upper_ok}};
  if (r.sn_sigma) j["sn_sigma"] = to_json(*r.sn_sigma);
  if (r.exact_full_rank) j["exact_full_rank"] = *r.exact_full_rank;
  return j;
}

inline Json to_json(const SnMinMax& r) {
  return {{"k", r.k},
          {"samples", r.samples},
          {"degenerate", r.degenerate},
          {"max_est", Json::array({r.max_est.lo, r.max_est.hi})},
          {"min_est", Json::array({r.min_est.lo, r.min_est.hi})},
          {"sandwich_ok", r.sandwich_ok}};
}

inline Json to_json(const ExpansionChain& c) {
  Json j{{"rank_ab", c.rank_ab},
         {"rank_a", c.rank_a},
         {"rank_b", c.rank_b},
         {"sn", to_json(c.sn)},
         {"purification_tensor_rank", to_json(c.purification_rank)},
         {"first", Json::array({c.first.lo, c.first.hi})},
         {"max_rank", c.max_rank},
         {"chain_ok", c.chain_ok},
         {"is_ppt", c.is_ppt}};
  auto opt = [](const std::optional<bool>& b) { return b ? Json(*b) : Json("undetermined"); };
  j["eq_first"] = opt(c.eq_first);
  j["eq_second"] = opt(c.eq_second);
  j["eq_last"] = opt(c.eq_last);
  j["iv_ok"] = opt(c.iv_ok);
  j["v_ok"] = opt(c.v_ok);
  return j;
}

}  // namespace schmidt
