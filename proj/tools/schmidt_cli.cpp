// schmidt: command-line front end.
//
// Exit codes: 0 success, 1 a check or certification failed, 2 bad input.

#include "CLI11.hpp"
#include "schmidt/verify.hpp"

#include <iostream>

using namespace schmidt;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Globals {
  std::uint64_t seed = 0;
  double tol = 0.0;  // 0 keeps the default relative rank / PSD tolerances
  int restarts = 32;
  int iters = 500;
  bool deep = false;
  std::string format = "json";
  std::string output;
};

/// Thrown to leave with exit code 1 after the report has been written.
struct CheckFailed {};

Budget make_budget(const Globals& g) {
  Budget b;
  b.seed = g.seed;
  b.restarts = g.restarts;
  b.overlap_restarts = g.restarts;
  b.iters = g.iters;
  b.deep = g.deep;
  if (g.tol > 0) {
    b.tol.rank = g.tol;
    b.tol.psd = g.tol;
  }
  return b;
}

void write_text(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw InputError("cannot write '" + g.output + "'");
  out << text;
}

// Table output: one "path: value" line per leaf.
void flatten_table(const Json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_table(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array()) && j.size() <= 64) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_table(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    std::string v = j.is_string() ? j.get<std::string>() : j.dump();
    if (v.size() > 160) v = v.substr(0, 157) + "...";
    os << prefix << ": " << v << "\n";
  }
}

void emit_report(const Globals& g, const std::vector<std::string>& command, Json results, double seconds,
                 const Budget& b) {
  Json report{{"command", command},
              {"format", 1},
              {"results", std::move(results)},
              {"seed", g.seed},
              {"tolerances", to_json(b.tol)},
              {"version", kVersion}};
  if (g.format == "table") {
    std::ostringstream os;
    flatten_table(report, "", os);
    os << "wall_time_s: " << seconds << "\n";
    write_text(g, os.str());
  } else {
    write_text(g, report.dump(2) + "\n");
    std::cerr << "wall time " << seconds << " s\n";
  }
}

LoadedState load(const std::string& path) { return parse_state_file(path); }

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError(std::string("bad integer list for ") + what + ": '" + s + "'");
    }
  }
  if (out.empty()) throw InputError(std::string("empty list for ") + what);
  return out;
}

Bipartition make_cut(const std::string& spec, std::size_t parties) {
  if (spec.empty()) return Bipartition::first_vs_rest(parties);
  return Bipartition(parse_int_list(spec, "--cut"), parties);
}

Side parse_side(const std::string& s) {
  if (s == "A" || s == "a") return Side::A;
  if (s == "B" || s == "b") return Side::B;
  throw InputError("side must be A or B");
}

// ---------------------------------------------------------------------------

Json cmd_construct(const Globals& g, const std::string& name, const std::vector<std::string>& params,
                   const std::string& from, bool list) {
  if (list) {
    Json arr = Json::array();
    for (const auto& e : state_registry()) {
      Json d = Json::object();
      for (const auto& [k, v] : e.defaults) d[k] = v;
      arr.push_back(Json{{"name", e.name}, {"description", e.description}, {"required", e.required}, {"defaults", d}});
    }
    return arr;
  }
  if (!from.empty()) {
    const LoadedState s = load(from);
    write_text(g, dump_state(encode_state(s.name, s.state, s.upb, s.metadata)));
    return nullptr;
  }
  if (name.empty()) throw InputError("construct: state name required (see --list)");
  StateRecipe r{name, {}};
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("construct: parameters look like key=value, got '" + kv + "'");
    try {
      r.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("construct: non-numeric value in '" + kv + "'");
    }
  }
  const auto& entry = registry_entry(name);
  if (entry.defaults.count("seed") && !r.params.count("seed")) r.params["seed"] = static_cast<double>(g.seed);
  const ConstructedState c = construct(r);
  Json p = Json::object();
  for (const auto& [k, v] : r.params) p[k] = v;
  const Json meta{{"recipe", {{"name", name}, {"params", p}}}, {"seed", g.seed}};
  write_text(g, dump_state(encode_state(c.name, c.state, c.upb, meta)));
  return nullptr;
}

Json cmd_analyze(const LoadedState& s, const Budget& b, const std::string& cut_spec) {
  const DensityOp rho = s.density();
  const Bipartition cut = make_cut(cut_spec, rho.dims().size());
  Json r;
  r["name"] = s.name;
  r["dims"] = rho.dims().values();
  r["pure"] = s.is_pure();
  r["trace"] = rho.trace();
  r["rank"] = numerical_rank(rho.matrix(), b.tol.rank);
  r["cut"] = {{"left", cut.left()}, {"right", cut.right()}};
  const DensityOp bip = to_bipartite(rho, cut);
  const LocalRanks lr = local_ranks(bip, b.tol);
  r["local_ranks"] = Json::array({lr.a, lr.b});
  r["birank"] = to_json(birank(rho, cut, b.tol));
  r["ppt"] = to_json(ppt_check(rho, cut, b.tol));
  r["reduction"] = to_json(reduction_check(rho, cut, b.tol));
  r["lowdim_separability"] = to_string(lowdim_separability(rho, cut, b.tol));
  const SnBound sb = sn_bounds(rho, cut, b, s.upb);
  r["sn"] = to_json(sb);
  r["eof_upper_bound_ebits"] = eof_bound(sb);
  if (rho.dims().size() > 2) r["all_bipartitions_ppt"] = multipartite_ppt_check(rho, b.tol).all_ppt;
  return r;
}

Json cmd_witness(const LoadedState& s, const Budget& b, const std::string& sigma_path) {
  const DensityOp rho = s.density();
  if (rho.dims().size() != 2) throw InputError("witness: bipartite state expected");
  Json r;
  const int m = rho.dims()[0], n = rho.dims()[1];
  const int k = std::max(m, n);
  const DensityOp sq = embed(rho, k, k, 0, 0);
  OverlapOptions oo;
  oo.restarts = b.overlap_restarts;
  oo.max_iters = b.iters;
  oo.seed = b.seed;
  const OverlapResult ov = max_entangled_overlap(sq, oo);
  r["overlap"] = to_json(ov);
  r["sn_lower_bound"] = sn_lower_from_overlap(ov.value, k);
  const ChoiMatrix c = reduction_choi(m);
  if (m == n) {
    const double p = pairing(rho.normalized(), c);
    r["reduction_pairing"] = p;
    r["reduction_fires"] = p < 0;
    if (!sigma_path.empty()) {
      const DensityOp sigma = load(sigma_path).density();
      if (!(p < 0)) throw PreconditionError("witness: reduction witness does not fire on the state");
      r["perturbation_margin"] = num(perturbation_margin(rho.normalized(), sigma.normalized(), c));
    }
  } else if (!sigma_path.empty()) {
    throw InputError("witness: --sigma needs equal local dimensions");
  }
  return r;
}

Json cmd_certify(const LoadedState& s, const Budget& b, const std::string& cut_spec, int k, bool bsn) {
  const DensityOp rho = s.density();
  const Bipartition cut = make_cut(cut_spec, rho.dims().size());
  Json r;
  if (bsn) {
    const BsnBound bb = bsn_bounds(rho, cut, b, s.upb);
    r["sn_rho"] = to_json(bb.sn_rho, true);
    r["sn_gamma"] = to_json(bb.sn_gamma, true);
    r["consistent"] = bb.consistent;
    return r;
  }
  if (k > 0) {
    const DensityOp bip = to_bipartite(rho, cut);
    const DecompositionSearchResult d = decomposition_search(bip, k, search_options(b));
    r["k"] = k;
    r["found"] = d.found;
    r["best_penalty"] = num(d.best_penalty);
    r["columns"] = d.columns;
    r["restarts_run"] = d.restarts_run;
    if (d.found) r["decomposition"] = to_json(*d.decomposition, true);
    return r;
  }
  const SnBound sb = sn_bounds(rho, cut, b, s.upb);
  r["sn"] = to_json(sb, true);
  r["eof_upper_bound_ebits"] = eof_bound(sb);
  return r;
}

Json cmd_project(const LoadedState& s, const Budget& b, const std::string& side_s, int rank, const std::string& keep,
                 bool two_copy, bool sweep, int minmax_k, int samples) {
  const DensityOp rho = s.density();
  if (rho.dims().size() != 2) throw InputError("project: bipartite state expected");
  const Side side = parse_side(side_s);
  const int m = rho.dims()[side == Side::A ? 0 : 1];
  Json r;
  if (sweep) {
    const RankSweep rs = rank_sweep(rho, samples, b);
    Json entries = Json::array();
    for (const auto& e : rs.entries) {
      Json ivs = Json::array();
      for (const auto& [lo, hi] : e.intervals) ivs.push_back(Json::array({lo, hi}));
      entries.push_back(Json{{"side", to_string(e.side)}, {"k", e.k}, {"intervals", ivs},
                             {"exact", std::vector<int>(e.exact.begin(), e.exact.end())}});
    }
    r["sweep"] = {{"sn_rho", iv(rs.sn_rho)}, {"entries", entries}, {"consistent", rs.consistent},
                  {"achieved_a", std::vector<int>(rs.achieved_a.begin(), rs.achieved_a.end())},
                  {"achieved_b", std::vector<int>(rs.achieved_b.begin(), rs.achieved_b.end())}};
    return r;
  }
  if (minmax_k > 0) {
    r["snminmax"] = to_json(snminmax_estimate(rho, minmax_k, samples, b, side));
    return r;
  }
  std::optional<LocalProjector> p;
  if (!keep.empty()) {
    p = LocalProjector::coordinate(m, parse_int_list(keep, "--keep"));
    for (int i : parse_int_list(keep, "--keep"))
      if (i < 0 || i >= m) throw InputError("project: --keep index out of range");
  } else {
    if (rank < 1 || rank > m) throw InputError("project: --rank must be in [1, " + std::to_string(m) + "]");
    Rng rng = stream_rng(b.seed, 0x9e37);
    p = LocalProjector::haar(m, rank, rng);
  }
  r["side"] = to_string(side);
  r["projector_rank"] = p->rank();
  if (two_copy) {
    const TwoCopyReport t = two_copy_bound_check(rho, *p, side, b);
    r["two_copy"] = {{"k", t.k}, {"m", t.m}, {"sn_rho", iv(t.sn_rho)}, {"sn_rho2", iv(t.sn_rho2)}, {"sn_sigma", iv(t.sn_sigma)},
                     {"sn_sigma2", iv(t.sn_sigma2)}, {"degenerate", t.degenerate}, {"two_tensors_ok", t.two_tensors_ok},
                     {"two_tensors2_ok", t.two_tensors2_ok}};
    if (!t.two_tensors_ok || !t.two_tensors2_ok) throw CheckFailed{};
    return r;
  }
  const ProjBoundReport rep = check_proj_bounds(rho, *p, side, b);
  r["report"] = to_json(rep);
  if (!rep.lower_ok || !rep.upper_ok || (rep.exact_full_rank && !*rep.exact_full_rank)) r["violation"] = true;
  return r;
}

Json cmd_multi(const LoadedState& s, const Budget& b) {
  CpOptions cp;
  cp.seed = b.seed;
  Json r;
  r["dims"] = s.dims().values();
  if (s.is_pure()) {
    const PureState psi = std::get<PureState>(s.state);
    r["jsn"] = jsn(psi, b.tol).ranks;
    r["tensor_rank"] = to_json(tensor_rank_bounds(psi, cp, b.tol), true);
    return r;
  }
  const DensityOp rho = s.density();
  if (rho.dims().size() == 2) {
    r["expansion_chain"] = to_json(expansion_chain_check(rho, b, cp, s.upb));
    return r;
  }
  const MultipartitePpt mp = multipartite_ppt_check(rho, b.tol);
  Json cuts = Json::array();
  for (const auto& c : mp.cuts) cuts.push_back(Json{{"left", c.cut.left()}, {"ppt", to_json(c.verdict)}});
  r["bipartitions"] = cuts;
  r["all_ppt"] = mp.all_ppt;
  const MultiSnBound ms = multipartite_sn_bounds(rho, b, s.upb, cp);
  Json per = Json::array();
  for (const auto& c : ms.cuts) per.push_back(iv(c));
  r["sn"] = {{"lo", ms.lo}, {"hi", ms.hi}, {"lo_certificate", ms.lo_certificate}, {"per_cut", per}};
  return r;
}

Json cmd_verify(const std::string& suite, const Budget& b, bool deep, double& seconds_out) {
  VerifyOptions o;
  o.budget = b;
  o.deep = deep;
  const auto results = run_suites(suite, o);
  Json arr = Json::array();
  bool all = true;
  for (const auto& s : results) {
    arr.push_back(to_json(s));
    all = all && s.passed();
    seconds_out += s.seconds;
    std::cerr << (s.passed() ? "PASS " : "FAIL ") << s.id << " (" << s.seconds << " s)\n";
  }
  return Json{{"suite", suite}, {"deep", deep}, {"passed", all}, {"suites", arr}};
}

/// Random boundary-PPT states on M x N: mix a random state with white noise
/// up to the PPT boundary, then bound sn(rho) and sn(rho^Gamma).
Json cmd_explore_bsn(const Budget& b, int m, int n, int samples) {
  if (m < 2 || n < 2) throw InputError("explore-bsn: dims must be at least 2");
  check_capacity(static_cast<std::size_t>(m) * n);
  const DimVec d{m, n};
  const Mat white = Mat::Identity(m * n, m * n) / static_cast<double>(m * n);
  Json rows = Json::array();
  int candidates = 0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(b.seed, 0xb5 + static_cast<std::uint64_t>(i));
    const int rank = std::uniform_int_distribution<int>(2, m * n - 1)(rng);
    const Mat r0 = random_mixed(d, rank, rng).normalized().matrix();
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 40; ++it) {
      const double t = 0.5 * (lo + hi);
      (ppt_check(DensityOp::trusted(t * r0 + (1 - t) * white, d), b.tol).is_ppt ? lo : hi) = t;
    }
    const DensityOp rho = DensityOp::trusted(lo * r0 + (1 - lo) * white, d);
    const BsnBound bb = bsn_bounds(rho, Bipartition::first_vs_rest(2), b);
    const bool cand = bb.sn_rho.lo > bb.sn_gamma.hi || bb.sn_gamma.lo > bb.sn_rho.hi;
    candidates += cand;
    rows.push_back(Json{{"sample", i}, {"mix", lo}, {"sn_rho", iv(bb.sn_rho)}, {"sn_gamma", iv(bb.sn_gamma)}, {"candidate", cand}});
  }
  return Json{{"dims", Json::array({m, n})}, {"samples", rows}, {"certified_asymmetric", candidates}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt-number bounds and certificates for bipartite and multipartite states", "schmidt"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every stochastic step");
  app.add_option("--tol", g.tol, "Relative rank/PSD tolerance (default 1e-9)")->check(CLI::PositiveNumber);
  app.add_option("--restarts", g.restarts, "Search restarts")->check(CLI::PositiveNumber);
  app.add_option("--iters", g.iters, "Iterations per restart")->check(CLI::NonNegativeNumber);
  app.add_flag("--deep", g.deep, "Enable slow checks");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("-o,--output", g.output, "Write output to this path");

  std::string name, from, state, cut, sigma, side = "A", keep, suite = "all";
  std::vector<std::string> params;
  bool list = false, bsn = false, two_copy = false, sweep = false;
  int k = 0, rank = 0, minmax_k = 0, samples = 10, em = 3, en = 4;

  auto* c_construct = app.add_subcommand("construct", "Build a named state and write a state file");
  c_construct->add_option("name", name, "State name");
  c_construct->add_option("params", params, "Parameters as key=value");
  c_construct->add_option("--from", from, "Re-serialize an existing state file");
  c_construct->add_flag("--list", list, "List the available states");

  auto* c_analyze = app.add_subcommand("analyze", "Ranks, PPT, reduction and Schmidt-number bounds");
  c_analyze->add_option("state", state, "State file")->required();
  c_analyze->add_option("--cut", cut, "Comma-separated parties on the left");

  auto* c_witness = app.add_subcommand("witness", "Maximally-entangled overlap and reduction witness");
  c_witness->add_option("state", state, "State file")->required();
  c_witness->add_option("--sigma", sigma, "Perturbation state for the stability margin");

  auto* c_certify = app.add_subcommand("certify", "Schmidt-number interval with certificates");
  c_certify->add_option("state", state, "State file")->required();
  c_certify->add_option("--cut", cut, "Comma-separated parties on the left");
  c_certify->add_option("--k", k, "Only search for a decomposition of Schmidt rank <= k")->check(CLI::PositiveNumber);
  c_certify->add_flag("--bsn", bsn, "Bound sn(rho) and sn(rho^Gamma)");

  auto* c_project = app.add_subcommand("project", "Local projections and their Schmidt-number bounds");
  c_project->add_option("state", state, "State file")->required();
  c_project->add_option("--side", side, "A or B");
  c_project->add_option("--rank", rank, "Rank of a random projector");
  c_project->add_option("--keep", keep, "Coordinate projector onto these basis indices");
  c_project->add_flag("--two-copy", two_copy, "Check the two-copy bounds");
  c_project->add_flag("--sweep", sweep, "Sweep all kernel dimensions on both sides");
  c_project->add_option("--minmax", minmax_k, "Sampled extremes for this kernel dimension");
  c_project->add_option("--samples", samples, "Projectors per kernel dimension")->check(CLI::PositiveNumber);

  auto* c_multi = app.add_subcommand("multi", "Joint Schmidt number, tensor rank, expansion chain");
  c_multi->add_option("state", state, "State file")->required();

  auto* c_verify = app.add_subcommand("verify", "Run a property suite");
  c_verify->add_option("suite", suite, "Suite id or 'all'");

  auto* c_explore = app.add_subcommand("explore-bsn", "Random search for PPT states with sn(rho) != sn(rho^Gamma)");
  c_explore->add_option("--m", em, "Dimension of A");
  c_explore->add_option("--n", en, "Dimension of B");
  c_explore->add_option("--samples", samples, "Number of random states")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // Echo the command without the output path so reruns compare byte for byte.
  std::vector<std::string> command;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "-o" || a == "--output") {
      ++i;
      continue;
    }
    if (a.rfind("--output=", 0) == 0) continue;
    command.push_back(a);
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    const Budget b = make_budget(g);
    if (c_construct->parsed()) {
      Json out = cmd_construct(g, name, params, from, list);
      if (list) emit_report(g, command, out, elapsed(), b);
      return 0;
    }
    Json results;
    int code = 0;
    double seconds = 0.0;
    if (c_analyze->parsed()) {
      results = cmd_analyze(load(state), b, cut);
    } else if (c_witness->parsed()) {
      results = cmd_witness(load(state), b, sigma);
    } else if (c_certify->parsed()) {
      results = cmd_certify(load(state), b, cut, k, bsn);
      if (k > 0 && !results["found"].get<bool>()) code = 1;
    } else if (c_project->parsed()) {
      try {
        results = cmd_project(load(state), b, side, rank, keep, two_copy, sweep, minmax_k, samples);
      } catch (const CheckFailed&) {
        std::cerr << "two-copy bound violated\n";
        return 1;
      }
      if (results.contains("violation") ||
          (results.contains("sweep") && !results["sweep"]["consistent"].get<bool>()) ||
          (results.contains("snminmax") && !results["snminmax"]["sandwich_ok"].get<bool>()))
        code = 1;
    } else if (c_multi->parsed()) {
      results = cmd_multi(load(state), b);
      if (results.contains("expansion_chain") && !results["expansion_chain"]["chain_ok"].get<bool>()) code = 1;
    } else if (c_verify->parsed()) {
      results = cmd_verify(suite, b, g.deep, seconds);
      if (!results["passed"].get<bool>()) code = 1;
    } else if (c_explore->parsed()) {
      results = cmd_explore_bsn(b, em, en, samples);
    }
    emit_report(g, command, results, elapsed(), b);
    return code;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
