// Acceptance runner: one PASS/FAIL line per criterion, with pinned
// tolerances and time limits. Usage: acceptance <path-to-schmidt-cli> [workdir]

#include "schmidt/certify.hpp"
#include "schmidt/multipartite.hpp"
#include "schmidt/states.hpp"
#include "schmidt/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <sys/wait.h>

using namespace schmidt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<Outcome()> run;
};

Budget budget(bool deep = false) {
  Budget b;
  b.seed = 7;
  b.deep = deep;
  return b;
}

Outcome from_suite(const SuiteResult& r, const std::vector<std::string>& checks = {}) {
  Outcome o{true, ""};
  for (const auto& c : r.checks) {
    if (!checks.empty() && std::find(checks.begin(), checks.end(), c.name) == checks.end()) continue;
    o.pass = o.pass && c.pass;
    o.detail += (o.detail.empty() ? "" : " ") + c.name + "=" + (c.pass ? "ok" : "FAIL");
  }
  for (const auto& name : checks)
    if (std::none_of(r.checks.begin(), r.checks.end(), [&](const Check& c) { return c.name == name; })) {
      o.pass = false;
      o.detail += " " + name + "=missing";
    }
  return o;
}

Outcome tiles_certification() {
  const ConstructedState c = construct({"tiles_state", {}});
  const DensityOp t = c.density();
  const Bipartition ab = Bipartition::first_vs_rest(2);
  const Budget bud = budget();
  const PptVerdict ppt = ppt_check(t, ab, bud.tol);
  const BiRank br = birank(t, ab, bud.tol);
  const bool algebraic = members_in_kernel(t.matrix(), c.upb) && !product_extension(c.upb, t.dims()).extendible;
  SearchOptions so = search_options(bud);
  so.restarts = 200;
  const RangeSearchResult rs = min_schmidt_in_range(t, 1, so);
  const DecompositionSearchResult ds = decomposition_search(t, 2, search_options(bud));
  const bool decomposed = ds.found && ds.decomposition->target_residual < 1e-10 && verify_decomposition(t, *ds.decomposition, 2, bud.tol);
  const SnBound sn = sn_bounds(t, ab, bud, c.upb);
  std::ostringstream d;
  d << "min_pt_eig=" << ppt.min_eig_gamma << " birank=(" << br.rank_rho << "," << br.rank_gamma << ")"
    << " ces_algebraic=" << algebraic << " range_search_found=" << rs.found << " best_tail=" << rs.best_penalty
    << " k2_residual=" << (ds.found ? ds.decomposition->target_residual : -1.0) << " sn=[" << sn.lo << "," << sn.hi << "]";
  const bool pass = ppt.min_eig_gamma >= -1e-9 && br == BiRank{4, 4} && algebraic && !rs.found && decomposed &&
                    sn.lo == 2 && sn.hi == 2;
  return {pass, d.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli, const std::filesystem::path& dir) {
  if (cli.empty()) return {false, "no CLI path given"};
  std::filesystem::create_directories(dir);
  const auto a = dir / "verify_all_1.json", b = dir / "verify_all_2.json";
  int codes[2];
  for (int i = 0; i < 2; ++i) {
    const auto out = i == 0 ? a : b;
    const std::string cmd = "\"" + cli + "\" verify all --seed 7 -o \"" + out.string() + "\" 2>/dev/null";
    const int st = std::system(cmd.c_str());
    codes[i] = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  }
  const std::string ta = slurp(a), tb = slurp(b);
  const bool same = !ta.empty() && ta == tb;
  std::ostringstream d;
  d << "exit=(" << codes[0] << "," << codes[1] << ") bytes=" << ta.size() << " identical=" << same;
  return {same && codes[0] == 0 && codes[1] == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::filesystem::path work = argc > 2 ? argv[2] : std::filesystem::temp_directory_path() / "schmidt_acceptance";
  VerifyOptions quick{budget(), false};
  VerifyOptions deep{budget(true), true};

  const std::vector<Criterion> criteria = {
      {1, "tiles certification", 10, tiles_certification},
      {2, "projection bounds", 30, [&] { return from_suite(verify_proj_bounds(quick), {"pure-full-rank-exact", "sandwich-corpus"}); }},
      {3, "overlap witness", 20, [&] { return from_suite(verify_th00(quick), {"isotropic-3-0.9", "phi-2", "phi-3", "phi-4", "maximally-mixed-3"}); }},
      {4, "jsn and tensor rank", 30, [&] { return from_suite(verify_jsn_sandwich(quick), {"jsn-example", "ghz-tensor-rank", "w-tensor-rank"}); }},
      {5, "projected-block counterexample", 60, [&] { return from_suite(verify_problems(quick), {"counterexample"}); }},
      {6, "expansion chain", 30, [&] { return from_suite(verify_expansion_chain(quick), {"chain-holds", "expansion-vi-tightness"}); }},
      {7, "tensor-power pipeline (deep)", 600, [&] { return from_suite(verify_snrho_n(deep), {"tiles-squared"}); }},
      {8, "perturbation stability", 10, [&] { return from_suite(verify_sn_stb(quick), {"bell-examples", "bisection-agrees"}); }},
      {9, "multipartite ppt harness", 20, [&] { return from_suite(verify_rank4(quick), {"shifts", "rank5-predicate"}); }},
      {10, "determinism", 600, [&] { return determinism(cli, work); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s  %-32s %7.2fs / %4.0fs  %s\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(), secs,
                c.limit_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
