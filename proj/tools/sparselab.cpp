// sparselab command line: exponent calculus, weight characteristics, square
// functions, sparse families, sharpness sweeps, off-diagonal audits, and the
// acceptance gate. Exit codes: 0 success, 1 usage, 2 precondition, 3 internal.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sparselab/acceptance.hpp"

using nlohmann::json;
namespace sl = sparselab;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) {
  if (std::isinf(v)) return v > 0.0 ? json("inf") : json("-inf");
  if (std::isnan(v)) return json("nan");
  return json(v);
}

double parse_exponent(const std::string& s, const char* name) {
  if (s == "inf") return sl::infinity;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw sl::precondition_error(std::string(name) + ": cannot parse '" + s + "'");
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw sl::precondition_error("cannot open output file: " + path);
  f << text;
}

struct FnOpts {
  std::string kind = "random";
  std::uint64_t seed = 1;
  int kmin = 1, kmax = 32;
  double center = 0.5, width = 1.0 / 64.0;
};

void add_fn_options(CLI::App* cmd, FnOpts& o) {
  cmd->add_option("--function", o.kind, "test function: random, spike, or bump")
      ->check(CLI::IsMember({"random", "spike", "bump"}));
  cmd->add_option("--seed", o.seed, "rng seed (random function)");
  cmd->add_option("--kmin", o.kmin, "lowest mode (random function)");
  cmd->add_option("--kmax", o.kmax, "highest mode (random function)");
  cmd->add_option("--center", o.center, "center (spike/bump)");
  cmd->add_option("--width", o.width, "width (spike/bump)");
}

sl::SampledFunction make_function(const FnOpts& o, int n) {
  const auto un = static_cast<std::size_t>(n);
  if (o.kind == "random") {
    std::mt19937_64 rng(o.seed);
    return sl::random_band_limited(rng, un, o.kmin, o.kmax);
  }
  if (o.kind == "spike") return sl::spike(un, o.center, o.width);
  if (o.kind == "bump") return sl::smooth_bump(un, o.center, o.width);
  throw sl::precondition_error("unknown function kind: " + o.kind);
}

json fn_config(const FnOpts& o, int n) {
  json c{{"function", o.kind}, {"n", n}};
  if (o.kind == "random") {
    c["seed"] = o.seed;
    c["kmin"] = o.kmin;
    c["kmax"] = o.kmax;
  } else {
    c["center"] = jnum(o.center);
    c["width"] = jnum(o.width);
  }
  return c;
}

sl::SquareFunctionKind parse_kind(const std::string& k, double alpha) {
  if (k == "g") return sl::kind_g();
  if (k == "G") return sl::kind_G();
  if (k == "n") return sl::kind_n(alpha);
  throw sl::precondition_error("unknown square function kind: " + k);
}

json interval_json(const sl::Interval& i) { return json::array({jnum(i.lo), jnum(i.hi)}); }

json witness_runs(const std::vector<std::uint8_t>& witness) {
  json runs = json::array();
  int start = -1;
  const int n = static_cast<int>(witness.size());
  for (int j = 0; j <= n; ++j) {
    const bool on = j < n && witness[static_cast<std::size_t>(j)] != 0;
    if (on && start < 0) start = j;
    if (!on && start >= 0) {
      runs.push_back(json::array({start, j}));
      start = -1;
    }
  }
  return runs;
}

sl::SparseFamily family_from_json(const json& j) {
  sl::SparseFamily fam;
  fam.grid_size = j.at("grid_size").get<int>();
  fam.truncated = j.at("truncated").get<bool>();
  for (const auto& m : j.at("members")) {
    sl::SparseMember member;
    member.interval.level = m.at("level").get<int>();
    member.interval.index = m.at("index").get<std::int64_t>();
    member.witness.assign(static_cast<std::size_t>(fam.grid_size), 0);
    for (const auto& run : m.at("witness_runs")) {
      const int a = run.at(0).get<int>(), b = run.at(1).get<int>();
      if (a < 0 || b > fam.grid_size || a >= b)
        throw sl::precondition_error("family file: bad witness run");
      for (int x = a; x < b; ++x) member.witness[static_cast<std::size_t>(x)] = 1;
    }
    fam.members.push_back(std::move(member));
  }
  return fam;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"numerical laboratory for sparse domination of heat square functions"};
  app.require_subcommand(1);
  int exit_code = 0;

  // exponents
  double ex_p0 = 1.0, ex_p = 3.0, ex_q = 0.0;
  std::string ex_q0 = "4", ex_out;
  auto* exponents = app.add_subcommand("exponents", "exponent profile for (p0, q0, p)");
  exponents->add_option("--p0", ex_p0, "lower endpoint, in [1,2)")->required();
  exponents->add_option("--q0", ex_q0, "upper endpoint, number or 'inf'")->required();
  exponents->add_option("--p", ex_p, "evaluation exponent, in (p0,q0)")->required();
  exponents->add_option("--q", ex_q, "optional second exponent for beta(p,q)");
  exponents->add_option("--out", ex_out, "output file (default stdout)");
  exponents->callback([&]() {
    const double q0 = parse_exponent(ex_q0, "q0");
    const auto prof = sl::make_profile(ex_p0, q0, ex_p);
    json out{{"config", {{"p0", jnum(ex_p0)}, {"q0", jnum(q0)}, {"p", jnum(ex_p)}}},
             {"profile",
              {{"p_prime", jnum(prof.p_prime)},
               {"q0_star", jnum(prof.q0_star)},
               {"p_star", jnum(prof.p_star)},
               {"r", jnum(prof.r)},
               {"gamma", jnum(prof.gamma)},
               {"phi", jnum(prof.phi)},
               {"critical", jnum(prof.critical)},
               {"omega", jnum(prof.omega)}}}};
    if (exponents->count("--q") > 0) {
      out["config"]["q"] = jnum(ex_q);
      out["beta"] = jnum(sl::beta(ex_p, ex_q, ex_p0, q0));
    }
    emit(out.dump(2) + "\n", ex_out);
  });

  // weight-char
  double wc_power = 0.5, wc_p = 2.0, wc_rh = 0.0;
  int wc_depth = 12;
  bool wc_noshift = false;
  std::string wc_file, wc_out;
  auto* wchar_cmd = app.add_subcommand("weight-char", "A_p / RH_q characteristics over the scan family");
  auto* wc_power_opt = wchar_cmd->add_option("--power", wc_power, "power weight x^a");
  auto* wc_file_opt = wchar_cmd->add_option("--file", wc_file, "grid weight, one sample per line");
  wc_power_opt->excludes(wc_file_opt);
  wchar_cmd->add_option("--p", wc_p, "A_p exponent, > 1")->required();
  wchar_cmd->add_option("--rh", wc_rh, "also compute RH_q at this q (>= 1)");
  wchar_cmd->add_option("--depth", wc_depth, "scan family depth");
  wchar_cmd->add_flag("--no-shift", wc_noshift, "drop the shifted lattice from the scan");
  wchar_cmd->add_option("--out", wc_out, "output file (default stdout)");
  wchar_cmd->callback([&]() {
    sl::Weight w = sl::PowerWeight{wc_power};
    json wcfg;
    if (wchar_cmd->count("--file") > 0) {
      std::ifstream in(wc_file);
      if (!in) throw sl::precondition_error("cannot open weight file: " + wc_file);
      std::vector<double> samples;
      double v;
      while (in >> v) samples.push_back(v);
      w = sl::GridWeight{sl::SampledFunction{std::move(samples)}};
      wcfg = json{{"file", wc_file}, {"samples", std::get<sl::GridWeight>(w).w.size()}};
    } else {
      wcfg = json{{"power", jnum(wc_power)}};
    }
    const auto scan = sl::make_scan_family(wc_depth, !wc_noshift);
    json out{{"config",
              {{"weight", wcfg},
               {"p", jnum(wc_p)},
               {"depth", wc_depth},
               {"shifted", !wc_noshift}}}};
    const auto ap = sl::ap_characteristic_report(w, wc_p, scan);
    out["ap"] = {{"value", jnum(ap.value)}, {"argmax", interval_json(ap.argmax)}};
    if (wchar_cmd->count("--rh") > 0) {
      out["config"]["rh"] = jnum(wc_rh);
      const auto rh = sl::rh_characteristic_report(w, wc_rh, scan);
      out["rh"] = {{"value", jnum(rh.value)}, {"argmax", interval_json(rh.argmax)}};
    }
    emit(out.dump(2) + "\n", wc_out);
  });

  // square
  FnOpts sq_fn;
  int sq_n = 4096, sq_tnodes = 400;
  double sq_alpha = 1.0, sq_tmin = 1e-8, sq_tmax = 1e2, sq_a = 0.0;
  std::string sq_kind = "g", sq_b = "inf", sq_format = "csv", sq_out;
  auto* square = app.add_subcommand("square", "sampled square function of a test function");
  add_fn_options(square, sq_fn);
  square->add_option("--n", sq_n, "grid size (power of two, >= 256)");
  square->add_option("--kind", sq_kind, "multiplier kind: g, G, or n")
      ->check(CLI::IsMember({"g", "G", "n"}));
  square->add_option("--alpha", sq_alpha, "order for kind n");
  square->add_option("--tmin", sq_tmin, "time grid lower end");
  square->add_option("--tmax", sq_tmax, "time grid upper end");
  square->add_option("--tnodes", sq_tnodes, "time grid node count");
  square->add_option("--tlo", sq_a, "truncation window start");
  square->add_option("--thi", sq_b, "truncation window end, number or 'inf'");
  square->add_option("--format", sq_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  square->add_option("--out", sq_out, "output file (default stdout)");
  square->callback([&]() {
    const double b = parse_exponent(sq_b, "thi");
    const auto grid = sl::make_time_grid(sq_tmin, sq_tmax, sq_tnodes);
    const auto kind = parse_kind(sq_kind, sq_alpha);
    const auto f = make_function(sq_fn, sq_n);
    const auto res = sl::truncated_square_function(f, kind, sq_a, b, grid);
    json config = fn_config(sq_fn, sq_n);
    config["kind"] = sq_kind;
    if (sq_kind == "n") config["alpha"] = jnum(sq_alpha);
    config["tmin"] = jnum(sq_tmin);
    config["tmax"] = jnum(sq_tmax);
    config["tnodes"] = sq_tnodes;
    config["tlo"] = jnum(sq_a);
    config["thi"] = jnum(b);
    double nf = 0.0, ns = 0.0;
    for (int j = 0; j < sq_n; ++j) {
      nf += f[j] * f[j];
      ns += res.s[j] * res.s[j];
    }
    nf = std::sqrt(nf / sq_n);
    ns = std::sqrt(ns / sq_n);
    if (sq_format == "json") {
      json out{{"config", config},
               {"l2_input", jnum(nf)},
               {"l2_square", jnum(ns)},
               {"l2_ratio", jnum(nf > 0.0 ? ns / nf : 0.0)},
               {"band_warning", res.band_warning}};
      emit(out.dump(2) + "\n", sq_out);
      return;
    }
    std::ostringstream os;
    os << "# config " << config.dump() << "\n";
    if (res.band_warning) os << "# band_warning 1\n";
    os << "x,f,s\n";
    for (int j = 0; j < sq_n; ++j)
      os << fmt17(f.x(j)) << "," << fmt17(f[j]) << "," << fmt17(res.s[j]) << "\n";
    emit(os.str(), sq_out);
  });

  // sparse-build
  FnOpts sb_fn;
  int sb_n = 2048, sb_depth = 6;
  double sb_p0 = 1.0, sb_eta = 0.0, sb_alpha = 1.0;
  std::string sb_q0 = "4", sb_kind = "g", sb_out;
  auto* sbuild = app.add_subcommand("sparse-build", "run the stopping-time construction");
  add_fn_options(sbuild, sb_fn);
  sbuild->add_option("--n", sb_n, "grid size (power of two, >= 256)");
  sbuild->add_option("--p0", sb_p0, "lower endpoint, in [1,2)");
  sbuild->add_option("--q0", sb_q0, "upper endpoint, number or 'inf'");
  sbuild->add_option("--kind", sb_kind, "multiplier kind: g, G, or n")
      ->check(CLI::IsMember({"g", "G", "n"}));
  sbuild->add_option("--alpha", sb_alpha, "order for kind n");
  sbuild->add_option("--eta", sb_eta, "stopping threshold, 0 = calibrate per node");
  sbuild->add_option("--max-depth", sb_depth, "recursion depth cap");
  sbuild->add_option("--out", sb_out, "output file (default stdout)");
  sbuild->callback([&]() {
    sl::SparseBuildConfig cfg;
    cfg.p0 = sb_p0;
    cfg.q0 = parse_exponent(sb_q0, "q0");
    cfg.kind = parse_kind(sb_kind, sb_alpha);
    cfg.eta = sb_eta;
    cfg.max_depth = sb_depth;
    const auto f = make_function(sb_fn, sb_n);
    const auto fam = sl::build_sparse(f, cfg);
    const auto ver = sl::verify_sparsity(fam);
    json config = fn_config(sb_fn, sb_n);
    config["p0"] = jnum(sb_p0);
    config["q0"] = jnum(cfg.q0);
    config["kind"] = sb_kind;
    config["eta"] = jnum(sb_eta);
    config["max_depth"] = sb_depth;
    json members = json::array();
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
      const auto& m = fam.members[i];
      members.push_back({{"level", m.interval.level},
                         {"index", m.interval.index},
                         {"witness_ratio", jnum(ver.ratios[i])},
                         {"witness_runs", witness_runs(m.witness)}});
    }
    json out{{"config", config},
             {"grid_size", fam.grid_size},
             {"truncated", fam.truncated},
             {"members", members},
             {"sparsity",
              {{"ok", ver.ok}, {"worst_ratio", jnum(ver.worst_ratio)}, {"disjoint", ver.disjoint}}}};
    if (!(sb_eta > 0.0)) {
      const auto cal = sl::eta_calibrate(f, sl::DyadicInterval{0, 0}, cfg);
      json trace = json::array();
      for (const auto& [eta, cnt] : cal.trace) trace.push_back(json::array({jnum(eta), cnt}));
      out["root_eta"] = {{"value", jnum(cal.eta)}, {"exceptional_cells", cal.count}, {"trace", trace}};
    }
    emit(out.dump(2) + "\n", sb_out);
  });

  // sparse-check
  FnOpts sc_fn;
  int sc_n = 2048;
  double sc_p0 = 1.0, sc_alpha = 1.0;
  std::string sc_q0 = "4", sc_kind = "g", sc_family, sc_out;
  auto* scheck = app.add_subcommand("sparse-check", "verify a stored family and its domination");
  add_fn_options(scheck, sc_fn);
  scheck->add_option("--family", sc_family, "family file from sparse-build")->required();
  scheck->add_option("--n", sc_n, "grid size of the regenerated function");
  scheck->add_option("--p0", sc_p0, "lower endpoint, in [1,2)");
  scheck->add_option("--q0", sc_q0, "upper endpoint, number or 'inf'");
  scheck->add_option("--kind", sc_kind, "multiplier kind: g, G, or n")
      ->check(CLI::IsMember({"g", "G", "n"}));
  scheck->add_option("--alpha", sc_alpha, "order for kind n");
  scheck->add_option("--out", sc_out, "output file (default stdout)");
  scheck->callback([&]() {
    std::ifstream in(sc_family);
    if (!in) throw sl::precondition_error("cannot open family file: " + sc_family);
    json jfam;
    try {
      in >> jfam;
    } catch (const json::exception& e) {
      throw sl::precondition_error(std::string("family file: ") + e.what());
    }
    const auto fam = family_from_json(jfam);
    if (fam.grid_size != sc_n)
      throw sl::precondition_error("family grid size does not match --n");
    sl::SparseBuildConfig cfg;
    cfg.p0 = sc_p0;
    cfg.q0 = parse_exponent(sc_q0, "q0");
    cfg.kind = parse_kind(sc_kind, sc_alpha);
    const auto f = make_function(sc_fn, sc_n);
    const auto ones = sl::constant_function(sc_n, 1.0);
    const auto ver = sl::verify_sparsity(fam);
    const auto dom = sl::domination_check(f, ones, fam, cfg);
    json config = fn_config(sc_fn, sc_n);
    config["family"] = sc_family;
    config["p0"] = jnum(sc_p0);
    config["q0"] = jnum(cfg.q0);
    config["kind"] = sc_kind;
    json out{{"config", config},
             {"sparsity",
              {{"ok", ver.ok}, {"worst_ratio", jnum(ver.worst_ratio)}, {"disjoint", ver.disjoint}}},
             {"domination",
              {{"lhs", jnum(dom.lhs)},
               {"rhs", jnum(dom.rhs)},
               {"ratio", jnum(dom.ratio)},
               {"band_warning", dom.band_warning}}}};
    emit(out.dump(2) + "\n", sc_out);
  });

  // sharpness-sweep
  double sw_p0 = 1.0, sw_p = 3.25;
  int sw_coarse = 6, sw_fine = 14, sw_depth = 12;
  bool sw_scan = false;
  std::string sw_q0 = "4", sw_format = "csv", sw_out;
  auto* sweep = app.add_subcommand("sharpness-sweep", "extremal-pair sweep over eps = 2^-k");
  sweep->add_option("--p0", sw_p0, "lower endpoint, in [1,2)")->required();
  sweep->add_option("--q0", sw_q0, "upper endpoint, number or 'inf'")->required();
  sweep->add_option("--p", sw_p, "evaluation exponent, > 2")->required();
  sweep->add_option("--eps-coarse", sw_coarse, "largest eps = 2^-coarse");
  sweep->add_option("--eps-fine", sw_fine, "smallest eps = 2^-fine");
  sweep->add_flag("--scan", sw_scan, "use the finite scan family instead of anchored closed forms");
  sweep->add_option("--scan-depth", sw_depth, "scan family depth (with --scan)");
  sweep->add_option("--format", sw_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sw_out, "output file (default stdout)");
  sweep->callback([&]() {
    const double q0 = parse_exponent(sw_q0, "q0");
    const auto ladder = sl::eps_ladder(sw_coarse, sw_fine);
    sl::ScanFamily scan;
    const sl::ScanFamily* sp = nullptr;
    if (sw_scan) {
      scan = sl::make_scan_family(sw_depth);
      sp = &scan;
    }
    const auto rep = sl::sharpness_sweep(sw_p0, q0, sw_p, ladder, !sw_scan, sp);
    json config{{"p0", jnum(sw_p0)}, {"q0", jnum(q0)},         {"p", jnum(sw_p)},
                {"eps_coarse", sw_coarse}, {"eps_fine", sw_fine}, {"scan", sw_scan}};
    if (sw_scan) config["scan_depth"] = sw_depth;
    json slopes{{"lhs_slope", jnum(rep.lhs_slope)},
                {"rhs_slope", jnum(rep.rhs_slope)},
                {"target", jnum(rep.target)},
                {"ratio_drift", jnum(rep.ratio_drift)},
                {"consistent", rep.consistent}};
    if (sw_format == "json") {
      json points = json::array();
      for (const auto& pt : rep.points)
        points.push_back({{"eps", jnum(pt.eps)},
                          {"lhs", jnum(pt.lhs)},
                          {"rhs", jnum(pt.rhs)},
                          {"ratio", jnum(pt.ratio)},
                          {"a_char", jnum(pt.a_char)},
                          {"rh_char", jnum(pt.rh_char)},
                          {"f_norm", jnum(pt.f_norm)},
                          {"g_norm", jnum(pt.g_norm)}});
      json out{{"config", config}, {"points", points}, {"slopes", slopes}};
      emit(out.dump(2) + "\n", sw_out);
      return;
    }
    std::ostringstream os;
    os << "# config " << config.dump() << "\n";
    os << "eps,lhs,rhs,ratio,a_char,rh_char,f_norm,g_norm\n";
    for (const auto& pt : rep.points)
      os << fmt17(pt.eps) << "," << fmt17(pt.lhs) << "," << fmt17(pt.rhs) << "," << fmt17(pt.ratio)
         << "," << fmt17(pt.a_char) << "," << fmt17(pt.rh_char) << "," << fmt17(pt.f_norm) << ","
         << fmt17(pt.g_norm) << "\n";
    os << "# slopes " << slopes.dump() << "\n";
    emit(os.str(), sw_out);
  });

  // offdiag-check
  double od_t = 1e-4, od_gap = 8.0, od_p0 = 1.0;
  std::string od_q0 = "4", od_out;
  auto* offdiag = app.add_subcommand("offdiag-check", "heat kernel off-diagonal decay audit");
  offdiag->add_option("--t", od_t, "time")->required();
  offdiag->add_option("--gap", od_gap, "requested gap in units of sqrt(t)");
  offdiag->add_option("--p0", od_p0, "lower endpoint");
  offdiag->add_option("--q0", od_q0, "upper endpoint, number or 'inf'");
  offdiag->add_option("--out", od_out, "output file (default stdout)");
  offdiag->callback([&]() {
    const double q0 = parse_exponent(od_q0, "q0");
    const auto pl = sl::place_offdiag(od_t, od_gap);
    const auto rep = sl::offdiag_audit(od_t, pl.i1, pl.i2, od_p0, q0);
    json out{{"config", {{"t", jnum(od_t)}, {"gap", jnum(od_gap)}, {"p0", jnum(od_p0)}, {"q0", jnum(q0)}}},
             {"i1", interval_json(pl.i1)},
             {"i2", interval_json(pl.i2)},
             {"d_requested", jnum(pl.d_requested)},
             {"d_achieved", jnum(pl.d_achieved)},
             {"empirical", jnum(rep.empirical)},
             {"bound", jnum(rep.bound)},
             {"ratio", jnum(rep.ratio)},
             {"ok", rep.ratio <= 1.0}};
    emit(out.dump(2) + "\n", od_out);
  });

  // acceptance
  std::uint64_t ac_seed = sl::kAcceptanceSeed;
  std::string ac_format = "text", ac_out;
  auto* acceptance = app.add_subcommand("acceptance", "run the acceptance gate (exits 2 on failure)");
  acceptance->add_option("--seed", ac_seed, "rng seed for the randomized criteria");
  acceptance->add_option("--format", ac_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  acceptance->add_option("--out", ac_out, "output file (default stdout)");
  acceptance->callback([&]() {
    const auto results = sl::run_acceptance(ac_seed);
    if (ac_format == "json") {
      json arr = json::array();
      for (const auto& r : results)
        arr.push_back({{"name", r.name}, {"pass", r.pass}, {"seconds", jnum(r.seconds)}, {"detail", r.detail}});
      json out{{"config", {{"seed", ac_seed}}}, {"results", arr}, {"all_passed", sl::all_passed(results)}};
      emit(out.dump(2) + "\n", ac_out);
    } else {
      std::ostringstream os;
      os << "# config seed=" << ac_seed << "\n";
      int passed = 0;
      for (const auto& r : results) {
        char t[32];
        std::snprintf(t, sizeof t, "%7.2fs", r.seconds);
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
        for (std::size_t i = r.name.size(); i < 22; ++i) os << ' ';
        os << t << "  " << r.detail << "\n";
        if (r.pass) ++passed;
      }
      os << "ACCEPTANCE: " << passed << "/" << results.size() << " criteria passed\n";
      emit(os.str(), ac_out);
    }
    if (!sl::all_passed(results)) exit_code = 2;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const sl::precondition_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const sl::internal_error& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
