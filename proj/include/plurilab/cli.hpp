#pragma once

// Command-line front end. run() never exits the process: it returns
// 0 when every checked verdict holds, 1 when one fails, 2 on usage or domain
// errors.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plurilab/capacity.hpp"
#include "plurilab/descriptor.hpp"
#include "plurilab/disc_example.hpp"
#include "plurilab/estimates.hpp"
#include "plurilab/global_radial.hpp"
#include "plurilab/measure.hpp"
#include "plurilab/output.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/subextension.hpp"
#include "plurilab/suite.hpp"

namespace plurilab::cli {

/// "lo:hi:count" log-spaced, or "lo:hi:count:lin".
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  bool log = true;

  std::vector<double> points() const {
    if (log) return log_grid(lo, hi, count);
    require(count >= 1 && hi >= lo, ErrorCode::Domain, "linear grid needs count >= 1 and lo <= hi");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
      g[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return g;
  }
};

inline GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  require(parts.size() == 3 || parts.size() == 4, ErrorCode::Parse, "grid must be lo:hi:count[:lin|:log]");
  GridSpec g;
  try {
    g.lo = std::stod(parts[0]);
    g.hi = std::stod(parts[1]);
    g.count = static_cast<std::size_t>(std::stoul(parts[2]));
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "bad grid '" + text + "'");
  }
  if (parts.size() == 4) {
    require(parts[3] == "lin" || parts[3] == "log", ErrorCode::Parse, "grid spacing must be lin or log");
    g.log = parts[3] == "log";
  }
  return g;
}

struct RunConfig {
  std::string command;
  std::string profile;
  int n = 2;
  double rho = 1.0;
  double p = 1.0;
  double c = 1.0;
  double r = 0.5;
  double alpha = 0.5;
  double k = 1.0;
  double t_ball = -1.0;
  double floor = 0.0;
  double t_max = 0.0;
  double outer_slope = -1.0;
  int J = 10;
  int N = 64;
  std::vector<double> t;
  std::vector<std::string> candidates;
  std::string s_grid = "1e-3:1e6:1000";
  std::string t_grid;
  std::string curve_file;
  std::string out;
  std::string format = "csv";
  bool samples = false;
  bool timings = false;
  double tol = kReportTol;
};

struct Result {
  Table table;
  std::vector<InequalityReport> reports;
};

namespace detail {

inline void validate(const RunConfig& cfg) {
  require(cfg.n >= 1, ErrorCode::Domain, "n must be an integer >= 1");
  require(cfg.rho > 0.0 && cfg.rho <= 1.0, ErrorCode::Domain, "rho must lie in (0,1]");
  require(cfg.p >= 0.0, ErrorCode::Domain, "p must be >= 0");
  require(cfg.tol >= 0.0, ErrorCode::Domain, "tolerance must be >= 0");
  require(cfg.format == "csv" || cfg.format == "json", ErrorCode::Domain, "format must be csv or json");
}

inline Profile need_profile(const RunConfig& cfg) {
  require(!cfg.profile.empty(), ErrorCode::Domain, "--profile is required");
  return parse_profile(cfg.profile);
}

inline std::vector<double> need_t(const RunConfig& cfg) {
  require(!cfg.t.empty(), ErrorCode::Domain, "--t is required");
  return cfg.t;
}

inline std::vector<InequalityReport> as_reports(InequalityReport r) { return {std::move(r)}; }

inline Table scalar_table(std::vector<std::string> columns, std::vector<Cell> row) {
  Table t{std::move(columns), {}};
  t.add(std::move(row));
  return t;
}

inline CapacityCurve read_curve_csv(const std::string& path, int n) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Domain, "cannot read curve file " + path);
  std::vector<double> s, chi;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '.') continue;
    }
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::Parse, "curve rows must be s,chi");
    try {
      s.push_back(std::stod(line.substr(0, comma)));
      chi.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "bad curve row '" + line + "'");
    }
  }
  return sampled_curve(std::move(s), std::move(chi), n);
}

}  // namespace detail

inline Result dispatch(const RunConfig& cfg) {
  using namespace detail;
  const std::string& cmd = cfg.command;
  Result res;

  if (cmd == "eval") {
    const Profile f = need_profile(cfg);
    res.table = Table{{"t", "f", "left_slope", "right_slope"}, {}};
    for (double t : need_t(cfg)) res.table.add({t, eval(f, t), left_derivative(f, t), right_derivative(f, t)});
  } else if (cmd == "ma-mass") {
    const Profile f = need_profile(cfg);
    res.table = Table{{"t", "mass_closed", "mass_open"}, {}};
    for (double t : need_t(cfg))
      res.table.add({t, mass_closed_ball(f, cfg.n, t), mass_open_ball(f, cfg.n, t)});
  } else if (cmd == "energy") {
    const Profile f = need_profile(cfg);
    res.table = scalar_table({"n", "p", "t_max", "energy"},
                             {double(cfg.n), cfg.p, cfg.t_max, p_energy(f, cfg.n, cfg.p, cfg.t_max)});
  } else if (cmd == "lelong") {
    res.table = scalar_table({"lelong"}, {lelong_number(need_profile(cfg))});
  } else if (cmd == "sweep") {
    const Profile f = need_profile(cfg);
    const Profile g = sweep(f, cfg.rho);
    if (cfg.t_grid.empty()) {
      res.table = scalar_table({"descriptor", "total_mass"}, {to_descriptor(g), total_mass(g, cfg.n)});
    } else {
      res.table = Table{{"t", "f", "swept"}, {}};
      for (double t : parse_grid(cfg.t_grid).points()) res.table.add({t, eval(f, t), eval(g, t)});
    }
  } else if (cmd == "capacity ball") {
    res.table = scalar_table({"r", "n", "capacity"}, {cfg.r, double(cfg.n), ball_capacity(cfg.r, cfg.n)});
  } else if (cmd == "capacity curve") {
    const auto curve = sublevel_capacity_curve(need_profile(cfg), cfg.rho, cfg.n);
    res.table = Table{{"s", "chi", "chi_pow_inv_n"}, {}};
    for (double s : parse_grid(cfg.s_grid).points()) res.table.add({s, curve(s), curve.root(s)});
  } else if (cmd == "capacity phi-bounds") {
    std::vector<Profile> cands;
    for (const auto& d : cfg.candidates) cands.push_back(parse_profile(d));
    const auto b = phi_capacity_bounds(need_profile(cfg), cfg.rho, cfg.n, cands);
    res.table = scalar_table({"lower", "mid", "upper_certified", "sandwich_holds"},
                             {b.lower, b.mid, std::string(b.upper_certified ? "true" : "false"),
                              std::string(b.sandwich_holds ? "true" : "false")});
    InequalityReport r;
    r.name = "phi-capacity-sandwich";
    r.samples.push_back({cfg.rho, b.lower, b.mid, "lower<=mid"});
    finalize(r, cfg.tol);
    if (!b.upper_certified) {
      r.verdict = Verdict::Fails;
      r.note = "upper bound not attained by the floored sweep";
    }
    res.reports.push_back(r);
  } else if (cmd == "capacity class") {
    const auto c = class_membership(need_profile(cfg), cfg.rho, cfg.n);
    res.table = scalar_table({"in_F", "in_Fa", "p_sup", "swept_mass", "origin_atom", "decay_exponent"},
                             {std::string(c.in_F ? "true" : "false"), std::string(c.in_Fa ? "true" : "false"),
                              c.p_sup, c.swept_mass, c.origin_atom, c.decay_exponent});
  } else if (cmd == "check prop31") {
    const auto grid = parse_grid(cfg.s_grid).points();
    res.reports = as_reports(check_prop31(need_profile(cfg), cfg.rho, cfg.n, cfg.p, grid, cfg.tol));
  } else if (cmd == "check compest") {
    const auto grid = parse_grid(cfg.s_grid).points();
    res.reports = as_reports(check_compest(need_profile(cfg), cfg.rho, cfg.n, grid, cfg.tol));
  } else if (cmd == "check fa") {
    const auto fa = classify_Fa(need_profile(cfg), cfg.rho, cfg.n);
    InequalityReport r;
    r.name = "fa-equivalence";
    r.samples.push_back({cfg.rho, fa.no_mass_at_poles == fa.capacity_decay ? 0.0 : 1.0, 0.0, "(ii)<=>(iii)"});
    finalize(r, 0.0);
    r.fitted_constant = fa.decay_exponent;
    r.note = std::string("i=") + (fa.absolutely_continuous ? "1" : "0") + " ii=" + (fa.no_mass_at_poles ? "1" : "0") +
             " iii=" + (fa.capacity_decay ? "1" : "0");
    res.reports.push_back(r);
  } else if (cmd == "check m-est") {
    res.reports = as_reports(mass_capacity_bound(need_profile(cfg), cfg.n, cfg.t_ball, cfg.floor, cfg.tol));
  } else if (cmd == "fit-exponent") {
    const auto g = parse_grid(cfg.s_grid);
    const CapacityCurve curve = cfg.curve_file.empty() ? sublevel_capacity_curve(need_profile(cfg), cfg.rho, cfg.n)
                                                       : read_curve_csv(cfg.curve_file, cfg.n);
    const auto fit = fit_decay_exponent(curve, g.lo, g.hi, g.count);
    res.table = scalar_table({"q", "intercept", "residual"}, {fit.q, fit.intercept, fit.residual});
  } else if (cmd == "subextend") {
    const auto field = build_subextension(need_profile(cfg), cfg.rho, cfg.n, cfg.c);
    std::vector<double> ts = cfg.t;
    if (!cfg.t_grid.empty()) ts = parse_grid(cfg.t_grid).points();
    require(!ts.empty(), ErrorCode::Domain, "--eval or --t-grid is required");
    res.table = field_table(field, ts);
  } else if (cmd == "h-check") {
    const bool ok = h_condition(PowerH{cfg.k, cfg.alpha}, cfg.n);
    res.table = scalar_table({"k", "alpha", "n", "condition"},
                             {cfg.k, cfg.alpha, double(cfg.n), std::string(ok ? "true" : "false")});
  } else if (cmd == "global-subextend") {
    auto g = global_subextension(need_profile(cfg), cfg.n);
    if (cfg.outer_slope >= 0.0) g = with_outer_slope(g, cfg.outer_slope);
    const auto id = verify_mass_identity(g, cfg.n);
    res.reports.push_back(id.report);
    if (!cfg.t_grid.empty()) res.table = global_profile_table(g, parse_grid(cfg.t_grid).points());
    else res.table = scalar_table({"gamma", "junction", "sphere_atom"}, {g.gamma, g.junction, id.sphere_atom});
  } else if (cmd == "disc-example moments") {
    const auto sys = GreenPoleSystem::default_schedule(cfg.J);
    res.table = Table{{"j", "weight", "log_gap", "moment"}, {}};
    for (std::size_t j = 0; j < sys.size(); ++j)
      res.table.add({double(j + 1), sys.weights[j], sys.poles[j].log_gap, riesz_moment(sys.poles[j])});
  } else if (cmd == "disc-example sum") {
    res.table = obstruction_table(GreenPoleSystem::default_schedule(cfg.J));
  } else if (cmd == "disc-example field") {
    res.table = heatmap_table(GreenPoleSystem::default_schedule(cfg.J), cfg.N);
  } else if (cmd == "suite") {
    res.reports = run_suite(cfg.tol);
  } else {
    fail(ErrorCode::Domain, "no command given");
  }
  return res;
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["profile"] = cfg.profile;
  j["n"] = cfg.n;
  j["rho"] = cfg.rho;
  j["p"] = cfg.p;
  j["c"] = cfg.c;
  j["s_grid"] = cfg.s_grid;
  j["t_grid"] = cfg.t_grid;
  j["t"] = cfg.t;
  j["tol"] = cfg.tol;
  return j;
}

namespace detail {

// key = value lines; '#' starts a comment.
inline std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Domain, "cannot read config file " + path);
  std::vector<std::string> args;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::Parse, "config lines must be key = value: '" + line + "'");
    args.push_back("--" + trim(line.substr(0, eq)));
    args.push_back(trim(line.substr(eq + 1)));
  }
  return args;
}

inline std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

}  // namespace detail

/// args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("PLURILAB_TOL")) {
    try {
      cfg.tol = std::stod(env);
    } catch (const std::exception&) {
      err << "error: PLURILAB_TOL is not a number\n";
      return 2;
    }
  }

  CLI::App app{"Radial pluripotential theory toolkit", "plurilab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "Config file of key = value lines; entries override flags");
  app.add_option("--profile", cfg.profile, "Profile descriptor, e.g. power:1,1/3");
  app.add_option("--n", cfg.n, "Complex dimension");
  app.add_option("--rho", cfg.rho, "Radius of omega / sweep ball");
  app.add_option("--p", cfg.p, "Energy exponent");
  app.add_option("--c", cfg.c, "Subextension cut");
  app.add_option("--r", cfg.r, "Ball radius");
  app.add_option("--alpha", cfg.alpha, "Exponent of h(x) = -k(-x)^alpha");
  app.add_option("--k", cfg.k, "Scale of h");
  app.add_option("--t-ball", cfg.t_ball, "Log-radius of the ball for m-est");
  app.add_option("--floor", cfg.floor, "Floor level for m-est (0: none)");
  app.add_option("--t-max", cfg.t_max, "Truncation of the energy integral");
  app.add_option("--outer-slope", cfg.outer_slope, "Override the outer slope of the global profile");
  app.add_option("--J", cfg.J, "Number of poles");
  app.add_option("--N", cfg.N, "Lattice size of the field heatmap");
  app.add_option("--t,--eval", cfg.t, "Log-radius (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->allow_extra_args(false);
  app.add_option("--candidate", cfg.candidates, "Candidate profile for phi-bounds (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->allow_extra_args(false);
  app.add_option("--s-grid,--s-range", cfg.s_grid, "Level grid lo:hi:count[:lin]");
  app.add_option("--t-grid", cfg.t_grid, "Log-radius grid lo:hi:count[:lin]");
  app.add_option("--curve", cfg.curve_file, "CSV file of s,chi samples");
  app.add_option("--out", cfg.out, "Write output to this path instead of stdout");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--tol", cfg.tol, "Relative tolerance of inequality verdicts");
  app.add_flag("--samples", cfg.samples, "Print every sample instead of the verdict table");
  app.add_flag("--timings", cfg.timings, "Include wall-clock timings in JSON output");

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    auto* sc = parent->add_subcommand(name, help);
    sc->fallthrough();
    return sc;
  };
  for (const char* name : {"eval", "ma-mass", "energy", "lelong", "sweep", "fit-exponent", "subextend", "h-check",
                           "global-subextend", "suite"})
    leaf(&app, name, "");
  auto* capacity = leaf(&app, "capacity", "Capacities");
  auto* check = leaf(&app, "check", "Inequality checks");
  auto* disc = leaf(&app, "disc-example", "Capped Green potentials with poles at 1");
  for (const char* name : {"ball", "curve", "phi-bounds", "class"}) leaf(capacity, name, "");
  for (const char* name : {"prop31", "compest", "fa", "m-est"}) leaf(check, name, "");
  for (const char* name : {"moments", "sum", "field"}) leaf(disc, name, "");
  for (auto* group : {capacity, check, disc}) group->require_subcommand(1);

  try {
    const std::string config = detail::find_config(args);
    if (!config.empty()) {
      const auto extra = detail::config_args(config);
      args.insert(args.end(), extra.begin(), extra.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  for (const CLI::App* sc = &app; !sc->get_subcommands().empty();) {
    sc = sc->get_subcommands().front();
    cfg.command += (cfg.command.empty() ? "" : " ") + sc->get_name();
  }

  Result res;
  const auto start = std::chrono::steady_clock::now();
  try {
    detail::validate(cfg);
    res = dispatch(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream body;
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["command"] = cfg.command;
    j["config"] = config_json(cfg);
    j["verdicts"] = verdicts_json(res.reports);
    j["data"] = to_json(res.table);
    if (cfg.timings) j["timings"] = {{"total_ms", elapsed_ms}};
    else j["timings"] = nullptr;
    body << j.dump(2) << "\n";
  } else if (!res.reports.empty() && (res.table.columns.empty() || cfg.samples)) {
    if (cfg.samples) {
      for (const auto& r : res.reports) write_csv(body, sample_table(r));
    } else {
      write_csv(body, verdict_table(res.reports));
    }
  } else {
    write_csv(body, res.table);
  }

  if (cfg.out.empty()) {
    out << body.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << cfg.out << "\n";
      return 2;
    }
    f << body.str();
  }

  for (const auto& r : res.reports) {
    if (r.verdict == Verdict::Fails) {
      err << r.name << " fails" << (r.fail_s ? " at s = " + format_number(*r.fail_s) : std::string()) << "\n";
      return 1;
    }
  }
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace plurilab::cli
