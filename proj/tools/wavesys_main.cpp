#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wavesys/analytics.hpp"
#include "wavesys/cli_config.hpp"
#include "wavesys/experiments.hpp"
#include "wavesys/ode_lab.hpp"
#include "wavesys/profiles.hpp"
#include "wavesys/radial_solver.hpp"
#include "wavesys/testfn.hpp"

// Command-line front end. Exit codes: 0 success, 1 in-band scientific
// failure (horizon too short, positivity violated, diverged iteration),
// 2 usage error, 3 numeric error.

namespace {

using wavesys::DataSet;
using wavesys::DomainError;
using wavesys::EstimateId;
using wavesys::fmt17;
using wavesys::ParamPoint;
using wavesys::RunConfig;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
};

std::string join17(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt17(xs[i]);
  }
  return out;
}

void emit(const Table& t, const std::string& command,
          const std::string& output_path, const std::string& format) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!output_path.empty()) {
    file.open(output_path);
    if (!file) throw DomainError("cannot open output path: " + output_path);
    os = &file;
  }
  if (format == "json") {
    nlohmann::json j;
    j["command"] = command;
    for (const auto& [k, v] : t.meta) j[k] = v;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
      nlohmann::json obj;
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        obj[t.columns[i]] = r[i];
      rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    *os << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      *os << (i ? "," : "") << t.columns[i];
    *os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) *os << (i ? "," : "") << r[i];
      *os << "\n";
    }
  }
  for (const auto& [k, v] : t.meta)
    std::cerr << command << ": " << k << " = " << v << "\n";
}

// One option of a subcommand mirrored into RunConfig.params when set.
struct OptCap {
  CLI::Option* opt;
  std::string key;
  std::function<std::string()> get;
};

struct SubCtx {
  CLI::App* sub = nullptr;
  std::string output_path;
  std::string format = "csv";
  std::string render_path;
  std::vector<OptCap> caps;
  std::function<int()> run;
};

void add_common(SubCtx& c) {
  // keep -h free for the grid-spacing option --h
  c.sub->set_help_flag("--help", "print this help message and exit");
  c.sub->add_option("--output", c.output_path,
                    "write results to this path instead of stdout");
  c.sub->add_option("--format", c.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  c.sub->add_option("--render-config", c.render_path,
                    "write this run as a `key = value` config file and exit");
}

void cap_d(SubCtx& c, CLI::Option* o, const std::string& key,
           const double* v) {
  c.caps.push_back({o, key, [v] { return fmt17(*v); }});
}
void cap_i(SubCtx& c, CLI::Option* o, const std::string& key, const int* v) {
  c.caps.push_back({o, key, [v] { return std::to_string(*v); }});
}
void cap_s(SubCtx& c, CLI::Option* o, const std::string& key,
           const std::string* v) {
  c.caps.push_back({o, key, [v] { return *v; }});
}
void cap_v(SubCtx& c, CLI::Option* o, const std::string& key,
           const std::vector<double>* v) {
  c.caps.push_back({o, key, [v] { return join17(*v); }});
}

RunConfig build_config(const SubCtx& c, const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.output_path = c.output_path;
  cfg.format = c.format;
  for (const auto& cap : c.caps)
    if (cap.opt->count() > 0) cfg.params[cap.key] = cap.get();
  return cfg;
}

EstimateId estimate_from_name(const std::string& name) {
  for (EstimateId id :
       {EstimateId::Z9, EstimateId::Z10, EstimateId::Z11, EstimateId::Z12,
        EstimateId::Z17, EstimateId::Z25, EstimateId::Y20})
    if (name == wavesys::to_string(id)) return id;
  throw DomainError("unknown estimate id: " + name);
}

double resolve_mu_cli(bool mu_set, double mu, double p, double q) {
  if (mu_set) return mu;
  try {
    return wavesys::mu_window(p, q).chosen_mu;
  } catch (const DomainError&) {
    return 0.75;
  }
}

Table bound_report_table(const wavesys::BoundReport& rep) {
  Table t;
  t.columns = {"estimate_id", "t", "r", "value"};
  const char* id = wavesys::to_string(rep.estimate_id);
  for (const auto& s : rep.samples)
    t.rows.push_back({id, fmt17(s.t), fmt17(s.r), fmt17(s.value)});
  t.meta = {{"sample_sup", fmt17(rep.sample_sup)},
            {"stabilization_ratio", fmt17(rep.stabilization_ratio)},
            {"excluded_samples", std::to_string(rep.excluded_samples)}};
  return t;
}

int run_args(const std::vector<std::string>& args, int depth);

int run_from_config(const std::string& path, int depth) {
  if (depth > 0)
    throw DomainError("config files cannot themselves use --config");
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  RunConfig cfg = wavesys::parse_config_text(ss.str());
  std::vector<std::string> args;
  args.push_back(cfg.command);
  for (const auto& [k, v] : cfg.params) {
    args.push_back("--" + k);
    args.push_back(v);
  }
  args.push_back("--format");
  args.push_back(cfg.format);
  if (!cfg.output_path.empty()) {
    args.push_back("--output");
    args.push_back(cfg.output_path);
  }
  return run_args(args, depth + 1);
}

int run_args(const std::vector<std::string>& args, int depth) {
  CLI::App app{
      "wavesys: numerical laboratory for the radially symmetric system\n"
      "  u_tt - Lap(u) = |v|^q,  v_tt - Lap(v) = |u_t|^p\n"
      "(blow-up lifespans, kernel-estimate scans, weighted fixed points)."};
  app.require_subcommand(0, 1);
  app.set_help_flag("--help", "print this help message and exit");
  std::string config_path;
  app.add_option("--config", config_path,
                 "run one operation described by a `key = value` file");

  std::vector<SubCtx*> ctxs;

  // ---- classify ----------------------------------------------------------
  SubCtx classify_ctx;
  int cl_n = 3;
  double cl_p = 2.0, cl_q = 2.0;
  {
    SubCtx& c = classify_ctx;
    c.sub = app.add_subcommand(
        "classify",
        "region of (n,p,q): csv columns n,p,q,region,lifespan_exponent");
    cap_i(c, c.sub->add_option("--n", cl_n, "space dimension")->required(),
          "n", &cl_n);
    cap_d(c, c.sub->add_option("--p", cl_p, "exponent p")->required(), "p",
          &cl_p);
    cap_d(c, c.sub->add_option("--q", cl_q, "exponent q")->required(), "q",
          &cl_q);
    add_common(c);
    c.run = [&]() {
      ParamPoint pt(cl_n, cl_p, cl_q);
      const wavesys::RegionClass region = wavesys::classify(pt);
      std::string exponent;
      if (region == wavesys::RegionClass::BlowupY4)
        exponent = fmt17(wavesys::blowup_lifespan_exponent(pt));
      Table t;
      t.columns = {"n", "p", "q", "region", "lifespan_exponent"};
      t.rows.push_back({std::to_string(cl_n), fmt17(cl_p), fmt17(cl_q),
                        wavesys::to_string(region), exponent});
      t.meta = {{"region", wavesys::to_string(region)}};
      emit(t, "classify", c.output_path, c.format);
      return 0;
    };
    ctxs.push_back(&c);
  }

  // ---- exponents ---------------------------------------------------------
  SubCtx exponents_ctx;
  int ex_n = 3;
  {
    SubCtx& c = exponents_ctx;
    c.sub = app.add_subcommand(
        "exponents", "critical exponents for one n: csv columns name,value");
    cap_i(c, c.sub->add_option("--n", ex_n, "space dimension")->required(),
          "n", &ex_n);
    add_common(c);
    c.run = [&]() {
      Table t;
      t.columns = {"name", "value"};
      t.rows.push_back({"strauss_q0", fmt17(wavesys::strauss_exponent(ex_n))});
      t.rows.push_back({"glassey_p0", fmt17(wavesys::glassey_exponent(ex_n))});
      try {
        t.rows.push_back(
            {"b6_lifespan", fmt17(wavesys::b6_lifespan_exponent(ex_n))});
      } catch (const DomainError&) {
        // only defined for n = 2, 3
      }
      emit(t, "exponents", c.output_path, c.format);
      return 0;
    };
    ctxs.push_back(&c);
  }

  // ---- ode-sweep ---------------------------------------------------------
  SubCtx ode_ctx;
  int od_n = 3;
  double od_p = 2.0, od_q = 2.0, od_A = 1.0, od_B = 1.0;
  double od_horizon = 1e11, od_tol = 1e-10;
  std::vector<double> od_kappas = {2.5e-3, 5e-3, 1e-2, 2e-2, 4e-2};
  std::string od_channel = "eps-forcing";
  {
    SubCtx& c = ode_ctx;
    c.sub = app.add_subcommand(
        "ode-sweep",
        "kappa sweep of the comparison system: csv columns kappa,T_mid");
    cap_i(c, c.sub->add_option("--n", od_n, "space dimension"), "n", &od_n);
    cap_d(c, c.sub->add_option("--p", od_p, "exponent p")->required(), "p",
          &od_p);
    cap_d(c, c.sub->add_option("--q", od_q, "exponent q")->required(), "q",
          &od_q);
    cap_d(c, c.sub->add_option("--A", od_A, "F'' coefficient"), "A", &od_A);
    cap_d(c, c.sub->add_option("--B", od_B, "G'' coefficient"), "B", &od_B);
    cap_v(c,
          c.sub->add_option("--kappas", od_kappas, "comma-separated kappas")
              ->delimiter(','),
          "kappas", &od_kappas);
    cap_s(c,
          c.sub
              ->add_option("--channel", od_channel,
                           "kappa injection: initial-slope or eps-forcing")
              ->check(CLI::IsMember({"initial-slope", "eps-forcing"})),
          "channel", &od_channel);
    cap_d(c, c.sub->add_option("--horizon", od_horizon, "integration horizon"),
          "horizon", &od_horizon);
    cap_d(c, c.sub->add_option("--tol", od_tol, "step controller tolerance"),
          "tol", &od_tol);
    add_common(c);
    c.run = [&]() {
      ParamPoint pt(od_n, od_p, od_q);
      // base kappa is irrelevant: kappa_sweep overrides it per channel
      const wavesys::ComparisonParams base =
          wavesys::comparison_parameters(pt, od_A, od_B, 1.0);
      const wavesys::KappaChannel chan = od_channel == "eps-forcing"
                                             ? wavesys::KappaChannel::Forcing
                                             : wavesys::KappaChannel::InitialSlope;
      const wavesys::ScalingFit fit =
          wavesys::kappa_sweep(base, od_kappas, od_horizon, chan, od_tol);
      Table t;
      t.columns = {"kappa", "T_mid"};
      for (const auto& [k, T] : fit.points)
        t.rows.push_back({fmt17(k), fmt17(T)});
      t.meta = {{"slope", fmt17(fit.slope)},
                {"intercept", fmt17(fit.intercept)},
                {"r_squared", fmt17(fit.r_squared)},
                {"channel", fit.channel}};
      emit(t, "ode-sweep", c.output_path, c.format);
      return 0;
    };
    ctxs.push_back(&c);
  }

  // ---- solve -------------------------------------------------------------
  SubCtx solve_ctx;
  int so_n = 3;
  double so_p = 2.0, so_q = 2.0, so_eps = 0.5, so_h = 0.02, so_tmax = 40.0;
  double so_amplitude = 1.0, so_support = 1.0, so_threshold = 1e6;
  double so_mu = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> so_snap_times;
  CLI::Option* so_mu_opt = nullptr;
  {
    SubCtx& c = solve_ctx;
    c.sub = app.add_subcommand(
        "solve",
        "march one solution: csv snapshot columns t,r,u,v,w,dv");
    cap_i(c, c.sub->add_option("--n", so_n, "space dimension (must be 3)"),
          "n", &so_n);
    cap_d(c, c.sub->add_option("--p", so_p, "exponent p")->required(), "p",
          &so_p);
    cap_d(c, c.sub->add_option("--q", so_q, "exponent q")->required(), "q",
          &so_q);
    cap_d(c, c.sub->add_option("--eps", so_eps, "data size")->required(),
          "eps", &so_eps);
    cap_d(c, c.sub->add_option("--h", so_h, "grid spacing"), "h", &so_h);
    cap_d(c, c.sub->add_option("--tmax", so_tmax, "time horizon")->required(),
          "tmax", &so_tmax);
    cap_d(c, c.sub->add_option("--amplitude", so_amplitude, "bump amplitude"),
          "amplitude", &so_amplitude);
    cap_d(c, c.sub->add_option("--support", so_support, "bump support radius"),
          "support", &so_support);
    cap_d(c,
          c.sub->add_option("--threshold", so_threshold,
                            "sup-norm blow-up threshold"),
          "threshold", &so_threshold);
    so_mu_opt = c.sub->add_option("--mu", so_mu, "weight exponent");
    cap_d(c, so_mu_opt, "mu", &so_mu);
    cap_v(c,
          c.sub
              ->add_option("--snapshot-times", so_snap_times,
                           "comma-separated times to dump (default: final)")
              ->delimiter(','),
          "snapshot-times", &so_snap_times);
    add_common(c);
    c.run = [&]() {
      if (so_n != 3) throw DomainError("solve: only n = 3 is supported");
      ParamPoint pt(so_n, so_p, so_q);
      const wavesys::CharacteristicGrid grid =
          wavesys::CharacteristicGrid::for_horizon(so_h, so_tmax, so_support);
      const DataSet data = DataSet::default_bumps(so_amplitude, so_support);
      wavesys::MarchOptions opt;
      opt.mu = so_mu;
      if (so_snap_times.empty()) {
        opt.snapshot_levels = {grid.n_t};
      } else {
        for (double ts : so_snap_times) {
          int lvl = static_cast<int>(std::lround(ts / so_h));
          opt.snapshot_levels.push_back(std::clamp(lvl, 0, grid.n_t));
        }
      }
      const wavesys::SolveReport rep =
          wavesys::march(so_eps, data, grid, so_p, so_q, so_threshold, opt);
      Table t;
      t.columns = {"t", "r", "u", "v", "w", "dv"};
      for (const auto& [lvl, st] : rep.snapshots) {
        const std::string ts = fmt17(st.t());
        for (int j = 0; j < st.u.size(); ++j)
          t.rows.push_back({ts, fmt17(j * st.h), fmt17(st.u(j)),
                            fmt17(st.v(j)), fmt17(st.w(j)), fmt17(st.dv(j))});
      }
      t.meta = {{"outcome", wavesys::to_string(rep.outcome)},
                {"levels_completed", std::to_string(rep.final_state.level)}};
      if (rep.outcome == wavesys::Outcome::BlowupDetected) {
        t.meta.push_back({"t_low", fmt17(rep.t_low)});
        t.meta.push_back({"t_high", fmt17(rep.t_high)});
      }
      emit(t, "solve", c.output_path, c.format);
      return rep.outcome == wavesys::Outcome::NumericalDivergence ? 3 : 0;
    };
    ctxs.push_back(&c);
  }

  // ---- lifespan-sweep ----------------------------------------------------
  SubCtx sweep_ctx;
  int ls_n = 3, ls_doublings = 6, ls_confirm = 1;
  double ls_p = 2.0, ls_q = 2.0, ls_h = 0.08, ls_amplitude = 2.0;
  double ls_support = 1.0, ls_threshold = 1e6, ls_calib = 400.0,
         ls_factor = 2.0;
  std::vector<double> ls_eps;
  {
    SubCtx& c = sweep_ctx;
    c.sub = app.add_subcommand(
        "lifespan-sweep",
        "measure T(eps) and fit the power law: csv columns "
        "eps,T_low,T_high,T_mid");
    cap_i(c, c.sub->add_option("--n", ls_n, "space dimension"), "n", &ls_n);
    cap_d(c, c.sub->add_option("--p", ls_p, "exponent p")->required(), "p",
          &ls_p);
    cap_d(c, c.sub->add_option("--q", ls_q, "exponent q")->required(), "q",
          &ls_q);
    cap_v(c,
          c.sub
              ->add_option("--eps-list", ls_eps,
                           "comma-separated eps values (>= 4, spanning 2x)")
              ->delimiter(',')
              ->required(),
          "eps-list", &ls_eps);
    cap_d(c, c.sub->add_option("--h", ls_h, "grid spacing"), "h", &ls_h);
    cap_d(c,
          c.sub->add_option("--amplitude", ls_amplitude, "bump amplitude"),
          "amplitude", &ls_amplitude);
    cap_d(c, c.sub->add_option("--support", ls_support, "bump support radius"),
          "support", &ls_support);
    cap_d(c,
          c.sub->add_option("--threshold", ls_threshold,
                            "sup-norm blow-up threshold"),
          "threshold", &ls_threshold);
    cap_d(c,
          c.sub->add_option("--calib-horizon", ls_calib,
                            "starting horizon for the largest eps"),
          "calib-horizon", &ls_calib);
    cap_i(c,
          c.sub->add_option("--max-calib-doublings", ls_doublings,
                            "horizon doublings before giving up"),
          "max-calib-doublings", &ls_doublings);
    cap_d(c,
          c.sub->add_option("--horizon-factor", ls_factor,
                            "headroom over the calibrated prediction"),
          "horizon-factor", &ls_factor);
    cap_i(c,
          c.sub->add_option("--confirm", ls_confirm,
                            "1: grid-halving confirmation at largest eps"),
          "confirm", &ls_confirm);
    add_common(c);
    c.run = [&]() {
      ParamPoint pt(ls_n, ls_p, ls_q);
      wavesys::SweepPolicy policy;
      policy.h = ls_h;
      policy.amplitude = ls_amplitude;
      policy.support = ls_support;
      policy.blowup_threshold = ls_threshold;
      policy.calib_horizon = ls_calib;
      policy.max_calib_doublings = ls_doublings;
      policy.horizon_factor = ls_factor;
      policy.confirm_extreme = ls_confirm != 0;
      const wavesys::LifespanSweep res =
          wavesys::lifespan_sweep(pt, ls_eps, policy);
      Table t;
      t.columns = {"eps", "T_low", "T_high", "T_mid"};
      for (const auto& row : res.rows)
        t.rows.push_back({fmt17(row.eps), fmt17(row.t_low), fmt17(row.t_high),
                          fmt17(row.t_mid)});
      t.meta = {{"slope", fmt17(res.fit.slope)},
                {"intercept", fmt17(res.fit.intercept)},
                {"r_squared", fmt17(res.fit.r_squared)},
                {"theory_slope", fmt17(res.theory_slope)},
                {"extreme_confirmed", res.extreme_confirmed ? "1" : "0"}};
      emit(t, "lifespan-sweep", c.output_path, c.format);
      return 0;
    };
    ctxs.push_back(&c);
  }

  // ---- verify-bounds -----------------------------------------------------
  SubCtx bounds_ctx;
  int vb_n = 3;
  double vb_mu = 0.75, vb_p = 2.5, vb_q = 3.0, vb_kappa = 2.0;
  std::string vb_id;
  std::vector<double> vb_ts, vb_rs;
  CLI::Option* vb_mu_opt = nullptr;
  {
    SubCtx& c = bounds_ctx;
    c.sub = app.add_subcommand(
        "verify-bounds",
        "kernel/helper estimate scan: csv columns estimate_id,t,r,value");
    cap_s(c,
          c.sub->add_option("--id", vb_id, "estimate to scan")
              ->required()
              ->check(CLI::IsMember(
                  {"Z9", "Z10", "Z11", "Z12", "Z17", "Z25", "Y20"})),
          "id", &vb_id);
    vb_mu_opt = c.sub->add_option("--mu", vb_mu,
                                  "weight exponent (default: mu window)");
    cap_d(c, vb_mu_opt, "mu", &vb_mu);
    cap_d(c, c.sub->add_option("--p", vb_p, "exponent p"), "p", &vb_p);
    cap_d(c, c.sub->add_option("--q", vb_q, "exponent q"), "q", &vb_q);
    cap_i(c, c.sub->add_option("--n", vb_n, "space dimension (Y20)"), "n",
          &vb_n);
    cap_d(c, c.sub->add_option("--kappa", vb_kappa, "Z17 decay exponent"),
          "kappa", &vb_kappa);
    cap_v(c,
          c.sub->add_option("--ts", vb_ts, "comma-separated sample times")
              ->delimiter(','),
          "ts", &vb_ts);
    cap_v(c,
          c.sub->add_option("--rs", vb_rs, "comma-separated sample radii")
              ->delimiter(','),
          "rs", &vb_rs);
    add_common(c);
    c.run = [&]() {
      const EstimateId id = estimate_from_name(vb_id);
      wavesys::BoundReport rep;
      if (id == EstimateId::Z17 || id == EstimateId::Z25) {
        wavesys::HelperParams hp;
        hp.kappa = vb_kappa;
        hp.mu = resolve_mu_cli(vb_mu_opt->count() > 0, vb_mu, vb_p, vb_q);
        hp.p = vb_p;
        hp.q = vb_q;
        hp.ts = vb_ts;
        hp.rs = vb_rs;
        rep = wavesys::verify_helper_inequality(id, hp);
      } else if (id == EstimateId::Y20) {
        rep = wavesys::y20_bound_report(
            vb_n, vb_p,
            vb_ts.empty() ? std::vector<double>{1, 3, 10, 30, 100} : vb_ts);
      } else {
        const double mu =
            resolve_mu_cli(vb_mu_opt->count() > 0, vb_mu, vb_p, vb_q);
        rep = wavesys::verify_kernel_bound(
            id, mu, vb_p, vb_q,
            vb_ts.empty() ? std::vector<double>{1, 3, 10, 30, 100} : vb_ts,
            vb_rs);
      }
      emit(bound_report_table(rep), "verify-bounds", c.output_path, c.format);
      return 0;
    };
    ctxs.push_back(&c);
  }

  // ---- verify-psi --------------------------------------------------------
  SubCtx psi_ctx;
  int vp_n = 3;
  double vp_p = 2.0, vp_q = 2.0, vp_eps = 0.5, vp_h = 0.08, vp_tmax = 40.0;
  double vp_threshold = 1e6, vp_amplitude = 1.0, vp_support = 1.0;
  std::string vp_mode;
  std::vector<double> vp_ts, vp_rs;
  {
    SubCtx& c = psi_ctx;
    c.sub = app.add_subcommand(
        "verify-psi",
        "test-function checks; mode phi (columns n,r,phi1,log_phi1), "
        "y20 (estimate scan) or y19 (columns t,lhs,rhs)");
    cap_s(c,
          c.sub->add_option("--mode", vp_mode, "phi, y20 or y19")
              ->required()
              ->check(CLI::IsMember({"phi", "y20", "y19"})),
          "mode", &vp_mode);
    cap_i(c, c.sub->add_option("--n", vp_n, "space dimension"), "n", &vp_n);
    cap_d(c, c.sub->add_option("--p", vp_p, "exponent p"), "p", &vp_p);
    cap_d(c, c.sub->add_option("--q", vp_q, "exponent q (y19)"), "q", &vp_q);
    cap_d(c, c.sub->add_option("--eps", vp_eps, "data size (y19)"), "eps",
          &vp_eps);
    cap_d(c, c.sub->add_option("--h", vp_h, "grid spacing (y19)"), "h",
          &vp_h);
    cap_d(c, c.sub->add_option("--tmax", vp_tmax, "time horizon (y19)"),
          "tmax", &vp_tmax);
    cap_d(c,
          c.sub->add_option("--threshold", vp_threshold,
                            "blow-up threshold (y19)"),
          "threshold", &vp_threshold);
    cap_d(c,
          c.sub->add_option("--amplitude", vp_amplitude,
                            "bump amplitude (y19)"),
          "amplitude", &vp_amplitude);
    cap_d(c,
          c.sub->add_option("--support", vp_support,
                            "bump support radius (y19)"),
          "support", &vp_support);
    cap_v(c,
          c.sub->add_option("--ts", vp_ts, "comma-separated times")
              ->delimiter(','),
          "ts", &vp_ts);
    cap_v(c,
          c.sub->add_option("--rs", vp_rs, "comma-separated radii (phi)")
              ->delimiter(','),
          "rs", &vp_rs);
    add_common(c);
    c.run = [&]() {
      if (vp_mode == "phi") {
        const std::vector<double> rs =
            vp_rs.empty() ? std::vector<double>{0, 0.5, 1, 2, 5, 10, 50}
                          : vp_rs;
        Table t;
        t.columns = {"n", "r", "phi1", "log_phi1"};
        for (double r : rs)
          t.rows.push_back({std::to_string(vp_n), fmt17(r),
                            fmt17(wavesys::phi1(vp_n, r)),
                            fmt17(wavesys::log_phi1(vp_n, r))});
        emit(t, "verify-psi", c.output_path, c.format);
        return 0;
      }
      if (vp_mode == "y20") {
        const wavesys::BoundReport rep = wavesys::y20_bound_report(
            vp_n, vp_p,
            vp_ts.empty() ? std::vector<double>{1, 3, 10, 30, 100} : vp_ts);
        emit(bound_report_table(rep), "verify-psi", c.output_path, c.format);
        return 0;
      }
      // y19: march with a geometric snapshot ladder, then compare.
      if (vp_n != 3) throw DomainError("verify-psi: y19 needs n = 3");
      const double t_first = 0.35;
      const double t_last = 0.9 * vp_tmax;
      if (!(t_last > t_first))
        throw DomainError("verify-psi: y19 needs tmax > 0.39");
      const wavesys::CharacteristicGrid grid =
          wavesys::CharacteristicGrid::for_horizon(vp_h, vp_tmax, vp_support);
      const DataSet data = DataSet::default_bumps(vp_amplitude, vp_support);
      wavesys::MarchOptions opt;
      opt.track_norms = false;
      opt.track_fg = false;
      const int n_snap = 8;
      for (int i = 0; i < n_snap; ++i) {
        const double ti =
            t_first * std::pow(t_last / t_first, i / double(n_snap - 1));
        const int lvl =
            std::clamp(static_cast<int>(std::lround(ti / vp_h)), 0, grid.n_t);
        opt.snapshot_levels.push_back(lvl);
      }
      const wavesys::SolveReport rep = wavesys::march(
          vp_eps, data, grid, vp_p, vp_q, vp_threshold, opt);
      const std::vector<wavesys::PositivityRow> rows =
          wavesys::positivity_check_y19(rep, vp_eps, data);
      Table t;
      t.columns = {"t", "lhs", "rhs"};
      double min_ratio = std::numeric_limits<double>::infinity();
      for (const auto& row : rows) {
        t.rows.push_back({fmt17(row.t), fmt17(row.lhs), fmt17(row.rhs)});
        if (row.rhs > 0.0) min_ratio = std::min(min_ratio, row.lhs / row.rhs);
      }
      t.meta = {{"outcome", wavesys::to_string(rep.outcome)},
                {"min_ratio", fmt17(min_ratio)}};
      emit(t, "verify-psi", c.output_path, c.format);
      if (min_ratio < 0.95) {
        std::cerr << "verify-psi: positivity margin violated (min lhs/rhs = "
                  << fmt17(min_ratio) << " < 0.95)\n";
        return 1;
      }
      return 0;
    };
    ctxs.push_back(&c);
  }

  // ---- picard ------------------------------------------------------------
  SubCtx picard_ctx;
  int pi_n = 3, pi_iters = 6;
  double pi_p = 2.5, pi_q = 3.0, pi_eps = 0.01, pi_h = 0.02, pi_tmax = 40.0;
  double pi_amplitude = 1.0, pi_support = 1.0;
  double pi_mu = std::numeric_limits<double>::quiet_NaN();
  {
    SubCtx& c = picard_ctx;
    c.sub = app.add_subcommand(
        "picard",
        "fixed-point iteration decay: csv columns iter,diff,ratio");
    cap_i(c, c.sub->add_option("--n", pi_n, "space dimension (must be 3)"),
          "n", &pi_n);
    cap_d(c, c.sub->add_option("--p", pi_p, "exponent p")->required(), "p",
          &pi_p);
    cap_d(c, c.sub->add_option("--q", pi_q, "exponent q")->required(), "q",
          &pi_q);
    cap_d(c, c.sub->add_option("--eps", pi_eps, "data size"), "eps", &pi_eps);
    cap_d(c, c.sub->add_option("--h", pi_h, "grid spacing"), "h", &pi_h);
    cap_d(c, c.sub->add_option("--tmax", pi_tmax, "box horizon"), "tmax",
          &pi_tmax);
    cap_i(c, c.sub->add_option("--iters", pi_iters, "iteration count"),
          "iters", &pi_iters);
    cap_d(c, c.sub->add_option("--mu", pi_mu, "weight exponent"), "mu",
          &pi_mu);
    cap_d(c, c.sub->add_option("--amplitude", pi_amplitude, "bump amplitude"),
          "amplitude", &pi_amplitude);
    cap_d(c,
          c.sub->add_option("--support", pi_support, "bump support radius"),
          "support", &pi_support);
    add_common(c);
    c.run = [&]() {
      if (pi_n != 3) throw DomainError("picard: only n = 3 is supported");
      const wavesys::CharacteristicGrid grid =
          wavesys::CharacteristicGrid::for_horizon(pi_h, pi_tmax, pi_support);
      const DataSet data = DataSet::default_bumps(pi_amplitude, pi_support);
      const wavesys::PicardReport rep = wavesys::picard_run(
          pi_eps, data, grid, pi_p, pi_q, pi_iters, pi_mu);
      Table t;
      t.columns = {"iter", "diff", "ratio"};
      for (std::size_t m = 0; m < rep.diffs.size(); ++m)
        t.rows.push_back({std::to_string(m + 1), fmt17(rep.diffs[m]),
                          m > 0 ? fmt17(rep.ratios[m - 1]) : ""});
      t.meta = {{"diverged", rep.diverged ? "1" : "0"}};
      emit(t, "picard", c.output_path, c.format);
      return rep.diverged ? 1 : 0;
    };
    ctxs.push_back(&c);
  }

  std::vector<const char*> cargv;
  cargv.push_back("wavesys");
  for (const std::string& s : args) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  SubCtx* active = nullptr;
  for (SubCtx* c : ctxs)
    if (c->sub->parsed()) active = c;

  if (!config_path.empty()) {
    if (active != nullptr)
      throw DomainError("--config cannot be combined with a subcommand");
    return run_from_config(config_path, depth);
  }
  if (active == nullptr) {
    std::cerr << app.help();
    return 2;
  }
  if (!active->render_path.empty()) {
    const RunConfig cfg = build_config(*active, active->sub->get_name());
    std::ofstream f(active->render_path);
    if (!f)
      throw DomainError("cannot write config file: " + active->render_path);
    f << wavesys::render_config(cfg);
    return 0;
  }
  return active->run();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_args(args, 0);
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const wavesys::ScientificFailure& e) {
    std::cerr << "scientific failure: " << e.what() << "\n";
    return 1;
  } catch (const wavesys::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
