// ghf: batch front-end for the Gaussian-state ground-state toolchain.
//
// Subcommands: solve, phase-diagram, critical-point, central-charge,
// validate. Flat key=value config files via --config; command-line flags
// take precedence. Exit codes: 0 success (including flagged
// non-convergence), 2 config error, 3 numeric/internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ghf/io.hpp"
#include "ghf/model.hpp"
#include "ghf/observables.hpp"
#include "ghf/oracle.hpp"
#include "ghf/scaling.hpp"
#include "ghf/solver.hpp"

using nlohmann::json;
using namespace ghf;

namespace {

const double pi = 2.0 * std::asin(1.0);

// Reference critical angles theta_c/pi per decay exponent, used for plot
// overlays in the phase diagram.
const std::vector<std::pair<double, double>> kReferenceThresholds = {
    {1.00, 0.3534}, {1.25, 0.3357}, {1.50, 0.3218},
    {1.75, 0.3106}, {2.00, 0.3013}, {2.25, 0.2932},
    {2.50, 0.2865}, {2.75, 0.2807}, {3.00, 0.2760}};

struct CommonOpts {
  std::string method = "zt";
  double dtau = 0.05;
  int max_iters = 0;
  double energy_tol = 1e-10;
  double grad_tol = 1e-7;
  int restarts = 5;
  double mixing = 1.0;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "ite or zt")->capture_default_str();
    cmd->add_option("--dtau", dtau, "ITE step size")->capture_default_str();
    cmd->add_option("--max-iters", max_iters,
                    "iteration cap, 0 = per-method default")
        ->capture_default_str();
    cmd->add_option("--energy-tol", energy_tol)->capture_default_str();
    cmd->add_option("--grad-tol", grad_tol)->capture_default_str();
    cmd->add_option("--restarts", restarts)->capture_default_str();
    cmd->add_option("--mixing", mixing, "ZT damping, 1 = undamped")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "base RNG seed")->capture_default_str();
  }

  SolverOptions to_solver_options() const {
    SolverOptions o;
    o.method = parse_method(method);
    o.dtau = dtau;
    o.max_iters = max_iters;
    o.energy_tol = energy_tol;
    o.grad_tol = grad_tol;
    o.restarts = restarts;
    o.mixing = mixing;
    o.seed = seed;
    return o;
  }

  std::map<std::string, std::string> to_config() const {
    std::ostringstream seed_s;
    seed_s << seed;
    return {{"method", method},
            {"restarts", std::to_string(restarts)},
            {"seed", seed_s.str()}};
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void write_json(const std::string& path, const json& doc) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << doc.dump(2) << '\n';
}

json config_stamp(const std::map<std::string, std::string>& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg) j[k] = v;
  j["version"] = version_string();
  return j;
}

ModelSpec make_spec(int n, double alpha, bool nn, const std::string& theta) {
  const double th = parse_angle(theta);
  return nn ? ModelSpec::nearest(n, th) : ModelSpec::power_law(n, th, alpha);
}

std::vector<double> theta_grid(const std::string& lo_s, const std::string& hi_s,
                               int points) {
  const double lo = parse_angle(lo_s);
  const double hi = parse_angle(hi_s);
  if (points < 1 || hi <= lo) {
    throw std::invalid_argument("bad theta grid");
  }
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    grid.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
  }
  return grid;
}

// ---------------------------------------------------------------- solve

int cmd_solve(int n, double alpha, bool nn, const std::string& theta,
              const CommonOpts& common, const std::string& json_path,
              const std::string& checkpoint, const std::string& trace_path,
              const std::string& warm_path, bool validate) {
  auto spec = make_spec(n, alpha, nn, theta);
  auto opts = common.to_solver_options();
  opts.record_trace = !trace_path.empty();
  if (!warm_path.empty()) {
    auto warm = read_checkpoint(warm_path);
    if (warm.n_sites != n) throw std::invalid_argument("warm-start size");
    opts.warm_start = warm.gamma;
  }
  opts.validate();
  spec.validate();

  auto res = solve(spec, opts);
  const double s_half =
      n >= 2 ? entanglement_entropy(res.gamma, Subsystem::left_half(n)) : 0.0;

  json out;
  out["config"] = config_stamp(common.to_config());
  out["config"]["n"] = n;
  out["config"]["theta"] = theta;
  out["config"]["alpha"] = nn ? "inf" : fmt(alpha);
  out["energy"] = res.energy;
  out["entropy_half_chain"] = s_half;
  out["converged"] = res.converged;
  out["reason"] = res.reason;
  out["iterations"] = res.iterations;
  out["residual"] = res.residual;
  out["restart_index"] = res.restart_index;
  out["dtau_halvings"] = res.dtau_halvings;
  out["degenerate"] = res.degenerate;
  out["purity_error"] = res.gamma.purity_error();

  if (validate) {
    auto ed = exact_ground(spec);
    out["oracle_energy"] = ed.energy;
    out["oracle_delta"] = res.energy - ed.energy;
    out["oracle_degenerate"] = ed.degenerate;
  }

  if (!checkpoint.empty()) write_checkpoint(checkpoint, res.gamma);
  if (!trace_path.empty()) write_trace_csv(trace_path, res.energy_trace);
  write_json(json_path, out);
  std::cout << out.dump(2) << '\n';
  return 0;
}

// -------------------------------------------------------- phase diagram

int cmd_phase_diagram(int n, const std::vector<std::string>& alphas,
                      const std::string& theta_lo, const std::string& theta_hi,
                      int points, const CommonOpts& common,
                      const std::string& csv_path, const std::string& svg_path,
                      bool timestamp, int workers) {
  const auto grid = theta_grid(theta_lo, theta_hi, points);
  const int na = static_cast<int>(alphas.size());
  if (na == 0) throw std::invalid_argument("no alpha values given");

  std::vector<std::vector<ScanPoint>> rows(na);
  parallel_for(na, workers, [&](int ai) {
    const bool nn = alphas[ai] == "nn" || alphas[ai] == "inf";
    const double alpha = nn ? 0.0 : std::stod(alphas[ai]);
    auto opts = common.to_solver_options();
    opts.seed = common.seed + 100003 * static_cast<std::uint64_t>(ai);
    std::optional<Eigen::MatrixXd> warm;
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      auto spec = nn ? ModelSpec::nearest(n, grid[ti])
                     : ModelSpec::power_law(n, grid[ti], alpha);
      auto local = opts;
      local.seed = opts.seed + 17 * ti;
      local.warm_start = warm;
      auto res = solve(spec, local);
      if (res.converged) warm = res.gamma.gamma;
      ScanPoint pt;
      pt.n = n;
      pt.alpha = alpha;
      pt.nearest_neighbour = nn;
      pt.theta = grid[ti];
      pt.energy = res.energy;
      pt.entropy = entanglement_entropy(res.gamma, Subsystem::left_half(n));
      pt.method = local.method;
      pt.converged = res.converged;
      pt.seed = local.seed;
      rows[ai].push_back(pt);
    }
  });

  std::vector<ScanPoint> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());

  auto cfg = common.to_config();
  cfg["n"] = std::to_string(n);
  cfg["theta_min"] = theta_lo;
  cfg["theta_max"] = theta_hi;
  cfg["theta_points"] = std::to_string(points);
  if (!csv_path.empty()) write_scan_csv(csv_path, flat, cfg, timestamp);

  if (!svg_path.empty()) {
    if (na > 1) {
      std::vector<double> xs, ys, vals;
      for (double th : grid) xs.push_back(th / pi);
      std::vector<std::pair<double, double>> overlay;
      for (int ai = 0; ai < na; ++ai) {
        const double a = rows[ai][0].nearest_neighbour
                             ? std::numeric_limits<double>::infinity()
                             : rows[ai][0].alpha;
        ys.push_back(a);
        for (const auto& pt : rows[ai]) vals.push_back(pt.entropy);
        for (const auto& [ra, rt] : kReferenceThresholds) {
          if (std::abs(ra - a) < 1e-9) overlay.push_back({rt, a});
        }
      }
      write_heatmap_svg(svg_path, xs, ys, vals, "theta/pi", "alpha", overlay);
    } else {
      SvgSeries s;
      for (const auto& pt : rows[0]) {
        s.x.push_back(pt.theta / pi);
        s.y.push_back(pt.entropy);
      }
      write_line_svg(svg_path, {s}, "theta/pi", "S half chain");
    }
  }
  std::cout << "phase-diagram: " << flat.size() << " points written\n";
  return 0;
}

// -------------------------------------------------------- critical point

int cmd_critical_point(double alpha, const std::vector<int>& n_set,
                       const std::string& lo, const std::string& hi,
                       const CommonOpts& common, const std::string& json_path,
                       const std::string& svg_path, int workers) {
  auto opts = common.to_solver_options();
  auto result = critical_point_pipeline(alpha, n_set, opts,
                                        {parse_angle(lo), parse_angle(hi)},
                                        workers);
  json out;
  out["config"] = config_stamp(common.to_config());
  out["config"]["alpha"] = fmt(alpha);
  out["config"]["bracket"] = {lo, hi};
  out["theta_c_inf"] = result.fit.theta_c_inf;
  out["theta_c_inf_over_pi"] = result.fit.theta_c_inf / pi;
  out["theta_c_stderr"] = result.fit.theta_c_stderr;
  out["slope_a"] = result.fit.a;
  out["rows"] = json::array();
  for (const auto& r : result.rows) {
    out["rows"].push_back({{"n", r.n},
                           {"theta_max", r.theta_max},
                           {"theta_max_over_pi", r.theta_max / pi},
                           {"s_max", r.s_max},
                           {"flagged", r.flagged}});
  }
  write_json(json_path, out);
  std::cout << out.dump(2) << '\n';

  if (!svg_path.empty()) {
    SvgSeries pts, line;
    pts.markers_only = true;
    for (const auto& r : result.rows) {
      pts.x.push_back(1.0 / r.n);
      pts.y.push_back(r.theta_max / pi);
    }
    line.color = "#c03a2b";
    line.x = {0.0, *std::max_element(pts.x.begin(), pts.x.end())};
    for (double x : line.x) {
      line.y.push_back((result.fit.theta_c_inf + result.fit.a * x) / pi);
    }
    write_line_svg(svg_path, {line, pts}, "1/N", "theta_max/pi");
  }
  return 0;
}

// -------------------------------------------------------- central charge

int cmd_central_charge(double alpha, const std::vector<int>& n_set,
                       const std::vector<int>& exclude,
                       const std::string& theta, bool gapped_sweep,
                       const std::string& lo, const std::string& hi,
                       int points, const CommonOpts& common,
                       const std::string& json_path,
                       const std::string& csv_path,
                       const std::string& svg_path, bool timestamp,
                       int workers) {
  auto opts = common.to_solver_options();
  std::vector<double> grid;
  if (gapped_sweep) {
    grid = theta_grid(lo, hi, points);
  } else {
    grid = {parse_angle(theta)};
  }
  auto sweep = effective_charge_sweep(alpha, grid, n_set, opts, workers);

  auto cfg = common.to_config();
  cfg["alpha"] = fmt(alpha);
  json out;
  out["config"] = config_stamp(cfg);
  out["points"] = json::array();
  std::vector<ScanPoint> flat;
  SvgSeries curve;
  for (auto& pt : sweep) {
    // the exclusion window applies to the fit, not the solved rows
    auto fit = fit_central_charge(
        [&] {
          std::vector<std::pair<int, double>> rows;
          for (const auto& r : pt.rows) rows.push_back({r.n, r.entropy});
          return rows;
        }(),
        exclude);
    out["points"].push_back({{"theta", pt.theta},
                             {"theta_over_pi", pt.theta / pi},
                             {"c", fit.c},
                             {"c_stderr", fit.c_stderr},
                             {"b", fit.b},
                             {"n_used", fit.n_used}});
    curve.x.push_back(pt.theta / pi);
    curve.y.push_back(fit.c);
    flat.insert(flat.end(), pt.rows.begin(), pt.rows.end());
  }
  write_json(json_path, out);
  std::cout << out.dump(2) << '\n';
  if (!csv_path.empty()) write_scan_csv(csv_path, flat, cfg, timestamp);
  if (!svg_path.empty()) {
    write_line_svg(svg_path, {curve}, "theta/pi", "effective c");
  }
  return 0;
}

// -------------------------------------------------------------- validate

int cmd_validate(const CommonOpts& common) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, double margin) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  margin=" << margin
              << '\n';
    if (!ok) ++failures;
  };

  // variational bound and free-fermion exactness on the oracle battery
  for (int n : {4, 6, 8, 10}) {
    for (double tf : {0.15, 0.3, 0.45}) {
      auto spec = ModelSpec::power_law(n, tf * pi, 2.0);
      SolverOptions opts = common.to_solver_options();
      auto res = solve(spec, opts);
      auto ed = exact_ground(spec);
      const double slack = res.energy - ed.energy;
      std::ostringstream name;
      name << "bound n=" << n << " theta=" << tf << "pi";
      report(name.str(), slack >= -1e-9, slack);
    }
    auto nn = ModelSpec::nearest(n, 0.3 * pi);
    SolverOptions opts = common.to_solver_options();
    auto res = solve(nn, opts);
    auto ed = exact_ground(nn);
    const double rel =
        std::abs(res.energy - ed.energy) / std::abs(ed.energy);
    report("free-fermion n=" + std::to_string(n), rel <= 1e-8, rel);
  }

  // sign convention: interaction energy assembled from exact correlators
  {
    auto spec = ModelSpec::power_law(4, 0.3 * pi, 1.0);
    auto c = build_couplings(spec);
    auto ed = exact_ground(spec);
    std::complex<double> e(0.0, 0.0);
    const std::complex<double> iu(0.0, 1.0);
    for (int p = 0; p < 4; ++p) {
      e += c.h(p) * (-iu) * exact_correlator(ed.state, {2 * p, 2 * p + 1});
    }
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        std::vector<int> idx;
        for (int l = 2 * p + 1; l <= 2 * q; ++l) idx.push_back(l);
        e += c.J(p, q) * std::pow(-iu, q - p) * exact_correlator(ed.state, idx);
      }
    }
    const double err = std::abs(e - std::complex<double>(ed.energy, 0.0));
    report("sign-convention", err <= 1e-9, err);
  }

  std::cout << (failures == 0 ? "validate: all checks passed\n"
                              : "validate: FAILURES\n");
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state ground states of the long-range transverse-"
               "field Ising chain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  const int default_workers =
      std::max(1u, std::thread::hardware_concurrency());

  // solve
  auto* sc_solve = app.add_subcommand("solve", "single ground-state solve");
  int n = 10;
  double alpha = 2.0;
  bool nn = false;
  std::string theta = "0.25pi";
  std::string json_path, checkpoint, trace_path, warm_path;
  bool validate = false;
  CommonOpts solve_common;
  sc_solve->add_option("--n", n, "chain length")->capture_default_str();
  sc_solve->add_option("--alpha", alpha, "decay exponent")
      ->capture_default_str();
  sc_solve->add_flag("--nearest-neighbor,--nearest-neighbour", nn,
                     "nearest-neighbour couplings (alpha = inf)");
  sc_solve->add_option("--theta", theta, "angle, e.g. 0.3pi or radians")
      ->capture_default_str();
  solve_common.attach(sc_solve);
  sc_solve->add_option("--json", json_path, "result JSON path");
  sc_solve->add_option("--checkpoint", checkpoint, "covariance dump path");
  sc_solve->add_option("--trace", trace_path, "energy trace CSV path");
  sc_solve->add_option("--warm-start", warm_path, "checkpoint to start from");
  sc_solve->add_flag("--validate", validate, "compare against the oracle");
  sc_solve->set_config("--config");

  // phase-diagram
  auto* sc_phase = app.add_subcommand("phase-diagram",
                                      "entropy over a (alpha, theta) grid");
  int pd_n = 20;
  std::vector<std::string> pd_alphas{"2.0"};
  std::string pd_lo = "0.02pi", pd_hi = "0.49pi";
  int pd_points = 25;
  std::string pd_csv = "phase_diagram.csv", pd_svg;
  bool pd_timestamp = false;
  int pd_workers = default_workers;
  CommonOpts pd_common;
  sc_phase->add_option("--n", pd_n)->capture_default_str();
  sc_phase->add_option("--alphas", pd_alphas,
                       "decay exponents; 'nn' for nearest neighbour")
      ->capture_default_str();
  sc_phase->add_option("--theta-min", pd_lo)->capture_default_str();
  sc_phase->add_option("--theta-max", pd_hi)->capture_default_str();
  sc_phase->add_option("--theta-points", pd_points)->capture_default_str();
  pd_common.attach(sc_phase);
  sc_phase->add_option("--csv", pd_csv)->capture_default_str();
  sc_phase->add_option("--svg", pd_svg, "heat map (or line for one alpha)");
  sc_phase->add_flag("--timestamp", pd_timestamp,
                     "include a generation timestamp in the CSV");
  sc_phase->add_option("--workers", pd_workers)->capture_default_str();
  sc_phase->set_config("--config");

  // critical-point
  auto* sc_crit = app.add_subcommand("critical-point",
                                     "theta_max(N) pipeline and 1/N fit");
  double cp_alpha = 2.0;
  std::vector<int> cp_nset{20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::string cp_lo = "0.2pi", cp_hi = "0.45pi";
  std::string cp_json = "critical_point.json", cp_svg;
  int cp_workers = default_workers;
  CommonOpts cp_common;
  sc_crit->add_option("--alpha", cp_alpha)->capture_default_str();
  sc_crit->add_option("--n-set", cp_nset)->capture_default_str();
  sc_crit->add_option("--bracket-lo", cp_lo)->capture_default_str();
  sc_crit->add_option("--bracket-hi", cp_hi)->capture_default_str();
  cp_common.attach(sc_crit);
  sc_crit->add_option("--json", cp_json)->capture_default_str();
  sc_crit->add_option("--svg", cp_svg, "theta_max vs 1/N plot");
  sc_crit->add_option("--workers", cp_workers)->capture_default_str();
  sc_crit->set_config("--config");

  // central-charge
  auto* sc_cc = app.add_subcommand(
      "central-charge", "entropy scaling fit S = (c/6) log N + B");
  double cc_alpha = 3.0;
  std::vector<int> cc_nset{20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<int> cc_exclude{20, 30, 40};
  std::string cc_theta = "0.276pi";
  bool cc_sweep = false;
  std::string cc_lo = "0.02pi", cc_hi = "0.24pi";
  int cc_points = 12;
  std::string cc_json = "central_charge.json", cc_csv, cc_svg;
  bool cc_timestamp = false;
  int cc_workers = default_workers;
  CommonOpts cc_common;
  sc_cc->add_option("--alpha", cc_alpha)->capture_default_str();
  sc_cc->add_option("--n-set", cc_nset)->capture_default_str();
  sc_cc->add_option("--exclude", cc_exclude, "N values excluded from the fit")
      ->capture_default_str();
  sc_cc->add_option("--theta", cc_theta, "angle for the single-point fit")
      ->capture_default_str();
  sc_cc->add_flag("--gapped-sweep", cc_sweep,
                  "sweep theta and report effective c(theta)");
  sc_cc->add_option("--theta-min", cc_lo)->capture_default_str();
  sc_cc->add_option("--theta-max", cc_hi)->capture_default_str();
  sc_cc->add_option("--theta-points", cc_points)->capture_default_str();
  cc_common.attach(sc_cc);
  sc_cc->add_option("--json", cc_json)->capture_default_str();
  sc_cc->add_option("--csv", cc_csv, "solved rows CSV");
  sc_cc->add_option("--svg", cc_svg, "c(theta) plot");
  sc_cc->add_flag("--timestamp", cc_timestamp);
  sc_cc->add_option("--workers", cc_workers)->capture_default_str();
  sc_cc->set_config("--config");

  // validate
  auto* sc_val = app.add_subcommand("validate",
                                    "oracle battery with per-check margins");
  CommonOpts val_common;
  val_common.attach(sc_val);
  sc_val->set_config("--config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sc_solve->parsed()) {
      return cmd_solve(n, alpha, nn, theta, solve_common, json_path,
                       checkpoint, trace_path, warm_path, validate);
    }
    if (sc_phase->parsed()) {
      return cmd_phase_diagram(pd_n, pd_alphas, pd_lo, pd_hi, pd_points,
                               pd_common, pd_csv, pd_svg, pd_timestamp,
                               pd_workers);
    }
    if (sc_crit->parsed()) {
      return cmd_critical_point(cp_alpha, cp_nset, cp_lo, cp_hi, cp_common,
                                cp_json, cp_svg, cp_workers);
    }
    if (sc_cc->parsed()) {
      return cmd_central_charge(cc_alpha, cc_nset, cc_exclude, cc_theta,
                                cc_sweep, cc_lo, cc_hi, cc_points, cc_common,
                                cc_json, cc_csv, cc_svg, cc_timestamp,
                                cc_workers);
    }
    if (sc_val->parsed()) return cmd_validate(val_common);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
