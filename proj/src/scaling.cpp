#include "ghf/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "ghf/observables.hpp"

namespace ghf {

LinearFit linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size()) {
    throw std::invalid_argument("linear_fit: need at least 2 matching points");
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("linear_fit: degenerate abscissae");
  }
  LinearFit fit;
  fit.n_points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    fit.residual_ss += r * r;
  }
  if (n > 2) {
    const double s2 = fit.residual_ss / (n - 2);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return fit;
}

ThresholdFit fit_threshold(const std::vector<std::pair<int, double>>& rows) {
  std::set<int> distinct;
  std::vector<double> x, y;
  for (const auto& [n, theta] : rows) {
    distinct.insert(n);
    x.push_back(1.0 / n);
    y.push_back(theta);
  }
  if (distinct.size() < 3 || distinct.size() != rows.size()) {
    throw std::invalid_argument(
        "fit_threshold: need >= 3 rows with distinct N");
  }
  ThresholdFit fit;
  fit.raw = linear_fit(x, y);
  fit.theta_c_inf = fit.raw.intercept;
  fit.a = fit.raw.slope;
  fit.theta_c_stderr = fit.raw.intercept_stderr;
  fit.a_stderr = fit.raw.slope_stderr;
  return fit;
}

CentralChargeFit fit_central_charge(
    const std::vector<std::pair<int, double>>& rows,
    const std::vector<int>& exclude) {
  std::set<int> skip(exclude.begin(), exclude.end());
  std::set<int> distinct;
  std::vector<double> x, y;
  CentralChargeFit fit;
  for (const auto& [n, s] : rows) {
    if (skip.count(n)) continue;
    if (!distinct.insert(n).second) {
      throw std::invalid_argument("fit_central_charge: duplicate N");
    }
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(s);
    fit.n_used.push_back(n);
  }
  if (x.size() < 3) {
    throw std::invalid_argument(
        "fit_central_charge: need >= 3 points after exclusion");
  }
  fit.raw = linear_fit(x, y);
  fit.c = 6.0 * fit.raw.slope;
  fit.b = fit.raw.intercept;
  fit.c_stderr = 6.0 * fit.raw.slope_stderr;
  fit.b_stderr = fit.raw.intercept_stderr;
  return fit;
}

double brent_maximize(const std::function<double(double)>& f, double lo,
                      double hi, double xtol, int* evaluations) {
  if (!(lo < hi)) throw std::invalid_argument("brent_maximize: empty bracket");
  // Brent's fminbnd on -f.
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  int evals = 0;
  auto g = [&](double t) {
    ++evals;
    return -f(t);
  };
  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = g(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = xtol;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool use_golden = true;
    if (std::abs(e) > tol1) {
      // Parabolic interpolation through (x, w, v).
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_old = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u =
        x + ((std::abs(d) >= tol1) ? d : (d > 0.0 ? tol1 : -tol1));
    const double fu = g(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  if (evaluations != nullptr) *evaluations = evals;
  return x;
}

ThetaMaxResult find_theta_max(const ModelSpec& base, const SolverOptions& opts,
                              std::pair<double, double> bracket) {
  const double pi = 2.0 * std::asin(1.0);
  if (!(bracket.first > 0.0 && bracket.second < 0.5 * pi &&
        bracket.first < bracket.second)) {
    throw std::invalid_argument(
        "find_theta_max: bracket must lie inside (0, pi/2)");
  }
  opts.validate();

  ThetaMaxResult result;
  std::optional<Eigen::MatrixXd> warm;
  double best_s = -1.0, best_theta = 0.0;
  int eval_index = 0;
  auto objective = [&](double theta) {
    ModelSpec spec = base;
    spec.theta = theta;
    SolverOptions local = opts;
    local.warm_start = warm;
    local.seed = opts.seed + 1000ull * static_cast<std::uint64_t>(eval_index++);
    SolveResult solved = solve(spec, local);
    warm = solved.gamma.gamma;
    const double s =
        entanglement_entropy(solved.gamma, Subsystem::left_half(spec.n_sites));
    if (s > best_s) {
      best_s = s;
      best_theta = theta;
    }
    return s;
  };

  const double xtol = kThetaTolFactor * pi;
  double lo = bracket.first, hi = bracket.second;
  double theta = brent_maximize(objective, lo, hi, xtol, &result.evaluations);
  // A maximizer pinned to a bracket edge suggests the peak lies outside:
  // widen once and retry.
  for (int attempt = 0; attempt < 2; ++attempt) {
    const bool at_edge = theta - lo < 2.0 * xtol || hi - theta < 2.0 * xtol;
    if (!at_edge) break;
    if (attempt == 1) {
      result.flagged = true;
      break;
    }
    const double width = hi - lo;
    lo = std::max(0.02 * pi, lo - 0.5 * width);
    hi = std::min(0.49 * pi, hi + 0.5 * width);
    result.bracket_widened = true;
    int more = 0;
    theta = brent_maximize(objective, lo, hi, xtol, &more);
    result.evaluations += more;
  }
  result.theta_max = best_theta;
  result.s_max = best_s;
  return result;
}

void parallel_for(int count, int workers, const std::function<void(int)>& f) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

CriticalPointResult critical_point_pipeline(double alpha,
                                            const std::vector<int>& n_set,
                                            const SolverOptions& opts,
                                            std::pair<double, double> bracket,
                                            int workers) {
  CriticalPointResult out;
  out.rows.resize(n_set.size());
  parallel_for(static_cast<int>(n_set.size()), workers, [&](int i) {
    const int n = n_set[i];
    ModelSpec spec = ModelSpec::power_law(n, 0.5 * bracket.first + 0.5 * bracket.second, alpha);
    SolverOptions local = opts;
    local.seed = opts.seed + 10007ull * static_cast<std::uint64_t>(n);
    ThetaMaxResult tm = find_theta_max(spec, local, bracket);
    out.rows[i] = {n, tm.theta_max, tm.s_max, tm.flagged};
  });
  std::vector<std::pair<int, double>> rows;
  for (const auto& r : out.rows) {
    if (!r.flagged) rows.emplace_back(r.n, r.theta_max);
  }
  out.fit = fit_threshold(rows);
  return out;
}

std::vector<ChargeSweepPoint> effective_charge_sweep(
    double alpha, const std::vector<double>& theta_grid,
    const std::vector<int>& n_set, const SolverOptions& opts, int workers) {
  const int n_theta = static_cast<int>(theta_grid.size());
  const int n_sizes = static_cast<int>(n_set.size());
  // rows[size index][theta index]
  std::vector<std::vector<ScanPoint>> rows(
      n_sizes, std::vector<ScanPoint>(n_theta));

  parallel_for(n_sizes, workers, [&](int si) {
    const int n = n_set[si];
    std::optional<Eigen::MatrixXd> warm;
    for (int ti = 0; ti < n_theta; ++ti) {
      ModelSpec spec = ModelSpec::power_law(n, theta_grid[ti], alpha);
      SolverOptions local = opts;
      local.warm_start = warm;
      local.seed = opts.seed + 131071ull * static_cast<std::uint64_t>(n) +
                   7919ull * static_cast<std::uint64_t>(ti);
      SolveResult solved = solve(spec, local);
      warm = solved.gamma.gamma;
      ScanPoint& pt = rows[si][ti];
      pt.n = n;
      pt.alpha = alpha;
      pt.theta = theta_grid[ti];
      pt.energy = solved.energy;
      pt.entropy =
          entanglement_entropy(solved.gamma, Subsystem::left_half(n));
      pt.method = local.method;
      pt.converged = solved.converged;
      pt.seed = local.seed;
    }
  });

  std::vector<ChargeSweepPoint> out(n_theta);
  for (int ti = 0; ti < n_theta; ++ti) {
    ChargeSweepPoint& pt = out[ti];
    pt.theta = theta_grid[ti];
    std::vector<std::pair<int, double>> fit_rows;
    for (int si = 0; si < n_sizes; ++si) {
      pt.rows.push_back(rows[si][ti]);
      if (rows[si][ti].converged) {
        fit_rows.emplace_back(rows[si][ti].n, rows[si][ti].entropy);
      }
    }
    // Non-convergence is flagged per row; a theta point without enough
    // converged rows keeps a NaN fit instead of aborting the sweep.
    try {
      pt.fit = fit_central_charge(fit_rows);
    } catch (const std::invalid_argument&) {
      pt.fit.c = std::numeric_limits<double>::quiet_NaN();
      pt.fit.b = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

}  // namespace ghf
