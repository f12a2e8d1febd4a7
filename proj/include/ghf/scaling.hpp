#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ghf/model.hpp"
#include "ghf/solver.hpp"

namespace ghf {

// One solved point of a parameter sweep.
struct ScanPoint {
  int n = 0;
  double alpha = 0.0;  // infinity encoded by nearest_neighbour flag
  bool nearest_neighbour = false;
  double theta = 0.0;
  double energy = 0.0;
  double entropy = 0.0;  // half-chain, nats
  Method method = Method::ZT;
  bool converged = false;
  std::uint64_t seed = 0;
};

// Straight-line least squares y = slope * x + intercept with parameter
// standard errors from the residual variance.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double residual_ss = 0.0;
  int n_points = 0;
};

LinearFit linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y);

// theta_max(N) = theta_c_inf + a / N
struct ThresholdFit {
  double theta_c_inf = 0.0;
  double a = 0.0;
  double theta_c_stderr = 0.0;
  double a_stderr = 0.0;
  LinearFit raw;
};

// S_{N/2} = (c/6) log N + B
struct CentralChargeFit {
  double c = 0.0;
  double b = 0.0;
  double c_stderr = 0.0;
  double b_stderr = 0.0;
  std::vector<int> n_used;  // fit window, after exclusions
  LinearFit raw;
};

ThresholdFit fit_threshold(const std::vector<std::pair<int, double>>& rows);
CentralChargeFit fit_central_charge(
    const std::vector<std::pair<int, double>>& rows,
    const std::vector<int>& exclude = {});

struct ThetaMaxResult {
  double theta_max = 0.0;
  double s_max = 0.0;
  int evaluations = 0;
  bool bracket_widened = false;
  bool flagged = false;  // maximizer stuck at the bracket edge after widening
};

inline constexpr double kThetaTolFactor = 1e-4;  // abscissa tol = 1e-4 * pi

// Bounded scalar maximization (golden section with parabolic acceleration).
double brent_maximize(const std::function<double(double)>& f, double lo,
                      double hi, double xtol, int* evaluations = nullptr);

// Maximizes theta -> S_{N/2}(ground state at theta) over the bracket.
// Every objective evaluation runs a full ground-state solve; consecutive
// evaluations are warm-started from the previous converged state, with the
// remaining restarts drawn fresh.
ThetaMaxResult find_theta_max(const ModelSpec& base, const SolverOptions& opts,
                              std::pair<double, double> bracket);

struct CriticalPointRow {
  int n = 0;
  double theta_max = 0.0;
  double s_max = 0.0;
  bool flagged = false;
};

struct CriticalPointResult {
  std::vector<CriticalPointRow> rows;
  ThresholdFit fit;
};

// Threshold pipeline: find_theta_max for each N, then the 1/N fit.
// Jobs run on `workers` threads with a deterministic job -> seed mapping.
CriticalPointResult critical_point_pipeline(double alpha,
                                            const std::vector<int>& n_set,
                                            const SolverOptions& opts,
                                            std::pair<double, double> bracket,
                                            int workers = 1);

struct ChargeSweepPoint {
  double theta = 0.0;
  CentralChargeFit fit;
  std::vector<ScanPoint> rows;
};

// Effective-central-charge sweep: for each theta in the grid, solves every
// N, fits S = (c/6) log N + B. Within each N the theta scan is sequential
// and warm-started; different N run in parallel.
std::vector<ChargeSweepPoint> effective_charge_sweep(
    double alpha, const std::vector<double>& theta_grid,
    const std::vector<int>& n_set, const SolverOptions& opts,
    int workers = 1);

// Runs f(i) for i in [0, count) on up to `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& f);

}  // namespace ghf
