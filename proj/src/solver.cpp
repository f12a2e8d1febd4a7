#include "ghf/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "ghf/pfaffian.hpp"

namespace ghf {

std::string method_name(Method m) { return m == Method::ITE ? "ite" : "zt"; }

Method parse_method(const std::string& name) {
  if (name == "ite" || name == "ITE") return Method::ITE;
  if (name == "zt" || name == "ZT") return Method::ZT;
  throw std::invalid_argument("unknown method '" + name + "' (use ite|zt)");
}

void SolverOptions::validate() const {
  if (!(dtau > 0.0)) throw std::invalid_argument("SolverOptions: dtau <= 0");
  if (!(energy_tol > 0.0) || !(grad_tol > 0.0)) {
    throw std::invalid_argument("SolverOptions: tolerances must be positive");
  }
  if (restarts < 1) throw std::invalid_argument("SolverOptions: restarts < 1");
  if (!(mixing > 0.0 && mixing <= 1.0)) {
    throw std::invalid_argument("SolverOptions: mixing must be in (0, 1]");
  }
  if (max_iters < 0) throw std::invalid_argument("SolverOptions: max_iters < 0");
}

int SolverOptions::effective_max_iters() const {
  if (max_iters > 0) return max_iters;
  return method == Method::ITE ? 50000 : 5000;
}

Eigen::MatrixXd antisymmetric_expm(const Eigen::MatrixXd& k) {
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if (antisymmetry_error(k) > 1e-10 * scale) {
    throw std::invalid_argument("antisymmetric_expm: input not antisymmetric");
  }
  return k.exp();
}

Eigen::MatrixXd sign_projection(const Eigen::MatrixXd& skew, bool* degenerate) {
  const double scale = std::max(1.0, skew.cwiseAbs().maxCoeff());
  if (antisymmetry_error(skew) > 1e-9 * scale) {
    throw std::invalid_argument("sign_projection: input not antisymmetric");
  }
  const Eigen::Index d = skew.rows();

  // Primary route: real Schur form, skew = Q T Q^T with T quasi-diagonal,
  // the 2x2 blocks [[0, b], [-b, 0]] carrying the eigenvalue pairs +-ib
  // and any 1x1 blocks carrying exact zeros. The projection replaces b by
  // sgn(b); zero modes (1x1 blocks, paired consecutively) get the
  // canonical symplectic block. All arithmetic stays real, so conjugate
  // pairing can never be lost, no matter how small |b| gets, and the
  // backward error is at round-off even for tightly clustered modes.
  Eigen::RealSchur<Eigen::MatrixXd> schur(d);
  schur.compute(skew, /*computeU=*/true);
  if (schur.info() == Eigen::Success) {
    const Eigen::MatrixXd& t = schur.matrixT();
    const Eigen::MatrixXd& q = schur.matrixU();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
    bool degen = false;
    std::vector<Eigen::Index> zeros;
    Eigen::Index k = 0;
    while (k < d) {
      const bool pair = k + 1 < d && t(k + 1, k) != 0.0;
      if (pair) {
        const double b = 0.5 * (t(k, k + 1) - t(k + 1, k));
        if (std::abs(b) < 1e-12 * scale) degen = true;
        // i U sgn(D) U^dag maps the block [[0,b],[-b,0]] to -sgn(b) times
        // the symplectic unit, cf. the field-only fixed point.
        const double sgn = b >= 0.0 ? -1.0 : 1.0;
        s(k, k + 1) = sgn;
        s(k + 1, k) = -sgn;
        k += 2;
      } else {
        zeros.push_back(k);
        k += 1;
      }
    }
    if (zeros.size() % 2 == 0) {
      for (std::size_t z = 0; z + 1 < zeros.size(); z += 2) {
        degen = true;
        s(zeros[z], zeros[z + 1]) = 1.0;
        s(zeros[z + 1], zeros[z]) = -1.0;
      }
      if (degenerate != nullptr) *degenerate = degen;
      return antisymmetrize_upper(q * s * q.transpose());
    }
    // An odd zero-mode count means the quasi-triangular form mislabelled a
    // tiny pair; fall through to the eigenvector route.
  }

  // Fallback for the rare inputs on which the QR iteration fails to
  // converge: the symmetric PSD matrix -skew^2 has eigenvalues b^2, and
  // every eigenvector v with -skew^2 v = b^2 v, b > 0, spans with
  // u = skew v / b an invariant plane contributing v u^T - u v^T to the
  // projection. Summing v -> v (skew v)^T / |skew v| over the full
  // eigenbasis covers each plane twice (once via v, once via u), hence
  // the factor 1/2. Zero modes (|skew v| at round-off) are completed with
  // a canonical symplectic pairing.
  Eigen::MatrixXd s2 = -skew * skew;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (s2 + s2.transpose()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("sign_projection: eigendecomposition failed");
  }

  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(d, d);
  bool degen = false;
  std::vector<Eigen::VectorXd> kernel;
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(k);
    Eigen::VectorXd u = skew * v;
    const double b = u.norm();
    if (b <= 1e-12 * scale) {
      kernel.push_back(std::move(v));
      continue;
    }
    u /= b;
    result.noalias() += 0.5 * (v * u.transpose() - u * v.transpose());
  }
  if (kernel.size() % 2 != 0) {
    throw std::runtime_error("sign_projection: odd zero-mode count");
  }
  for (std::size_t z = 0; z + 1 < kernel.size(); z += 2) {
    degen = true;
    result.noalias() += kernel[z] * kernel[z + 1].transpose() -
                        kernel[z + 1] * kernel[z].transpose();
  }
  if (degenerate != nullptr) *degenerate = degen;
  return antisymmetrize_upper(result);
}

namespace {

double commutator_residual(const Eigen::MatrixXd& h,
                           const Eigen::MatrixXd& gamma) {
  return (h * gamma - gamma * h).cwiseAbs().maxCoeff();
}

}  // namespace

CovarianceMatrix ite_step(const CovarianceMatrix& state,
                          const CouplingTable& couplings, double dtau) {
  return ite_step(state, mean_field(state, couplings), dtau);
}

CovarianceMatrix ite_step(const CovarianceMatrix& state,
                          const Eigen::MatrixXd& h_mf, double dtau) {
  if (!(dtau > 0.0)) throw std::invalid_argument("ite_step: dtau <= 0");
  if (state.purity_error() > 10.0 * kPurityTol) {
    throw std::invalid_argument(
        "ite_step: input state is not pure; re-orthogonalize first");
  }
  Eigen::MatrixXd k =
      0.5 * dtau * (h_mf * state.gamma - state.gamma * h_mf);
  Eigen::MatrixXd o = antisymmetric_expm(antisymmetrize_upper(k));
  CovarianceMatrix next;
  next.n_sites = state.n_sites;
  next.gamma = antisymmetrize_upper(o * state.gamma * o.transpose());
  return next;
}

CovarianceMatrix zt_iterate(const CovarianceMatrix& state,
                            const CouplingTable& couplings, double mixing,
                            bool* degenerate) {
  Eigen::MatrixXd h = mean_field(state, couplings);
  Eigen::MatrixXd updated = sign_projection(h, degenerate);
  CovarianceMatrix next;
  next.n_sites = state.n_sites;
  if (mixing >= 1.0) {
    next.gamma = std::move(updated);
  } else {
    // Damped update, retracted back onto the pure manifold.
    Eigen::MatrixXd blend =
        (1.0 - mixing) * state.gamma + mixing * updated;
    next.gamma = purity_retraction(blend);
  }
  return next;
}

namespace {

SolveResult run_ite(const CouplingTable& couplings, CovarianceMatrix gamma,
                    const SolverOptions& opts) {
  SolveResult res;
  double dtau = opts.dtau;
  auto [e, h] = energy_and_mean_field(gamma, couplings);
  if (opts.record_trace) res.energy_trace.push_back(e);
  double e_prev = e;
  const int max_iters = opts.effective_max_iters();
  long it = 0;
  for (it = 0; it < max_iters; ++it) {
    Eigen::MatrixXd comm = h * gamma.gamma - gamma.gamma * h;
    const double residual = comm.cwiseAbs().maxCoeff();
    if (it > 0 && std::abs(e - e_prev) < opts.energy_tol &&
        residual < opts.grad_tol) {
      res.converged = true;
      res.reason = "energy stall and gradient residual below tolerance";
      break;
    }
    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd o =
          antisymmetric_expm(antisymmetrize_upper(0.5 * dtau * comm));
      CovarianceMatrix cand;
      cand.n_sites = gamma.n_sites;
      cand.gamma = antisymmetrize_upper(o * gamma.gamma * o.transpose());
      if (cand.purity_error() > kPurityTol) {
        cand.gamma = purity_retraction(cand.gamma);
      }
      auto [e_cand, h_cand] = energy_and_mean_field(cand, couplings);
      if (e_cand <= e + 1e-12) {
        e_prev = e;
        gamma = std::move(cand);
        e = e_cand;
        h = std::move(h_cand);
        accepted = true;
      } else {
        if (res.dtau_halvings >= 20) {
          res.reason = "dtau halved 20 times without energy decrease";
          it = max_iters;  // give up
          accepted = true;
          e_prev = e;
        } else {
          dtau *= 0.5;
          ++res.dtau_halvings;
        }
      }
    }
    if (opts.record_trace) res.energy_trace.push_back(e);
  }
  if (!res.converged && res.reason.empty()) res.reason = "max_iters reached";
  res.gamma = std::move(gamma);
  res.energy = energy(res.gamma, couplings);
  res.iterations = it;
  res.residual =
      commutator_residual(mean_field(res.gamma, couplings), res.gamma.gamma);
  return res;
}

SolveResult run_zt(const CouplingTable& couplings, CovarianceMatrix gamma,
                   const SolverOptions& opts) {
  SolveResult res;
  auto [e, h] = energy_and_mean_field(gamma, couplings);
  if (opts.record_trace) res.energy_trace.push_back(e);
  double e_prev = e;
  double mix = opts.mixing;
  double res_best = std::numeric_limits<double>::max();
  int stall = 0;
  const int max_iters = opts.effective_max_iters();
  long it = 0;
  for (it = 0; it < max_iters; ++it) {
    const double residual = commutator_residual(h, gamma.gamma);
    if (it > 0 && std::abs(e - e_prev) < opts.energy_tol &&
        residual < opts.grad_tol) {
      res.converged = true;
      res.reason = "energy stall and gradient residual below tolerance";
      break;
    }
    // Deep in the ordered phase the undamped map can settle into a
    // period-2 limit cycle: the energy plateaus at round-off level while
    // the residual stops decreasing. When the residual has not improved
    // for several iterations, halve the mixing to restore contraction.
    if (residual < 0.9 * res_best) {
      res_best = residual;
      stall = 0;
    } else if (++stall >= 8 && mix > 0.25) {
      mix *= 0.5;
      stall = 0;
      res_best = residual;
    }
    bool degen = false;
    Eigen::MatrixXd updated = sign_projection(h, &degen);
    res.degenerate = res.degenerate || degen;
    if (mix < 1.0) {
      updated =
          purity_retraction((1.0 - mix) * gamma.gamma + mix * updated);
    }
    gamma.gamma = std::move(updated);
    e_prev = e;
    std::tie(e, h) = energy_and_mean_field(gamma, couplings);
    if (opts.record_trace) res.energy_trace.push_back(e);
  }
  if (!res.converged) res.reason = "max_iters reached";
  res.gamma = std::move(gamma);
  res.energy = energy(res.gamma, couplings);
  res.iterations = it;
  res.residual =
      commutator_residual(mean_field(res.gamma, couplings), res.gamma.gamma);
  return res;
}

}  // namespace

SolveResult solve(const ModelSpec& spec, const SolverOptions& opts) {
  return solve(build_couplings(spec), opts);
}

SolveResult solve(const CouplingTable& couplings, const SolverOptions& opts) {
  opts.validate();
  const int n = couplings.size();
  SolveResult best;
  bool have_best = false;
  for (int r = 0; r < opts.restarts; ++r) {
    CovarianceMatrix init;
    if (r == 0 && opts.warm_start.has_value()) {
      init.n_sites = n;
      init.gamma = antisymmetrize_upper(*opts.warm_start);
      if (init.gamma.rows() != 2 * n) {
        throw std::invalid_argument("solve: warm start dimension mismatch");
      }
      if (init.purity_error() > kPurityTol) {
        init.gamma = purity_retraction(init.gamma);
      }
    } else {
      init = random_pure_covariance(n, opts.seed + static_cast<std::uint64_t>(r));
      if (opts.method == Method::ITE) {
        // The ITE flow conserves fermion parity Pf(Gamma); alternate the
        // parity across restarts so both sectors are always explored.
        const double want = (r % 2 == 0) ? 1.0 : -1.0;
        if (pfaffian(init.gamma) * want < 0.0) {
          // reflection a_0 -> -a_0 flips the parity, preserves purity
          init.gamma.row(0) = -init.gamma.row(0);
          init.gamma.col(0) = -init.gamma.col(0);
        }
      }
    }
    SolveResult run = opts.method == Method::ITE
                          ? run_ite(couplings, std::move(init), opts)
                          : run_zt(couplings, std::move(init), opts);
    run.restart_index = r;
    // Converged runs always beat unconverged ones; among equals the lower
    // energy wins, ties (within 1e-12) to the lowest restart index.
    const bool better =
        !have_best ||
        (run.converged && !best.converged) ||
        (run.converged == best.converged && run.energy < best.energy - 1e-12);
    if (better) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

}  // namespace ghf
