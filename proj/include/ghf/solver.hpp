#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghf/gaussian.hpp"
#include "ghf/model.hpp"

namespace ghf {

enum class Method { ITE, ZT };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct SolverOptions {
  Method method = Method::ZT;
  double dtau = 0.05;          // ITE step
  int max_iters = 0;           // 0 -> per-method default (50000 ITE, 5000 ZT)
  double energy_tol = 1e-10;   // per-iteration |dE| threshold
  double grad_tol = 1e-7;      // ||[H^mf, Gamma]||_max threshold
  int restarts = 5;
  double mixing = 1.0;         // ZT damping, 1.0 = undamped
  std::uint64_t seed = 0;
  bool record_trace = false;
  // Used as the initial state of restart 0 instead of a random draw.
  std::optional<Eigen::MatrixXd> warm_start;

  void validate() const;
  int effective_max_iters() const;
};

struct SolveResult {
  CovarianceMatrix gamma;
  double energy = 0.0;
  long iterations = 0;
  bool converged = false;
  std::string reason;
  int restart_index = -1;
  double residual = 0.0;          // final ||[H^mf, Gamma]||_max
  int dtau_halvings = 0;          // ITE only
  bool degenerate = false;        // ZT hit a near-zero eigenvalue of iH^mf
  std::vector<double> energy_trace;
};

// exp(K) for antisymmetric K; the result is orthogonal up to rounding.
Eigen::MatrixXd antisymmetric_expm(const Eigen::MatrixXd& k);

// Spectral sign projection i U sgn(D) U^dag of the Hermitian matrix
// i*skew, evaluated in real arithmetic (real Schur form, with a symmetric
// eigenproblem of -skew^2 as fallback when the QR iteration fails) so the
// result is exactly real, antisymmetric and pure. Applied to a mean-field
// matrix this is one ZT update (the ground state fills the negative
// modes). Zero modes (|eigenvalue| < 1e-12 relative) set `degenerate` and
// are completed with a canonical symplectic pairing.
Eigen::MatrixXd sign_projection(const Eigen::MatrixXd& skew,
                                bool* degenerate = nullptr);

// Nearest pure covariance matrix to a drifted one. sign_projection negates
// the block structure of its argument (the ground state fills the negative
// modes of the mean field), so the retraction feeds it the negated input.
inline Eigen::MatrixXd purity_retraction(const Eigen::MatrixXd& gamma,
                                         bool* degenerate = nullptr) {
  return sign_projection(-gamma, degenerate);
}

// One discretized imaginary-time step Gamma -> O Gamma O^T with
// O = exp((dtau/2) [H^mf, Gamma]). Purity is preserved by construction.
CovarianceMatrix ite_step(const CovarianceMatrix& state,
                          const CouplingTable& couplings, double dtau);
CovarianceMatrix ite_step(const CovarianceMatrix& state,
                          const Eigen::MatrixXd& h_mf, double dtau);

// One ZT self-consistency update Gamma -> i U sgn(D) U^dag from the
// diagonalization of i H^mf(Gamma). With mixing < 1 the update is blended
// with the input and retracted back onto the pure manifold.
CovarianceMatrix zt_iterate(const CovarianceMatrix& state,
                            const CouplingTable& couplings,
                            double mixing = 1.0, bool* degenerate = nullptr);

// Full ground-state search: `restarts` independent trajectories from seeds
// seed, seed+1, ...; returns the lowest-energy converged result (ties break
// to the lowest restart index), or the best run flagged unconverged.
SolveResult solve(const ModelSpec& spec, const SolverOptions& opts);
SolveResult solve(const CouplingTable& couplings, const SolverOptions& opts);

}  // namespace ghf
