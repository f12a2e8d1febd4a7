#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ghf/model.hpp"
#include "ghf/observables.hpp"

namespace ghf {

// Exact spin-basis ground state for small chains. Basis states are indexed
// by bitstrings where bit p set means sigma^z_p = +1.
struct DenseSpinState {
  int n_sites = 0;
  Eigen::VectorXcd amplitudes;  // length 2^n, unit norm
};

struct GroundResult {
  double energy = 0.0;
  DenseSpinState state;
  bool degenerate = false;  // gap to the first excited state < 1e-10
  double gap = 0.0;
};

// Minimal eigenpair of the spin Hamiltonian. Dense diagonalization up to
// n = 10, matrix-free Lanczos with full reorthogonalization beyond; n <= 14.
GroundResult exact_ground(const ModelSpec& spec);
GroundResult exact_ground(const CouplingTable& couplings);

// Von Neumann entropy (nats) of the reduced density matrix on `part`.
double exact_entropy(const DenseSpinState& state, const Subsystem& part);

// <psi| a_{i1} ... a_{i2m} |psi> for 0-based Majorana indices, via the
// Jordan-Wigner representation
//   a_{2p}   = [prod_{q<p} sigma^z_q] sigma^x_p,
//   a_{2p+1} = [prod_{q<p} sigma^z_q] sigma^y_p.
// n <= 10.
std::complex<double> exact_correlator(const DenseSpinState& state,
                                      const std::vector<int>& indices);

}  // namespace ghf
