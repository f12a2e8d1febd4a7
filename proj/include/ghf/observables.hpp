#pragma once

#include <vector>

#include "ghf/gaussian.hpp"

namespace ghf {

// Subsystem of the chain, given by 0-based site indices. Each site p owns
// the Majorana modes 2p and 2p+1.
struct Subsystem {
  std::vector<int> sites;

  static Subsystem left_half(int n_sites);     // sites 0 .. n/2-1
  static Subsystem range(int first, int count);

  std::vector<int> majorana_indices() const;   // sorted, two per site
  void validate(int n_sites) const;
};

// Von Neumann entanglement entropy (nats) of the subsystem from the
// restricted covariance matrix:
//   S = |A| log 2 - 1/2 sum_k (1 + nu_k) log(1 + nu_k),
// with nu_k the eigenvalues of the Hermitian matrix i Gamma_A, clamped to
// [-1, 1] (guard band 1e-8; larger excursions throw).
double entanglement_entropy(const CovarianceMatrix& state,
                            const Subsystem& part);

}  // namespace ghf
