#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ghf/model.hpp"

namespace ghf {

// Pure fermionic Gaussian state, represented solely by its 2N x 2N real
// antisymmetric Majorana covariance matrix. Site p (0-based) owns Majorana
// rows 2p and 2p+1. Purity means Gamma^2 = -1.
struct CovarianceMatrix {
  int n_sites = 0;
  Eigen::MatrixXd gamma;

  // max |Gamma^2 + 1| entry; 0 for an exactly pure state.
  double purity_error() const;
};

inline constexpr double kPurityTol = 1e-8;

// Block-diagonal covariance Omega = (+)_k (-1)^{flips[k]} [[0,1],[-1,0]].
// With no flips this is the theta = 0 ground state.
CovarianceMatrix block_covariance(int n, const std::vector<int>& flips = {});

// Gamma_init = O^T Omega O with random block signs and O Haar-distributed
// (QR of a standard-normal matrix, R diagonal sign-fixed). Deterministic in
// the seed.
CovarianceMatrix random_pure_covariance(int n, std::uint64_t seed);

// Wick's theorem: <a_{i1} ... a_{i2m}> = (-i)^m Pf(Gamma restricted to the
// given strictly increasing 0-based Majorana indices).
std::complex<double> wick_expectation(const CovarianceMatrix& state,
                                      const std::vector<int>& indices);

// Variational energy of the state,
//   E = -sum_p h_p Gamma_{2p,2p+1}
//       + sum_{p<q} J_pq (-1)^{q-p} Pf(Gamma | contiguous Majorana range),
// where the range for the pair (p,q) covers Majorana indices
// 2p+1 .. 2q (0-based), dimension 2(q-p).
double energy(const CovarianceMatrix& state, const CouplingTable& couplings);

// Mean-field matrix H^mf with H^mf_lm = 4 dE/dGamma_lm under the
// independent-entry convention. Exactly antisymmetric.
Eigen::MatrixXd mean_field(const CovarianceMatrix& state,
                           const CouplingTable& couplings);

// Energy and mean-field matrix from one pass over the coupling ranges.
std::pair<double, Eigen::MatrixXd> energy_and_mean_field(
    const CovarianceMatrix& state, const CouplingTable& couplings);

}  // namespace ghf
