#pragma once

#include <Eigen/Dense>

namespace ghf {

// Long-range antiferromagnetic transverse-field Ising chain,
//   H = sum_p h_p sigma^z_p + sum_{p<q} J_pq sigma^x_p sigma^x_q,
// with h_p = cos(theta) and J_pq = sin(theta)/|p-q|^alpha on an open chain.
// The nearest-neighbour limit (alpha -> infinity) is kept as an explicit
// flag so that J_pq = sin(theta) delta_{q,p+1} holds exactly.
struct ModelSpec {
  int n_sites = 0;
  double theta = 0.0;  // radians
  double alpha = 0.0;  // decay exponent; ignored when nearest_neighbour
  bool nearest_neighbour = false;

  static ModelSpec power_law(int n, double theta, double alpha);
  static ModelSpec nearest(int n, double theta);

  // Throws std::invalid_argument on violation of the model constraints
  // (n >= 2, theta in [0, pi/2], alpha > 0 unless nearest-neighbour).
  void validate() const;
};

// Materialized field and coupling tables. J is strictly upper triangular;
// the lower triangle and diagonal are zero.
struct CouplingTable {
  Eigen::VectorXd h;
  Eigen::MatrixXd J;

  int size() const { return static_cast<int>(h.size()); }
};

CouplingTable build_couplings(const ModelSpec& spec);

}  // namespace ghf
