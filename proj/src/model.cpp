#include "ghf/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghf {

ModelSpec ModelSpec::power_law(int n, double theta, double alpha) {
  ModelSpec s;
  s.n_sites = n;
  s.theta = theta;
  s.alpha = alpha;
  s.nearest_neighbour = false;
  s.validate();
  return s;
}

ModelSpec ModelSpec::nearest(int n, double theta) {
  ModelSpec s;
  s.n_sites = n;
  s.theta = theta;
  s.alpha = 0.0;
  s.nearest_neighbour = true;
  s.validate();
  return s;
}

void ModelSpec::validate() const {
  if (n_sites < 2) {
    throw std::invalid_argument("ModelSpec: need at least 2 sites, got " +
                                std::to_string(n_sites));
  }
  const double half_pi = std::asin(1.0);
  if (!(theta >= 0.0 && theta <= half_pi)) {
    throw std::invalid_argument("ModelSpec: theta must lie in [0, pi/2]");
  }
  if (!nearest_neighbour) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw std::invalid_argument(
          "ModelSpec: alpha must be positive and finite (use the "
          "nearest-neighbour flag for the alpha -> infinity limit)");
    }
  }
}

CouplingTable build_couplings(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  CouplingTable t;
  t.h = Eigen::VectorXd::Constant(n, std::cos(spec.theta));
  t.J = Eigen::MatrixXd::Zero(n, n);
  const double j0 = std::sin(spec.theta);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      if (spec.nearest_neighbour) {
        t.J(p, q) = (q == p + 1) ? j0 : 0.0;
      } else {
        t.J(p, q) = j0 / std::pow(static_cast<double>(q - p), spec.alpha);
      }
    }
  }
  return t;
}

}  // namespace ghf
