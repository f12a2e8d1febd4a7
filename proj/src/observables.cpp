#include "ghf/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ghf/pfaffian.hpp"

namespace ghf {

Subsystem Subsystem::left_half(int n_sites) {
  return range(0, n_sites / 2);
}

Subsystem Subsystem::range(int first, int count) {
  Subsystem s;
  s.sites.resize(count);
  for (int k = 0; k < count; ++k) s.sites[k] = first + k;
  return s;
}

std::vector<int> Subsystem::majorana_indices() const {
  std::vector<int> idx;
  idx.reserve(2 * sites.size());
  std::vector<int> sorted = sites;
  std::sort(sorted.begin(), sorted.end());
  for (int p : sorted) {
    idx.push_back(2 * p);
    idx.push_back(2 * p + 1);
  }
  return idx;
}

void Subsystem::validate(int n_sites) const {
  if (sites.empty()) {
    throw std::invalid_argument("Subsystem: empty site list");
  }
  std::vector<int> sorted = sites;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0 || sorted[k] >= n_sites) {
      throw std::invalid_argument("Subsystem: site index out of range");
    }
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      throw std::invalid_argument("Subsystem: duplicate site");
    }
  }
}

namespace {

// (1+x) log(1+x) with the x -> -1 limit set to 0.
double xlog_term(double nu) {
  const double x = 1.0 + nu;
  return x <= 0.0 ? 0.0 : x * std::log(x);
}

}  // namespace

double entanglement_entropy(const CovarianceMatrix& state,
                            const Subsystem& part) {
  part.validate(state.n_sites);
  if (state.purity_error() > 10.0 * kPurityTol) {
    throw std::invalid_argument("entanglement_entropy: state is not pure");
  }
  const std::vector<int> idx = part.majorana_indices();
  Eigen::MatrixXd ga = principal_submatrix(state.gamma, idx);
  const std::complex<double> iu(0.0, 1.0);
  Eigen::MatrixXcd herm = iu * ga.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("entanglement_entropy: eigensolver failed");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    double nu = es.eigenvalues()(k);
    if (nu < -1.0 - 1e-8 || nu > 1.0 + 1e-8) {
      throw std::runtime_error(
          "entanglement_entropy: eigenvalue outside [-1, 1]; covariance "
          "matrix is corrupted");
    }
    nu = std::clamp(nu, -1.0, 1.0);
    sum += xlog_term(nu);
  }
  const double s =
      static_cast<double>(part.sites.size()) * std::log(2.0) - 0.5 * sum;
  return std::max(0.0, s);
}

}  // namespace ghf
