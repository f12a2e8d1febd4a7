#include "ghf/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ghf {

namespace {

constexpr int kMaxSites = 14;
constexpr int kDenseLimit = 10;

double diagonal_element(const CouplingTable& c, std::size_t b) {
  const int n = c.size();
  double e = 0.0;
  for (int p = 0; p < n; ++p) {
    e += ((b >> p) & 1u) ? c.h(p) : -c.h(p);
  }
  return e;
}

// y = H x for the spin Hamiltonian, matrix-free.
void apply_hamiltonian(const CouplingTable& c, const Eigen::VectorXd& x,
                       Eigen::VectorXd& y) {
  const int n = c.size();
  const std::size_t dim = x.size();
  for (std::size_t b = 0; b < dim; ++b) y(b) = diagonal_element(c, b) * x(b);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double j = c.J(p, q);
      if (j == 0.0) continue;
      const std::size_t mask = (1ull << p) | (1ull << q);
      for (std::size_t b = 0; b < dim; ++b) {
        y(b ^ mask) += j * x(b);
      }
    }
  }
}

GroundResult ground_dense(const CouplingTable& c) {
  const int n = c.size();
  const std::size_t dim = 1ull << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) h(b, b) = diagonal_element(c, b);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double j = c.J(p, q);
      if (j == 0.0) continue;
      const std::size_t mask = (1ull << p) | (1ull << q);
      for (std::size_t b = 0; b < dim; ++b) h(b ^ mask, b) += j;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  GroundResult res;
  res.energy = es.eigenvalues()(0);
  res.gap = es.eigenvalues()(1) - es.eigenvalues()(0);
  res.degenerate = res.gap < 1e-10;
  res.state.n_sites = n;
  res.state.amplitudes = es.eigenvectors().col(0).cast<std::complex<double>>();
  return res;
}

// Lowest eigenpair within one spin-flip parity sector (popcount(b) mod 2).
// H commutes with prod_p sigma^z_p, so the Krylov space never leaves the
// sector; this keeps Lanczos away from the near-degenerate cat-state pairs
// that straddle the two sectors deep in the ordered phase.
struct SectorResult {
  double e0 = 0.0;
  double internal_gap = 0.0;
  Eigen::VectorXd state;
};

SectorResult lanczos_sector(const CouplingTable& c, int sector) {
  const int n = c.size();
  const std::size_t dim = 1ull << n;
  const int max_steps = std::min<std::size_t>(dim, 400);

  std::mt19937_64 rng(0x5eedu + static_cast<unsigned>(sector));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    if ((std::popcount(b) & 1) == sector) v(b) = normal(rng);
  }
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  Eigen::VectorXd w(dim);
  basis.push_back(v);
  double prev_e0 = std::numeric_limits<double>::max();
  Eigen::VectorXd ritz;
  Eigen::MatrixXd tri_vecs;
  int steps = 0;
  for (int j = 0; j < max_steps; ++j) {
    apply_hamiltonian(c, basis[j], w);
    alpha.push_back(basis[j].dot(w));
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) w -= u.dot(w) * u;
    }
    const double b_next = w.norm();
    steps = j + 1;

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (int k = 0; k < steps; ++k) {
      t(k, k) = alpha[k];
      if (k + 1 < steps) t(k, k + 1) = t(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    ritz = es.eigenvalues();
    tri_vecs = es.eigenvectors();

    const bool stalled = std::abs(ritz(0) - prev_e0) < 1e-14 && steps > 2;
    prev_e0 = ritz(0);
    if (b_next < 1e-12 || stalled) break;
    beta.push_back(b_next);
    basis.push_back(w / b_next);
  }

  SectorResult res;
  res.e0 = ritz(0);
  res.internal_gap = steps > 1 ? ritz(1) - ritz(0) : 0.0;
  res.state = Eigen::VectorXd::Zero(dim);
  for (int k = 0; k < steps; ++k) res.state += tri_vecs(k, 0) * basis[k];
  res.state.normalize();
  return res;
}

GroundResult ground_lanczos(const CouplingTable& c) {
  const auto even = lanczos_sector(c, 0);
  const auto odd = lanczos_sector(c, 1);
  const SectorResult& lo = even.e0 <= odd.e0 ? even : odd;
  const SectorResult& hi = even.e0 <= odd.e0 ? odd : even;
  GroundResult res;
  res.energy = lo.e0;
  res.gap = std::min(lo.internal_gap, hi.e0 - lo.e0);
  res.degenerate = res.gap < 1e-10;
  res.state.n_sites = c.size();
  res.state.amplitudes = lo.state.cast<std::complex<double>>();
  return res;
}

}  // namespace

GroundResult exact_ground(const ModelSpec& spec) {
  return exact_ground(build_couplings(spec));
}

GroundResult exact_ground(const CouplingTable& couplings) {
  const int n = couplings.size();
  if (n > kMaxSites) {
    throw std::invalid_argument("exact_ground: n > 14 is not supported");
  }
  return n <= kDenseLimit ? ground_dense(couplings)
                          : ground_lanczos(couplings);
}

double exact_entropy(const DenseSpinState& state, const Subsystem& part) {
  part.validate(state.n_sites);
  std::vector<int> a_sites = part.sites;
  std::sort(a_sites.begin(), a_sites.end());
  std::vector<int> b_sites;
  for (int p = 0; p < state.n_sites; ++p) {
    if (!std::binary_search(a_sites.begin(), a_sites.end(), p)) {
      b_sites.push_back(p);
    }
  }
  const std::size_t dim_a = 1ull << a_sites.size();
  const std::size_t dim_b = 1ull << b_sites.size();

  auto scatter = [](std::size_t bits, const std::vector<int>& positions) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      if ((bits >> k) & 1u) out |= 1ull << positions[k];
    }
    return out;
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_a, dim_a);
  Eigen::VectorXcd col(dim_a);
  for (std::size_t e = 0; e < dim_b; ++e) {
    const std::size_t env = scatter(e, b_sites);
    for (std::size_t ia = 0; ia < dim_a; ++ia) {
      col(ia) = state.amplitudes(env | scatter(ia, a_sites));
    }
    rho.noalias() += col * col.adjoint();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda > 1e-15) s -= lambda * std::log(lambda);
  }
  return s;
}

namespace {

// v <- a_l v in the spin basis.
void apply_majorana(int n, int l, Eigen::VectorXcd& v) {
  const int site = l / 2;
  const bool y_type = (l % 2) != 0;
  const std::size_t dim = v.size();
  const std::size_t flip = 1ull << site;
  const std::size_t below = flip - 1;
  Eigen::VectorXcd out(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    // Jordan-Wigner string: product of sigma^z over sites < site.
    const int zeros = site - std::popcount(b & below);
    double phase = (zeros % 2 == 0) ? 1.0 : -1.0;
    const std::size_t b2 = b ^ flip;
    if (y_type) {
      const double s_new = ((b2 >> site) & 1u) ? 1.0 : -1.0;
      out(b2) = std::complex<double>(0.0, -s_new) * phase * v(b);
    } else {
      out(b2) = phase * v(b);
    }
  }
  v.swap(out);
}

}  // namespace

std::complex<double> exact_correlator(const DenseSpinState& state,
                                      const std::vector<int>& indices) {
  if (state.n_sites > kDenseLimit) {
    throw std::invalid_argument("exact_correlator: n > 10 is not supported");
  }
  if (indices.size() % 2 != 0) {
    throw std::invalid_argument("exact_correlator: index count must be even");
  }
  for (int l : indices) {
    if (l < 0 || l >= 2 * state.n_sites) {
      throw std::out_of_range("exact_correlator: Majorana index out of range");
    }
  }
  Eigen::VectorXcd v = state.amplitudes;
  for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
    apply_majorana(state.n_sites, *it, v);
  }
  return state.amplitudes.dot(v);
}

}  // namespace ghf
