#include "ghf/gaussian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ghf/pfaffian.hpp"

namespace ghf {

double CovarianceMatrix::purity_error() const {
  const Eigen::Index d = gamma.rows();
  Eigen::MatrixXd g2 = gamma * gamma;
  g2 += Eigen::MatrixXd::Identity(d, d);
  return g2.cwiseAbs().maxCoeff();
}

CovarianceMatrix block_covariance(int n, const std::vector<int>& flips) {
  if (n < 1) throw std::invalid_argument("block_covariance: n must be >= 1");
  if (!flips.empty() && static_cast<int>(flips.size()) != n) {
    throw std::invalid_argument("block_covariance: flips size mismatch");
  }
  CovarianceMatrix s;
  s.n_sites = n;
  s.gamma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const double sign = (!flips.empty() && flips[k]) ? -1.0 : 1.0;
    s.gamma(2 * k, 2 * k + 1) = sign;
    s.gamma(2 * k + 1, 2 * k) = -sign;
  }
  return s;
}

CovarianceMatrix random_pure_covariance(int n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("random_pure_covariance: n must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> flips(n);
  for (int k = 0; k < n; ++k) flips[k] = static_cast<int>(rng() & 1u);
  CovarianceMatrix omega = block_covariance(n, flips);

  const int d = 2 * n;
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge so that Q is Haar-distributed.
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }

  CovarianceMatrix s;
  s.n_sites = n;
  s.gamma = antisymmetrize_upper(q.transpose() * omega.gamma * q);
  return s;
}

std::complex<double> wick_expectation(const CovarianceMatrix& state,
                                      const std::vector<int>& indices) {
  if (indices.size() % 2 != 0) {
    throw std::invalid_argument("wick_expectation: index count must be even");
  }
  const double pf = pfaffian(principal_submatrix(state.gamma, indices));
  const int m = static_cast<int>(indices.size() / 2);
  // (-i)^m cycles through 1, -i, -1, i.
  static const std::complex<double> phase[4] = {
      {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  return phase[m % 4] * pf;
}

namespace {

// Shared evaluation of the interaction terms
//   sum_{p<q} J_pq (-1)^{q-p} Pf(Gamma | 2p+1 .. 2q)
// and (optionally) their gradient contribution to H^mf. For fixed p the
// ranges are nested, so the Pfaffian and the submatrix inverse are grown
// two rows at a time via the block (Schur-complement) identities
//   Pf(M) = Pf(S) * sc,   sc = d + B^T S^{-1} B |_{01},
// which brings the full evaluation to O(N^4). When a pivot is too small
// the state is rebuilt directly from an LU factorization, and if the
// submatrix is genuinely singular the per-range kernels take over.
class RangeAccumulator {
 public:
  RangeAccumulator(const Eigen::MatrixXd& gamma, int start)
      : gamma_(gamma), start_(start) {}

  // Extends the range by two Majorana modes; returns the Pfaffian of the
  // extended range.
  double extend() {
    const int m_old = dim_;
    dim_ += 2;
    const int r0 = start_ + m_old;
    if (m_old == 0) {
      pf_ = gamma_(r0, r0 + 1);
      if (std::abs(pf_) > kPivotTol) {
        sinv_.resize(2, 2);
        sinv_ << 0.0, -1.0 / pf_, 1.0 / pf_, 0.0;
        have_inverse_ = true;
      } else {
        rebuild();
      }
      return pf_;
    }
    if (!have_inverse_) {
      rebuild();
      return pf_;
    }
    const Eigen::MatrixXd b = gamma_.block(start_, r0, m_old, 2);
    const Eigen::MatrixXd x = sinv_ * b;  // m_old x 2
    const double sc = gamma_(r0, r0 + 1) + b.col(0).dot(x.col(1));
    if (std::abs(sc) < kPivotTol) {
      rebuild();
      return pf_;
    }
    pf_ *= sc;
    Eigen::MatrixXd grown(dim_, dim_);
    grown.topLeftCorner(m_old, m_old).noalias() =
        sinv_ + (x.col(1) * x.col(0).transpose() -
                 x.col(0) * x.col(1).transpose()) /
                    sc;
    grown.block(0, m_old, m_old, 1) = -x.col(1) / sc;
    grown.block(0, m_old + 1, m_old, 1) = x.col(0) / sc;
    grown.block(m_old, 0, 1, m_old) = x.col(1).transpose() / sc;
    grown.block(m_old + 1, 0, 1, m_old) = -x.col(0).transpose() / sc;
    grown(m_old, m_old) = 0.0;
    grown(m_old, m_old + 1) = -1.0 / sc;
    grown(m_old + 1, m_old) = 1.0 / sc;
    grown(m_old + 1, m_old + 1) = 0.0;
    sinv_.swap(grown);
    return pf_;
  }

  // Adds coeff * 4 * dPf(range)/dGamma into the matching block of h.
  void add_gradient(double coeff, Eigen::MatrixXd& h) const {
    if (have_inverse_) {
      // 4 * (Pf * Sinv^T / 2) = -2 Pf Sinv for antisymmetric Sinv.
      h.block(start_, start_, dim_, dim_).noalias() +=
          (-2.0 * coeff * pf_) * sinv_;
    } else {
      h.block(start_, start_, dim_, dim_) +=
          (4.0 * coeff) *
          pfaffian_gradient(gamma_.block(start_, start_, dim_, dim_));
    }
  }

  double pf() const { return pf_; }

 private:
  static constexpr double kPivotTol = 1e-11;

  void rebuild() {
    const Eigen::MatrixXd sub = gamma_.block(start_, start_, dim_, dim_);
    pf_ = pfaffian(sub);
    have_inverse_ = false;
    if (std::abs(pf_) > 1e-300) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (lu.isInvertible()) {
        sinv_ = lu.inverse();
        have_inverse_ = true;
      }
    }
  }

  const Eigen::MatrixXd& gamma_;
  int start_ = 0;
  int dim_ = 0;
  double pf_ = 1.0;
  bool have_inverse_ = false;
  Eigen::MatrixXd sinv_;
};

double interaction_terms(const Eigen::MatrixXd& gamma,
                         const Eigen::MatrixXd& j, Eigen::MatrixXd* h) {
  const int n = static_cast<int>(j.rows());
  double e = 0.0;
  for (int p = 0; p < n - 1; ++p) {
    int q_last = -1;
    for (int q = n - 1; q > p; --q) {
      if (j(p, q) != 0.0) {
        q_last = q;
        break;
      }
    }
    if (q_last < 0) continue;
    RangeAccumulator acc(gamma, 2 * p + 1);
    for (int q = p + 1; q <= q_last; ++q) {
      const double pf = acc.extend();
      if (j(p, q) == 0.0) continue;
      const double coeff = ((q - p) % 2 == 0 ? 1.0 : -1.0) * j(p, q);
      e += coeff * pf;
      if (h != nullptr) acc.add_gradient(coeff, *h);
    }
  }
  return e;
}

void check_match(const CovarianceMatrix& state,
                 const CouplingTable& couplings) {
  if (state.n_sites != couplings.size() ||
      state.gamma.rows() != 2 * state.n_sites ||
      state.gamma.rows() != state.gamma.cols()) {
    throw std::invalid_argument("state/couplings dimension mismatch");
  }
}

}  // namespace

double energy(const CovarianceMatrix& state, const CouplingTable& couplings) {
  check_match(state, couplings);
  const int n = state.n_sites;
  double e = 0.0;
  for (int p = 0; p < n; ++p) {
    // -(h_p/2)(Gamma_{2p,2p+1} - Gamma_{2p+1,2p})
    e -= 0.5 * couplings.h(p) *
         (state.gamma(2 * p, 2 * p + 1) - state.gamma(2 * p + 1, 2 * p));
  }
  e += interaction_terms(state.gamma, couplings.J, nullptr);
  return e;
}

Eigen::MatrixXd mean_field(const CovarianceMatrix& state,
                           const CouplingTable& couplings) {
  return energy_and_mean_field(state, couplings).second;
}

std::pair<double, Eigen::MatrixXd> energy_and_mean_field(
    const CovarianceMatrix& state, const CouplingTable& couplings) {
  check_match(state, couplings);
  const int n = state.n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  double e = 0.0;
  for (int p = 0; p < n; ++p) {
    e -= 0.5 * couplings.h(p) *
         (state.gamma(2 * p, 2 * p + 1) - state.gamma(2 * p + 1, 2 * p));
    h(2 * p, 2 * p + 1) = -2.0 * couplings.h(p);
  }
  e += interaction_terms(state.gamma, couplings.J, &h);
  return {e, antisymmetrize_upper(h)};
}

}  // namespace ghf
