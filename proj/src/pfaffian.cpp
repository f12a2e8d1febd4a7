#include "ghf/pfaffian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghf {

namespace {

void check_skew(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("skew kernel: matrix is not square");
  }
  if (a.rows() % 2 != 0) {
    throw std::invalid_argument("skew kernel: odd dimension " +
                                std::to_string(a.rows()));
  }
  if (a.size() == 0) return;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (antisymmetry_error(a) > 1e-10 * scale) {
    throw std::invalid_argument("skew kernel: matrix is not antisymmetric");
  }
}

}  // namespace

Eigen::MatrixXd antisymmetrize_upper(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("antisymmetrize_upper: matrix is not square");
  }
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(i, j) = m(i, j);
      out(j, i) = -m(i, j);
    }
  }
  return out;
}

double antisymmetry_error(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return (a + a.transpose()).cwiseAbs().maxCoeff();
}

double pfaffian(const Eigen::MatrixXd& a) {
  check_skew(a);
  const Eigen::Index n = a.rows();
  if (n == 0) return 1.0;
  if (n == 2) return a(0, 1);

  Eigen::MatrixXd m = a;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    // Pivot: largest entry in column k below the diagonal. Ties break to
    // the lowest index via maxCoeff's first-match rule.
    Eigen::Index rel = 0;
    m.col(k).segment(k + 1, n - k - 1).cwiseAbs().maxCoeff(&rel);
    const Eigen::Index ip = k + 1 + rel;
    if (m(ip, k) == 0.0) return 0.0;
    if (ip != k + 1) {
      m.row(k + 1).swap(m.row(ip));
      m.col(k + 1).swap(m.col(ip));
      pf = -pf;
    }
    pf *= m(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      // Congruence update zeroing column k below row k+1 (unit determinant,
      // leaves the Pfaffian unchanged).
      Eigen::VectorXd t = m.col(k).segment(k + 2, r) / m(k + 1, k);
      m.block(k + 2, 0, r, n).noalias() -= t * m.row(k + 1);
      m.block(0, k + 2, n, r).noalias() -= m.col(k + 1) * t.transpose();
    }
  }
  return pf;
}

Eigen::MatrixXd pfaffian_gradient(const Eigen::MatrixXd& a) {
  check_skew(a);
  const Eigen::Index n = a.rows();
  if (n < 2) {
    throw std::invalid_argument("pfaffian_gradient: dimension must be >= 2");
  }
  if (n == 2) {
    Eigen::MatrixXd g(2, 2);
    g << 0.0, 0.5, -0.5, 0.0;
    return g;
  }

  const double pf = pfaffian(a);
  if (std::abs(pf) > 1e-300) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
      Eigen::MatrixXd inv = lu.inverse();
      const double cond =
          a.cwiseAbs().rowwise().sum().maxCoeff() *
          inv.cwiseAbs().rowwise().sum().maxCoeff();
      if (cond < 1e12) {
        // dPf/dA_ij = Pf(A) (A^{-1})_ji / 2
        Eigen::MatrixXd g = 0.5 * pf * inv.transpose();
        return antisymmetrize_upper(g);
      }
    }
  }

  // Fallback: explicit minor Pfaffians, O(dim^5).
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd minor(n - 2, n - 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Eigen::Index r = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        Eigen::Index c = 0;
        for (Eigen::Index l = 0; l < n; ++l) {
          if (l == i || l == j) continue;
          minor(r, c) = a(k, l);
          ++c;
        }
        ++r;
      }
      const double sign = ((i + j) % 2 == 0) ? -1.0 : 1.0;  // (-1)^{i+j+1}
      g(i, j) = 0.5 * sign * pfaffian(minor);
      g(j, i) = -g(i, j);
    }
  }
  return g;
}

Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& a,
                                    const std::vector<int>& indices) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("principal_submatrix: matrix is not square");
  }
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(indices.size());
  for (int k = 0; k < m; ++k) {
    if (indices[k] < 0 || indices[k] >= n) {
      throw std::out_of_range("principal_submatrix: index out of range");
    }
    if (k > 0 && indices[k] <= indices[k - 1]) {
      throw std::invalid_argument(
          "principal_submatrix: indices must be strictly increasing");
    }
  }
  Eigen::MatrixXd out(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      out(i, j) = a(indices[i], indices[j]);
    }
  }
  return out;
}

}  // namespace ghf
