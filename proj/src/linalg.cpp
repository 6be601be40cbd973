#include <hopfjet/linalg.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopfjet {

TriangularForm triangularize(const CMatrix& a) {
  TriangularForm out;
  const Eigen::Index n = a.rows();
  bool upper = true;
  for (Eigen::Index j = 0; j < n && upper; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if (a(i, j) != Complex{}) {
        upper = false;
        break;
      }
    }
  }
  if (upper) {
    out.unitary = CMatrix::Identity(n, n);
    out.upper = a;
    out.kept_coordinates = true;
  } else {
    Eigen::ComplexSchur<CMatrix> schur(a);
    out.unitary = schur.matrixU();
    out.upper = schur.matrixT();
    out.upper.triangularView<Eigen::StrictlyLower>().setZero();
  }
  out.eigenvalues = out.upper.diagonal();
  return out;
}

CMatrix solve_lyapunov(const CMatrix& l, const CMatrix& c) {
  const Eigen::Index n = l.rows();
  Eigen::ComplexSchur<CMatrix> schur(l);
  const CMatrix& u = schur.matrixU();
  const CMatrix& r = schur.matrixT();
  // R^* Y + Y R = U^* C U, solved column by column; R^* is lower triangular.
  const CMatrix rhs = u.adjoint() * c * u;
  CMatrix y = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    CVector b = rhs.col(k);
    for (Eigen::Index l2 = 0; l2 < k; ++l2) b -= y.col(l2) * r(l2, k);
    CVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex s = b[i];
      for (Eigen::Index j = 0; j < i; ++j) s -= std::conj(r(j, i)) * x[j];
      x[i] = s / (std::conj(r(i, i)) + r(k, k));
    }
    y.col(k) = x;
  }
  return u * y * u.adjoint();
}

std::vector<Complex> eigenvalues(const CMatrix& a) {
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  const CVector& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const CMatrix& a) {
  double r = 0.0;
  for (Complex l : eigenvalues(a)) r = std::max(r, std::abs(l));
  return r;
}

double min_eigen_modulus(const CMatrix& a) {
  double r = std::numeric_limits<double>::infinity();
  for (Complex l : eigenvalues(a)) r = std::min(r, std::abs(l));
  return r;
}

double min_singular_value(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().minCoeff();
}

double condition_number(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double lo = s.minCoeff();
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : s.maxCoeff() / lo;
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end(), [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (Complex x : a) {
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dj = std::abs(x - b[j]);
      if (dj < dist) {
        dist = dj;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

double relative_difference(const CMatrix& a, const CMatrix& b, double floor) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace hopfjet
