#include <hopfjet/oracle.hpp>

#include <algorithm>
#include <cmath>

namespace hopfjet {

namespace {

Complex naive_value(const Polynomial& p, const CVector& z) {
  Complex acc = 0.0;
  for (const auto& t : p) {
    Complex m = t.coeff;
    for (int k = 0; k < t.exponents.size(); ++k) {
      if (t.exponents[k] > 0) m *= std::pow(z[k], t.exponents[k]);
    }
    acc += m;
  }
  return acc;
}

CVector naive_map(const std::vector<Polynomial>& polys, const CVector& z) {
  CVector out(static_cast<Eigen::Index>(polys.size()));
  for (std::size_t i = 0; i < polys.size(); ++i) out[static_cast<Eigen::Index>(i)] = naive_value(polys[i], z);
  return out;
}

}  // namespace

std::vector<OracleRow> oracle_residuals(const std::vector<Polynomial>& gamma,
                                        const std::vector<Polynomial>& psi, const CMatrix& a_w,
                                        const std::vector<CVector>& points) {
  std::vector<OracleRow> rows;
  rows.reserve(points.size());
  for (const auto& z : points) {
    const CVector psi_z = naive_map(psi, z);
    const CVector lhs = naive_map(psi, naive_map(gamma, z));
    CVector rhs = CVector::Zero(psi_z.size());
    for (Eigen::Index i = 0; i < a_w.cols(); ++i) {
      for (Eigen::Index j = 0; j < a_w.rows(); ++j) rhs[i] += a_w(j, i) * psi_z[j];
    }
    rows.push_back({z, (lhs - rhs).norm(), psi_z.norm()});
  }
  return rows;
}

std::vector<Polynomial> model_polynomials(const EmbeddingModel& model) {
  std::vector<Polynomial> out;
  const MonomialBasis& basis = *model.basis;
  for (Eigen::Index c = 0; c < model.basis_matrix.cols(); ++c) {
    Polynomial p;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Complex v = model.basis_matrix(static_cast<Eigen::Index>(i), c);
      if (v != Complex{}) p.push_back({basis[i], v});
    }
    out.push_back(std::move(p));
  }
  return out;
}

double verifier_residual(const EmbeddingModel& model, const ContractionSpec& spec, const CVector& z) {
  return (model.psi_at(spec(z)) - model.point_action() * model.psi_at(z)).norm();
}

bool residuals_agree(double a, double b, double psi_norm, double floor) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (hi <= floor * std::max(1.0, psi_norm)) return true;
  return hi <= 2.0 * lo;
}

}  // namespace hopfjet
