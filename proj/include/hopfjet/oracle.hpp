#pragma once

// Independent residual path for the semiconjugacy Psi o gamma = a_w^T Psi.
// Works only on explicit term lists and evaluates them naively; it shares no
// code with the jet arithmetic used to build and verify models.

#include <hopfjet/contraction.hpp>
#include <hopfjet/linearizer.hpp>

#include <vector>

namespace hopfjet {

struct OracleRow {
  CVector point;
  double residual = 0.0;
  double psi_norm = 0.0;
};

/// ||Psi(gamma(z)) - a_w^T Psi(z)|| at each point.
std::vector<OracleRow> oracle_residuals(const std::vector<Polynomial>& gamma,
                                        const std::vector<Polynomial>& psi, const CMatrix& a_w,
                                        const std::vector<CVector>& points);

/// The model's Psi written as explicit term lists (non-zero coefficients only).
std::vector<Polynomial> model_polynomials(const EmbeddingModel& model);

/// Per-point residual of the main verifier (jet evaluation of Psi).
double verifier_residual(const EmbeddingModel& model, const ContractionSpec& spec, const CVector& z);

/// Agreement within a factor of two, or both residuals at rounding level
/// (below floor * max(1, |Psi|)).
bool residuals_agree(double a, double b, double psi_norm, double floor = 1e-13);

}  // namespace hopfjet
