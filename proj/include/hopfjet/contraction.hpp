#pragma once

#include <hopfjet/jet.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hopfjet {

struct Term {
  Multidegree exponents;
  Complex coeff;
};

using Polynomial = std::vector<Term>;

/// Evaluates each polynomial at z by direct term summation.
CVector evaluate_polynomials(const std::vector<Polynomial>& polys, const CVector& z);

/// A polynomial self-map gamma of C^n with gamma(0) = 0.
class ContractionSpec {
 public:
  ContractionSpec(int dimension, std::vector<Polynomial> components,
                  std::optional<std::vector<Polynomial>> inverse = std::nullopt);

  int dimension() const { return dimension_; }
  const std::vector<Polynomial>& components() const { return components_; }
  const std::optional<std::vector<Polynomial>>& inverse() const { return inverse_; }

  /// dgamma_0; entry (i, j) is the coefficient of z_j in component i.
  const CMatrix& linear_part() const { return linear_; }
  int max_degree() const;
  bool vanishes_at_origin() const;

  /// Full polynomial evaluation (no truncation).
  CVector operator()(const CVector& z) const { return evaluate_polynomials(components_, z); }

  /// d-jet of gamma on the given basis.
  JetMap jet(const BasisPtr& basis) const;
  std::optional<JetMap> inverse_jet(const BasisPtr& basis) const;

  std::string label;

 private:
  int dimension_;
  std::vector<Polynomial> components_;
  std::optional<std::vector<Polynomial>> inverse_;
  CMatrix linear_;
};

/// Builds a spec from a matrix (the linear contraction z -> A z).
ContractionSpec linear_contraction(const CMatrix& a);

struct ValidationOptions {
  double r_k = 1.0;
  double r_u = 0.1;
  std::size_t samples = 1024;
  int n_max = 200;
  double r_guard = 1e3;
  std::uint64_t seed = 0;
};

struct ContractionDiagnostics {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  std::vector<Complex> eigenvalues;
  /// Least N such that every sampled orbit of the K-sphere stays in U after N steps.
  int entry_steps = 0;
  std::size_t escaped_samples = 0;
  std::size_t unsettled_samples = 0;
  bool contraction = false;
  ValidationOptions options;
  std::string scope;
};

/// Checks the linear part and samples orbits of the sphere |z| = r_k.
/// Throws NonVanishingConstant, SingularLinearPart, NotAContraction or
/// NotGloballyContracting.
ContractionDiagnostics validate(const ContractionSpec& spec, const ValidationOptions& options = {});

/// d-jet of gamma^k.
JetMap iterate(const ContractionSpec& spec, int k, const BasisPtr& basis);

struct InverseReport {
  bool supplied = false;
  bool passed = false;
  int degree = 0;
  double jet_residual = 0.0;
  double point_residual = 0.0;
  std::string note;
};

/// Verifies a user-supplied inverse (jet level and at sample points), or only
/// local invertibility when no inverse is given. Throws VerificationFailure
/// when a supplied inverse does not compose to the identity.
InverseReport check_inverse(const ContractionSpec& spec, int degree = 0, std::size_t samples = 256,
                            std::uint64_t seed = 0);

}  // namespace hopfjet
