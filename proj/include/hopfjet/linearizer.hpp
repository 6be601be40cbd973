#pragma once

#include <hopfjet/contraction.hpp>
#include <hopfjet/koopman.hpp>
#include <hopfjet/linear_hopf.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hopfjet {

enum class Strategy { Closure, RootPrune };

const char* to_string(Strategy s) noexcept;
Strategy parse_strategy(const std::string& s);

/// Finite-dimensional pullback-invariant space W of jets with the embedding
/// Psi(z) = (w_1(z), ..., w_N(z)).
///
/// a_w uses the column-action convention: coords(gamma^* w) = a_w * coords(w).
/// Evaluating at points, this reads Psi(gamma(z)) = a_w^T Psi(z), so the
/// linear contraction acting on C^N is point_action() = a_w^T.
struct EmbeddingModel {
  Strategy strategy = Strategy::Closure;
  BasisPtr basis;
  /// Columns: coefficient vectors of the W basis in the monomial basis.
  CMatrix basis_matrix;
  CMatrix a_w;
  std::vector<std::string> provenance;

  int size() const { return static_cast<int>(basis_matrix.cols()); }
  int dimension() const { return basis->dimension(); }
  int degree() const { return basis->degree(); }
  CMatrix point_action() const { return a_w.transpose(); }

  std::vector<Jet> psi() const;
  CVector psi_at(const CVector& z) const;
  CMatrix psi_jacobian(const CVector& z) const;
};

/// ||T B - B a_w|| for the Koopman matrix of gamma on the model's basis.
double invariance_residual(const EmbeddingModel& model, const CMatrix& t);

/// Default truncation degree ceil(ln sigma_min / ln sigma_max) + 2, capped.
int default_degree(const ContractionSpec& spec, int cap = 10);

/// W = Krylov closure of the coordinate jets under the pullback.
EmbeddingModel linearize_closure(const ContractionSpec& spec, int degree, double rank_tol = 1e-10);

struct PruneOptions {
  /// Relative eigenvalue gaps at or below tol_res are treated as exact resonances.
  double tol_res = 1e-8;
  /// Gaps in (tol_res, prune_threshold] make the homological equation ill-conditioned.
  double prune_threshold = 1e-5;
};

/// One root function per coordinate direction, solved degree by degree in
/// Schur coordinates; exactly resonant monomials that the recursion would have
/// to divide by zero are absorbed as extra generators.
EmbeddingModel linearize_root_prune(const ContractionSpec& spec, int degree,
                                    const PruneOptions& options = {});

struct RadiusResidual {
  double radius = 0.0;
  double max_residual = 0.0;
  double max_psi = 0.0;
};

struct SemiconjugacyOptions {
  std::vector<double> radii{0.1, 0.05, 0.025};
  std::size_t samples = 256;
  std::uint64_t seed = 0;
  double exact_tol = 1e-12;
};

struct SemiconjugacyReport {
  std::vector<RadiusResidual> per_radius;
  /// Least-squares slope of log(max residual) against log(radius).
  double exponent = 0.0;
  double fit_r2 = 0.0;
  bool exact = false;
  bool passed = false;
  double exponent_threshold = 0.0;
};

/// max over |z| = r of ||Psi(gamma(z)) - a_w^T Psi(z)||, with gamma evaluated
/// as the full polynomial.
SemiconjugacyReport verify_semiconjugacy(const EmbeddingModel& model, const ContractionSpec& spec,
                                         const SemiconjugacyOptions& options = {});

struct InjectivityOptions {
  double r_inner = 0.1;
  double r_outer = 1.0;
  std::size_t pairs = 10000;
  std::uint64_t seed = 0;
  double collision_image = 1e-9;
  double collision_source = 1e-3;
  double min_jacobian = 1e-8;
};

struct InjectivityReport {
  std::size_t pairs = 0;
  double min_ratio = 0.0;
  std::size_t collisions = 0;
  double min_jacobian_singular_value = 0.0;
  bool passed = false;
};

InjectivityReport verify_injectivity(const EmbeddingModel& model, const ContractionSpec& spec,
                                     const InjectivityOptions& options = {});

/// Packages the point action a_w^T as a linear Hopf model.
LinearHopfModel export_linear_hopf(const EmbeddingModel& model);

}  // namespace hopfjet
