#pragma once

#include <hopfjet/contraction.hpp>
#include <hopfjet/linear_hopf.hpp>
#include <hopfjet/linearizer.hpp>

#include <cstdint>
#include <vector>

namespace hopfjet {

enum class PotentialKind {
  /// phi(w) = sum_j |(S^-1 w)_j|^(2 beta_j) for diagonalizable B.
  Diagonal,
  /// Diagonal formula built for a perturbed, diagonalizable B_eps.
  Perturbed,
  /// phi(w) = c^tau(w) where tau is the time at which the flow exp(-s log B)
  /// carries w to the unit sphere of a Lyapunov metric; works for any B.
  LevelTime,
};

const char* to_string(PotentialKind k) noexcept;

/// Positive function on C^N \ 0 with phi(B w) = c phi(w).
struct PotentialModel {
  PotentialKind kind = PotentialKind::Diagonal;
  double c = 0.0;

  std::vector<double> beta;
  CMatrix transform;
  CMatrix transform_inverse;

  CMatrix generator;
  CMatrix metric;

  double operator()(const CVector& w) const;
  /// Level time tau(w); only for LevelTime potentials.
  double level(const CVector& w) const;
  int size() const;
};

/// c = sigma_max^2, beta_j = ln sigma_max / ln |lambda_j|. Throws Precondition
/// for non-diagonalizable models.
PotentialModel build_potential(const LinearHopfModel& model);

struct ApproxPotential {
  PotentialModel potential;
  double epsilon = 0.0;
  /// max over samples of |phi(B w) - c phi(w)| / phi(w) for the unperturbed B.
  double defect = 0.0;
  bool approximate = false;
};

/// Splits repeated eigenvalues of the Schur form by multiples of eps, builds
/// the diagonal potential of the perturbed matrix and measures its defect.
ApproxPotential build_potential_approx(const LinearHopfModel& model, double epsilon = 1e-4,
                                       double defect_bound = 1e-9, std::size_t samples = 1024,
                                       std::uint64_t seed = 0);

/// Level-time potential; c starts at sigma_max^2 and is squared until the
/// Levi form is positive on a fundamental domain. Throws IllConditioned when
/// no admissible c is found.
PotentialModel build_level_potential(const LinearHopfModel& model, std::size_t psh_samples = 64,
                                     std::uint64_t seed = 0);

/// max over samples of |phi(B w) - c phi(w)| / phi(w).
double automorphy_defect(const PotentialModel& pot, const CMatrix& b, const std::vector<CVector>& samples);

/// Complex Hessian d^2 phi / dw_j d conj(w_k) by central differences of step h.
CMatrix levi_form(const PotentialModel& pot, const CVector& w, double h);

struct PshReport {
  std::size_t samples = 0;
  double min_eigenvalue = 0.0;
  bool passed = false;
};

/// Finite-difference Levi form at each sample with step h_rel * |w|. Throws
/// Precondition for a sample within guard * |S^-1 w| of a hyperplane where
/// phi is not smooth (some beta_j < 1).
PshReport check_psh(const PotentialModel& pot, const std::vector<CVector>& samples,
                    double h_rel = 1e-4, double tolerance = 1e-6, double guard = 1e-3);

/// True when w is far enough from every non-smooth eigen-hyperplane of pot.
bool away_from_hyperplanes(const PotentialModel& pot, const CVector& w, double guard = 1e-3);

struct PullbackOptions {
  double r_inner = 0.1;
  double r_outer = 1.0;
  std::size_t samples = 2048;
  std::uint64_t seed = 0;
};

struct PullbackReport {
  std::size_t samples = 0;
  double max_relative_defect = 0.0;
  double min_psi_norm = 0.0;
  std::size_t degenerate = 0;
  /// Defect expected from the potential itself plus the semiconjugacy residual.
  double bound = 0.0;
  double max_relative_residual = 0.0;
};

/// Phi = phi o Psi; reports max |Phi(gamma(z)) - c Phi(z)| / Phi(z) on the annulus.
PullbackReport pull_back_potential(const PotentialModel& pot, const EmbeddingModel& model,
                                   const ContractionSpec& spec, const PullbackOptions& options = {},
                                   double potential_defect = 0.0);

}  // namespace hopfjet
