#pragma once

#include <hopfjet/koopman.hpp>
#include <hopfjet/linalg.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hopfjet {

struct MonomialEigenvalue {
  Multidegree alpha;
  Complex value;
};

/// lambda^a for every basis monomial, in basis order.
std::vector<MonomialEigenvalue> monomial_eigenvalues(std::span<const Complex> lambda, int degree);
/// Same, with lambda read from the Schur form of a.
std::vector<MonomialEigenvalue> monomial_eigenvalues(const CMatrix& a, int degree);

enum class ResonanceClass { Exact, Near, None };

const char* to_string(ResonanceClass c) noexcept;

/// lambda^target ~ lambda^source with |target| < |source|.
struct Resonance {
  Multidegree target;
  Multidegree source;
  /// Set when the target is a coordinate z_i.
  std::optional<int> target_coordinate;
  double defect = 0.0;
  double relative_defect = 0.0;
  ResonanceClass kind = ResonanceClass::None;
};

struct ResonanceOptions {
  double tol_res = 1e-8;
  /// Defects within near_factor * tol_res are reported as near resonances.
  double near_factor = 1e3;
};

std::vector<Resonance> detect_resonances(std::span<const Complex> lambda, int degree,
                                         const ResonanceOptions& options = {});
std::vector<Resonance> detect_resonances(const CMatrix& a, int degree,
                                         const ResonanceOptions& options = {});

struct SpectralTolerances {
  double cluster = 1e-8;
  double root = 1e-9;
  double indep = 1e-10;
};

struct RootVector {
  Complex eigenvalue;
  int chain_length = 1;
  /// Unit-norm coefficients in the original monomial basis.
  CVector coefficients;
  /// ||(T - mu I)^m v||.
  double residual = 0.0;
};

struct EigenCluster {
  Complex value;
  /// Positions (in the triangularized basis) whose diagonal entries joined the cluster.
  std::vector<std::size_t> members;
  std::size_t multiplicity() const { return members.size(); }
  /// Columns: root vectors in original coordinates.
  CMatrix basis;
  /// T * basis = basis * restricted.
  CMatrix restricted;
  std::vector<RootVector> vectors;
  double min_singular_value = 0.0;
};

struct RootDecomposition {
  std::vector<EigenCluster> clusters;
  /// Schur form of the linear part used for the change of variables.
  TriangularForm schur;
  /// Koopman matrix in Schur coordinates; lower triangular.
  CMatrix triangular;
  /// Pullback by z -> Q^* z; maps Schur-coordinate jets back to original ones.
  CMatrix to_original;
};

/// Jet map read off the first n columns of a Koopman matrix (the d-jet of gamma^k).
JetMap underlying_map(const KoopmanMatrix& t);

/// Koopman matrix of Q^* o g o Q where Q triangularizes the linear part of g.
struct TriangularizedKoopman {
  TriangularForm schur;
  CMatrix triangular;
  CMatrix to_original;
  CMatrix from_original;
};
TriangularizedKoopman triangularize_koopman(const JetMap& g);

/// Groups the diagonal of the triangularized operator into eigenvalue clusters
/// (union-find over the tol_cluster graph) and computes a basis of each root space.
RootDecomposition root_decomposition(const KoopmanMatrix& t, const SpectralTolerances& tol = {});

struct InvariantSubspace {
  /// Orthonormal columns.
  CMatrix basis;
  /// Column action: coords(T w) = restricted * coords(w).
  CMatrix restricted;
  std::vector<std::string> provenance;
};

/// Smallest T-invariant subspace containing the seeds, built by Krylov steps
/// with twice-iterated Gram-Schmidt. Vectors whose orthogonal remainder is
/// below rank_tol times their norm are dropped.
InvariantSubspace f_finite_span(const CMatrix& t, const std::vector<CVector>& seeds,
                                double rank_tol = 1e-10,
                                const std::vector<std::string>& seed_names = {});

}  // namespace hopfjet
