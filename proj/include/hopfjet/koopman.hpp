#pragma once

#include <hopfjet/contraction.hpp>
#include <hopfjet/jet.hpp>

#include <optional>
#include <vector>

namespace hopfjet {

/// Matrix of f -> f o gamma^k on m / m^(d+1): column a holds the coefficients
/// of z^a o gamma^k. Lower block-triangular by degree.
struct KoopmanMatrix {
  BasisPtr basis;
  CMatrix matrix;
  std::optional<ContractionSpec> source;
  int power = 1;
};

KoopmanMatrix build_koopman(const ContractionSpec& spec, int degree, int power = 1);
KoopmanMatrix build_koopman(const JetMap& g);

/// Largest |T[b, a]| over entries with |b| < |a|.
double block_triangularity_defect(const KoopmanMatrix& t);

/// ||T(gamma o delta) - T(delta) T(gamma)|| / ||T(gamma o delta)|| in the Frobenius norm.
double contravariance_check(const ContractionSpec& gamma, const ContractionSpec& delta, int degree);

struct CompactnessProbe {
  /// Entry m-1: spectral norm of T restricted and projected to degrees >= m.
  std::vector<double> block_norms;
  /// exp of the least-squares slope of log(block norm) against m.
  double rate = 0.0;
};

CompactnessProbe compactness_probe(const KoopmanMatrix& t);

}  // namespace hopfjet
