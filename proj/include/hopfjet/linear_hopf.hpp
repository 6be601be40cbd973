#pragma once

#include <hopfjet/jet.hpp>

#include <vector>

namespace hopfjet {

/// A linear contraction w -> B w of C^N. The deck group of the Hopf manifold
/// (C^N \ 0) / <B> is generated by B; B^-1 expands every eigendirection.
struct LinearHopfModel {
  CMatrix contraction;
  std::vector<Complex> eigenvalues;
  /// Columns are eigenvectors; meaningful when diagonalizable.
  CMatrix eigenvectors;
  bool diagonalizable = false;
  double condition = 0.0;

  int size() const { return static_cast<int>(contraction.rows()); }
  double sigma_max() const;
  double sigma_min() const;
  CMatrix deck_inverse() const { return contraction.inverse(); }

  /// Throws NotAContraction ("not a linear contraction") if some |eigenvalue| >= 1.
  static LinearHopfModel from_matrix(const CMatrix& b, double max_condition = 1e6);
};

}  // namespace hopfjet
