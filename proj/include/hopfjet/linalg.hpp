#pragma once

#include <hopfjet/jet.hpp>

#include <vector>

namespace hopfjet {

/// A = Q R Q^* with Q unitary and R upper triangular.
struct TriangularForm {
  CMatrix unitary;
  CMatrix upper;
  /// Diagonal of R, in order.
  CVector eigenvalues;
  /// True when A was already upper triangular and Q = I was kept.
  bool kept_coordinates = false;
};

/// Complex Schur form. Inputs that are already upper triangular are returned
/// with Q = I so that eigenvalue order follows the coordinate order.
TriangularForm triangularize(const CMatrix& a);

/// Solves L^* X + X L = C through the Schur form of L (Bartels-Stewart).
/// Requires conj(l_i) + l_j != 0 for all eigenvalue pairs of L.
CMatrix solve_lyapunov(const CMatrix& l, const CMatrix& c);

double spectral_radius(const CMatrix& a);
double min_eigen_modulus(const CMatrix& a);
std::vector<Complex> eigenvalues(const CMatrix& a);

double min_singular_value(const CMatrix& a);
double condition_number(const CMatrix& a);

/// Largest distance in a nearest-neighbour pairing of two multisets.
/// Returns +inf when sizes differ.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);

/// Relative Frobenius distance ||a - b|| / max(||b||, floor).
double relative_difference(const CMatrix& a, const CMatrix& b, double floor = 1e-300);

}  // namespace hopfjet
