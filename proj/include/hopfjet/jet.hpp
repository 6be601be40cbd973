#pragma once

// Truncated multivariate power series ("d-jets") over complex scalars.
//
// A MonomialBasis enumerates all monomials z^a with 1 <= |a| <= d in graded
// order: degree-m monomials precede degree-(m+1) ones, and inside a degree the
// exponent vectors are sorted in descending lexicographic order, so for n = 2,
// d = 2 the basis is (z1, z2, z1^2, z1 z2, z2^2).

#include <hopfjet/error.hpp>

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

namespace hopfjet {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct Multidegree {
  std::vector<int> exponents;

  Multidegree() = default;
  explicit Multidegree(std::vector<int> e) : exponents(std::move(e)) {}

  int total() const;
  int size() const { return static_cast<int>(exponents.size()); }
  int operator[](int i) const { return exponents[static_cast<std::size_t>(i)]; }

  auto operator<=>(const Multidegree&) const = default;
};

class MonomialBasis;
using BasisPtr = std::shared_ptr<const MonomialBasis>;

class MonomialBasis {
 public:
  static constexpr std::ptrdiff_t npos = -1;

  MonomialBasis(int dimension, int degree);

  static BasisPtr make(int dimension, int degree);

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  std::size_t size() const { return monomials_.size(); }

  const Multidegree& operator[](std::size_t i) const { return monomials_[i]; }
  const std::vector<Multidegree>& monomials() const { return monomials_; }

  int total_degree(std::size_t i) const { return totals_[i]; }

  /// First position of the degree-m block; valid for 1 <= m <= d + 1.
  std::size_t degree_begin(int m) const { return block_begin_[static_cast<std::size_t>(m)]; }

  std::ptrdiff_t find(const Multidegree& alpha) const;
  std::size_t index(const Multidegree& alpha) const;

  /// Position of z^(a+b), or npos when |a|+|b| > d.
  std::ptrdiff_t product(std::size_t i, std::size_t j) const {
    return product_[i * size() + j];
  }

  /// Position of z^(a - e_k); npos when a_k == 0 or the result is the constant 1.
  std::ptrdiff_t lowered(std::size_t i, int k) const {
    return lowered_[i * static_cast<std::size_t>(dimension_) + static_cast<std::size_t>(k)];
  }

  /// Index of the first coordinate with a non-zero exponent.
  int leading_variable(std::size_t i) const { return leading_[i]; }

  bool same_as(const MonomialBasis& other) const {
    return dimension_ == other.dimension_ && degree_ == other.degree_;
  }

  static std::size_t expected_size(int dimension, int degree);

 private:
  int dimension_;
  int degree_;
  std::vector<Multidegree> monomials_;
  std::vector<int> totals_;
  std::vector<int> leading_;
  std::vector<std::size_t> block_begin_;
  std::map<Multidegree, std::size_t> lookup_;
  std::vector<std::ptrdiff_t> product_;
  std::vector<std::ptrdiff_t> lowered_;
};

class Jet {
 public:
  explicit Jet(BasisPtr basis);
  Jet(BasisPtr basis, CVector coefficients, Complex constant = {});

  static Jet monomial(BasisPtr basis, const Multidegree& alpha, Complex coeff = 1.0);
  static Jet coordinate(BasisPtr basis, int i, Complex coeff = 1.0);
  static Jet constant(BasisPtr basis, Complex value);

  const BasisPtr& basis() const { return basis_; }
  const CVector& coefficients() const { return coeffs_; }
  Complex constant_term() const { return constant_; }
  Complex coefficient(const Multidegree& alpha) const;

  bool in_maximal_ideal() const { return constant_ == Complex{}; }

  /// Homogeneous component of total degree m (m >= 1).
  Jet homogeneous_part(int m) const;

  /// Lowest degree carrying a coefficient of modulus > tol (d + 1 if none).
  int order(double tol = 0.0) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(Complex s);

 private:
  BasisPtr basis_;
  CVector coeffs_;
  Complex constant_;
};

Jet add(const Jet& a, const Jet& b);
Jet mul(const Jet& a, const Jet& b);

inline Jet operator+(const Jet& a, const Jet& b) { return add(a, b); }
inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r -= b;
  return r;
}
inline Jet operator*(const Jet& a, const Jet& b) { return mul(a, b); }
inline Jet operator*(Complex s, const Jet& a) {
  Jet r = a;
  r *= s;
  return r;
}

/// n-tuple of jets, each vanishing at the origin.
class JetMap {
 public:
  explicit JetMap(std::vector<Jet> components);

  static JetMap identity(BasisPtr basis);
  /// The linear map z -> A z.
  static JetMap linear(BasisPtr basis, const CMatrix& a);

  const BasisPtr& basis() const { return components_.front().basis(); }
  int dimension() const { return static_cast<int>(components_.size()); }
  const Jet& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  const std::vector<Jet>& components() const { return components_; }

  /// dg_0 with entry (i, j) = coefficient of z_j in component i.
  CMatrix linear_part() const;

 private:
  std::vector<Jet> components_;
};

/// d-jet of f o g.
Jet compose(const Jet& f, const JetMap& g);
/// Componentwise g o h.
JetMap compose_map(const JetMap& g, const JetMap& h);
/// Compositional inverse modulo degree > d.
JetMap inverse_map(const JetMap& g);

/// Matrix whose column a holds the coefficients of z^a o g (the pullback by g).
CMatrix pullback_matrix(const JetMap& g);

/// Values of every basis monomial at z.
CVector monomial_values(const MonomialBasis& basis, std::span<const Complex> z);

Complex evaluate(const Jet& f, std::span<const Complex> z);
CVector evaluate(const JetMap& g, std::span<const Complex> z);

/// Jacobian (rows: jets, columns: variables) of a list of jets at z.
CMatrix jacobian(std::span<const Jet> jets, std::span<const Complex> z);

inline std::span<const Complex> as_span(const CVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace hopfjet
