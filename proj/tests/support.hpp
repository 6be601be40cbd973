#pragma once

#include <hopfjet/contraction.hpp>
#include <hopfjet/jet.hpp>

#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace testing {

using hopfjet::Complex;
using hopfjet::CMatrix;
using hopfjet::ContractionSpec;
using hopfjet::CVector;
using hopfjet::Multidegree;
using hopfjet::Polynomial;

inline hopfjet::Term term(std::vector<int> e, Complex c) { return {Multidegree(std::move(e)), c}; }

/// gamma = (lambda^m z1 + t z2^m, lambda z2).
inline ContractionSpec kodaira(double lambda, int m, double t) {
  std::vector<Polynomial> comps{
      {term({1, 0}, std::pow(lambda, m)), term({0, m}, t)},
      {term({0, 1}, lambda)},
  };
  // Inverse: z2 -> z2 / lambda, z1 -> (z1 - t (z2/lambda)^m) / lambda^m.
  std::vector<Polynomial> inv{
      {term({1, 0}, 1.0 / std::pow(lambda, m)), term({0, m}, -t / std::pow(lambda, 2 * m))},
      {term({0, 1}, 1.0 / lambda)},
  };
  ContractionSpec s(2, std::move(comps), std::move(inv));
  s.label = "kodaira";
  return s;
}

/// gamma = (l1 z1 + z2^2, l2 z2).
inline ContractionSpec quadratic(double l1, double l2) {
  ContractionSpec s(2, {{term({1, 0}, l1), term({0, 2}, 1.0)}, {term({0, 1}, l2)}});
  s.label = "quadratic";
  return s;
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return scale * Complex(re, im);
}

/// Random complex eigenvalues with modulus in [lo, hi].
inline std::vector<Complex> random_spectrum(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> mod(lo, hi), arg(-M_PI, M_PI);
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) out.push_back(std::polar(mod(rng), arg(rng)));
  return out;
}

/// S diag(lambda) S^-1 with S a mild perturbation of the identity.
inline CMatrix random_contraction_matrix(std::mt19937_64& rng, int n, double lo, double hi) {
  const auto lambda = random_spectrum(rng, n, lo, hi);
  CMatrix s = CMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) += random_complex(rng, 0.2);
  }
  CMatrix d = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = lambda[static_cast<std::size_t>(i)];
  return s * d * s.inverse();
}

inline std::vector<Multidegree> monomials_of_degree(int n, int m) {
  std::vector<Multidegree> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      e[static_cast<std::size_t>(pos)] = left;
      out.emplace_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, m);
  return out;
}

/// Linear part from a random matrix plus nonlinear terms of degree 2..max_degree
/// with coefficients of size `scale`.
inline ContractionSpec random_nonlinear(std::mt19937_64& rng, int n, int max_degree, double lo, double hi,
                                        double scale) {
  const CMatrix a = random_contraction_matrix(rng, n, lo, hi);
  std::vector<Polynomial> comps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(j)] = 1;
      comps[static_cast<std::size_t>(i)].push_back(term(e, a(i, j)));
    }
    for (int m = 2; m <= max_degree; ++m) {
      for (const auto& alpha : monomials_of_degree(n, m)) {
        comps[static_cast<std::size_t>(i)].push_back({alpha, random_complex(rng, scale)});
      }
    }
  }
  return ContractionSpec(n, std::move(comps));
}

/// The fixed cubic used by the residual decay checks: sigma_max = 0.6.
inline ContractionSpec generic_cubic() {
  std::mt19937_64 rng(20240917);
  std::vector<Polynomial> comps(2);
  comps[0] = {term({1, 0}, {0.45, 0.1}), term({0, 1}, {0.1, 0.0})};
  comps[1] = {term({0, 1}, {0.35, -0.2})};
  for (int i = 0; i < 2; ++i) {
    for (int m = 2; m <= 3; ++m) {
      for (const auto& alpha : monomials_of_degree(2, m)) {
        comps[static_cast<std::size_t>(i)].push_back({alpha, random_complex(rng, 0.15)});
      }
    }
  }
  ContractionSpec s(2, std::move(comps));
  s.label = "generic cubic";
  return s;
}

// Naive sparse polynomials: a second implementation of expansion and
// truncation that shares nothing with the jet code.
using Sparse = std::map<std::vector<int>, Complex>;

inline Sparse sparse_mul(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out[e] += ca * cb;
    }
  }
  return out;
}

inline Sparse sparse_truncate(const Sparse& a, int d) {
  Sparse out;
  for (const auto& [e, c] : a) {
    int total = 0;
    for (int k : e) total += k;
    if (total <= d) out[e] += c;
  }
  return out;
}

/// Full symbolic expansion of f(g(z)), then truncation to degree <= d.
inline Sparse sparse_compose(const Sparse& f, const std::vector<Sparse>& g, int d) {
  const std::size_t n = g.size();
  Sparse out;
  for (const auto& [e, c] : f) {
    Sparse prod{{std::vector<int>(n, 0), c}};
    for (std::size_t k = 0; k < n; ++k) {
      for (int p = 0; p < e[k]; ++p) prod = sparse_mul(prod, g[k]);
    }
    for (const auto& [pe, pc] : prod) out[pe] += pc;
  }
  return sparse_truncate(out, d);
}

inline Sparse to_sparse(const hopfjet::Jet& j) {
  Sparse out;
  const auto& b = *j.basis();
  if (j.constant_term() != Complex{}) out[std::vector<int>(static_cast<std::size_t>(b.dimension()), 0)] = j.constant_term();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Complex c = j.coefficients()[static_cast<Eigen::Index>(i)];
    if (c != Complex{}) out[b[i].exponents] = c;
  }
  return out;
}

/// Largest coefficient difference between a jet and a sparse polynomial.
inline double sparse_distance(const hopfjet::Jet& j, const Sparse& s) {
  Sparse diff = to_sparse(j);
  for (const auto& [e, c] : s) diff[e] -= c;
  double worst = 0.0;
  for (const auto& [e, c] : diff) worst = std::max(worst, std::abs(c));
  return worst;
}

inline hopfjet::Jet random_jet(const hopfjet::BasisPtr& basis, std::mt19937_64& rng, double scale = 1.0) {
  CVector c(static_cast<Eigen::Index>(basis->size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = random_complex(rng, scale);
  return hopfjet::Jet(basis, c);
}

/// Coefficients of modulus exactly `scale` with random phases.
inline hopfjet::Jet unit_jet(const hopfjet::BasisPtr& basis, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> arg(-M_PI, M_PI);
  CVector c(static_cast<Eigen::Index>(basis->size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = std::polar(scale, arg(rng));
  return hopfjet::Jet(basis, c);
}

inline hopfjet::JetMap random_map(const hopfjet::BasisPtr& basis, std::mt19937_64& rng, double scale = 1.0) {
  std::vector<hopfjet::Jet> comps;
  for (int i = 0; i < basis->dimension(); ++i) comps.push_back(random_jet(basis, rng, scale));
  return hopfjet::JetMap(std::move(comps));
}

}  // namespace testing
