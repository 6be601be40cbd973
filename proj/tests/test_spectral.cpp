#include "support.hpp"

#include <hopfjet/koopman.hpp>
#include <hopfjet/linalg.hpp>
#include <hopfjet/spectral.hpp>

#include <doctest.h>

using namespace hopfjet;
using namespace testing;

namespace {

std::vector<Complex> values_of(const std::vector<MonomialEigenvalue>& v) {
  std::vector<Complex> out;
  for (const auto& e : v) out.push_back(e.value);
  return out;
}

// Every cross-degree pair within rel_tol, by direct enumeration of degree blocks.
std::size_t brute_force_resonances(const std::vector<Complex>& lambda, int d, double rel_tol) {
  const int n = static_cast<int>(lambda.size());
  std::vector<std::pair<int, Complex>> all;
  for (int m = 1; m <= d; ++m) {
    for (const auto& a : monomials_of_degree(n, m)) {
      Complex v = 1.0;
      for (int j = 0; j < n; ++j) {
        for (int p = 0; p < a[j]; ++p) v *= lambda[static_cast<std::size_t>(j)];
      }
      all.emplace_back(m, v);
    }
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].first == all[j].first) continue;
      const double scale = std::max(std::abs(all[i].second), std::abs(all[j].second));
      if (std::abs(all[i].second - all[j].second) <= rel_tol * scale) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("monomial eigenvalue examples") {
  const std::vector<Complex> half{0.5};
  const auto h = values_of(monomial_eigenvalues(half, 3));
  CHECK(h == std::vector<Complex>{0.5, 0.25, 0.125});

  const std::vector<Complex> l{0.3, 0.5};
  const auto v = values_of(monomial_eigenvalues(l, 2));
  const std::vector<Complex> expected{0.3, 0.5, 0.09, 0.15, 0.25};
  REQUIRE(v.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(v[i] - expected[i]) <= 1e-16);

  const std::vector<Complex> r{0.25, 0.5};
  const auto w = values_of(monomial_eigenvalues(r, 2));
  CHECK(std::count(w.begin(), w.end(), Complex(0.25)) == 2);
}

TEST_CASE("resonance examples") {
  const std::vector<Complex> none{0.3, 0.5};
  CHECK(detect_resonances(none, 4).empty());
  CHECK(brute_force_resonances(none, 4, 1e-5) == 0);

  const std::vector<Complex> res{0.25, 0.5};
  const auto found = detect_resonances(res, 2);
  REQUIRE(found.size() == 1);
  CHECK(found[0].target.exponents == std::vector<int>{1, 0});
  CHECK(found[0].source.exponents == std::vector<int>{0, 2});
  REQUIRE(found[0].target_coordinate.has_value());
  CHECK(*found[0].target_coordinate == 0);
  CHECK(found[0].kind == ResonanceClass::Exact);

  const std::vector<Complex> near{0.2500001, 0.5};
  const auto nd = detect_resonances(near, 2);
  REQUIRE(nd.size() == 1);
  CHECK(nd[0].kind == ResonanceClass::Near);
  const auto flagged = detect_resonances(near, 2, {1e-6, 1e3});
  REQUIRE(flagged.size() == 1);
  CHECK(flagged[0].kind != ResonanceClass::None);
}

TEST_CASE("property: resonance table matches brute force") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> lambda = random_spectrum(rng, 2, 0.2, 0.9);
    // Plant a resonance in half the trials.
    if (trial % 2 == 0) lambda[0] = lambda[1] * lambda[1] * lambda[1];
    for (double tol : {1e-8, 1e-3}) {
      const auto found = detect_resonances(lambda, 4, {tol, 1.0});
      CHECK(found.size() == brute_force_resonances(lambda, 4, tol));
    }
  }
}

TEST_CASE("root decomposition examples") {
  {
    const RootDecomposition rd = root_decomposition(build_koopman(ContractionSpec(1, {{term({1}, 0.5)}}), 2));
    REQUIRE(rd.clusters.size() == 2);
    CHECK(rd.clusters[0].value == Complex(0.5));
    CHECK(rd.clusters[1].value == Complex(0.25));
    CHECK(rd.clusters[0].multiplicity() == 1);
    CHECK(std::abs(rd.clusters[0].basis(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(rd.clusters[1].basis(1, 0)) == doctest::Approx(1.0));
  }
  {
    // eigenvalue 0.3: root vector proportional to z1 + 20 z2^2
    const RootDecomposition rd = root_decomposition(build_koopman(quadratic(0.3, 0.5), 2));
    const auto it = std::find_if(rd.clusters.begin(), rd.clusters.end(),
                                 [](const EigenCluster& c) { return std::abs(c.value - 0.3) < 1e-12; });
    REQUIRE(it != rd.clusters.end());
    REQUIRE(it->multiplicity() == 1);
    const CVector v = it->basis.col(0);
    CHECK(std::abs(v[4] / v[0] - 20.0) <= 1e-12);
    CHECK(std::abs(v[1]) + std::abs(v[2]) + std::abs(v[3]) <= 1e-14);
  }
  {
    // eigenvalue 0.25: a 2-chain on span{z1, z2^2}
    const KoopmanMatrix t = build_koopman(kodaira(0.5, 2, 1.0), 2);
    const RootDecomposition rd = root_decomposition(t);
    const auto it = std::find_if(rd.clusters.begin(), rd.clusters.end(),
                                 [](const EigenCluster& c) { return std::abs(c.value - 0.25) < 1e-12; });
    REQUIRE(it != rd.clusters.end());
    REQUIRE(it->multiplicity() == 2);
    int longest = 0;
    for (const auto& v : it->vectors) longest = std::max(longest, v.chain_length);
    CHECK(longest == 2);
    // Direct action: (T - 0.25) z1 = z2^2, (T - 0.25) z2^2 = 0.
    const CMatrix shifted = t.matrix - 0.25 * CMatrix::Identity(5, 5);
    CVector z1 = CVector::Zero(5), z22 = CVector::Zero(5);
    z1[0] = 1.0;
    z22[4] = 1.0;
    CHECK((shifted * z1 - z22).norm() == 0.0);
    CHECK((shifted * z22).norm() == 0.0);
    // The cluster basis spans exactly {z1, z2^2}.
    for (Eigen::Index p = 0; p < 2; ++p) {
      CHECK(std::abs(it->basis(1, p)) + std::abs(it->basis(2, p)) + std::abs(it->basis(3, p)) <= 1e-15);
    }
  }
}

TEST_CASE("property: root decomposition on random contractions") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + trial % 3;
    ContractionSpec spec = trial % 4 == 3 ? kodaira(0.4 + 0.1 * trial / 4, 2 + trial % 2, -2.0)
                                          : random_nonlinear(rng, n, 3, 0.3, 0.9, 0.3);
    const KoopmanMatrix t = build_koopman(spec, 4);
    const RootDecomposition rd = root_decomposition(t);
    std::size_t total = 0;
    for (const auto& c : rd.clusters) {
      total += c.multiplicity();
      for (const auto& v : c.vectors) CHECK(v.residual <= 1e-9 * v.coefficients.norm());
      CHECK((t.matrix * c.basis - c.basis * c.restricted).norm() <= 1e-9);
    }
    CHECK(total == t.basis->size());
    // Schur coordinates make the operator lower triangular.
    CHECK(rd.triangular.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm() <= 1e-13);
  }
}

TEST_CASE("f-finite span examples") {
  const std::vector<Polynomial> diag{{term({1, 0}, 0.3)}, {term({0, 1}, 0.7)}};
  const KoopmanMatrix td = build_koopman(ContractionSpec(2, diag), 3);
  const BasisPtr b = td.basis;
  {
    const InvariantSubspace w = f_finite_span(td.matrix, {Jet::coordinate(b, 0).coefficients()});
    CHECK(w.basis.cols() == 1);
    CHECK(std::abs(w.restricted(0, 0) - 0.3) <= 1e-15);
  }
  {
    const KoopmanMatrix tk = build_koopman(kodaira(0.5, 2, 1.0), 3);
    const InvariantSubspace w = f_finite_span(tk.matrix, {Jet::coordinate(tk.basis, 0).coefficients()});
    REQUIRE(w.basis.cols() == 2);
    CHECK(std::abs(w.basis(0, 0)) == doctest::Approx(1.0));
    const std::size_t z22 = tk.basis->index(Multidegree({0, 2}));
    CHECK(std::abs(w.basis(static_cast<Eigen::Index>(z22), 1)) == doctest::Approx(1.0));
    CMatrix expected(2, 2);
    expected << 0.25, 0.0, 1.0, 0.25;
    // Basis vectors are unit coordinate jets up to phase; compare moduli.
    CHECK((w.restricted.cwiseAbs() - expected.real()).norm() <= 1e-14);
  }
  {
    std::vector<CVector> seeds;
    for (std::size_t i = 0; i < b->size(); ++i) seeds.push_back(CVector::Unit(static_cast<Eigen::Index>(b->size()), static_cast<Eigen::Index>(i)));
    CHECK(f_finite_span(td.matrix, seeds).basis.cols() == static_cast<Eigen::Index>(b->size()));
  }
}

TEST_CASE("property: f-finite span is idempotent, monotone and spectrally contained") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    const ContractionSpec spec = trial % 2 ? random_nonlinear(rng, 2, 2, 0.3, 0.9, 0.3) : quadratic(0.3, 0.5);
    const KoopmanMatrix t = build_koopman(spec, 4);
    const CVector s1 = Jet::coordinate(t.basis, 1).coefficients();
    const CVector s2 = Jet::coordinate(t.basis, 0).coefficients();
    const InvariantSubspace w1 = f_finite_span(t.matrix, {s1});
    const InvariantSubspace w12 = f_finite_span(t.matrix, {s1, s2});

    std::vector<CVector> cols;
    for (Eigen::Index c = 0; c < w1.basis.cols(); ++c) cols.push_back(w1.basis.col(c));
    const InvariantSubspace again = f_finite_span(t.matrix, cols);
    CHECK(again.basis.cols() == w1.basis.cols());
    CHECK((again.basis * again.basis.adjoint() - w1.basis * w1.basis.adjoint()).norm() <= 1e-10);

    CHECK(w12.basis.cols() >= w1.basis.cols());
    const CMatrix proj = w12.basis * w12.basis.adjoint();
    CHECK((proj * w1.basis - w1.basis).norm() <= 1e-10);

    const auto mono = values_of(monomial_eigenvalues(spec.linear_part(), 4));
    for (Complex mu : eigenvalues(w12.restricted)) {
      double best = 1e300;
      for (Complex v : mono) best = std::min(best, std::abs(v - mu));
      CHECK(best <= 1e-8);
    }
  }
}
