#include "support.hpp"

#include <hopfjet/koopman.hpp>
#include <hopfjet/linalg.hpp>
#include <hopfjet/spectral.hpp>

#include <Eigen/Eigenvalues>

#include <doctest.h>

using namespace hopfjet;
using namespace testing;

namespace {

ContractionSpec compose_specs(const ContractionSpec& gamma, const ContractionSpec& delta) {
  // gamma o delta by naive substitution; exact because both are polynomials.
  const int n = gamma.dimension();
  std::vector<Sparse> ds;
  for (const auto& p : delta.components()) {
    Sparse s;
    for (const auto& t : p) s[t.exponents.exponents] += t.coeff;
    ds.push_back(s);
  }
  std::vector<Polynomial> comps;
  for (const auto& p : gamma.components()) {
    Sparse s;
    for (const auto& t : p) s[t.exponents.exponents] += t.coeff;
    Polynomial out;
    for (const auto& [e, c] : sparse_compose(s, ds, 1000)) out.push_back({Multidegree(e), c});
    comps.push_back(std::move(out));
  }
  return ContractionSpec(n, std::move(comps));
}

}  // namespace

TEST_CASE("koopman examples") {
  const KoopmanMatrix half = build_koopman(ContractionSpec(1, {{term({1}, 0.5)}}), 3);
  CMatrix expected = CMatrix::Zero(3, 3);
  expected.diagonal() << 0.5, 0.25, 0.125;
  CHECK((half.matrix - expected).norm() == 0.0);

  const double l1 = 0.3, l2 = 0.5;
  const KoopmanMatrix t = build_koopman(quadratic(l1, l2), 2);
  // basis (z1, z2, z1^2, z1 z2, z2^2)
  CHECK(t.matrix(0, 0) == Complex(l1));
  CHECK(t.matrix(4, 0) == Complex(1.0));
  CHECK(t.matrix.col(0).cwiseAbs().sum() == doctest::Approx(l1 + 1.0));
  CHECK(t.matrix(1, 1) == Complex(l2));
  CHECK(t.matrix.col(1).cwiseAbs().sum() == doctest::Approx(l2));
  CHECK(std::abs(t.matrix(2, 2) - l1 * l1) <= 1e-15);
  CHECK(std::abs(t.matrix(3, 3) - l1 * l2) <= 1e-15);
  CHECK(std::abs(t.matrix(4, 4) - l2 * l2) <= 1e-15);

  const KoopmanMatrix t2 = build_koopman(quadratic(l1, l2), 2, 2);
  CHECK((t2.matrix - t.matrix * t.matrix).norm() <= 1e-15);
}

TEST_CASE("property: block triangularity is exact") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const KoopmanMatrix t = build_koopman(random_nonlinear(rng, 2, 3, 0.2, 0.8, 0.3), 4);
    CHECK(block_triangularity_defect(t) == 0.0);
  }
}

TEST_CASE("contravariance examples") {
  const ContractionSpec half(1, {{term({1}, 0.5)}});
  CHECK(contravariance_check(half, half, 4) == 0.0);

  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix a = random_contraction_matrix(rng, 2, 0.2, 0.9);
    const CMatrix b = random_contraction_matrix(rng, 2, 0.2, 0.9);
    const ContractionSpec g = linear_contraction(a), h = linear_contraction(b);
    CHECK(contravariance_check(g, h, 3) < 1e-12);
    // Dense matrix oracle on the linear block: T(g o h) restricted to coordinates is (AB)^T.
    const KoopmanMatrix t = build_koopman(linear_contraction(a * b), 3);
    CHECK((t.matrix.topLeftCorner(2, 2) - (a * b).transpose()).norm() <= 1e-14);
  }

  const ContractionSpec kod = kodaira(0.5, 2, 1.0);
  CHECK(contravariance_check(kod, kod, 4) < 1e-12);
  const KoopmanMatrix via_power = build_koopman(kod, 4, 2);
  const KoopmanMatrix via_spec = build_koopman(compose_specs(kod, kod), 4);
  CHECK((via_power.matrix - via_spec.matrix).norm() <= 1e-14);
}

TEST_CASE("property: contravariance on random nonlinear pairs") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const ContractionSpec g = random_nonlinear(rng, 2, 2, 0.2, 0.8, 0.3);
    const ContractionSpec h = random_nonlinear(rng, 2, 3, 0.2, 0.8, 0.3);
    CHECK(contravariance_check(g, h, 3) <= 1e-11);
  }
}

TEST_CASE("compactness probe") {
  const KoopmanMatrix half = build_koopman(ContractionSpec(1, {{term({1}, 0.5)}}), 4);
  const CompactnessProbe p = compactness_probe(half);
  REQUIRE(p.block_norms.size() == 4);
  for (int m = 1; m <= 4; ++m) CHECK(std::abs(p.block_norms[static_cast<std::size_t>(m - 1)] - std::pow(0.5, m)) <= 1e-15);
  CHECK(p.rate == doctest::Approx(0.5).epsilon(1e-12));

  const std::vector<Complex> lambda{{0.6, 0.2}, {-0.3, 0.1}, {0.5, 0.0}};
  std::vector<Polynomial> comps;
  for (int i = 0; i < 3; ++i) {
    std::vector<int> e(3, 0);
    e[static_cast<std::size_t>(i)] = 1;
    comps.push_back({term(e, lambda[static_cast<std::size_t>(i)])});
  }
  const KoopmanMatrix diag = build_koopman(ContractionSpec(3, comps), 4);
  const CompactnessProbe pd = compactness_probe(diag);
  for (int m = 1; m <= 4; ++m) {
    double best = 0.0;
    for (int k = m; k <= 4; ++k) {
      for (const auto& a : monomials_of_degree(3, k)) {
        Complex v = 1.0;
        for (int j = 0; j < 3; ++j) v *= std::pow(lambda[static_cast<std::size_t>(j)], a[j]);
        best = std::max(best, std::abs(v));
      }
    }
    CHECK(std::abs(pd.block_norms[static_cast<std::size_t>(m - 1)] - best) <= 1e-12);
  }
}

TEST_CASE("property: spectrum of T is the monomial multiset") {
  std::mt19937_64 rng(34);
  for (int n = 1; n <= 3; ++n) {
    const ContractionSpec spec = random_nonlinear(rng, n, 2, 0.3, 0.9, 0.3);
    const int d = n == 3 ? 4 : 5;
    const KoopmanMatrix t = build_koopman(spec, d);
    const auto lambda = eigenvalues(spec.linear_part());
    std::vector<Complex> expected;
    for (const auto& me : monomial_eigenvalues(std::span<const Complex>(lambda), d)) {
      expected.push_back(me.value);
    }
    CHECK(multiset_distance(eigenvalues(t.matrix), expected) <= 1e-8);
    for (Complex mu : eigenvalues(t.matrix)) CHECK(std::abs(mu) < 1.0);
  }
}
