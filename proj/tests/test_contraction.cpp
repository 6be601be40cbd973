#include "support.hpp"

#include <hopfjet/sampling.hpp>

#include <doctest.h>

using namespace hopfjet;
using namespace testing;

namespace {

ContractionSpec scalar(double a, std::optional<double> inverse = std::nullopt) {
  std::optional<std::vector<Polynomial>> inv;
  if (inverse) inv = std::vector<Polynomial>{{term({1}, *inverse)}};
  return ContractionSpec(1, {{term({1}, a)}}, inv);
}

}  // namespace

TEST_CASE("validate examples") {
  const ContractionDiagnostics half = validate(scalar(0.5));
  CHECK(half.contraction);
  CHECK(half.sigma_max == 0.5);
  CHECK(half.entry_steps == 4);

  const ContractionDiagnostics q = validate(quadratic(0.3, 0.5));
  CHECK(q.contraction);
  CHECK(q.sigma_max == doctest::Approx(0.5));
  CHECK(q.sigma_min == doctest::Approx(0.3));

  try {
    validate(scalar(2.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAContraction);
    CHECK(exit_code_for(e.kind()) == 3);
    CHECK(std::string(e.what()).find("not a contraction") != std::string::npos);
  }
}

TEST_CASE("validate rejects bad inputs") {
  const ContractionSpec constant(1, {{term({0}, 0.1), term({1}, 0.5)}});
  CHECK_THROWS_AS(validate(constant), Error);
  try {
    validate(constant);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonVanishingConstant);
  }
  const ContractionSpec singular(2, {{term({1, 0}, 0.5)}, {term({1, 0}, 0.25)}});
  try {
    validate(singular);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularLinearPart);
  }
  // Locally contracting, but |z| = 1 escapes: z -> 0.5 z + 2 z^2.
  const ContractionSpec escaping(1, {{term({1}, 0.5), term({2}, 2.0)}});
  try {
    validate(escaping);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotGloballyContracting);
  }
}

TEST_CASE("iterate examples") {
  const auto b1 = MonomialBasis::make(1, 3);
  CHECK(iterate(scalar(0.5), 1, b1)[0].coefficient(Multidegree({1})) == Complex(0.5));
  CHECK(iterate(scalar(0.5), 3, b1)[0].coefficient(Multidegree({1})) == Complex(0.125));

  const double l1 = 0.3, l2 = 0.5;
  const auto b = MonomialBasis::make(2, 2);
  const JetMap g1 = iterate(quadratic(l1, l2), 1, b);
  const JetMap direct = quadratic(l1, l2).jet(b);
  for (int i = 0; i < 2; ++i) CHECK(g1[i].coefficients() == direct[i].coefficients());
  const JetMap g2 = iterate(quadratic(l1, l2), 2, b);
  CHECK(std::abs(g2[0].coefficient(Multidegree({1, 0})) - l1 * l1) <= 1e-15);
  CHECK(std::abs(g2[0].coefficient(Multidegree({0, 2})) - (l1 + l2 * l2)) <= 1e-15);
  CHECK(std::abs(g2[1].coefficient(Multidegree({0, 1})) - l2 * l2) <= 1e-15);
}

TEST_CASE("property: iterate is additive in the exponent") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const ContractionSpec spec = random_nonlinear(rng, 2, 3, 0.3, 0.8, 0.2);
    const auto b = MonomialBasis::make(2, 4);
    for (auto [a, c] : {std::pair{1, 1}, {2, 3}, {1, 4}}) {
      const JetMap lhs = iterate(spec, a + c, b);
      const JetMap rhs = compose_map(iterate(spec, a, b), iterate(spec, c, b));
      for (int i = 0; i < 2; ++i) {
        const double scale = std::max(lhs[i].coefficients().norm(), 1e-300);
        CHECK((lhs[i].coefficients() - rhs[i].coefficients()).norm() <= 1e-11 * scale);
      }
    }
  }
}

TEST_CASE("property: orbits eventually shrink at any rate above sigma_max") {
  const ContractionSpec spec = quadratic(0.3, 0.5);
  const double rate = 0.55;
  for (const auto& z0 : sphere_points(2, 64, 1.0, 3)) {
    CVector z = z0;
    std::vector<double> norms;
    for (int k = 0; k < 80; ++k) {
      norms.push_back(z.norm());
      z = spec(z);
    }
    CHECK(norms.back() < 1e-15);
    // Past the transient every step contracts by at least `rate`.
    for (std::size_t k = 20; k + 1 < norms.size(); ++k) {
      if (norms[k] > 1e-250) CHECK(norms[k + 1] <= rate * norms[k]);
    }
  }
}

TEST_CASE("check_inverse examples") {
  const InverseReport half = check_inverse(scalar(0.5, 2.0));
  CHECK(half.supplied);
  CHECK(half.passed);

  const InverseReport kod = check_inverse(kodaira(0.5, 2, 1.0));
  CHECK(kod.passed);
  CHECK(kod.point_residual < 1e-10);

  try {
    check_inverse(scalar(0.5, 3.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VerificationFailure);
  }

  const InverseReport local = check_inverse(quadratic(0.3, 0.5));
  CHECK_FALSE(local.supplied);
  CHECK(local.note == "local inverse only; global invertibility assumed");
}
