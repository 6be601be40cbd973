#include <hopfjet/contraction.hpp>

#include <hopfjet/linalg.hpp>
#include <hopfjet/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hopfjet {

namespace {

Complex ipow(Complex z, int e) {
  Complex r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

int polynomial_degree(const std::vector<Polynomial>& polys) {
  int d = 0;
  for (const auto& p : polys) {
    for (const auto& t : p) {
      if (t.coeff != Complex{}) d = std::max(d, t.exponents.total());
    }
  }
  return d;
}

void check_shape(int n, const std::vector<Polynomial>& polys, const char* what) {
  if (static_cast<int>(polys.size()) != n) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": expected one polynomial per coordinate");
  }
  for (const auto& p : polys) {
    for (const auto& t : p) {
      if (t.exponents.size() != n) {
        throw Error(ErrorKind::InvalidInput, std::string(what) + ": exponent vector has wrong length");
      }
      for (int e : t.exponents.exponents) {
        if (e < 0) throw Error(ErrorKind::InvalidInput, std::string(what) + ": negative exponent");
      }
      if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
        throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite coefficient");
      }
    }
  }
}

JetMap to_jet(const std::vector<Polynomial>& polys, const BasisPtr& basis) {
  std::vector<Jet> comps;
  for (const auto& p : polys) {
    Jet j(basis);
    for (const auto& t : p) {
      if (t.exponents.total() <= basis->degree()) j += Jet::monomial(basis, t.exponents, t.coeff);
    }
    comps.push_back(std::move(j));
  }
  return JetMap(std::move(comps));
}

}  // namespace

CVector evaluate_polynomials(const std::vector<Polynomial>& polys, const CVector& z) {
  CVector out = CVector::Zero(static_cast<Eigen::Index>(polys.size()));
  for (std::size_t i = 0; i < polys.size(); ++i) {
    Complex acc = 0.0;
    for (const auto& t : polys[i]) {
      Complex m = t.coeff;
      for (int k = 0; k < t.exponents.size(); ++k) m *= ipow(z[k], t.exponents[k]);
      acc += m;
    }
    out[static_cast<Eigen::Index>(i)] = acc;
  }
  return out;
}

ContractionSpec::ContractionSpec(int dimension, std::vector<Polynomial> components,
                                 std::optional<std::vector<Polynomial>> inverse)
    : dimension_(dimension), components_(std::move(components)), inverse_(std::move(inverse)) {
  if (dimension < 1) throw Error(ErrorKind::InvalidInput, "contraction: dimension must be >= 1");
  check_shape(dimension, components_, "contraction");
  if (inverse_) check_shape(dimension, *inverse_, "inverse");
  linear_ = CMatrix::Zero(dimension, dimension);
  for (int i = 0; i < dimension; ++i) {
    for (const auto& t : components_[static_cast<std::size_t>(i)]) {
      if (t.exponents.total() != 1) continue;
      const auto j = std::find(t.exponents.exponents.begin(), t.exponents.exponents.end(), 1) -
                     t.exponents.exponents.begin();
      linear_(i, j) += t.coeff;
    }
  }
}

int ContractionSpec::max_degree() const { return polynomial_degree(components_); }

bool ContractionSpec::vanishes_at_origin() const {
  return evaluate_polynomials(components_, CVector::Zero(dimension_)).norm() == 0.0;
}

JetMap ContractionSpec::jet(const BasisPtr& basis) const {
  if (basis->dimension() != dimension_) {
    throw Error(ErrorKind::BasisMismatch, "contraction jet: basis dimension differs");
  }
  if (!vanishes_at_origin()) {
    throw Error(ErrorKind::NonVanishingConstant, "contraction: components do not vanish at 0");
  }
  return to_jet(components_, basis);
}

std::optional<JetMap> ContractionSpec::inverse_jet(const BasisPtr& basis) const {
  if (!inverse_) return std::nullopt;
  return to_jet(*inverse_, basis);
}

ContractionSpec linear_contraction(const CMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Polynomial> comps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a(i, j) == Complex{}) continue;
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(j)] = 1;
      comps[static_cast<std::size_t>(i)].push_back({Multidegree(e), a(i, j)});
    }
  }
  return ContractionSpec(n, std::move(comps));
}

ContractionDiagnostics validate(const ContractionSpec& spec, const ValidationOptions& options) {
  if (!spec.vanishes_at_origin()) {
    throw Error(ErrorKind::NonVanishingConstant, "validate: components do not vanish at 0");
  }
  const CMatrix& a = spec.linear_part();
  ContractionDiagnostics diag;
  diag.options = options;
  diag.eigenvalues = eigenvalues(a);
  diag.sigma_max = 0.0;
  diag.sigma_min = std::numeric_limits<double>::infinity();
  for (Complex l : diag.eigenvalues) {
    diag.sigma_max = std::max(diag.sigma_max, std::abs(l));
    diag.sigma_min = std::min(diag.sigma_min, std::abs(l));
  }
  if (min_singular_value(a) <= 1e-13 * std::max(1.0, a.norm())) {
    throw Error(ErrorKind::SingularLinearPart, "validate: linear part is singular");
  }
  if (diag.sigma_max >= 1.0) {
    std::ostringstream os;
    os << "not a contraction: spectral radius of the linear part is " << diag.sigma_max;
    throw Error(ErrorKind::NotAContraction, os.str());
  }

  const auto samples = sphere_points(spec.dimension(), options.samples, options.r_k, options.seed);
  int worst = 0;
  for (const auto& z0 : samples) {
    CVector z = z0;
    int last_outside = z.norm() > options.r_u ? 0 : -1;
    bool escaped = false;
    for (int k = 1; k <= options.n_max; ++k) {
      z = spec(z);
      const double r = z.norm();
      if (!std::isfinite(r) || r > options.r_guard) {
        escaped = true;
        break;
      }
      if (r > options.r_u) last_outside = k;
      if (r <= 1e-12 * options.r_u) break;
    }
    if (escaped) {
      ++diag.escaped_samples;
    } else if (last_outside == options.n_max) {
      ++diag.unsettled_samples;
    } else {
      worst = std::max(worst, last_outside + 1);
    }
  }
  diag.entry_steps = worst;
  diag.contraction = diag.escaped_samples == 0 && diag.unsettled_samples == 0;

  std::ostringstream scope;
  scope << "linear part checked exactly; global contraction sampled on " << options.samples
        << " points of |z| = " << options.r_k << " with target ball |z| <= " << options.r_u
        << ", N_max = " << options.n_max << ", guard radius " << options.r_guard;
  diag.scope = scope.str();

  if (!diag.contraction) {
    std::ostringstream os;
    os << "not globally contracting on test domain: " << diag.escaped_samples << " escaped, "
       << diag.unsettled_samples << " unsettled of " << options.samples << " samples";
    throw Error(ErrorKind::NotGloballyContracting, os.str());
  }
  return diag;
}

JetMap iterate(const ContractionSpec& spec, int k, const BasisPtr& basis) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "iterate: power must be >= 1");
  const JetMap g = spec.jet(basis);
  JetMap r = g;
  for (int i = 1; i < k; ++i) r = compose_map(g, r);
  return r;
}

InverseReport check_inverse(const ContractionSpec& spec, int degree, std::size_t samples,
                            std::uint64_t seed) {
  InverseReport rep;
  rep.supplied = spec.inverse().has_value();
  const int n = spec.dimension();

  auto identity_defect = [&](const JetMap& a, const JetMap& b) {
    const JetMap ab = compose_map(a, b);
    const JetMap id = JetMap::identity(a.basis());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, (ab[i] - id[i]).coefficients().cwiseAbs().maxCoeff());
    }
    return worst;
  };

  if (rep.supplied) {
    const int inv_deg = std::max(1, polynomial_degree(*spec.inverse()));
    rep.degree = degree > 0 ? degree : std::clamp(spec.max_degree() * inv_deg, 2, 12);
    const BasisPtr basis = MonomialBasis::make(n, rep.degree);
    const JetMap g = spec.jet(basis);
    const JetMap h = *spec.inverse_jet(basis);
    rep.jet_residual = std::max(identity_defect(g, h), identity_defect(h, g));
    for (const auto& z : ball_points(n, samples, 1.0, seed)) {
      const CVector back = evaluate_polynomials(*spec.inverse(), spec(z));
      const CVector fwd = spec(evaluate_polynomials(*spec.inverse(), z));
      rep.point_residual = std::max({rep.point_residual, (back - z).norm(), (fwd - z).norm()});
    }
    rep.passed = rep.jet_residual < 1e-10 && rep.point_residual < 1e-10;
    rep.note = "supplied inverse checked at jet level and on sampled points of |z| <= 1";
    if (!rep.passed) {
      std::ostringstream os;
      os << "supplied inverse fails composition check (jet residual " << rep.jet_residual
         << ", point residual " << rep.point_residual << ")";
      throw Error(ErrorKind::VerificationFailure, os.str());
    }
    return rep;
  }

  rep.degree = degree > 0 ? degree : 4;
  const BasisPtr basis = MonomialBasis::make(n, rep.degree);
  const JetMap g = spec.jet(basis);
  const JetMap h = inverse_map(g);
  rep.jet_residual = std::max(identity_defect(g, h), identity_defect(h, g));
  rep.passed = rep.jet_residual < 1e-10;
  rep.note = "local inverse only; global invertibility assumed";
  return rep;
}

}  // namespace hopfjet
