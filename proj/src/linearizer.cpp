#include <hopfjet/linearizer.hpp>

#include <hopfjet/linalg.hpp>
#include <hopfjet/sampling.hpp>
#include <hopfjet/spectral.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace hopfjet {

const char* to_string(Strategy s) noexcept {
  return s == Strategy::Closure ? "closure" : "root-prune";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "closure") return Strategy::Closure;
  if (s == "root-prune" || s == "root_prune") return Strategy::RootPrune;
  throw Error(ErrorKind::InvalidInput, "unknown strategy '" + s + "'");
}

// --- LinearHopfModel --------------------------------------------------------

double LinearHopfModel::sigma_max() const {
  double r = 0.0;
  for (Complex l : eigenvalues) r = std::max(r, std::abs(l));
  return r;
}

double LinearHopfModel::sigma_min() const {
  double r = std::numeric_limits<double>::infinity();
  for (Complex l : eigenvalues) r = std::min(r, std::abs(l));
  return r;
}

LinearHopfModel LinearHopfModel::from_matrix(const CMatrix& b, double max_condition) {
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw Error(ErrorKind::InvalidInput, "linear Hopf model: matrix must be square and non-empty");
  }
  LinearHopfModel m;
  m.contraction = b;
  Eigen::ComplexEigenSolver<CMatrix> es(b);
  const CVector& ev = es.eigenvalues();
  m.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  for (Complex l : m.eigenvalues) {
    if (!(std::abs(l) < 1.0)) {
      std::ostringstream os;
      os << "not a linear contraction: eigenvalue " << l << " has modulus " << std::abs(l);
      throw Error(ErrorKind::NotAContraction, os.str());
    }
  }
  m.eigenvectors = es.eigenvectors();
  m.condition = condition_number(m.eigenvectors);
  if (m.condition < max_condition) {
    const CMatrix rebuilt = m.eigenvectors * ev.asDiagonal() * m.eigenvectors.inverse();
    m.diagonalizable = (rebuilt - b).norm() <= 1e-10 * std::max(b.norm(), 1e-300);
  }
  return m;
}

// --- EmbeddingModel ---------------------------------------------------------

std::vector<Jet> EmbeddingModel::psi() const {
  std::vector<Jet> out;
  for (Eigen::Index c = 0; c < basis_matrix.cols(); ++c) out.emplace_back(basis, CVector(basis_matrix.col(c)));
  return out;
}

CVector EmbeddingModel::psi_at(const CVector& z) const {
  return basis_matrix.transpose() * monomial_values(*basis, as_span(z));
}

CMatrix EmbeddingModel::psi_jacobian(const CVector& z) const {
  const auto jets = psi();
  return jacobian(jets, as_span(z));
}

double invariance_residual(const EmbeddingModel& model, const CMatrix& t) {
  return (t * model.basis_matrix - model.basis_matrix * model.a_w).norm();
}

int default_degree(const ContractionSpec& spec, int cap) {
  const CMatrix& a = spec.linear_part();
  const double hi = spectral_radius(a);
  const double lo = min_eigen_modulus(a);
  if (!(hi > 0.0 && hi < 1.0 && lo > 0.0)) return std::min(3, cap);
  // Guard against ratios like 2.0000000000000004 from rounding.
  const double ratio = std::log(lo) / std::log(hi);
  const int d = static_cast<int>(std::ceil(ratio - 1e-9)) + 2;
  return std::clamp(d, 1, cap);
}

EmbeddingModel linearize_closure(const ContractionSpec& spec, int degree, double rank_tol) {
  const KoopmanMatrix t = build_koopman(spec, degree, 1);
  const int n = spec.dimension();
  std::vector<CVector> seeds;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    seeds.push_back(Jet::coordinate(t.basis, i).coefficients());
    names.push_back("z" + std::to_string(i + 1));
  }
  InvariantSubspace w = f_finite_span(t.matrix, seeds, rank_tol, names);
  if (w.basis.cols() < n) {
    throw Error(ErrorKind::Internal, "closure: coordinate seeds are linearly dependent");
  }
  EmbeddingModel model;
  model.strategy = Strategy::Closure;
  model.basis = t.basis;
  model.basis_matrix = std::move(w.basis);
  model.a_w = std::move(w.restricted);
  model.provenance = std::move(w.provenance);
  return model;
}

EmbeddingModel linearize_root_prune(const ContractionSpec& spec, int degree,
                                    const PruneOptions& options) {
  const BasisPtr basis = MonomialBasis::make(spec.dimension(), degree);
  const JetMap g = spec.jet(basis);
  const TriangularizedKoopman tk = triangularize_koopman(g);
  const CMatrix& l = tk.triangular;
  const auto m = static_cast<Eigen::Index>(l.rows());
  const int n = spec.dimension();
  const double numerator_floor = 1e-12 * std::max(1.0, l.cwiseAbs().maxCoeff());

  std::set<Eigen::Index> generators;
  for (int i = 0; i < n; ++i) generators.insert(i);

  while (true) {
    const std::vector<Eigen::Index> gens(generators.begin(), generators.end());
    const auto k = static_cast<Eigen::Index>(gens.size());
    std::map<Eigen::Index, Eigen::Index> position;
    for (Eigen::Index p = 0; p < k; ++p) position[gens[static_cast<std::size_t>(p)]] = p;

    CMatrix v = CMatrix::Zero(m, k);
    CMatrix c = CMatrix::Zero(k, k);
    std::optional<Eigen::Index> absorb;

    for (Eigen::Index p = k - 1; p >= 0 && !absorb; --p) {
      const Eigen::Index j = gens[static_cast<std::size_t>(p)];
      const Complex mu = l(j, j);
      v(j, p) = 1.0;
      c(p, p) = mu;
      for (Eigen::Index i = j + 1; i < m; ++i) {
        Complex s = 0.0;
        for (Eigen::Index col = j; col < i; ++col) s += l(i, col) * v(col, p);
        if (auto it = position.find(i); it != position.end()) {
          c(it->second, p) = s;
          continue;
        }
        Complex rhs = -s;
        for (Eigen::Index q = p + 1; q < k; ++q) {
          if (gens[static_cast<std::size_t>(q)] < i) rhs += c(q, p) * v(i, q);
        }
        const Complex gap = l(i, i) - mu;
        const double rel = std::abs(gap) / std::max(std::abs(l(i, i)), std::abs(mu));
        if (rel <= options.tol_res) {
          if (std::abs(rhs) > numerator_floor) {
            absorb = i;
            break;
          }
          v(i, p) = 0.0;
        } else if (rel <= options.prune_threshold && std::abs(rhs) > numerator_floor) {
          std::ostringstream os;
          os << "ill-conditioned linearization; use closure strategy (near resonance at monomial "
             << i << " with relative gap " << rel << ")";
          throw Error(ErrorKind::IllConditioned, os.str());
        } else {
          v(i, p) = rhs / gap;
        }
      }
    }
    if (absorb) {
      generators.insert(*absorb);
      continue;
    }

    EmbeddingModel model;
    model.strategy = Strategy::RootPrune;
    model.basis = basis;
    model.basis_matrix = tk.to_original * v;
    model.a_w = c;
    for (Eigen::Index j : gens) {
      const auto& alpha = (*basis)[static_cast<std::size_t>(j)];
      std::ostringstream os;
      os << (j < n ? "root:" : "resonant:") << "u^(";
      for (int e = 0; e < alpha.size(); ++e) os << (e ? "," : "") << alpha[e];
      os << ")";
      model.provenance.push_back(os.str());
    }
    return model;
  }
}

// --- verification -----------------------------------------------------------

namespace {

struct LineFit {
  double slope = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

SemiconjugacyReport verify_semiconjugacy(const EmbeddingModel& model, const ContractionSpec& spec,
                                         const SemiconjugacyOptions& options) {
  SemiconjugacyReport rep;
  const CMatrix b = model.point_action();
  const int n = spec.dimension();
  bool exact = true;
  for (double r : options.radii) {
    RadiusResidual rr;
    rr.radius = r;
    for (const auto& z : sphere_points(n, options.samples, r, options.seed)) {
      const CVector psi = model.psi_at(z);
      const CVector lhs = model.psi_at(spec(z));
      rr.max_residual = std::max(rr.max_residual, (lhs - b * psi).norm());
      rr.max_psi = std::max(rr.max_psi, psi.norm());
    }
    if (rr.max_residual > options.exact_tol * std::max(1.0, rr.max_psi)) exact = false;
    rep.per_radius.push_back(rr);
  }
  std::vector<double> xs, ys;
  for (const auto& rr : rep.per_radius) {
    if (rr.max_residual > 0.0 && rr.radius > 0.0) {
      xs.push_back(std::log(rr.radius));
      ys.push_back(std::log(rr.max_residual));
    }
  }
  if (xs.size() >= 2) {
    const LineFit f = fit_line(xs, ys);
    rep.exponent = f.slope;
    rep.fit_r2 = f.r2;
  } else {
    rep.exponent = std::numeric_limits<double>::infinity();
    rep.fit_r2 = 1.0;
  }
  rep.exact = exact;
  rep.exponent_threshold = model.degree() + 0.5;
  rep.passed = exact || rep.exponent >= rep.exponent_threshold;
  return rep;
}

InjectivityReport verify_injectivity(const EmbeddingModel& model, const ContractionSpec& spec,
                                     const InjectivityOptions& options) {
  const int n = spec.dimension();
  if (n != model.dimension()) throw Error(ErrorKind::InvalidInput, "injectivity: dimension mismatch");
  InjectivityReport rep;
  rep.pairs = options.pairs;
  // Disjoint halves of one sequence; two shifted copies at equal indices would differ by a near-constant offset.
  const auto pts = annulus_points(n, 2 * options.pairs, options.r_inner, options.r_outer, options.seed);
  const std::vector<CVector> a(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(options.pairs));
  const std::vector<CVector> b(pts.begin() + static_cast<std::ptrdiff_t>(options.pairs), pts.end());
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.min_jacobian_singular_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < options.pairs; ++i) {
    const double src = (a[i] - b[i]).norm();
    const double img = (model.psi_at(a[i]) - model.psi_at(b[i])).norm();
    if (src > 0.0) rep.min_ratio = std::min(rep.min_ratio, img / src);
    if (img < options.collision_image && src > options.collision_source) ++rep.collisions;
    rep.min_jacobian_singular_value =
        std::min(rep.min_jacobian_singular_value, min_singular_value(model.psi_jacobian(a[i])));
  }
  rep.passed = rep.collisions == 0 && rep.min_jacobian_singular_value >= options.min_jacobian;
  return rep;
}

LinearHopfModel export_linear_hopf(const EmbeddingModel& model) {
  return LinearHopfModel::from_matrix(model.point_action());
}

}  // namespace hopfjet
