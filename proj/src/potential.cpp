#include <hopfjet/potential.hpp>

#include <hopfjet/linalg.hpp>
#include <hopfjet/sampling.hpp>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hopfjet {

const char* to_string(PotentialKind k) noexcept {
  switch (k) {
    case PotentialKind::Diagonal: return "diagonal";
    case PotentialKind::Perturbed: return "perturbed";
    case PotentialKind::LevelTime: return "level-time";
  }
  return "diagonal";
}

int PotentialModel::size() const {
  return static_cast<int>(kind == PotentialKind::LevelTime ? generator.rows() : transform.rows());
}

double PotentialModel::level(const CVector& w) const {
  if (kind != PotentialKind::LevelTime) {
    throw Error(ErrorKind::Precondition, "level: only defined for level-time potentials");
  }
  // g(s) = |exp(-s L) w|_H^2 - 1 is increasing with g'(s) = |exp(-s L) w|^2.
  auto g = [&](double s, double& slope) {
    const CMatrix flow = (-s * generator).exp();
    const CVector v = flow * w;
    slope = v.squaredNorm();
    return v.dot(metric * v).real() - 1.0;
  };
  double slope = 0.0;
  const double g0 = g(0.0, slope);
  if (g0 == 0.0) return 0.0;
  double lo = 0.0, hi = 0.0;
  double step = 1.0;
  if (g0 < 0.0) {
    hi = step;
    while (g(hi, slope) < 0.0) {
      lo = hi;
      step *= 2.0;
      hi += step;
      if (step > 1e6) throw Error(ErrorKind::Internal, "level: no bracket");
    }
  } else {
    lo = -step;
    while (g(lo, slope) > 0.0) {
      hi = lo;
      step *= 2.0;
      lo -= step;
      if (step > 1e6) throw Error(ErrorKind::Internal, "level: no bracket");
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double val = g(s, slope);
    if (val == 0.0) return s;
    if (val < 0.0) lo = s; else hi = s;
    double next = s - val / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-16 * std::max(1.0, std::abs(s)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(s))) {
      return next;
    }
    s = next;
  }
  return s;
}

double PotentialModel::operator()(const CVector& w) const {
  if (w.norm() == 0.0) return 0.0;
  if (kind == PotentialKind::LevelTime) return std::exp(level(w) * std::log(c));
  const CVector y = transform_inverse * w;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    acc += std::pow(std::abs(y[j]), 2.0 * beta[static_cast<std::size_t>(j)]);
  }
  return acc;
}

namespace {

PotentialModel diagonal_formula(const CMatrix& s, const std::vector<Complex>& eig, PotentialKind kind) {
  PotentialModel pot;
  pot.kind = kind;
  double smax = 0.0;
  for (Complex l : eig) smax = std::max(smax, std::abs(l));
  pot.c = smax * smax;
  for (Complex l : eig) pot.beta.push_back(std::log(smax) / std::log(std::abs(l)));
  pot.transform = s;
  pot.transform_inverse = s.inverse();
  return pot;
}

}  // namespace

PotentialModel build_potential(const LinearHopfModel& model) {
  if (!model.diagonalizable) {
    std::ostringstream os;
    os << "build_potential: contraction is not diagonalizable (eigenvector condition "
       << model.condition << "); use build_potential_approx or build_level_potential";
    throw Error(ErrorKind::Precondition, os.str());
  }
  return diagonal_formula(model.eigenvectors, model.eigenvalues, PotentialKind::Diagonal);
}

double automorphy_defect(const PotentialModel& pot, const CMatrix& b, const std::vector<CVector>& samples) {
  double worst = 0.0;
  for (const auto& w : samples) {
    const double base = pot(w);
    worst = std::max(worst, std::abs(pot(b * w) - pot.c * base) / base);
  }
  return worst;
}

ApproxPotential build_potential_approx(const LinearHopfModel& model, double epsilon,
                                       double defect_bound, std::size_t samples, std::uint64_t seed) {
  ApproxPotential out;
  out.epsilon = epsilon;
  const auto points = sphere_points(model.size(), samples, 1.0, seed);
  if (model.diagonalizable) {
    out.potential = build_potential(model);
    out.epsilon = 0.0;
  } else {
    const TriangularForm tf = triangularize(model.contraction);
    CMatrix r = tf.upper;
    const Eigen::Index n = r.rows();
    // Split each run of (numerically) repeated diagonal values by multiples of eps.
    for (Eigen::Index i = 0; i < n; ++i) {
      int repeats = 0;
      for (Eigen::Index j = 0; j < i; ++j) {
        if (std::abs(tf.upper(i, i) - tf.upper(j, j)) <= 1e-8 * std::abs(tf.upper(i, i))) ++repeats;
      }
      r(i, i) += static_cast<double>(repeats) * epsilon * tf.upper(i, i);
    }
    const CMatrix perturbed = tf.unitary * r * tf.unitary.adjoint();
    Eigen::ComplexEigenSolver<CMatrix> es(perturbed);
    const CVector& ev = es.eigenvalues();
    out.potential = diagonal_formula(es.eigenvectors(), {ev.data(), ev.data() + ev.size()},
                                     PotentialKind::Perturbed);
  }
  out.defect = automorphy_defect(out.potential, model.contraction, points);
  out.approximate = out.defect > defect_bound;
  return out;
}

CMatrix levi_form(const PotentialModel& pot, const CVector& w, double h) {
  const Eigen::Index n = w.size();
  const Eigen::Index m = 2 * n;
  auto shift = [&](Eigen::Index a) {
    CVector e = CVector::Zero(n);
    e[a % n] = a < n ? Complex(h, 0.0) : Complex(0.0, h);
    return e;
  };
  Eigen::MatrixXd hess(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a; b < m; ++b) {
      const CVector ea = shift(a), eb = shift(b);
      const double v = pot(w + ea + eb) - pot(w + ea - eb) - pot(w - ea + eb) + pot(w - ea - eb);
      hess(a, b) = hess(b, a) = v / (4.0 * h * h);
    }
  }
  CMatrix levi(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      levi(j, k) = 0.25 * Complex(hess(j, k) + hess(n + j, n + k), hess(j, n + k) - hess(n + j, k));
    }
  }
  return levi;
}

bool away_from_hyperplanes(const PotentialModel& pot, const CVector& w, double guard) {
  if (pot.kind == PotentialKind::LevelTime) return true;
  const CVector y = pot.transform_inverse * w;
  const double scale = y.norm();
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    if (pot.beta[static_cast<std::size_t>(j)] < 1.0 && std::abs(y[j]) < guard * scale) return false;
  }
  return true;
}

namespace {

double min_levi_eigenvalue(const PotentialModel& pot, const CVector& w, double h) {
  const CMatrix levi = levi_form(pot, w, h);
  const CMatrix herm = 0.5 * (levi + levi.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

PshReport check_psh(const PotentialModel& pot, const std::vector<CVector>& samples, double h_rel,
                    double tolerance, double guard) {
  PshReport rep;
  rep.samples = samples.size();
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& w : samples) {
    if (!away_from_hyperplanes(pot, w, guard)) {
      throw Error(ErrorKind::Precondition,
                  "check_psh: sample lies on a hyperplane where the potential is not smooth");
    }
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_levi_eigenvalue(pot, w, h_rel * w.norm()));
  }
  rep.passed = rep.min_eigenvalue >= -tolerance;
  return rep;
}

PotentialModel build_level_potential(const LinearHopfModel& model, std::size_t psh_samples,
                                     std::uint64_t seed) {
  PotentialModel pot;
  pot.kind = PotentialKind::LevelTime;
  pot.generator = model.contraction.log();
  const Eigen::Index n = pot.generator.rows();
  const CMatrix rhs = -CMatrix::Identity(n, n);
  pot.metric = solve_lyapunov(pot.generator, rhs);
  pot.metric = 0.5 * (pot.metric + pot.metric.adjoint());

  // One point per orbit: flow unit-sphere points backwards by a fraction of a period.
  std::vector<CVector> domain;
  const auto dirs = sphere_points(static_cast<int>(n), psh_samples, 1.0, seed);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(dirs.size());
    domain.push_back((s * pot.generator).exp() * dirs[i]);
  }

  const double smax = model.sigma_max();
  double c = smax * smax;
  for (int attempt = 0; attempt < 6; ++attempt, c *= c) {
    pot.c = c;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& w : domain) {
      const double scale = pot(w) / w.squaredNorm();
      worst = std::min(worst, min_levi_eigenvalue(pot, w, 1e-4 * w.norm()) / scale);
    }
    if (worst >= 1e-3) return pot;
  }
  throw Error(ErrorKind::IllConditioned,
              "build_level_potential: no automorphy constant gave a plurisubharmonic potential");
}

PullbackReport pull_back_potential(const PotentialModel& pot, const EmbeddingModel& model,
                                   const ContractionSpec& spec, const PullbackOptions& options,
                                   double potential_defect) {
  PullbackReport rep;
  rep.samples = options.samples;
  rep.min_psi_norm = std::numeric_limits<double>::infinity();
  const CMatrix b = model.point_action();
  const auto points =
      annulus_points(spec.dimension(), options.samples, options.r_inner, options.r_outer, options.seed);
  for (const auto& z : points) {
    const CVector psi = model.psi_at(z);
    const double norm = psi.norm();
    rep.min_psi_norm = std::min(rep.min_psi_norm, norm);
    if (norm < 1e-12) {
      ++rep.degenerate;
      continue;
    }
    const CVector image = model.psi_at(spec(z));
    const double base = pot(psi);
    rep.max_relative_defect = std::max(rep.max_relative_defect, std::abs(pot(image) - pot.c * base) / base);
    const CVector bpsi = b * psi;
    rep.max_relative_residual = std::max(rep.max_relative_residual, (image - bpsi).norm() / bpsi.norm());
  }

  double kappa = 1.0;
  if (pot.kind == PotentialKind::LevelTime) {
    const LinearHopfModel lm = LinearHopfModel::from_matrix(b);
    kappa = std::log(pot.c) / std::log(lm.sigma_max()) * std::sqrt(condition_number(pot.metric));
  } else {
    const double bmax = *std::max_element(pot.beta.begin(), pot.beta.end());
    kappa = 2.0 * bmax * condition_number(pot.transform);
  }
  rep.bound = potential_defect + 10.0 * kappa * rep.max_relative_residual;
  return rep;
}

}  // namespace hopfjet
