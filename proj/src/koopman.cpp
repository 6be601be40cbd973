#include <hopfjet/koopman.hpp>

#include <hopfjet/linalg.hpp>

#include <cmath>

namespace hopfjet {

KoopmanMatrix build_koopman(const ContractionSpec& spec, int degree, int power) {
  const BasisPtr basis = MonomialBasis::make(spec.dimension(), degree);
  KoopmanMatrix t = build_koopman(iterate(spec, power, basis));
  t.source = spec;
  t.power = power;
  return t;
}

KoopmanMatrix build_koopman(const JetMap& g) {
  KoopmanMatrix t;
  t.basis = g.basis();
  t.matrix = pullback_matrix(g);
  return t;
}

double block_triangularity_defect(const KoopmanMatrix& t) {
  const MonomialBasis& b = *t.basis;
  double worst = 0.0;
  for (std::size_t col = 0; col < b.size(); ++col) {
    const std::size_t end = b.degree_begin(b.total_degree(col));
    for (std::size_t row = 0; row < end; ++row) {
      worst = std::max(worst, std::abs(t.matrix(static_cast<Eigen::Index>(row),
                                                static_cast<Eigen::Index>(col))));
    }
  }
  return worst;
}

double contravariance_check(const ContractionSpec& gamma, const ContractionSpec& delta, int degree) {
  if (gamma.dimension() != delta.dimension()) {
    throw Error(ErrorKind::InvalidInput, "contravariance: dimension mismatch");
  }
  const BasisPtr basis = MonomialBasis::make(gamma.dimension(), degree);
  const JetMap g = gamma.jet(basis);
  const JetMap h = delta.jet(basis);
  const CMatrix composite = pullback_matrix(compose_map(g, h));
  const CMatrix product = pullback_matrix(h) * pullback_matrix(g);
  return relative_difference(product, composite);
}

CompactnessProbe compactness_probe(const KoopmanMatrix& t) {
  const MonomialBasis& b = *t.basis;
  CompactnessProbe probe;
  const auto size = static_cast<Eigen::Index>(b.size());
  for (int m = 1; m <= b.degree(); ++m) {
    const auto start = static_cast<Eigen::Index>(b.degree_begin(m));
    const CMatrix tail = t.matrix.bottomRightCorner(size - start, size - start);
    Eigen::JacobiSVD<CMatrix> svd(tail);
    probe.block_norms.push_back(svd.singularValues()(0));
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < probe.block_norms.size(); ++i) {
    if (probe.block_norms[i] > 0.0) {
      xs.push_back(static_cast<double>(i + 1));
      ys.push_back(std::log(probe.block_norms[i]));
    }
  }
  if (xs.size() < 2) {
    probe.rate = xs.empty() ? 0.0 : probe.block_norms.front();
    return probe;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  probe.rate = std::exp(sxy / sxx);
  return probe;
}

}  // namespace hopfjet
