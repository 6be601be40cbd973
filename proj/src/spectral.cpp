#include <hopfjet/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace hopfjet {

const char* to_string(ResonanceClass c) noexcept {
  switch (c) {
    case ResonanceClass::Exact: return "exact";
    case ResonanceClass::Near: return "near";
    case ResonanceClass::None: return "none";
  }
  return "none";
}

std::vector<MonomialEigenvalue> monomial_eigenvalues(std::span<const Complex> lambda, int degree) {
  const MonomialBasis basis(static_cast<int>(lambda.size()), degree);
  const CVector values = monomial_values(basis, lambda);
  std::vector<MonomialEigenvalue> out;
  out.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out.push_back({basis[i], values[static_cast<Eigen::Index>(i)]});
  }
  return out;
}

std::vector<MonomialEigenvalue> monomial_eigenvalues(const CMatrix& a, int degree) {
  const TriangularForm tf = triangularize(a);
  return monomial_eigenvalues(as_span(tf.eigenvalues), degree);
}

std::vector<Resonance> detect_resonances(std::span<const Complex> lambda, int degree,
                                         const ResonanceOptions& options) {
  const auto eig = monomial_eigenvalues(lambda, degree);
  const double near_tol = options.tol_res * options.near_factor;
  std::vector<Resonance> out;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    for (std::size_t j = i + 1; j < eig.size(); ++j) {
      const int di = eig[i].alpha.total();
      const int dj = eig[j].alpha.total();
      if (di == dj) continue;
      const double defect = std::abs(eig[i].value - eig[j].value);
      const double scale = std::max(std::abs(eig[i].value), std::abs(eig[j].value));
      const double rel = scale > 0.0 ? defect / scale : 0.0;
      if (rel > near_tol) continue;
      Resonance r;
      r.target = eig[i].alpha;
      r.source = eig[j].alpha;
      if (di == 1) {
        const auto& e = r.target.exponents;
        r.target_coordinate = static_cast<int>(std::find(e.begin(), e.end(), 1) - e.begin());
      }
      r.defect = defect;
      r.relative_defect = rel;
      r.kind = rel <= options.tol_res ? ResonanceClass::Exact : ResonanceClass::Near;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<Resonance> detect_resonances(const CMatrix& a, int degree,
                                         const ResonanceOptions& options) {
  const TriangularForm tf = triangularize(a);
  return detect_resonances(as_span(tf.eigenvalues), degree, options);
}

JetMap underlying_map(const KoopmanMatrix& t) {
  const int n = t.basis->dimension();
  std::vector<Jet> comps;
  for (int i = 0; i < n; ++i) comps.emplace_back(t.basis, CVector(t.matrix.col(i)));
  return JetMap(std::move(comps));
}

TriangularizedKoopman triangularize_koopman(const JetMap& g) {
  TriangularizedKoopman out;
  out.schur = triangularize(g.linear_part());
  const BasisPtr& basis = g.basis();
  const CMatrix& q = out.schur.unitary;
  if (out.schur.kept_coordinates) {
    out.triangular = pullback_matrix(g);
    const auto size = static_cast<Eigen::Index>(basis->size());
    out.to_original = CMatrix::Identity(size, size);
    out.from_original = out.to_original;
    return out;
  }
  const JetMap forward = JetMap::linear(basis, q);
  const JetMap backward = JetMap::linear(basis, q.adjoint());
  out.triangular = pullback_matrix(compose_map(backward, compose_map(g, forward)));
  out.to_original = pullback_matrix(backward);
  out.from_original = pullback_matrix(forward);
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Depth of the longest path starting at position p in the strictly lower part of r.
int chain_depth(const CMatrix& r, Eigen::Index p, double tol, std::vector<int>& memo) {
  if (memo[static_cast<std::size_t>(p)] > 0) return memo[static_cast<std::size_t>(p)];
  int depth = 1;
  for (Eigen::Index k = p + 1; k < r.rows(); ++k) {
    if (std::abs(r(k, p)) > tol) depth = std::max(depth, 1 + chain_depth(r, k, tol, memo));
  }
  memo[static_cast<std::size_t>(p)] = depth;
  return depth;
}

}  // namespace

RootDecomposition root_decomposition(const KoopmanMatrix& t, const SpectralTolerances& tol) {
  const TriangularizedKoopman tk = triangularize_koopman(underlying_map(t));
  const CMatrix& l = tk.triangular;
  const auto m = static_cast<std::size_t>(l.rows());

  UnionFind uf(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Complex a = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
      const Complex b = l(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
      if (std::abs(a - b) <= tol.cluster * std::max(std::abs(a), std::abs(b))) uf.unite(i, j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < m; ++i) groups[uf.find(i)].push_back(i);

  RootDecomposition out;
  out.schur = tk.schur;
  out.triangular = l;
  out.to_original = tk.to_original;
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());

  for (auto& [root, members] : groups) {
    EigenCluster cluster;
    cluster.members = members;
    Complex mean = 0.0;
    for (std::size_t p : members) mean += l(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    cluster.value = mean / static_cast<double>(members.size());

    const auto k = static_cast<Eigen::Index>(members.size());
    std::map<std::size_t, Eigen::Index> position;
    for (Eigen::Index p = 0; p < k; ++p) position[members[static_cast<std::size_t>(p)]] = p;

    CMatrix v = CMatrix::Zero(static_cast<Eigen::Index>(m), k);
    CMatrix r = CMatrix::Zero(k, k);
    // Process members from the bottom so that every coupling target is known.
    for (Eigen::Index p = k - 1; p >= 0; --p) {
      const auto j = static_cast<Eigen::Index>(members[static_cast<std::size_t>(p)]);
      const Complex mu_j = l(j, j);
      v(j, p) = 1.0;
      r(p, p) = mu_j;
      for (Eigen::Index i = j + 1; i < static_cast<Eigen::Index>(m); ++i) {
        Complex s = 0.0;
        for (Eigen::Index c = j; c < i; ++c) s += l(i, c) * v(c, p);
        auto it = position.find(static_cast<std::size_t>(i));
        if (it != position.end()) {
          r(it->second, p) = s;
          continue;
        }
        Complex rhs = -s;
        for (Eigen::Index q = p + 1; q < k; ++q) {
          const auto kq = static_cast<Eigen::Index>(members[static_cast<std::size_t>(q)]);
          if (kq < i) rhs += r(q, p) * v(i, q);
        }
        v(i, p) = rhs / (l(i, i) - mu_j);
      }
    }

    // Back to original coordinates, unit columns.
    CMatrix basis = tk.to_original * v;
    Eigen::VectorXd norms = basis.colwise().norm().transpose();
    for (Eigen::Index p = 0; p < k; ++p) basis.col(p) /= norms[p];
    CMatrix restricted = r;
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) restricted(a, b) *= norms[a] / norms[b];
    }

    cluster.min_singular_value = min_singular_value(basis);
    if (cluster.min_singular_value <= tol.indep) {
      std::ostringstream os;
      os << "root decomposition: ill-conditioned cluster at " << cluster.value << " (multiplicity "
         << k << ", min singular value " << cluster.min_singular_value << ")";
      throw Error(ErrorKind::IllConditioned, os.str());
    }

    std::vector<int> memo(static_cast<std::size_t>(k), 0);
    const auto size = static_cast<Eigen::Index>(m);
    const CMatrix shifted = t.matrix - cluster.value * CMatrix::Identity(size, size);
    for (Eigen::Index p = 0; p < k; ++p) {
      RootVector rv;
      rv.eigenvalue = cluster.value;
      rv.chain_length = chain_depth(r, p, 1e-12 * scale, memo);
      rv.coefficients = basis.col(p);
      CVector w = rv.coefficients;
      for (int step = 0; step < rv.chain_length; ++step) w = shifted * w;
      rv.residual = w.norm();
      cluster.vectors.push_back(std::move(rv));
    }
    cluster.basis = std::move(basis);
    cluster.restricted = std::move(restricted);
    out.clusters.push_back(std::move(cluster));
  }
  return out;
}

InvariantSubspace f_finite_span(const CMatrix& t, const std::vector<CVector>& seeds, double rank_tol,
                                const std::vector<std::string>& seed_names) {
  const Eigen::Index m = t.rows();
  std::vector<CVector> basis;
  InvariantSubspace out;

  auto orthogonalize = [&](CVector w) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= b * b.dot(w);
    }
    return w;
  };
  auto try_add = [&](const CVector& w, std::string why) {
    const double norm = w.norm();
    if (norm == 0.0) return;
    CVector r = orthogonalize(w);
    const double rn = r.norm();
    if (rn <= rank_tol * norm) return;
    basis.push_back(r / rn);
    out.provenance.push_back(std::move(why));
  };

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (seeds[s].size() != m) throw Error(ErrorKind::InvalidInput, "f_finite_span: seed size mismatch");
    try_add(seeds[s], s < seed_names.size() ? "seed:" + seed_names[s] : "seed:" + std::to_string(s));
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const CVector w = t * basis[i];
    try_add(w, "krylov:T*w" + std::to_string(i));
  }

  out.basis = CMatrix(m, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) out.basis.col(static_cast<Eigen::Index>(i)) = basis[i];
  out.restricted = out.basis.adjoint() * t * out.basis;
  return out;
}

}  // namespace hopfjet
