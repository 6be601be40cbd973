#include <hopfjet/jet.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>

namespace hopfjet {

int Multidegree::total() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

namespace {

// All exponent vectors of length n summing to m, in descending lexicographic order.
void enumerate_degree(int n, int m, std::vector<Multidegree>& out) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n - 1) {
      e[static_cast<std::size_t>(pos)] = remaining;
      out.emplace_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[static_cast<std::size_t>(pos)] = k;
      rec(pos + 1, remaining - k);
    }
  };
  rec(0, m);
}

void require_same_basis(const Jet& a, const Jet& b, const char* op) {
  if (a.basis() != b.basis() && !a.basis()->same_as(*b.basis())) {
    throw Error(ErrorKind::BasisMismatch, std::string(op) + ": jets live on different bases");
  }
}

// Truncated product of two elements of the maximal ideal.
CVector ideal_product(const MonomialBasis& basis, const CVector& a, const CVector& b) {
  const std::size_t size = basis.size();
  const int d = basis.degree();
  CVector r = CVector::Zero(static_cast<Eigen::Index>(size));
  std::vector<std::size_t> nz_b;
  nz_b.reserve(size);
  for (std::size_t j = 0; j < size; ++j) {
    if (b[static_cast<Eigen::Index>(j)] != Complex{}) nz_b.push_back(j);
  }
  for (std::size_t i = 0; i < size; ++i) {
    const Complex ai = a[static_cast<Eigen::Index>(i)];
    if (ai == Complex{}) continue;
    const int room = d - basis.total_degree(i);
    if (room < 1) break;
    const std::size_t limit = basis.degree_begin(room + 1);
    for (std::size_t j : nz_b) {
      if (j >= limit) break;
      r[basis.product(i, j)] += ai * b[static_cast<Eigen::Index>(j)];
    }
  }
  return r;
}

// Lazily memoized table of the monomials z^a evaluated on a jet map g.
class PowerTable {
 public:
  explicit PowerTable(const JetMap& g) : g_(g), basis_(*g.basis()), table_(basis_.size()) {}

  const CVector& operator()(std::size_t i) {
    auto& slot = table_[i];
    if (!slot) {
      const int k = basis_.leading_variable(i);
      const std::ptrdiff_t lower = basis_.lowered(i, k);
      if (lower == MonomialBasis::npos) {
        slot = g_[k].coefficients();
      } else {
        // table_ never reallocates, so the reference stays valid
        const CVector& base = (*this)(static_cast<std::size_t>(lower));
        slot = ideal_product(basis_, base, g_[k].coefficients());
      }
    }
    return *slot;
  }

 private:
  const JetMap& g_;
  const MonomialBasis& basis_;
  std::vector<std::optional<CVector>> table_;
};

void require_ideal_map(const JetMap& g, const char* op) {
  for (const auto& c : g.components()) {
    if (!c.in_maximal_ideal()) {
      throw Error(ErrorKind::NonVanishingConstant,
                  std::string(op) + ": inner map has a non-zero constant term");
    }
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int dimension, int degree) : dimension_(dimension), degree_(degree) {
  if (dimension < 1) throw Error(ErrorKind::InvalidInput, "monomial basis: dimension must be >= 1");
  if (degree < 1) throw Error(ErrorKind::InvalidInput, "monomial basis: degree must be >= 1");

  block_begin_.assign(static_cast<std::size_t>(degree) + 2, 0);
  for (int m = 1; m <= degree; ++m) {
    block_begin_[static_cast<std::size_t>(m)] = monomials_.size();
    enumerate_degree(dimension, m, monomials_);
  }
  block_begin_[static_cast<std::size_t>(degree) + 1] = monomials_.size();

  const std::size_t size = monomials_.size();
  const auto n = static_cast<std::size_t>(dimension);
  totals_.resize(size);
  leading_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    totals_[i] = monomials_[i].total();
    const auto& e = monomials_[i].exponents;
    leading_[i] = static_cast<int>(std::find_if(e.begin(), e.end(), [](int x) { return x > 0; }) -
                                   e.begin());
    lookup_.emplace(monomials_[i], i);
  }

  product_.assign(size * size, npos);
  Multidegree sum;
  sum.exponents.resize(n);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (totals_[i] + totals_[j] > degree) continue;
      for (std::size_t k = 0; k < n; ++k) {
        sum.exponents[k] = monomials_[i].exponents[k] + monomials_[j].exponents[k];
      }
      product_[i * size + j] = static_cast<std::ptrdiff_t>(lookup_.at(sum));
    }
  }

  lowered_.assign(size * n, npos);
  for (std::size_t i = 0; i < size; ++i) {
    if (totals_[i] == 1) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (monomials_[i].exponents[k] == 0) continue;
      Multidegree low = monomials_[i];
      --low.exponents[k];
      lowered_[i * n + k] = static_cast<std::ptrdiff_t>(lookup_.at(low));
    }
  }
}

BasisPtr MonomialBasis::make(int dimension, int degree) {
  return std::make_shared<const MonomialBasis>(dimension, degree);
}

std::size_t MonomialBasis::expected_size(int dimension, int degree) {
  // C(n + d, d) - 1
  double c = 1.0;
  for (int k = 1; k <= degree; ++k) c = c * (dimension + k) / k;
  return static_cast<std::size_t>(std::llround(c)) - 1;
}

std::ptrdiff_t MonomialBasis::find(const Multidegree& alpha) const {
  auto it = lookup_.find(alpha);
  return it == lookup_.end() ? npos : static_cast<std::ptrdiff_t>(it->second);
}

std::size_t MonomialBasis::index(const Multidegree& alpha) const {
  const std::ptrdiff_t i = find(alpha);
  if (i == npos) throw Error(ErrorKind::InvalidInput, "monomial not in basis");
  return static_cast<std::size_t>(i);
}

// --- Jet --------------------------------------------------------------------

Jet::Jet(BasisPtr basis)
    : basis_(std::move(basis)), coeffs_(CVector::Zero(static_cast<Eigen::Index>(basis_->size()))) {}

Jet::Jet(BasisPtr basis, CVector coefficients, Complex constant)
    : basis_(std::move(basis)), coeffs_(std::move(coefficients)), constant_(constant) {
  if (static_cast<std::size_t>(coeffs_.size()) != basis_->size()) {
    throw Error(ErrorKind::InvalidInput, "jet: coefficient vector does not match basis size");
  }
}

Jet Jet::monomial(BasisPtr basis, const Multidegree& alpha, Complex coeff) {
  Jet j(basis);
  if (alpha.total() == 0) {
    j.constant_ = coeff;
  } else if (alpha.total() <= basis->degree()) {
    j.coeffs_[static_cast<Eigen::Index>(basis->index(alpha))] = coeff;
  }
  return j;
}

Jet Jet::coordinate(BasisPtr basis, int i, Complex coeff) {
  Jet j(basis);
  j.coeffs_[i] = coeff;
  return j;
}

Jet Jet::constant(BasisPtr basis, Complex value) {
  Jet j(std::move(basis));
  j.constant_ = value;
  return j;
}

Complex Jet::coefficient(const Multidegree& alpha) const {
  if (alpha.total() == 0) return constant_;
  const std::ptrdiff_t i = basis_->find(alpha);
  return i == MonomialBasis::npos ? Complex{} : coeffs_[i];
}

Jet Jet::homogeneous_part(int m) const {
  Jet r(basis_);
  if (m < 1 || m > basis_->degree()) return r;
  const auto b = static_cast<Eigen::Index>(basis_->degree_begin(m));
  const auto e = static_cast<Eigen::Index>(basis_->degree_begin(m + 1));
  r.coeffs_.segment(b, e - b) = coeffs_.segment(b, e - b);
  return r;
}

int Jet::order(double tol) const {
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    if (std::abs(coeffs_[static_cast<Eigen::Index>(i)]) > tol) return basis_->total_degree(i);
  }
  return basis_->degree() + 1;
}

Jet& Jet::operator+=(const Jet& other) {
  require_same_basis(*this, other, "add");
  coeffs_ += other.coeffs_;
  constant_ += other.constant_;
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_same_basis(*this, other, "sub");
  coeffs_ -= other.coeffs_;
  constant_ -= other.constant_;
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  coeffs_ *= s;
  constant_ *= s;
  return *this;
}

Jet add(const Jet& a, const Jet& b) {
  Jet r = a;
  r += b;
  return r;
}

Jet mul(const Jet& a, const Jet& b) {
  require_same_basis(a, b, "mul");
  CVector c = ideal_product(*a.basis(), a.coefficients(), b.coefficients());
  c += a.constant_term() * b.coefficients() + b.constant_term() * a.coefficients();
  return Jet(a.basis(), std::move(c), a.constant_term() * b.constant_term());
}

// --- JetMap -----------------------------------------------------------------

JetMap::JetMap(std::vector<Jet> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::InvalidInput, "jet map: no components");
  const auto& basis = components_.front().basis();
  if (static_cast<int>(components_.size()) != basis->dimension()) {
    throw Error(ErrorKind::InvalidInput, "jet map: component count differs from dimension");
  }
  for (const auto& c : components_) {
    if (!c.basis()->same_as(*basis)) {
      throw Error(ErrorKind::BasisMismatch, "jet map: components on different bases");
    }
    if (!c.in_maximal_ideal()) {
      throw Error(ErrorKind::NonVanishingConstant, "jet map: component does not vanish at 0");
    }
  }
}

JetMap JetMap::identity(BasisPtr basis) {
  std::vector<Jet> comps;
  for (int i = 0; i < basis->dimension(); ++i) comps.push_back(Jet::coordinate(basis, i));
  return JetMap(std::move(comps));
}

JetMap JetMap::linear(BasisPtr basis, const CMatrix& a) {
  const int n = basis->dimension();
  if (a.rows() != n || a.cols() != n) {
    throw Error(ErrorKind::InvalidInput, "linear jet map: matrix shape differs from dimension");
  }
  std::vector<Jet> comps;
  for (int i = 0; i < n; ++i) {
    Jet c(basis);
    CVector coeffs = c.coefficients();
    coeffs.head(n) = a.row(i).transpose();
    comps.emplace_back(basis, std::move(coeffs));
  }
  return JetMap(std::move(comps));
}

CMatrix JetMap::linear_part() const {
  const int n = dimension();
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i) a.row(i) = components_[static_cast<std::size_t>(i)].coefficients().head(n).transpose();
  return a;
}

// --- composition ------------------------------------------------------------

Jet compose(const Jet& f, const JetMap& g) {
  if (!f.basis()->same_as(*g.basis())) {
    throw Error(ErrorKind::BasisMismatch, "compose: outer jet and inner map on different bases");
  }
  require_ideal_map(g, "compose");
  PowerTable powers(g);
  const auto& fc = f.coefficients();
  CVector r = CVector::Zero(fc.size());
  for (Eigen::Index i = 0; i < fc.size(); ++i) {
    if (fc[i] == Complex{}) continue;
    r += fc[i] * powers(static_cast<std::size_t>(i));
  }
  return Jet(f.basis(), std::move(r), f.constant_term());
}

JetMap compose_map(const JetMap& g, const JetMap& h) {
  if (!g.basis()->same_as(*h.basis())) {
    throw Error(ErrorKind::BasisMismatch, "compose_map: maps on different bases");
  }
  require_ideal_map(h, "compose_map");
  PowerTable powers(h);
  std::vector<Jet> comps;
  for (const auto& f : g.components()) {
    const auto& fc = f.coefficients();
    CVector r = CVector::Zero(fc.size());
    for (Eigen::Index i = 0; i < fc.size(); ++i) {
      if (fc[i] == Complex{}) continue;
      r += fc[i] * powers(static_cast<std::size_t>(i));
    }
    comps.emplace_back(g.basis(), std::move(r));
  }
  return JetMap(std::move(comps));
}

CMatrix pullback_matrix(const JetMap& g) {
  require_ideal_map(g, "pullback");
  PowerTable powers(g);
  const auto size = static_cast<Eigen::Index>(g.basis()->size());
  CMatrix t(size, size);
  for (Eigen::Index i = 0; i < size; ++i) t.col(i) = powers(static_cast<std::size_t>(i));
  return t;
}

JetMap inverse_map(const JetMap& g) {
  const auto& basis = g.basis();
  const int n = basis->dimension();
  const CMatrix a = g.linear_part();
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s(n - 1) <= 1e-13 * std::max(1.0, s(0))) {
    throw Error(ErrorKind::SingularLinearPart, "inverse_map: linear part is singular");
  }
  const CMatrix a_inv = a.inverse();
  JetMap h = JetMap::linear(basis, a_inv);
  const JetMap id = JetMap::identity(basis);

  // Fix the degree-m part of h once all lower degrees are exact: g(h + delta) = g(h) + A delta + ...
  for (int m = 2; m <= basis->degree(); ++m) {
    const JetMap gh = compose_map(g, h);
    std::vector<Jet> err;
    for (int i = 0; i < n; ++i) err.push_back((gh[i] - id[i]).homogeneous_part(m));
    std::vector<Jet> next;
    for (int i = 0; i < n; ++i) {
      Jet c = h[i];
      for (int j = 0; j < n; ++j) c -= a_inv(i, j) * err[static_cast<std::size_t>(j)];
      next.push_back(std::move(c));
    }
    h = JetMap(std::move(next));
  }
  return h;
}

// --- evaluation -------------------------------------------------------------

CVector monomial_values(const MonomialBasis& basis, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != basis.dimension()) {
    throw Error(ErrorKind::InvalidInput, "evaluate: point dimension differs from basis");
  }
  const std::size_t size = basis.size();
  CVector v(static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) {
    const int k = basis.leading_variable(i);
    const std::ptrdiff_t low = basis.lowered(i, k);
    const Complex zk = z[static_cast<std::size_t>(k)];
    v[static_cast<Eigen::Index>(i)] = low == MonomialBasis::npos ? zk : v[low] * zk;
  }
  return v;
}

Complex evaluate(const Jet& f, std::span<const Complex> z) {
  const CVector v = monomial_values(*f.basis(), z);
  return f.constant_term() + (f.coefficients().array() * v.array()).sum();
}

CVector evaluate(const JetMap& g, std::span<const Complex> z) {
  const CVector v = monomial_values(*g.basis(), z);
  CVector out(g.dimension());
  for (int i = 0; i < g.dimension(); ++i) out[i] = (g[i].coefficients().array() * v.array()).sum();
  return out;
}

CMatrix jacobian(std::span<const Jet> jets, std::span<const Complex> z) {
  if (jets.empty()) return {};
  const MonomialBasis& basis = *jets.front().basis();
  const int n = basis.dimension();
  const CVector v = monomial_values(basis, z);
  const std::size_t size = basis.size();
  // Column k of dmono holds d(z^a)/dz_k for each a.
  CMatrix dmono = CMatrix::Zero(static_cast<Eigen::Index>(size), n);
  for (std::size_t i = 0; i < size; ++i) {
    for (int k = 0; k < n; ++k) {
      const int ak = basis[i][k];
      if (ak == 0) continue;
      const std::ptrdiff_t low = basis.lowered(i, k);
      const Complex base = low == MonomialBasis::npos ? Complex(1.0) : v[low];
      dmono(static_cast<Eigen::Index>(i), k) = static_cast<double>(ak) * base;
    }
  }
  CMatrix jac(static_cast<Eigen::Index>(jets.size()), n);
  for (std::size_t r = 0; r < jets.size(); ++r) {
    jac.row(static_cast<Eigen::Index>(r)) = jets[r].coefficients().transpose() * dmono;
  }
  return jac;
}

}  // namespace hopfjet
