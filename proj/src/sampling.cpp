#include <hopfjet/sampling.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace hopfjet {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
                           61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

class RotatedHalton {
 public:
  RotatedHalton(int dims, std::uint64_t seed) : shift_(static_cast<std::size_t>(dims)) {
    if (dims > static_cast<int>(std::size(kPrimes))) {
      throw Error(ErrorKind::InvalidInput, "sampling: dimension too large for Halton sequence");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& s : shift_) s = u(rng);
  }

  double operator()(std::uint64_t index, int dim) const {
    double x = radical_inverse(index + 1, kPrimes[dim]) + shift_[static_cast<std::size_t>(dim)];
    return x - std::floor(x);
  }

 private:
  std::vector<double> shift_;
};

CVector unit_direction(const RotatedHalton& h, std::uint64_t index, int n) {
  CVector z(n);
  for (int k = 0; k < n; ++k) {
    const double u1 = std::max(h(index, 2 * k), 1e-300);
    const double u2 = h(index, 2 * k + 1);
    const double rho = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    z[k] = Complex(rho * std::cos(theta), rho * std::sin(theta));
  }
  const double norm = z.norm();
  if (norm == 0.0) {
    z.setZero();
    z[0] = 1.0;
    return z;
  }
  return z / norm;
}

std::vector<CVector> shell_points(int n, std::size_t count, double r_inner, double r_outer,
                                  std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "sampling: dimension must be >= 1");
  RotatedHalton h(2 * n + 1, seed);
  const double p = 2.0 * n;
  const double lo = std::pow(r_inner, p);
  const double hi = std::pow(r_outer, p);
  std::vector<CVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = h(i, 2 * n);
    const double r = r_inner == r_outer ? r_outer : std::pow(lo + u * (hi - lo), 1.0 / p);
    out.push_back(r * unit_direction(h, i, n));
  }
  return out;
}

}  // namespace

std::vector<CVector> sphere_points(int n, std::size_t count, double radius, std::uint64_t seed) {
  return shell_points(n, count, radius, radius, seed);
}

std::vector<CVector> ball_points(int n, std::size_t count, double radius, std::uint64_t seed) {
  return shell_points(n, count, 0.0, radius, seed);
}

std::vector<CVector> annulus_points(int n, std::size_t count, double r_inner, double r_outer,
                                    std::uint64_t seed) {
  if (!(0.0 <= r_inner && r_inner <= r_outer)) {
    throw Error(ErrorKind::InvalidInput, "sampling: annulus radii out of order");
  }
  return shell_points(n, count, r_inner, r_outer, seed);
}

}  // namespace hopfjet
