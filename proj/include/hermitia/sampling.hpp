#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "hermitia/herm_core.hpp"

namespace hermitia {

using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using cd = std::complex<double>;

/// splitmix64 finalizer; used to derive one independent stream per sample
/// so scan results do not depend on evaluation order or thread count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  cd complex_normal() { return {normal(), normal()}; }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    return m;
  }

  Vector vector(Index n) { return matrix(n, 1); }

  /// Uniform on the unit sphere of C^n (standard Hermitian structure).
  Vector unit_vector(Index n) {
    Vector v = vector(n);
    return v / v.norm();
  }

  /// Uniform in the polydisc prod |z_i - c_i| <= radius.
  Vector in_polydisc(const Vector& center, double radius) {
    Vector z(center.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double r = radius * std::sqrt(uniform());
      const double t = uniform(0.0, 2.0 * M_PI);
      z(i) = center(i) + std::polar(r, t);
    }
    return z;
  }

  /// Uniform in the Euclidean ball |z - c| <= radius of C^n.
  Vector in_ball(const Vector& center, double radius) {
    const Vector dir = unit_vector(center.size());
    const double r = radius * std::pow(uniform(), 1.0 / (2.0 * static_cast<double>(center.size())));
    return center + r * dir;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace hermitia
