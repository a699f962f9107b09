#pragma once

#include <cmath>
#include <random>

#include <doctest.h>

#include "txh/numerics.hpp"

namespace txh::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Vec3 random_vector(double scale) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }

inline ComplexMatrix4 random_hermitian(double scale = 1.0) {
  ComplexMatrix4 m;
  for (int i = 0; i < 4; ++i) {
    m(i, i) = uniform(-scale, scale);
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = Complex(uniform(-scale, scale), uniform(-scale, scale));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline SymmetricTensor3 random_symmetric(double scale) {
  return SymmetricTensor3::from_voigt({uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale),
                                       uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)});
}

template <typename A, typename B>
double max_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

}  // namespace txh::test
