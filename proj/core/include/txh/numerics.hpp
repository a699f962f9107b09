#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace txh {

using Complex = std::complex<double>;
using ComplexMatrix4 = Eigen::Matrix<Complex, 4, 4>;
using ComplexVector4 = Eigen::Matrix<Complex, 4, 1>;
using Vec3 = Eigen::Vector3d;
using Rotation3 = Eigen::Matrix3d;

/// Real symmetric rank-2 tensor (strain or stress). Construction symmetrises
/// nothing; callers that build from raw data should check `is_symmetric`.
class SymmetricTensor3 {
 public:
  SymmetricTensor3() : m_(Eigen::Matrix3d::Zero()) {}
  explicit SymmetricTensor3(const Eigen::Matrix3d& m) : m_(m) {}

  static SymmetricTensor3 diagonal(double xx, double yy, double zz);
  /// Components in the order xx, yy, zz, yz, zx, xy.
  static SymmetricTensor3 from_voigt(const std::array<double, 6>& v);

  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::Matrix3d& matrix() const { return m_; }

  std::array<double, 6> voigt() const;
  double trace() const { return m_.trace(); }
  bool is_symmetric(double tol = 1e-12) const;

  SymmetricTensor3 operator+(const SymmetricTensor3& o) const {
    return SymmetricTensor3(m_ + o.m_);
  }
  SymmetricTensor3 operator*(double s) const { return SymmetricTensor3(m_ * s); }

 private:
  Eigen::Matrix3d m_;
};

struct EigenSystem {
  std::array<double, 4> values{};
  std::array<ComplexVector4, 4> vectors{};
};

/// Hermitian 4x4 diagonalisation. Eigenvalues ascending; each eigenvector has
/// its first non-negligible component real and positive. Throws
/// Error(NonHermitian) if max|M - M^H| > 1e-12 max|M|.
EigenSystem eig_hermitian_4(const ComplexMatrix4& m);

/// Largest absolute entry.
double max_abs(const ComplexMatrix4& m);

/// R t R^T.
SymmetricTensor3 congruence_transform(const SymmetricTensor3& t, const Rotation3& r);

bool is_orthogonal(const Rotation3& r, double tol = 1e-12);

}  // namespace txh
