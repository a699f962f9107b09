#include "txh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "txh/error.hpp"

namespace txh {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonSymmetricStrain: return "NonSymmetricStrain";
    case ErrorKind::ManifoldOverlap: return "ManifoldOverlap";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::ZeroTotalRate: return "ZeroTotalRate";
    case ErrorKind::DegenerateAxes: return "DegenerateAxes";
    case ErrorKind::InvalidStack: return "InvalidStack";
    case ErrorKind::UnsupportedKind: return "UnsupportedKind";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

SymmetricTensor3 SymmetricTensor3::diagonal(double xx, double yy, double zz) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = xx;
  m(1, 1) = yy;
  m(2, 2) = zz;
  return SymmetricTensor3(m);
}

SymmetricTensor3 SymmetricTensor3::from_voigt(const std::array<double, 6>& v) {
  Eigen::Matrix3d m;
  m << v[0], v[5], v[4],
       v[5], v[1], v[3],
       v[4], v[3], v[2];
  return SymmetricTensor3(m);
}

std::array<double, 6> SymmetricTensor3::voigt() const {
  return {m_(0, 0), m_(1, 1), m_(2, 2), m_(1, 2), m_(2, 0), m_(0, 1)};
}

bool SymmetricTensor3::is_symmetric(double tol) const {
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  return (m_ - m_.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

double max_abs(const ComplexMatrix4& m) {
  double out = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out = std::max(out, std::abs(m(i, j)));
  return out;
}

namespace {

void fix_phase(ComplexVector4& v) {
  // Components below this fraction of the norm are treated as zero when
  // choosing the phase reference.
  constexpr double kNegligible = 1e-10;
  const double norm = v.norm();
  for (int i = 0; i < 4; ++i) {
    const double a = std::abs(v(i));
    if (a > kNegligible * norm) {
      v *= std::conj(v(i)) / a;
      v(i) = Complex(a, 0.0);
      return;
    }
  }
}

}  // namespace

EigenSystem eig_hermitian_4(const ComplexMatrix4& m) {
  const double scale = max_abs(m);
  const double asym = max_abs(ComplexMatrix4(m - m.adjoint()));
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max|M - M^H| = " << asym << ", max|M| = " << scale;
    throw Error(ErrorKind::NonHermitian, os.str());
  }

  EigenSystem out;
  if (scale == 0.0) {
    for (int i = 0; i < 4; ++i) out.vectors[i] = ComplexVector4::Unit(i);
    return out;
  }

  // Work on the exactly Hermitian part so rounding noise in the caller's
  // matrix cannot leak into the spectrum.
  const ComplexMatrix4 h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix4> solver(h, Eigen::ComputeEigenvectors);
  for (int i = 0; i < 4; ++i) {
    out.values[i] = solver.eigenvalues()(i);
    out.vectors[i] = solver.eigenvectors().col(i);
    fix_phase(out.vectors[i]);
  }
  return out;
}

SymmetricTensor3 congruence_transform(const SymmetricTensor3& t, const Rotation3& r) {
  return SymmetricTensor3(r * t.matrix() * r.transpose());
}

bool is_orthogonal(const Rotation3& r, double tol) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(std::abs(r.determinant()) - 1.0) <= tol;
}

}  // namespace txh
