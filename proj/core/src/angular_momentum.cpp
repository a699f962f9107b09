#include "txh/angular_momentum.hpp"

#include <cmath>

namespace txh {

const ComplexMatrix4& JOperators::operator[](Axis a) const {
  switch (a) {
    case Axis::X: return jx;
    case Axis::Y: return jy;
    case Axis::Z: return jz;
  }
  return jz;
}

JOperators build_j_operators() {
  constexpr double j = 1.5;
  const auto& m = JOperators::m_values;

  // Raising operator: <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); row index of m+1 is
  // one less than that of m in this basis order.
  ComplexMatrix4 jplus = ComplexMatrix4::Zero();
  for (int col = 1; col < 4; ++col) {
    jplus(col - 1, col) = std::sqrt(j * (j + 1.0) - m[col] * (m[col] + 1.0));
  }

  JOperators ops;
  ops.jx = 0.5 * (jplus + jplus.adjoint());
  ops.jy = Complex(0.0, -0.5) * (jplus - jplus.adjoint());
  ops.jz = ComplexMatrix4::Zero();
  for (int i = 0; i < 4; ++i) ops.jz(i, i) = m[i];
  return ops;
}

const JOperators& j_operators() {
  static const JOperators ops = build_j_operators();
  return ops;
}

ComplexMatrix4 sym_product(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  return 0.5 * (a * b + b * a);
}

ComplexMatrix4 j_cubed(Axis axis, const JOperators& ops) {
  const ComplexMatrix4& j = ops[axis];
  return j * j * j;
}

}  // namespace txh
