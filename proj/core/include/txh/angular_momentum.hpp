#pragma once

#include <array>
#include <string_view>

#include "txh/numerics.hpp"

namespace txh {

enum class Axis { X = 0, Y = 1, Z = 2 };

/// J = 3/2 operators in the Luttinger-Kohn basis ordered
/// m_j = +3/2, +1/2, -1/2, -3/2 (Condon-Shortley phases).
struct JOperators {
  ComplexMatrix4 jx;
  ComplexMatrix4 jy;
  ComplexMatrix4 jz;

  static constexpr std::array<std::string_view, 4> basis_order{"+3/2", "+1/2", "-1/2", "-3/2"};
  static constexpr std::array<double, 4> m_values{1.5, 0.5, -0.5, -1.5};

  const ComplexMatrix4& operator[](Axis a) const;
  const ComplexMatrix4& operator[](int i) const { return (*this)[static_cast<Axis>(i)]; }
};

JOperators build_j_operators();

/// Shared immutable instance.
const JOperators& j_operators();

/// (ab + ba) / 2
ComplexMatrix4 sym_product(const ComplexMatrix4& a, const ComplexMatrix4& b);

ComplexMatrix4 j_cubed(Axis axis, const JOperators& ops);

}  // namespace txh
