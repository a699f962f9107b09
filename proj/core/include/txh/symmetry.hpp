#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "txh/numerics.hpp"

namespace txh {

/// One of the 24 T centre orientations. `rotation` is the direct coordinate
/// transformation taking the identity geometry to this orientation, e.g. the
/// C3 about [-1,-1,-1] maps [x,y,z] -> [y,z,x]. Primed frames are the
/// coordinate inversion (-rotation) of their unprimed partner.
struct OrientationFrame {
  std::string label;      // "z0" ... "x3", "z0'" ... "x3'"
  std::string operation;  // "E", "C2[1,0,0]", "C3[-1,-1,-1]", ...
  Rotation3 rotation;
  bool inverted = false;
  int index = 0;  // 0..23; partner of i < 12 is i + 12

  /// Label of the unprimed frame in this frame's inversion pair.
  std::string base_label() const;
};

class OrientationSet {
 public:
  static constexpr int kCount = 24;
  static constexpr int kProper = 12;

  explicit OrientationSet(std::array<OrientationFrame, kCount> frames) : frames_(std::move(frames)) {}

  const OrientationFrame& operator[](int i) const { return frames_.at(i); }
  const OrientationFrame& at(std::string_view label) const;
  std::optional<int> find(std::string_view label) const;
  const OrientationFrame& partner(const OrientationFrame& f) const;

  auto begin() const { return frames_.begin(); }
  auto end() const { return frames_.end(); }
  static constexpr int size() { return kCount; }

 private:
  std::array<OrientationFrame, kCount> frames_;
};

OrientationSet enumerate_orientations();

/// Shared immutable instance.
const OrientationSet& orientations();

/// Polar vector (electric field) in the frame's defect coordinates: R^T v.
Vec3 field_transform(const OrientationFrame& frame, const Vec3& v);

/// Axial vector (magnetic field) in the frame's defect coordinates:
/// det(R) R^T v. Identical to field_transform for proper rotations.
Vec3 axial_field_transform(const OrientationFrame& frame, const Vec3& v);

/// Defect-frame tensor expressed in crystal coordinates for this orientation: R t R^T.
SymmetricTensor3 defect_tensor_to_crystal(const OrientationFrame& frame, const SymmetricTensor3& t);

/// Crystal-frame tensor (applied stress/strain) seen in the frame's defect
/// coordinates: R^T t R.
SymmetricTensor3 crystal_tensor_to_defect(const OrientationFrame& frame, const SymmetricTensor3& t);

}  // namespace txh
