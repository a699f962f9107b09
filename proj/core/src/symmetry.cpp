#include "txh/symmetry.hpp"

#include "txh/error.hpp"

namespace txh {

namespace {

struct ProperRow {
  const char* label;
  const char* operation;
  // Images of x, y, z as signed axis indices (1-based, sign = direction):
  // {2, 3, 1} encodes [x,y,z] -> [y,z,x].
  std::array<int, 3> image;
};

// Rows in the order of the T-group coordinate transformation table; labels
// follow the (C-C axis, hydrogen index) scheme.
constexpr std::array<ProperRow, 12> kProperRows{{
    {"z0", "E", {1, 2, 3}},
    {"z1", "C2[1,0,0]", {1, -2, -3}},
    {"z2", "C2[0,0,1]", {-1, -2, 3}},
    {"z3", "C2[0,1,0]", {-1, 2, -3}},
    {"y0", "C3[-1,-1,-1]", {2, 3, 1}},
    {"y1", "C3[1,-1,1]", {-2, -3, 1}},
    {"y2", "C3[-1,1,1]", {-2, 3, -1}},
    {"y3", "C3[1,1,-1]", {2, -3, -1}},
    {"x0", "C3[1,1,1]", {3, 1, 2}},
    {"x3", "C3[1,-1,-1]", {-3, -1, 2}},
    {"x2", "C3[-1,1,-1]", {3, -1, -2}},
    {"x1", "C3[-1,-1,1]", {-3, 1, -2}},
}};

Rotation3 rotation_from_image(const std::array<int, 3>& image) {
  // Row i of R picks the source component named by image[i].
  Rotation3 r = Rotation3::Zero();
  for (int i = 0; i < 3; ++i) {
    const int src = std::abs(image[i]) - 1;
    r(i, src) = image[i] > 0 ? 1.0 : -1.0;
  }
  return r;
}

}  // namespace

std::string OrientationFrame::base_label() const {
  return inverted ? label.substr(0, label.size() - 1) : label;
}

const OrientationFrame& OrientationSet::at(std::string_view label) const {
  if (auto i = find(label)) return frames_[*i];
  throw Error(ErrorKind::ConfigError, "unknown orientation label '" + std::string(label) + "'");
}

std::optional<int> OrientationSet::find(std::string_view label) const {
  for (const auto& f : frames_)
    if (f.label == label) return f.index;
  return std::nullopt;
}

const OrientationFrame& OrientationSet::partner(const OrientationFrame& f) const {
  return frames_[(f.index + kProper) % kCount];
}

OrientationSet enumerate_orientations() {
  std::array<OrientationFrame, OrientationSet::kCount> frames;
  for (int i = 0; i < OrientationSet::kProper; ++i) {
    const auto& row = kProperRows[i];
    OrientationFrame proper;
    proper.label = row.label;
    proper.operation = row.operation;
    proper.rotation = rotation_from_image(row.image);
    proper.inverted = false;
    proper.index = i;

    OrientationFrame inv = proper;
    inv.label += "'";
    inv.operation = "I*" + proper.operation;
    inv.rotation = -proper.rotation;
    inv.inverted = true;
    inv.index = i + OrientationSet::kProper;

    frames[i] = std::move(proper);
    frames[i + OrientationSet::kProper] = std::move(inv);
  }
  return OrientationSet(std::move(frames));
}

const OrientationSet& orientations() {
  static const OrientationSet set = enumerate_orientations();
  return set;
}

Vec3 field_transform(const OrientationFrame& frame, const Vec3& v) {
  return frame.rotation.transpose() * v;
}

Vec3 axial_field_transform(const OrientationFrame& frame, const Vec3& v) {
  const double parity = frame.inverted ? -1.0 : 1.0;
  return parity * (frame.rotation.transpose() * v);
}

SymmetricTensor3 defect_tensor_to_crystal(const OrientationFrame& frame, const SymmetricTensor3& t) {
  return congruence_transform(t, frame.rotation);
}

SymmetricTensor3 crystal_tensor_to_defect(const OrientationFrame& frame, const SymmetricTensor3& t) {
  return congruence_transform(t, frame.rotation.transpose());
}

}  // namespace txh
