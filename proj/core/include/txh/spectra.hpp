#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "txh/hamiltonian.hpp"
#include "txh/symmetry.hpp"

namespace txh {

enum class Line { A = 0, B = 1, C = 2, D = 3 };

char line_name(Line l);
Line line_from_name(char c);

struct TransitionLine {
  Line name = Line::A;
  double energy = 0.0;            // eV
  double frequency_offset = 0.0;  // Hz relative to E_X
};

/// T0 <-> TX0 lines of one orientation. A and C start from the lower ground
/// spin level, B and D from the upper; A and B connect to the upper TX0
/// level, C and D to the lower. Hence A - B = C - D = electron splitting and
/// B - D = A - C = hole splitting.
struct TransitionSet {
  std::string orientation;
  std::array<TransitionLine, 4> lines{};

  const TransitionLine& operator[](Line l) const { return lines[static_cast<int>(l)]; }
  double hole_splitting() const { return (*this)[Line::B].energy - (*this)[Line::D].energy; }
  double electron_splitting() const { return (*this)[Line::A].energy - (*this)[Line::B].energy; }
};

/// Throws Error(ManifoldOverlap) when the TX0 doublet splitting is not smaller
/// than its gap to TX1.
TransitionSet transition_set(const OrientationFrame& frame, const FieldConfig& fields, const ModelParams& p);

/// Total Stark shift (linear + quadratic) of the transition in Hz.
double stark_shift_total(const OrientationFrame& frame, const Vec3& e_field, const ModelParams& p);

/// (E_B - E_D) / (mu_B |B|), magnitude. Throws Error(ZeroField) if b_magnitude <= 0.
double hole_g_factor(const TransitionSet& ts, double b_magnitude, const ModelParams& p);

struct RotationStep {
  double angle = 0.0;  // rad from axis_from
  Vec3 b_field = Vec3::Zero();
  std::vector<TransitionSet> sets;  // 24, canonical orientation order
};

/// B rotated on the great circle from axis_from to axis_to; n_steps samples
/// including both ends (n_steps == 1 evaluates axis_from only). Throws
/// Error(DegenerateAxes) for zero or parallel axes.
std::vector<RotationStep> field_rotation_sweep(const Vec3& axis_from, const Vec3& axis_to, int n_steps,
                                               double b_magnitude, const ModelParams& p);

/// B direction at `angle` along the great circle from axis_from towards axis_to.
Vec3 rotation_sweep_direction(const Vec3& axis_from, const Vec3& axis_to, double angle);

struct Misalignment {
  double d_theta = 0.0;  // rad, polar angle from crystal z
  double d_phi = 0.0;    // rad, azimuth
};

/// Unit vector of `direction` with its spherical polar angles offset.
Vec3 misaligned_direction(const Vec3& direction, const Misalignment& m);

struct StarkPoint {
  double e_field = 0.0;  // V/m
  std::array<double, OrientationSet::kCount> shift{};  // Hz
};

/// Field magnitudes 0..e_max in n_steps samples (n_steps == 1 evaluates e_max).
std::vector<StarkPoint> stark_sweep(const Vec3& direction, double e_max, int n_steps, const ModelParams& p,
                                    const Misalignment& misalignment = {});

struct LabeledValues {
  std::string label;
  std::vector<double> values;
};

struct Group {
  std::vector<std::string> members;  // sorted
  double representative = 0.0;       // mean of the first component
};

struct GroupingReport {
  std::string field_spec;
  std::vector<Group> groups;  // ascending representative
  double tolerance = 0.0;

  std::size_t count() const { return groups.size(); }
  /// Index of the group containing `label`, or -1.
  int group_of(const std::string& label) const;
};

/// Single-linkage clustering: two entries are linked when every component
/// differs by at most `tolerance` (Chebyshev distance).
GroupingReport degeneracy_grouping(std::vector<LabeledValues> values, double tolerance,
                                   std::string field_spec = {});

GroupingReport degeneracy_grouping(const std::vector<std::pair<std::string, double>>& values, double tolerance,
                                   std::string field_spec = {});

/// Groups orientations by all four line frequencies (Hz).
GroupingReport group_transition_sets(const std::vector<TransitionSet>& sets, double tolerance_hz,
                                     std::string field_spec = {});

enum class TxState { Lower = 0, Upper = 1 };

struct BranchingRatio {
  double rbr = 0.0;
  double cyclicity = 0.0;
  double rate_up = 0.0;    // |c_{+1/2}|^2
  double rate_down = 0.0;  // |c_{-1/2}|^2
};

/// Branching of a TX0 eigenstate into the two ground spin states, with the
/// ground spins embedded as m_j = +-1/2 and an identity dipole operator, in
/// the orientation's defect coordinates. For the lower state rbr is the
/// m_j = +1/2 fraction, for the upper state the m_j = -1/2 fraction, so the
/// Kramers partners agree as B -> 0. cyclicity = 1 / (1 - rbr).
BranchingRatio radiative_branching_ratio(const OrientationFrame& frame, const FieldConfig& fields,
                                         const ModelParams& p, TxState state);

struct SpinComposition {
  double w_half = 0.0;
  double w_three_half = 0.0;
};

/// m_j weights of the two TX0 eigenstates (defect coordinates).
std::array<SpinComposition, 2> eigenvector_composition(const OrientationFrame& frame, const FieldConfig& fields,
                                                       const ModelParams& p);

struct DielectricLayer {
  std::string name;
  double permittivity = 1.0;  // relative
  double thickness = 0.0;     // m
};

struct DielectricStack {
  std::vector<DielectricLayer> layers;
  std::size_t sample_index = 0;
};

struct EffectiveField {
  double v_sample = 0.0;  // V
  double e_sample = 0.0;  // V/m
};

/// Series-capacitor voltage division across the stack. Throws
/// Error(InvalidStack) for an empty stack, bad index, non-positive thickness
/// or permittivity below 1.
EffectiveField effective_field(const DielectricStack& stack, double v_total);

}  // namespace txh
