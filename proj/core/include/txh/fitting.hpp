#pragma once

#include <limits>
#include <random>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "txh/hamiltonian.hpp"
#include "txh/spectra.hpp"

namespace txh {

enum class DatasetKind { ZeemanRotation, StarkSweep, StressSweep };

std::string_view to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(std::string_view s);

/// One observation. `control` is the sweep angle (rad), field (V/m) or
/// stress (Pa); `observed` and `sigma` are in eV for Zeeman and stress data
/// and Hz for Stark data. `line` tags a Zeeman line, `level` a stress level
/// (0 = TX0, 1 = TX1). Untagged points are matched to the nearest prediction.
struct DataPoint {
  double control = 0.0;
  double observed = 0.0;
  double sigma = 1.0;
  std::optional<std::string> orientation;
  std::optional<Line> line;
  std::optional<int> level;
};

struct SpectralDataset {
  DatasetKind kind = DatasetKind::ZeemanRotation;
  std::string name;
  std::vector<DataPoint> points;

  // zeeman_rotation
  double b_magnitude = 0.1099;  // T
  Vec3 axis_from = Vec3(0, 0, 1);
  Vec3 axis_to = Vec3(-1, 1, 0);
  // stark_sweep
  Vec3 direction = Vec3(1, 1, 0);
  // stress_sweep: load direction parameterised from [001] (0) to [110] (pi/2)
  double stress_theta = 0.0;

  Misalignment misalignment{};
  /// Constant added to every prediction of this dataset (dataset units).
  double offset = 0.0;
  double weight = 1.0;

  /// Throws Error(InvalidProblem) if empty or any sigma <= 0.
  void validate() const;
};

/// Names accepted by the parameter registry: b, d, eps_yy_p, eps_zz_p,
/// theta_p, g1, g2, g_e, a_x, a_y, alpha_xx, alpha_xy, alpha_yy, alpha_zz,
/// a1..a4, e_x, plus misalign_theta[k], misalign_phi[k] and offset[k] for
/// dataset k.
const std::vector<std::string>& model_parameter_names();
bool is_known_parameter(std::string_view name, std::size_t n_datasets);

double get_model_parameter(const ModelParams& p, std::string_view name);
void set_model_parameter(ModelParams& p, std::string_view name, double value);

struct FitParameter {
  std::string name;
  double start = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double scale = 0.0;  // 0 = automatic
};

struct FitProblem {
  std::vector<SpectralDataset> datasets;
  std::vector<FitParameter> free;
  ModelParams base{};
  /// Extra starting vectors (same order as `free`) for multi-start.
  std::vector<std::vector<double>> seeds;
  int max_iterations = 200;

  /// Throws Error(InvalidProblem) for unknown or duplicated names, starts
  /// outside bounds or invalid datasets.
  void validate() const;
};

struct Assignment {
  std::size_t dataset = 0;
  std::size_t point = 0;
  std::string orientation;
  std::string channel;  // line letter, "TX0"/"TX1", or "" for Stark
  double predicted = 0.0;
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> best;
  std::vector<double> sigma;
  bool uncertainties_available = false;
  double chi_square = 0.0;
  double residual_rms = 0.0;  // RMS of normalised residuals
  std::size_t n_points = 0;
  int n_evaluations = 0;
  int iterations = 0;
  bool converged = false;
  ModelParams params{};
  std::vector<Misalignment> misalignments;
  std::vector<double> offsets;
  std::vector<Assignment> assignments;

  double value(std::string_view name) const;
  double uncertainty(std::string_view name) const;
};

/// A full parameter state: model record plus per-dataset misalignments and offsets.
struct ParameterState {
  ModelParams params;
  std::vector<Misalignment> misalignments;
  std::vector<double> offsets;
};

ParameterState apply_parameters(const FitProblem& problem, const std::vector<double>& values);

/// Model value for one point; untagged points return the nearest prediction
/// and report the chosen channel through `assignment` when given.
double predict(const SpectralDataset& dataset, const DataPoint& point, const ModelParams& p,
               const Misalignment& misalignment, Assignment* assignment = nullptr);

/// Weighted residuals sqrt(w) (observed - predicted) / sigma, dataset-major.
std::vector<double> residuals(const FitProblem& problem, const ParameterState& state,
                              std::vector<Assignment>* assignments = nullptr);

/// Sum of squared normalised residuals.
double objective(const FitProblem& problem, const std::vector<double>& values);

/// Replaces each point's observation by the model value of its tagged
/// channel, plus Gaussian noise of width sigma when `rng` is given. Points
/// must carry an orientation (and a line or level where applicable).
void synthesize(SpectralDataset& dataset, const ModelParams& p, std::mt19937_64* rng = nullptr);

/// Bounded Levenberg-Marquardt with multi-start over problem.seeds. Stops on
/// relative objective decrease < 1e-10, scaled step < 1e-12, or
/// max_iterations (converged = false, best-so-far returned).
FitResult fit(const FitProblem& problem);

}  // namespace txh
