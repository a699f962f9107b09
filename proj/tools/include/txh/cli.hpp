#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "txh/fitting.hpp"
#include "txh/spectra.hpp"
#include "txh/symmetry.hpp"

namespace txh::cli {

using Json = nlohmann::ordered_json;

/// Full-precision decimal text of a double (17 significant digits).
std::string format_double(double x);

Json orientations_to_json(bool unprimed_only);
/// Parses the document written by orientations_to_json. Throws Error(ParseError).
std::vector<OrientationFrame> orientations_from_json(const Json& doc);

/// Reads a dataset CSV. The kind is taken from the header unless given:
///   zeeman_rotation  angle_rad,value_ev,sigma_ev[,orientation][,line]
///   stark_sweep      e_v_per_m,shift_hz,sigma_hz[,orientation]
///   stress_sweep     stress_pa,value_ev,sigma_ev[,orientation][,level]
/// Errors name the offending row and column.
SpectralDataset read_dataset_csv(std::istream& in, std::string name,
                                 std::optional<DatasetKind> kind = std::nullopt);
SpectralDataset read_dataset_file(const std::string& path, std::optional<DatasetKind> kind = std::nullopt);
void write_dataset_csv(std::ostream& out, const SpectralDataset& ds);

DielectricStack read_stack_json(const Json& doc);

/// Applies {"name": value} overrides to a parameter record; unknown names throw Error(ConfigError).
void apply_param_overrides(ModelParams& p, const Json& overrides);

/// Builds a FitProblem from a fit config document. `data_files` replace the
/// `file` entries of the datasets in order; relative `file` entries are
/// resolved against `base_dir`. Unknown keys or parameter names throw before
/// any model evaluation.
FitProblem fit_problem_from_json(const Json& config, const std::vector<std::string>& data_files,
                                 const std::string& base_dir = {});
Json fit_result_to_json(const FitResult& r, const FitProblem& problem);

Json grouping_to_json(const GroupingReport& g);

/// Runs one command line (args excludes the program name). Output goes to
/// `out` unless the command names an output file; failures are reported as a
/// JSON object on `err` with a nonzero return value.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace txh::cli
