// Copyright 2026 The reframe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REFRAME_SWEEP_HPP_
#define REFRAME_SWEEP_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Parameter sweeps over the experiments and their CSV form.
namespace reframe::sweep {

// Bad user input: unknown experiment, missing parameter, bad grid, bad path.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Experiment { ramsey, boson, jc, fermion, two_system, relational_check, fidelity_study };

Experiment parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);

struct ExperimentConfig {
    Experiment experiment = Experiment::ramsey;
    std::vector<double> phi_grid;
    std::optional<double> nbar;
    std::optional<int> K;
    std::optional<double> epsilon;
    std::uint64_t seed = 0;  // reserved; every path here is deterministic
    std::string output_path;  // empty: standard output
};

// Evenly spaced grid including both ends; `steps` points.
std::vector<double> linear_grid(double lo, double hi, int steps);

// Numbers may carry a trailing "pi": "pi", "2pi", "0.5pi", "-1.5e-3".
double parse_number(std::string_view text);

// Raw key=value settings; later assignments win.
using Settings = std::map<std::string, std::string>;

// Reads `key = value` lines; '#' starts a comment.
Settings parse_settings(std::string_view text);
Settings read_settings_file(const std::string &path);
// Keys: experiment, phi_min, phi_max, phi_steps, nbar, K, epsilon, seed, out.
ExperimentConfig config_from_settings(const Settings &settings);

// Throws ConfigError when the grid is empty or a required parameter is
// missing for the chosen experiment.
void validate(const ExperimentConfig &config);

struct SweepRow {
    std::string experiment;
    std::string frame;
    std::optional<double> nbar;
    std::optional<int> K;
    std::optional<double> epsilon;
    double phi = 0.0;
    std::optional<double> p_A;
    std::optional<double> p_M;
    std::optional<double> p_sym;
    std::optional<double> visibility;
    std::optional<double> fidelity_min;
    std::optional<double> bound;
    std::optional<double> flatness;
    std::optional<double> deviation;

    bool operator==(const SweepRow &) const = default;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    bool operator==(const SweepResult &) const = default;
};

// Every floating value is rounded to 12 significant digits, the precision
// of the CSV, so writing and reading back is lossless.
SweepResult run(const ExperimentConfig &config);

// Largest row-wise gap in p_A (else p_sym, else deviation) between two
// runs. Throws ConfigError on mismatched grids.
double compare(const ExperimentConfig &a, const ExperimentConfig &b);

extern const char *const kCsvHeader;

std::string to_csv(const SweepResult &result);
SweepResult parse_csv(std::string_view text);
// Throws ConfigError("cannot write output file: ...") on failure.
void write_csv(const SweepResult &result, const std::string &path);

// Value as printed in the CSV ("%.12g", negative zero printed as 0).
std::string format_value(double v);

}  // namespace reframe::sweep

#endif  // REFRAME_SWEEP_HPP_
