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

#include "reframe/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "reframe/boson.hpp"
#include "reframe/fermion.hpp"
#include "reframe/ramsey.hpp"
#include "reframe/relational.hpp"

namespace reframe::sweep {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperimentNames{{
    {Experiment::ramsey, "ramsey"},
    {Experiment::boson, "boson"},
    {Experiment::jc, "jc"},
    {Experiment::fermion, "fermion"},
    {Experiment::two_system, "two_system"},
    {Experiment::relational_check, "relational_check"},
    {Experiment::fidelity_study, "fidelity_study"},
}};

constexpr std::size_t kColumns = 14;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Parses the whole of `text` as a double or throws.
double parse_double_strict(const std::string &text, std::string_view what) {
    if (text.empty())
        throw ConfigError("invalid number for " + std::string(what) + ": empty");
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
        throw ConfigError("invalid number for " + std::string(what) + ": " + text);
    return v;
}

int parse_int(std::string_view text, std::string_view what) {
    const double v = parse_number(text);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError("expected an integer for " + std::string(what) + ": " + std::string(text));
    return static_cast<int>(v);
}

double quantize(double v) { return std::strtod(format_value(v).c_str(), nullptr); }

void quantize(std::optional<double> &v) {
    if (v)
        *v = quantize(*v);
}

void quantize(SweepRow &r) {
    if (r.nbar)
        r.nbar = quantize(*r.nbar);
    quantize(r.epsilon);
    r.phi = quantize(r.phi);
    for (auto *field : {&r.p_A, &r.p_M, &r.p_sym, &r.visibility, &r.fidelity_min, &r.bound, &r.flatness,
                        &r.deviation})
        quantize(*field);
}

// A block is one frame evaluated over the whole grid.
struct Block {
    std::string frame;
    std::function<SweepRow(double)> row;
    std::function<void(std::vector<SweepRow> &)> finish = [](std::vector<SweepRow> &) {};
};

void spread_max_minus_min(std::vector<SweepRow> &rows, std::optional<double> SweepRow::*source,
                          std::optional<double> SweepRow::*target) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto &r : rows) {
        lo = std::min(lo, *(r.*source));
        hi = std::max(hi, *(r.*source));
    }
    for (auto &r : rows)
        r.*target = hi - lo;
}

SweepRow base_row(const ExperimentConfig &c, const std::string &frame, double phi) {
    SweepRow r;
    r.experiment = std::string(experiment_name(c.experiment));
    r.frame = frame;
    r.phi = phi;
    return r;
}

std::vector<Block> plan(const ExperimentConfig &c) {
    std::vector<Block> blocks;
    const bool has_boson = c.nbar.has_value();
    const bool has_fermion = c.K.has_value() && c.epsilon.has_value();
    const double nbar = c.nbar.value_or(0.0);
    const fermion::FermionRefParams fp{c.K.value_or(1), c.epsilon.value_or(0.0)};

    auto boson_row = [c, nbar](const std::string &frame, double phi) {
        SweepRow r = base_row(c, frame, phi);
        r.nbar = nbar;
        return r;
    };
    auto fermion_row = [c, fp](double phi) {
        SweepRow r = base_row(c, "fermion", phi);
        r.K = fp.K;
        r.epsilon = fp.epsilon;
        return r;
    };
    auto grid_visibility = [](std::vector<SweepRow> &rows) {
        spread_max_minus_min(rows, &SweepRow::p_M, &SweepRow::visibility);
    };

    switch (c.experiment) {
    case Experiment::ramsey:
        blocks.push_back({"external",
                          [c](double phi) {
                              SweepRow r = base_row(c, "external", phi);
                              const auto out = ramsey::run_ramsey(phi);
                              r.p_A = out.p_g;
                              r.p_M = out.p_e;
                              return r;
                          },
                          grid_visibility});
        break;
    case Experiment::boson:
    case Experiment::jc: {
        const bool jc = c.experiment == Experiment::jc;
        const std::string frame = jc ? "cavity" : "bec";
        blocks.push_back({frame,
                          [=](double phi) {
                              SweepRow r = boson_row(frame, phi);
                              const auto ref = boson::BosonRefParams::with_default_truncation(nbar);
                              const auto f = boson::FreeEvolutionParams::for_phase(phi);
                              const auto out = jc ? boson::jaynes_cummings_ramsey(ref, f)
                                                  : boson::run_boson_ramsey(ref, f);
                              r.p_A = out.p_A;
                              r.p_M = out.p_M;
                              return r;
                          },
                          grid_visibility});
        break;
    }
    case Experiment::fermion:
        blocks.push_back({"fermion", [=](double phi) {
                              SweepRow r = fermion_row(phi);
                              const auto out = fermion::run_fermion_ramsey(fp, phi);
                              r.p_A = out.p_A;
                              r.p_M = out.p_M;
                              r.visibility = out.visibility;
                              return r;
                          }});
        break;
    case Experiment::two_system: {
        auto flatness = [](std::vector<SweepRow> &rows) {
            spread_max_minus_min(rows, &SweepRow::p_sym, &SweepRow::flatness);
        };
        if (has_boson)
            blocks.push_back({"bec",
                              [=](double phi) {
                                  SweepRow r = boson_row("bec", phi);
                                  r.p_sym = fermion::symmetric_probability(fermion::BosonFrame{nbar}, phi);
                                  return r;
                              },
                              flatness});
        if (has_fermion)
            blocks.push_back({"fermion",
                              [=](double phi) {
                                  SweepRow r = fermion_row(phi);
                                  r.p_sym = fermion::symmetric_probability(
                                      fermion::FermionFrame{fp.K, fp.epsilon, fermion::ModeDraw::distinct}, phi);
                                  return r;
                              },
                              flatness});
        break;
    }
    case Experiment::relational_check:
        if (has_boson)
            blocks.push_back({"bec", [=](double phi) {
                                  SweepRow r = boson_row("bec", phi);
                                  r.deviation = relational::relational_protocol_check(nbar, phi).worst;
                                  return r;
                              }});
        if (has_fermion)
            blocks.push_back({"fermion", [=](double phi) {
                                  SweepRow r = fermion_row(phi);
                                  r.deviation = fermion::fermion_relational_check(fp, phi).worst;
                                  return r;
                              }});
        break;
    case Experiment::fidelity_study:
        if (has_boson)
            blocks.push_back({"bec", [=](double phi) {
                                  SweepRow r = boson_row("bec", phi);
                                  const auto ref = boson::BosonRefParams::with_default_truncation(nbar);
                                  const auto f = boson::FreeEvolutionParams::for_phase(phi);
                                  const auto out = boson::run_boson_ramsey(ref, f);
                                  const auto fid = boson::rf_disturbance(ref, f);
                                  r.p_A = out.p_A;
                                  r.p_M = out.p_M;
                                  r.fidelity_min = *std::min_element(fid.begin(), fid.end());
                                  return r;
                              }});
        if (has_fermion)
            blocks.push_back({"fermion", [=](double phi) {
                                  SweepRow r = fermion_row(phi);
                                  const auto out = fermion::run_fermion_ramsey(fp, phi);
                                  r.p_A = out.p_A;
                                  r.p_M = out.p_M;
                                  try {
                                      const auto ps = fermion::postselect_stage(out.stage_states[3]);
                                      r.fidelity_min = std::min({ps.F_AM, ps.F_A0, ps.F_M0});
                                      r.bound = ps.bound;
                                  } catch (const StateError &) {
                                      // One outcome never occurs at this phase: no postselected state.
                                  }
                                  return r;
                              }});
        break;
    }
    return blocks;
}

// Evaluates f(0..n-1) on a worker pool; results land by index.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)> &f) {
    std::vector<std::optional<T>> slots(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = f(i);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    std::vector<T> out;
    out.reserve(n);
    for (auto &s : slots)
        out.push_back(std::move(*s));
    return out;
}

std::string format_optional(const std::optional<double> &v) { return v ? format_value(*v) : std::string(); }

std::optional<double> parse_optional(const std::string &cell, std::string_view what) {
    if (cell.empty())
        return std::nullopt;
    return parse_double_strict(cell, what);
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double primary_value(const SweepRow &r) {
    if (r.p_A)
        return *r.p_A;
    if (r.p_sym)
        return *r.p_sym;
    if (r.deviation)
        return *r.deviation;
    throw ConfigError("rows carry no comparable value");
}

}  // namespace

const char *const kCsvHeader =
    "experiment,frame,nbar,K,epsilon,phi,p_A,p_M,p_sym,visibility,fidelity_min,bound,flatness,deviation";

Experiment parse_experiment(std::string_view name) {
    for (const auto &[e, n] : kExperimentNames)
        if (n == name)
            return e;
    throw ConfigError("unknown experiment: " + std::string(name));
}

std::string_view experiment_name(Experiment e) {
    for (const auto &[x, n] : kExperimentNames)
        if (x == e)
            return n;
    return "unknown";
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    std::vector<double> g;
    if (steps <= 0)
        return g;
    if (steps == 1)
        return {lo};
    g.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        g.push_back(i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1));
    return g;
}

double parse_number(std::string_view text) {
    std::string s = trim(text);
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        std::string coeff = s.substr(0, s.size() - 2);
        double c = 1.0;
        if (coeff == "-")
            c = -1.0;
        else if (!coeff.empty() && coeff != "+")
            c = parse_double_strict(coeff, s);
        return c * std::numbers::pi;
    }
    return parse_double_strict(s, s.empty() ? "value" : s);
}

Settings parse_settings(std::string_view text) {
    Settings out;
    std::size_t line_no = 0;
    for (const auto &raw : split(text, '\n')) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + " is not key=value");
        out[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
    }
    return out;
}

Settings read_settings_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_settings(ss.str());
}

ExperimentConfig config_from_settings(const Settings &settings) {
    static const std::array<std::string_view, 9> known{"experiment", "phi_min", "phi_max", "phi_steps", "nbar",
                                                       "K",          "epsilon", "seed",    "out"};
    for (const auto &[key, value] : settings)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key: " + key);

    auto get = [&](const char *key) -> std::optional<std::string> {
        const auto it = settings.find(key);
        return it == settings.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    ExperimentConfig c;
    const auto exp = get("experiment");
    if (!exp)
        throw ConfigError("missing parameter: experiment");
    c.experiment = parse_experiment(*exp);
    const double lo = get("phi_min") ? parse_number(*get("phi_min")) : 0.0;
    const double hi = get("phi_max") ? parse_number(*get("phi_max")) : 2.0 * std::numbers::pi;
    const int steps = get("phi_steps") ? parse_int(*get("phi_steps"), "phi_steps") : 33;
    if (steps < 0)
        throw ConfigError("phi_steps must be non-negative");
    c.phi_grid = linear_grid(lo, hi, steps);
    if (const auto v = get("nbar"))
        c.nbar = parse_number(*v);
    if (const auto v = get("K"))
        c.K = parse_int(*v, "K");
    if (const auto v = get("epsilon"))
        c.epsilon = parse_number(*v);
    if (const auto v = get("seed"))
        c.seed = static_cast<std::uint64_t>(parse_int(*v, "seed"));
    if (const auto v = get("out"))
        c.output_path = *v;
    return c;
}

void validate(const ExperimentConfig &c) {
    if (c.phi_grid.empty())
        throw ConfigError("phi_grid must be nonempty");
    const std::string name(experiment_name(c.experiment));
    auto missing = [&](const char *what) { return ConfigError("missing parameter: " + std::string(what) + " for experiment " + name); };
    if (c.nbar && !(*c.nbar > 0.0))
        throw ConfigError("invalid parameter: nbar must be positive");
    if (c.K && *c.K < 1)
        throw ConfigError("invalid parameter: K must be >= 1");
    if (c.epsilon && !(*c.epsilon >= 0.0 && *c.epsilon <= 1.0))
        throw ConfigError("invalid parameter: epsilon must lie in [0, 1]");
    const bool fermion_params = c.K && c.epsilon;
    switch (c.experiment) {
    case Experiment::ramsey:
        break;
    case Experiment::boson:
    case Experiment::jc:
        if (!c.nbar)
            throw missing("nbar");
        break;
    case Experiment::fermion:
        if (!c.K)
            throw missing("K");
        if (!c.epsilon)
            throw missing("epsilon");
        break;
    case Experiment::two_system:
    case Experiment::relational_check:
    case Experiment::fidelity_study:
        if (!c.nbar && !fermion_params)
            throw missing("nbar or K and epsilon");
        break;
    }
}

SweepResult run(const ExperimentConfig &config) {
    validate(config);
    const auto blocks = plan(config);
    const std::size_t n_phi = config.phi_grid.size();
    const auto rows = parallel_map<SweepRow>(blocks.size() * n_phi, [&](std::size_t i) {
        return blocks[i / n_phi].row(config.phi_grid[i % n_phi]);
    });
    SweepResult result;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::vector<SweepRow> block_rows(rows.begin() + static_cast<std::ptrdiff_t>(b * n_phi),
                                         rows.begin() + static_cast<std::ptrdiff_t>((b + 1) * n_phi));
        blocks[b].finish(block_rows);
        for (auto &r : block_rows) {
            quantize(r);
            result.rows.push_back(std::move(r));
        }
    }
    return result;
}

double compare(const ExperimentConfig &a, const ExperimentConfig &b) {
    if (a.phi_grid != b.phi_grid)
        throw ConfigError("mismatched phi grids");
    const SweepResult ra = run(a), rb = run(b);
    if (ra.rows.size() != rb.rows.size())
        throw ConfigError("results are not comparable row by row");
    double worst = 0.0;
    for (std::size_t i = 0; i < ra.rows.size(); ++i)
        worst = std::max(worst, std::abs(primary_value(ra.rows[i]) - primary_value(rb.rows[i])));
    return worst;
}

std::string format_value(double v) {
    if (v == 0.0)
        return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string to_csv(const SweepResult &result) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto &r : result.rows) {
        const std::array<std::string, kColumns> cells{
            r.experiment,
            r.frame,
            format_optional(r.nbar),
            r.K ? std::to_string(*r.K) : std::string(),
            format_optional(r.epsilon),
            format_value(r.phi),
            format_optional(r.p_A),
            format_optional(r.p_M),
            format_optional(r.p_sym),
            format_optional(r.visibility),
            format_optional(r.fidelity_min),
            format_optional(r.bound),
            format_optional(r.flatness),
            format_optional(r.deviation),
        };
        for (std::size_t i = 0; i < kColumns; ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    }
    return out;
}

SweepResult parse_csv(std::string_view text) {
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty())
        lines.pop_back();
    if (lines.empty() || lines.front() != kCsvHeader)
        throw ConfigError("unexpected CSV header");
    SweepResult result;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != kColumns)
            throw ConfigError("CSV line " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) +
                              " fields");
        SweepRow r;
        r.experiment = cells[0];
        r.frame = cells[1];
        r.nbar = parse_optional(cells[2], "nbar");
        if (!cells[3].empty())
            r.K = parse_int(cells[3], "K");
        r.epsilon = parse_optional(cells[4], "epsilon");
        r.phi = parse_double_strict(cells[5], "phi");
        r.p_A = parse_optional(cells[6], "p_A");
        r.p_M = parse_optional(cells[7], "p_M");
        r.p_sym = parse_optional(cells[8], "p_sym");
        r.visibility = parse_optional(cells[9], "visibility");
        r.fidelity_min = parse_optional(cells[10], "fidelity_min");
        r.bound = parse_optional(cells[11], "bound");
        r.flatness = parse_optional(cells[12], "flatness");
        r.deviation = parse_optional(cells[13], "deviation");
        result.rows.push_back(std::move(r));
    }
    return result;
}

void write_csv(const SweepResult &result, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write output file: " + path);
    const std::string text = to_csv(result);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out)
        throw ConfigError("cannot write output file: " + path);
}

}  // namespace reframe::sweep
