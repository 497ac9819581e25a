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

// reframe: run interferometer sweeps and write CSV tables.
//
//   reframe run --experiment boson --nbar 400 --phi-steps 65 --out fringe.csv
//   reframe compare --experiment boson --nbar 100 --experiment-b jc
//
// Exit status: 0 on success, 2 on invalid input, 1 on internal failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "reframe/core_states.hpp"
#include "reframe/sweep.hpp"

namespace {

using reframe::sweep::Settings;

struct SettingFlags {
    std::string config;
    Settings values;

    // Registers --<flag> writing into values[key].
    void add(CLI::App &app, const std::string &flag, const std::string &key, const std::string &help) {
        app.add_option_function<std::string>(
            "--" + flag, [this, key](const std::string &v) { values[key] = v; }, help);
    }

    void add_common(CLI::App &app, const std::string &suffix) {
        add(app, "experiment" + suffix, "experiment",
            "ramsey, boson, jc, fermion, two_system, relational_check or fidelity_study");
        add(app, "nbar" + suffix, "nbar", "mean BEC occupation");
        add(app, "K" + suffix, "K", "number of fermionic reference modes");
        add(app, "epsilon" + suffix, "epsilon", "vacancy probability of each mode");
    }

    void add_grid(CLI::App &app) {
        add(app, "phi-min", "phi_min", "first phase (accepts e.g. 0.5pi)");
        add(app, "phi-max", "phi_max", "last phase");
        add(app, "phi-steps", "phi_steps", "number of grid points");
        add(app, "seed", "seed", "reserved");
    }

    // File settings first, flags on top.
    Settings resolve(const Settings &base = {}) const {
        Settings merged = base;
        if (!config.empty())
            for (const auto &[k, v] : reframe::sweep::read_settings_file(config))
                merged[k] = v;
        for (const auto &[k, v] : values)
            merged[k] = v;
        return merged;
    }
};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Reference-frame interferometry sweeps"};
    app.require_subcommand(1);

    SettingFlags run_flags;
    CLI::App *run = app.add_subcommand("run", "run one experiment over a phase grid and emit CSV");
    run->add_option("--config", run_flags.config, "key=value file; flags override it");
    run_flags.add_common(*run, "");
    run_flags.add_grid(*run);
    run_flags.add(*run, "out", "out", "output CSV path (default: standard output)");

    SettingFlags a_flags, b_flags;
    CLI::App *cmp = app.add_subcommand("compare", "max |p_A difference| between two experiments");
    cmp->add_option("--config", a_flags.config, "key=value file for the first experiment");
    cmp->add_option("--config-b", b_flags.config, "key=value file for the second experiment");
    a_flags.add_common(*cmp, "");
    a_flags.add_grid(*cmp);
    b_flags.add_common(*cmp, "-b");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        namespace sw = reframe::sweep;
        if (*run) {
            const sw::ExperimentConfig config = sw::config_from_settings(run_flags.resolve());
            const sw::SweepResult result = sw::run(config);
            if (config.output_path.empty())
                std::cout << sw::to_csv(result);
            else
                sw::write_csv(result, config.output_path);
        } else {
            const Settings a = a_flags.resolve();
            Settings b_base = a;  // the second experiment inherits what it does not override
            b_base.erase("out");
            const sw::ExperimentConfig ca = sw::config_from_settings(a);
            const sw::ExperimentConfig cb = sw::config_from_settings(b_flags.resolve(b_base));
            std::cout << "max_abs_diff=" << sw::format_value(sw::compare(ca, cb)) << '\n';
        }
    } catch (const reframe::sweep::ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const reframe::StateError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
