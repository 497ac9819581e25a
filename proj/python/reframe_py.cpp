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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reframe/boson.hpp"
#include "reframe/fermion.hpp"
#include "reframe/ramsey.hpp"
#include "reframe/relational.hpp"
#include "reframe/sweep.hpp"

namespace py = pybind11;
using namespace reframe;

namespace {

template <std::size_t N>
py::list to_list(const std::array<double, N> &a) {
    py::list out;
    for (double x : a)
        out.append(x);
    return out;
}

py::dict boson_result(const boson::BosonOutcome &o) {
    py::dict d;
    d["p_A"] = o.p_A;
    d["p_M"] = o.p_M;
    d["labels"] = py::make_tuple(o.labels.lower, o.labels.upper);
    return d;
}

fermion::FrameKind make_frame(const std::string &kind, double nbar, int K, double epsilon, bool independent) {
    if (kind == "boson" || kind == "bec")
        return fermion::BosonFrame{nbar};
    if (kind == "fermion")
        return fermion::FermionFrame{K, epsilon,
                                     independent ? fermion::ModeDraw::independent : fermion::ModeDraw::distinct};
    throw sweep::ConfigError("unknown frame: " + kind);
}

sweep::ExperimentConfig config_from(const std::map<std::string, std::string> &settings) {
    return sweep::config_from_settings(settings);
}

}  // namespace

PYBIND11_MODULE(_reframe, m) {
    m.doc() = "Interferometry with internal quantum reference frames";

    py::register_exception<StateError>(m, "StateError", PyExc_ValueError);
    py::register_exception<sweep::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "run_ramsey",
        [](double phi) {
            const auto r = ramsey::run_ramsey(phi);
            return py::make_tuple(r.p_g, r.p_e);
        },
        py::arg("phi"), "Classical-field Ramsey sequence; returns (p_g, p_e).");

    m.def(
        "run_boson_ramsey",
        [](double nbar, double phi) {
            return boson_result(boson::run_boson_ramsey(boson::BosonRefParams::with_default_truncation(nbar),
                                                        boson::FreeEvolutionParams::for_phase(phi)));
        },
        py::arg("nbar"), py::arg("phi"));
    m.def(
        "jaynes_cummings_ramsey",
        [](double nbar, double phi) {
            return boson_result(boson::jaynes_cummings_ramsey(boson::BosonRefParams::with_default_truncation(nbar),
                                                              boson::FreeEvolutionParams::for_phase(phi)));
        },
        py::arg("nbar"), py::arg("phi"));
    m.def(
        "rf_disturbance",
        [](double nbar, double phi) {
            return to_list(boson::rf_disturbance(boson::BosonRefParams::with_default_truncation(nbar),
                                                 boson::FreeEvolutionParams::for_phase(phi)));
        },
        py::arg("nbar"), py::arg("phi"), "Fidelity of the BEC state with its initial state at each stage.");
    m.def("default_truncation", &boson::default_truncation, py::arg("nbar"));

    m.def(
        "relational_protocol_check",
        [](double nbar, double phi) {
            const auto c = relational::relational_protocol_check(nbar, phi);
            py::dict d;
            d["deviations"] = to_list(c.deviations);
            d["system_coherence"] = to_list(c.system_coherence);
            d["relational_coherence"] = to_list(c.relational_coherence);
            d["product_defects"] = to_list(c.product_defects);
            d["worst"] = c.worst;
            return d;
        },
        py::arg("nbar"), py::arg("phi"));

    m.def("binom", &fermion::binom, py::arg("K"), py::arg("n"), py::arg("p"));
    m.def(
        "run_fermion_ramsey",
        [](int K, double epsilon, double phi) {
            const auto o = fermion::run_fermion_ramsey({K, epsilon}, phi);
            py::dict d;
            d["p_A"] = o.p_A;
            d["p_M"] = o.p_M;
            d["visibility"] = o.visibility;
            return d;
        },
        py::arg("K"), py::arg("epsilon"), py::arg("phi"));
    m.def(
        "postselect_and_fidelity",
        [](int K, double epsilon, double phi) {
            const auto r = fermion::postselect_and_fidelity({K, epsilon}, phi);
            py::dict d;
            d["p_A"] = r.p_A;
            d["p_M"] = r.p_M;
            d["F_AM"] = r.F_AM;
            d["F_A0"] = r.F_A0;
            d["F_M0"] = r.F_M0;
            d["bound"] = r.bound;
            return d;
        },
        py::arg("K"), py::arg("epsilon"), py::arg("phi"));
    m.def(
        "fermion_relational_check",
        [](int K, double epsilon, double phi) { return fermion::fermion_relational_check({K, epsilon}, phi).worst; },
        py::arg("K"), py::arg("epsilon"), py::arg("phi"));
    m.def(
        "two_system_phase_test",
        [](const std::string &frame, const std::vector<double> &phis, double nbar, int K, double epsilon,
           bool independent) {
            const auto r = fermion::two_system_phase_test(make_frame(frame, nbar, K, epsilon, independent), phis);
            return py::make_tuple(r.p_symmetric, r.flatness);
        },
        py::arg("frame"), py::arg("phis"), py::arg("nbar") = 0.0, py::arg("K") = 1, py::arg("epsilon") = 0.0,
        py::arg("independent_draws") = false, "Returns (p_symmetric per phase, flatness).");

    m.def(
        "run_sweep",
        [](const std::map<std::string, std::string> &settings) {
            return sweep::to_csv(sweep::run(config_from(settings)));
        },
        py::arg("settings"), "Runs a sweep described by key=value settings and returns the CSV text.");
    m.def(
        "compare",
        [](const std::map<std::string, std::string> &a, const std::map<std::string, std::string> &b) {
            return sweep::compare(config_from(a), config_from(b));
        },
        py::arg("a"), py::arg("b"));
}
