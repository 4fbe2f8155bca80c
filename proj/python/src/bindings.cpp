#include "kinktrap/errors.hpp"
#include "kinktrap/linearized.hpp"
#include "kinktrap/sweep.hpp"
#include "kinktrap/version.hpp"

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kinktrap;

PYBIND11_MODULE(_core, m)
{
    m.attr("__version__") = std::string(kVersion);

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<CoincidentParticles>(m, "CoincidentParticles", error.ptr());
    py::register_exception<StepBudgetExhausted>(m, "StepBudgetExhausted", error.ptr());
    py::register_exception<InsufficientOscillations>(m, "InsufficientOscillations", error.ptr());

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double k, double alpha, int n, double A, double beta) {
                 ModelParams p{k, alpha, n, A, beta};
                 p.validate();
                 return p;
             }),
             py::arg("k") = 1.0, py::arg("alpha") = 1.0, py::arg("n") = 2, py::arg("A") = 2.0,
             py::arg("beta") = 1.0)
        .def_readwrite("k", &ModelParams::k)
        .def_readwrite("alpha", &ModelParams::alpha)
        .def_readwrite("n", &ModelParams::n)
        .def_readwrite("A", &ModelParams::A)
        .def_readwrite("beta", &ModelParams::beta)
        .def("validate", &ModelParams::validate);

    py::class_<State>(m, "State")
        .def(py::init<double, double, double, double, double>(), py::arg("t"), py::arg("x1"), py::arg("v1"),
             py::arg("x2"), py::arg("v2"))
        .def_readwrite("t", &State::t)
        .def_readwrite("x1", &State::x1)
        .def_readwrite("v1", &State::v1)
        .def_readwrite("x2", &State::x2)
        .def_readwrite("v2", &State::v2)
        .def(py::self == py::self)
        .def("__repr__", [](const State& s) {
            return "State(t=" + std::to_string(s.t) + ", x1=" + std::to_string(s.x1) + ", v1=" +
                   std::to_string(s.v1) + ", x2=" + std::to_string(s.x2) + ", v2=" + std::to_string(s.v2) + ")";
        });

    py::class_<CMState>(m, "CMState")
        .def(py::init<double, double, double, double, double>(), py::arg("t"), py::arg("R"), py::arg("r"),
             py::arg("V"), py::arg("w"))
        .def_readwrite("t", &CMState::t)
        .def_readwrite("R", &CMState::R)
        .def_readwrite("r", &CMState::r)
        .def_readwrite("V", &CMState::V)
        .def_readwrite("w", &CMState::w);

    py::class_<Accelerations>(m, "Accelerations")
        .def_readonly("a1", &Accelerations::a1)
        .def_readonly("a2", &Accelerations::a2);

    m.def("equilibrium_separation", &equilibrium_separation, py::arg("params"));
    m.def("external_potential", &external_potential, py::arg("x"), py::arg("params"));
    m.def("external_force", &external_force, py::arg("x"), py::arg("params"));
    m.def("potential_energy", &potential_energy, py::arg("x1"), py::arg("x2"), py::arg("params"),
          py::arg("floor") = kCoincidenceFloor);
    m.def("accelerations", &accelerations, py::arg("state"), py::arg("params"), py::arg("floor") = kCoincidenceFloor);
    m.def("total_energy", &total_energy, py::arg("state"), py::arg("params"), py::arg("floor") = kCoincidenceFloor);
    m.def("to_cm", &to_cm, py::arg("state"));
    m.def("from_cm", &from_cm, py::arg("cm"));

    py::enum_<Scheme>(m, "Scheme")
        .value("VelocityVerlet", Scheme::VelocityVerlet)
        .value("RK4", Scheme::RK4);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init([](Scheme scheme, double dt, long long max_steps) {
                 IntegratorConfig c;
                 c.scheme = scheme;
                 c.dt = dt;
                 c.max_steps = max_steps;
                 c.validate();
                 return c;
             }),
             py::arg("scheme") = Scheme::VelocityVerlet, py::arg("dt") = IntegratorConfig{}.dt,
             py::arg("max_steps") = IntegratorConfig{}.max_steps)
        .def_readwrite("scheme", &IntegratorConfig::scheme)
        .def_readwrite("dt", &IntegratorConfig::dt)
        .def_readwrite("max_steps", &IntegratorConfig::max_steps);

    py::enum_<StopReason>(m, "StopReason")
        .value("TimeLimit", StopReason::TimeLimit)
        .value("ExitRadius", StopReason::ExitRadius);

    py::class_<IntegrationResult>(m, "IntegrationResult")
        .def_readonly("final", &IntegrationResult::final)
        .def_readonly("reason", &IntegrationResult::reason)
        .def_readonly("steps", &IntegrationResult::steps)
        .def_readonly("initial_energy", &IntegrationResult::initial_energy)
        .def_readonly("peak_energy_drift", &IntegrationResult::peak_energy_drift);

    m.def(
        "step", [](const State& s, const ModelParams& p, const IntegratorConfig& c) { return step(s, p, c); },
        py::arg("state"), py::arg("params"), py::arg("config") = IntegratorConfig{});
    m.def(
        "integrate",
        [](const State& s, const ModelParams& p, const IntegratorConfig& c, std::optional<double> t_max,
           std::optional<double> exit_radius) {
            StopCondition stop;
            stop.time_limit = t_max;
            stop.exit_radius = exit_radius;
            py::gil_scoped_release release;
            return integrate(s, p, c, stop);
        },
        py::arg("state"), py::arg("params"), py::arg("config") = IntegratorConfig{}, py::kw_only(),
        py::arg("t_max") = py::none(), py::arg("exit_radius") = py::none());

    py::enum_<Outcome>(m, "Outcome")
        .value("Transmitted", Outcome::Transmitted)
        .value("Reflected", Outcome::Reflected)
        .value("Trapped", Outcome::Trapped)
        .value("Error", Outcome::Error);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init([](const ModelParams& p, double v0, double launch_offset, std::optional<double> separation,
                         double t_max, double exit_radius) {
                 Scenario s;
                 s.params = p;
                 s.v0 = v0;
                 s.launch_offset = launch_offset;
                 s.separation = separation;
                 s.t_max = t_max;
                 s.exit_radius = exit_radius;
                 s.validate();
                 return s;
             }),
             py::arg("params") = ModelParams{}, py::arg("v0") = Scenario{}.v0,
             py::arg("launch_offset") = Scenario{}.launch_offset, py::arg("separation") = py::none(),
             py::arg("t_max") = Scenario{}.t_max, py::arg("exit_radius") = Scenario{}.exit_radius)
        .def_readwrite("params", &Scenario::params)
        .def_readwrite("v0", &Scenario::v0)
        .def_readwrite("launch_offset", &Scenario::launch_offset)
        .def_readwrite("separation", &Scenario::separation)
        .def_readwrite("t_max", &Scenario::t_max)
        .def_readwrite("exit_radius", &Scenario::exit_radius)
        .def("effective_separation", &Scenario::effective_separation);

    py::class_<OutcomeRecord>(m, "OutcomeRecord")
        .def_readonly("outcome", &OutcomeRecord::outcome)
        .def_readonly("v_final", &OutcomeRecord::v_final)
        .def_readonly("t_end", &OutcomeRecord::t_end)
        .def_readonly("energy_drift", &OutcomeRecord::energy_drift)
        .def_readonly("mean_cm_speed_tail", &OutcomeRecord::mean_cm_speed_tail)
        .def_readonly("steps", &OutcomeRecord::steps);

    m.def("initial_state", &initial_state, py::arg("scenario"));
    m.def(
        "run_scattering",
        [](const Scenario& sc, const IntegratorConfig& c) {
            py::gil_scoped_release release;
            return run_scattering(sc, c);
        },
        py::arg("scenario"), py::arg("config") = IntegratorConfig{});

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("v0", &SweepRecord::v0)
        .def_readonly("outcome", &SweepRecord::outcome)
        .def_readonly("v_final", &SweepRecord::v_final)
        .def_readonly("t_end", &SweepRecord::t_end)
        .def_readonly("energy_drift", &SweepRecord::energy_drift)
        .def_readonly("steps", &SweepRecord::steps)
        .def_readonly("mean_cm_speed_tail", &SweepRecord::mean_cm_speed_tail)
        .def_readonly("depth", &SweepRecord::depth)
        .def_readonly("error", &SweepRecord::error);

    auto make_spec = [](const Scenario& sc, double v_min, double v_max, double dv, const IntegratorConfig& c) {
        SweepSpec spec;
        spec.scenario = sc;
        spec.v_min = v_min;
        spec.v_max = v_max;
        spec.dv = dv;
        spec.cfg = c;
        return spec;
    };
    m.def(
        "sweep",
        [make_spec](const Scenario& sc, double v_min, double v_max, double dv, const IntegratorConfig& c,
                    unsigned workers) {
            const SweepSpec spec = make_spec(sc, v_min, v_max, dv, c);
            py::gil_scoped_release release;
            return sweep(spec, workers);
        },
        py::arg("scenario") = Scenario{}, py::arg("v_min") = 0.05, py::arg("v_max") = 0.30, py::arg("dv") = 0.001,
        py::arg("config") = IntegratorConfig{}, py::arg("workers") = default_workers());
    m.def(
        "zoom",
        [make_spec](const Scenario& sc, double v_min, double v_max, double dv, int factor, int depth,
                    const IntegratorConfig& c, unsigned workers) {
            const SweepSpec spec = make_spec(sc, v_min, v_max, dv, c);
            py::gil_scoped_release release;
            return zoom(spec, factor, depth, workers).rows();
        },
        py::arg("scenario"), py::arg("v_min"), py::arg("v_max"), py::arg("dv"), py::arg("factor") = 5,
        py::arg("depth") = 1, py::arg("config") = IntegratorConfig{}, py::arg("workers") = default_workers());
    m.def("count_alternations", &count_alternations, py::arg("rows"));

    py::class_<DivergenceReport>(m, "DivergenceReport")
        .def_readonly("seed_delta", &DivergenceReport::seed_delta)
        .def_readonly("times", &DivergenceReport::times)
        .def_readonly("distances", &DivergenceReport::distances)
        .def_readonly("t_exceeds_one", &DivergenceReport::t_exceeds_one)
        .def_readonly("max_growth", &DivergenceReport::max_growth)
        .def_readonly("lambda_", &DivergenceReport::lambda)
        .def_readonly("window_start", &DivergenceReport::window_start)
        .def_readonly("window_end", &DivergenceReport::window_end)
        .def_readonly("degenerate", &DivergenceReport::degenerate)
        .def_readonly("degenerate_reason", &DivergenceReport::degenerate_reason);
    m.def(
        "sensitivity",
        [](const Scenario& sc, double seed_delta, const IntegratorConfig& c, double sample_interval) {
            py::gil_scoped_release release;
            return sensitivity(sc, seed_delta, c, sample_interval);
        },
        py::arg("scenario"), py::arg("seed_delta") = 1e-9, py::arg("config") = IntegratorConfig{},
        py::arg("sample_interval") = 1.0);

    py::class_<Frequencies>(m, "Frequencies")
        .def_readonly("omega_R", &Frequencies::omega_R)
        .def_readonly("omega_eps", &Frequencies::omega_eps);
    py::class_<LinearizedParams>(m, "LinearizedParams")
        .def_readonly("omega_R", &LinearizedParams::omega_R)
        .def_readonly("omega_eps", &LinearizedParams::omega_eps)
        .def_readonly("delta_offset", &LinearizedParams::delta_offset)
        .def_readonly("r_eq", &LinearizedParams::r_eq);
    py::class_<LinearPoint>(m, "LinearPoint")
        .def_readonly("R", &LinearPoint::R)
        .def_readonly("delta", &LinearPoint::delta);

    m.def("linearized_frequencies", &linearized_frequencies, py::arg("params"), py::arg("r_eq"));
    m.def("linearize", &linearize, py::arg("params"), py::arg("r_eq"));
    m.def(
        "delta_offset", [](const ModelParams& p, double r_eq) { return delta_offset(p, r_eq).value; },
        py::arg("params"), py::arg("r_eq"));
    m.def("closed_form_trajectory", &closed_form_trajectory, py::arg("init"), py::arg("linearized"), py::arg("t"));
    m.def("in_well_equilibrium_separation", &in_well_equilibrium_separation, py::arg("params"));
    m.def(
        "dominant_frequency",
        [](const std::vector<double>& samples, double dt) { return dominant_frequency(samples, dt); },
        py::arg("samples"), py::arg("dt"));
}
