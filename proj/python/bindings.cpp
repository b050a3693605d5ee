#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "turbda/budget.hpp"
#include "turbda/config.hpp"
#include "turbda/sqg.hpp"

namespace py = pybind11;
using namespace turbda;

namespace {

std::vector<double> to_vec(const py::array_t<double>& a) {
    auto buf = a.request();
    const double* p = static_cast<const double*>(buf.ptr);
    return std::vector<double>(p, p + buf.size);
}

py::array_t<double> field_array(const GridSpec& g, const std::vector<double>& v) {
    py::array_t<double> out({g.nz, g.ny, g.nx});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Ensemble ensemble_from_array(const py::array_t<double>& members, double time) {
    auto buf = members.request();
    if (buf.ndim != 2) throw DimensionError("members must be (M, d)");
    const auto m = size_t(buf.shape[0]), d = size_t(buf.shape[1]);
    const double* p = static_cast<const double*>(buf.ptr);
    Ensemble ens;
    ens.valid_time = time;
    ens.members.resize(m);
    ens.member_seeds.resize(m, 0);
    for (size_t j = 0; j < m; ++j)
        ens.members[j].assign(p + j * d, p + (j + 1) * d);
    return ens;
}

py::array_t<double> ensemble_to_array(const Ensemble& ens) {
    const size_t m = ens.size(), d = ens.dim();
    py::array_t<double> out({py::ssize_t(m), py::ssize_t(d)});
    double* p = out.mutable_data();
    for (size_t j = 0; j < m; ++j)
        std::copy(ens.members[j].begin(), ens.members[j].end(), p + j * d);
    return out;
}

Observation make_obs(const GridSpec& grid, const py::array_t<double>& y,
                     double r, double time, int thinning) {
    const ObsOperator op = make_grid_operator(grid, thinning);
    Observation obs;
    obs.y = to_vec(y);
    obs.op = op;
    obs.locations = operator_locations(grid, op);
    obs.r_diag.assign(op.obs_dim(), r);
    obs.time = time;
    return obs;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "two-level SQG turbulence + ensemble data assimilation core";

    py::class_<GridSpec>(mod, "GridSpec")
        .def(py::init<>())
        .def_readwrite("nx", &GridSpec::nx)
        .def_readwrite("ny", &GridSpec::ny)
        .def_readwrite("nz", &GridSpec::nz)
        .def_readwrite("lx", &GridSpec::lx)
        .def_readwrite("ly", &GridSpec::ly)
        .def_readwrite("h", &GridSpec::h)
        .def("validate", &GridSpec::validate);

    py::class_<SqgParams>(mod, "SqgParams")
        .def(py::init<>())
        .def_readwrite("f", &SqgParams::f)
        .def_readwrite("n", &SqgParams::n)
        .def_readwrite("u0", &SqgParams::u0)
        .def_readwrite("hyper_order", &SqgParams::hyper_order)
        .def_readwrite("hyper_efold", &SqgParams::hyper_efold)
        .def_readwrite("dt", &SqgParams::dt)
        .def_readwrite("drag_tau", &SqgParams::drag_tau)
        .def("validate", &SqgParams::validate);

    mod.def(
        "nature_run",
        [](const GridSpec& grid, const SqgParams& params, double spinup,
           double duration, double interval, std::uint64_t seed) {
            auto snaps = nature_run(grid, params, spinup, duration, interval, seed);
            py::list out;
            for (const auto& s : snaps) out.append(field_array(grid, s));
            return out;
        },
        py::arg("grid"), py::arg("params"), py::arg("spinup"),
        py::arg("duration"), py::arg("interval"), py::arg("seed"),
        "clean model run; returns a list of (nz, ny, nx) snapshots");

    mod.def(
        "advance",
        [](const GridSpec& grid, const SqgParams& params,
           const py::array_t<double>& state, double hours) {
            SqgStepper stepper(grid, params);
            auto v = to_vec(state);
            stepper.advance(v, hours);
            return field_array(grid, v);
        },
        py::arg("grid"), py::arg("params"), py::arg("state"), py::arg("hours"));

    mod.def(
        "ke_spectrum",
        [](const GridSpec& grid, const SqgParams& params,
           const py::array_t<double>& state) {
            SqgModel model(grid, params);
            auto spec = model.forward_transform(PhysicalField{grid, to_vec(state)});
            auto bins = model.ke_spectrum(spec);
            py::array_t<double> kappa(py::ssize_t(bins.size()));
            py::array_t<double> energy(py::ssize_t(bins.size()));
            for (size_t i = 0; i < bins.size(); ++i) {
                kappa.mutable_data()[i] = bins[i].kappa;
                energy.mutable_data()[i] = bins[i].energy;
            }
            return py::make_tuple(kappa, energy);
        },
        py::arg("grid"), py::arg("params"), py::arg("state"));

    mod.def(
        "fit_loglog_slope",
        [](const py::array_t<double>& kappa, const py::array_t<double>& energy,
           int lo_shell, int hi_shell) {
            std::vector<KeBin> bins(size_t(kappa.size()));
            for (size_t i = 0; i < bins.size(); ++i)
                bins[i] = {kappa.data()[i], energy.data()[i]};
            return fit_loglog_slope(bins, lo_shell, hi_shell);
        },
        py::arg("kappa"), py::arg("energy"), py::arg("lo_shell"),
        py::arg("hi_shell"));

    mod.def(
        "ensf_analyze",
        [](const py::array_t<double>& members, const GridSpec& grid,
           const py::array_t<double>& y, double r, std::uint64_t seed,
           std::uint64_t cycle, int n_steps, double relax_factor, int workers) {
            Ensemble ens = ensemble_from_array(members, 0.0);
            EnsfConfig cfg;
            cfg.n_steps = n_steps;
            cfg.relax_factor = relax_factor;
            Ensemble post =
                analyze(ens, make_obs(grid, y, r, 0.0, 0), cfg, seed, cycle, workers);
            return ensemble_to_array(post);
        },
        py::arg("members"), py::arg("grid"), py::arg("y"), py::arg("r") = 1.0,
        py::arg("seed") = 7, py::arg("cycle") = 1, py::arg("n_steps") = 100,
        py::arg("relax_factor") = 1.0, py::arg("workers") = 0);

    mod.def(
        "letkf_analyze",
        [](const py::array_t<double>& members, const GridSpec& grid,
           const py::array_t<double>& y, double r, double cutoff_km,
           double rtps_alpha, int workers) {
            Ensemble ens = ensemble_from_array(members, 0.0);
            LetkfConfig cfg;
            cfg.cutoff_km = cutoff_km;
            cfg.rtps_alpha = rtps_alpha;
            Ensemble post = letkf_analyze(ens, make_obs(grid, y, r, 0.0, 0), cfg,
                                          grid, workers);
            return ensemble_to_array(post);
        },
        py::arg("members"), py::arg("grid"), py::arg("y"), py::arg("r") = 1.0,
        py::arg("cutoff_km") = 2000.0, py::arg("rtps_alpha") = 0.3,
        py::arg("workers") = 0);

    mod.def(
        "run_experiment",
        [](const std::string& config_json) {
            const ExperimentConfig cfg =
                config_from_json(nlohmann::json::parse(config_json));
            MetricsSeries metrics = run_experiment(cfg);
            py::list out;
            for (const auto& r : metrics.records) {
                py::dict d;
                d["cycle"] = r.cycle;
                d["time"] = r.time;
                d["forecast_rmse"] = r.forecast_rmse;
                d["analysis_rmse"] = r.analysis_rmse;
                d["forecast_spread"] = r.forecast_spread;
                d["analysis_spread"] = r.analysis_spread;
                out.append(d);
            }
            return out;
        },
        py::arg("config_json"),
        "run a twin experiment from a JSON config string; returns per-cycle metrics");

    mod.def("default_config_json", []() {
        return config_to_json(ExperimentConfig{}).dump(2);
    });

    mod.def("config_hash", [](const std::string& config_json) {
        return config_hash(config_from_json(nlohmann::json::parse(config_json)));
    });

    mod.def("vit_param_count", &vit_param_count, py::arg("layers"),
            py::arg("embed_dim"), py::arg("mlp_ratio"));
    mod.def(
        "estimate_training_flops",
        [](const std::vector<long long>& input_dims,
           const std::vector<long long>& patch_dims, double epochs,
           double params, double images) {
            BudgetSpec spec;
            spec.input_dims = input_dims;
            spec.patch_dims = patch_dims;
            spec.epochs = epochs;
            spec.params = params;
            spec.dataset_images = images;
            return estimate_training_flops(spec);
        },
        py::arg("input_dims"), py::arg("patch_dims"), py::arg("epochs"),
        py::arg("params"), py::arg("images"));
    mod.def("format_sig", &format_sig, py::arg("x"), py::arg("digits") = 4);

    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<DimensionError>(mod, "DimensionError", PyExc_ValueError);
}
