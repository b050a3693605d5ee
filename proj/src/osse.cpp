#include "turbda/osse.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "turbda/parallel.hpp"

namespace turbda {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::free_run: return "free_run";
        case Variant::letkf: return "letkf";
        case Variant::ensf: return "ensf";
    }
    throw ConfigError("unknown variant");
}

Variant variant_from_name(const std::string& name) {
    if (name == "free_run") return Variant::free_run;
    if (name == "letkf") return Variant::letkf;
    if (name == "ensf") return Variant::ensf;
    throw ConfigError("unknown variant '" + name + "'");
}

std::string quality_name(ModelQuality q) {
    return q == ModelQuality::perfect ? "perfect" : "imperfect";
}

ModelQuality quality_from_name(const std::string& name) {
    if (name == "perfect") return ModelQuality::perfect;
    if (name == "imperfect") return ModelQuality::imperfect;
    throw ConfigError("unknown model quality '" + name + "'");
}

void ExperimentConfig::validate() const {
    grid.validate();
    sqg.validate();
    ensf.validate();
    letkf.validate();
    model_error.validate();
    obs.validate();
    if (cycles < 1) throw ConfigError("cycles >= 1");
    if (!(obs_interval > 0.0)) throw ConfigError("obs_interval > 0");
    const double steps = obs_interval / sqg.dt;
    if (std::abs(steps - std::llround(steps)) > 1e-9)
        throw ConfigError("obs_interval must be a multiple of dt");
    if (ensemble_size < 1) throw ConfigError("ensemble_size >= 1");
    if (spinup_hours < 0.0) throw ConfigError("spinup_hours >= 0");
    if (clim_hours < 0.0) throw ConfigError("clim_hours >= 0");
    const int n_clim = int(std::llround(clim_hours / obs_interval)) + 1;
    if (ensemble_size > n_clim)
        throw ConfigError("climatology too short for ensemble_size");
    if (fit_lo_shell < 1 || fit_hi_shell <= fit_lo_shell)
        throw ConfigError("fit shell range invalid");
}

namespace {

void append_num(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

}  // namespace

std::string MetricsSeries::to_csv() const {
    std::string out = "time,forecast_rmse,analysis_rmse,spread\n";
    for (const auto& r : records) {
        append_num(out, r.time);
        out += ',';
        append_num(out, r.forecast_rmse);
        out += ',';
        append_num(out, r.analysis_rmse);
        out += ',';
        append_num(out, r.analysis_spread);
        out += '\n';
    }
    return out;
}

std::string MetricsSeries::to_jsonl() const {
    std::string out;
    for (const auto& r : records) {
        nlohmann::ordered_json j{{"cycle", r.cycle},
                                 {"time", r.time},
                                 {"forecast_rmse", r.forecast_rmse},
                                 {"analysis_rmse", r.analysis_rmse},
                                 {"forecast_spread", r.forecast_spread},
                                 {"analysis_spread", r.analysis_spread}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<std::vector<double>> nature_run(const GridSpec& grid,
                                            const SqgParams& params,
                                            double spinup, double duration,
                                            double obs_interval,
                                            std::uint64_t seed) {
    grid.validate();
    params.validate();
    if (spinup < 0.0 || duration < 0.0)
        throw ConfigError("nature_run: negative duration");
    if (!(obs_interval > 0.0)) throw ConfigError("nature_run: obs_interval > 0");

    // small random IC; the spinup carries it to the attractor
    std::vector<double> state(grid.grid_size());
    RngStream ic(seed, StreamUse::nature_ic, 0);
    for (auto& v : state) v = 0.1 * ic.normal();
    {
        SqgModel model(grid, params);
        auto spec = model.forward_transform(PhysicalField{grid, state});
        dealias(spec);
        state = model.inverse_transform(spec).data;
    }

    SqgStepper stepper(grid, params);
    if (spinup > 0.0) stepper.advance(state, spinup);

    const int n_snap = int(std::llround(duration / obs_interval)) + 1;
    std::vector<std::vector<double>> snaps;
    snaps.reserve(size_t(n_snap));
    snaps.push_back(state);
    for (int k = 1; k < n_snap; ++k) {
        stepper.advance(state, obs_interval);
        snaps.push_back(state);
    }
    return snaps;
}

TruthBundle make_truth_bundle(const ExperimentConfig& cfg) {
    cfg.validate();
    // one integration covers climatology and truth; the truth segment starts
    // one interval after the last climatology snapshot so the initial
    // ensemble pool and the verification trajectory never overlap
    const double duration =
        cfg.clim_hours + cfg.obs_interval * double(cfg.cycles + 1);
    auto snaps = nature_run(cfg.grid, cfg.sqg, cfg.spinup_hours, duration,
                            cfg.obs_interval, cfg.seed);
    const size_t n_clim = size_t(std::llround(cfg.clim_hours / cfg.obs_interval)) + 1;

    TruthBundle bundle;
    bundle.climatology.assign(snaps.begin(), snaps.begin() + ptrdiff_t(n_clim));
    bundle.truth.assign(snaps.begin() + ptrdiff_t(n_clim), snaps.end());
    bundle.base_amplitude = climatological_amplitude(bundle.climatology);
    return bundle;
}

Ensemble initial_ensemble(const std::vector<std::vector<double>>& climatology,
                          int m, std::uint64_t seed) {
    const int n = int(climatology.size());
    if (m < 1) throw ConfigError("initial_ensemble: m >= 1");
    if (m > n) throw ConfigError("initial_ensemble: not enough snapshots");

    // partial Fisher-Yates: first m entries of a seeded permutation
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    RngStream pick(seed, StreamUse::init_select, 0);
    for (int i = 0; i < m; ++i) {
        const int j = i + int(pick.next_u64() % std::uint64_t(n - i));
        std::swap(idx[size_t(i)], idx[size_t(j)]);
    }

    Ensemble ens;
    ens.valid_time = 0.0;
    ens.members.reserve(size_t(m));
    ens.member_seeds.reserve(size_t(m));
    for (int i = 0; i < m; ++i) {
        ens.members.push_back(climatology[size_t(idx[size_t(i)])]);
        ens.member_seeds.push_back(
            RngStream(seed, StreamUse::member_seed, std::uint64_t(i)).next_u64());
    }
    return ens;
}

MetricsSeries run_experiment(const ExperimentConfig& cfg,
                             const TruthBundle* bundle,
                             const CycleCallback& on_cycle, int workers,
                             double* max_cfl_out, MetricsSeries* partial_out) {
    cfg.validate();
    if (workers <= 0) workers = default_worker_count();

    TruthBundle local;
    if (!bundle) {
        local = make_truth_bundle(cfg);
        bundle = &local;
    }
    if (bundle->truth.size() < size_t(cfg.cycles) + 1)
        throw ConfigError("truth bundle shorter than experiment");

    ModelErrorConfig me = cfg.model_error;
    if (!(me.base_amplitude > 0.0)) me.base_amplitude = bundle->base_amplitude;

    const auto factory = sqg_stepper_factory(cfg.grid, cfg.sqg);
    const ObsOperator op = make_grid_operator(cfg.grid, cfg.obs.thinning_stride);
    const bool imperfect = cfg.model_quality == ModelQuality::imperfect;

    Ensemble ens = initial_ensemble(bundle->climatology, cfg.ensemble_size, cfg.seed);

    MetricsSeries metrics;
    metrics.records.reserve(size_t(cfg.cycles));
    double max_cfl = 0.0;

    for (int k = 1; k <= cfg.cycles; ++k) {
        try {
            double cfl = 0.0;
            ens = propagate_ensemble(ens, cfg.obs_interval, factory, workers, &cfl);
            max_cfl = std::max(max_cfl, cfl);
            if (imperfect) ens = inject_model_error(ens, me, std::uint64_t(k));

            const auto& truth = bundle->truth[size_t(k)];
            CycleRecord rec;
            rec.cycle = k;
            rec.time = double(k) * cfg.obs_interval;
            rec.forecast_rmse = rmse(ensemble_mean(ens), truth);
            rec.forecast_spread = spread(ens);

            if (cfg.variant == Variant::free_run) {
                rec.analysis_rmse = rec.forecast_rmse;
                rec.analysis_spread = rec.forecast_spread;
            } else {
                const Observation obs = synthesize_observations(
                    truth, cfg.grid, op, cfg.obs.r, rec.time, cfg.seed,
                    std::uint64_t(k));
                if (cfg.variant == Variant::letkf)
                    ens = letkf_analyze(ens, obs, cfg.letkf, cfg.grid, workers);
                else
                    ens = analyze(ens, obs, cfg.ensf, cfg.seed, std::uint64_t(k),
                                  workers);
                rec.analysis_rmse = rmse(ensemble_mean(ens), truth);
                rec.analysis_spread = spread(ens);
            }

            metrics.records.push_back(rec);
            if (on_cycle) on_cycle(rec, ens);
        } catch (const RunAbortedError&) {
            throw;
        } catch (const std::exception& e) {
            if (partial_out) *partial_out = metrics;
            throw RunAbortedError(k, e.what());
        }
    }

    if (max_cfl_out) *max_cfl_out = max_cfl;
    if (partial_out) *partial_out = metrics;
    return metrics;
}

}  // namespace turbda
