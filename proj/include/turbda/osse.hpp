#pragma once

#include <functional>
#include <string>

#include "turbda/ensf.hpp"
#include "turbda/forecast.hpp"
#include "turbda/letkf.hpp"

namespace turbda {

enum class Variant { free_run, letkf, ensf };
enum class ModelQuality { perfect, imperfect };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);
std::string quality_name(ModelQuality q);
ModelQuality quality_from_name(const std::string& name);

struct ObsSettings {
    double r = 1.0;           // diagonal observation-error variance
    int thinning_stride = 0;  // 0/1: observe every point

    void validate() const {
        if (!(r > 0.0)) throw ConfigError("obs: r > 0");
        if (thinning_stride < 0) throw ConfigError("obs: thinning >= 0");
    }
};

struct ExperimentConfig {
    GridSpec grid;
    SqgParams sqg;
    EnsfConfig ensf;
    LetkfConfig letkf;
    ModelErrorConfig model_error;
    ObsSettings obs;

    Variant variant = Variant::ensf;
    ModelQuality model_quality = ModelQuality::perfect;
    int cycles = 300;
    double obs_interval = 12.0;
    int ensemble_size = 20;
    std::uint64_t seed = 7;
    double spinup_hours = 7200.0;
    double clim_hours = 2880.0;
    int fit_lo_shell = 4;
    int fit_hi_shell = 16;

    void validate() const;
};

struct CycleRecord {
    int cycle = 0;
    double time = 0.0;
    double forecast_rmse = 0.0;
    double analysis_rmse = 0.0;
    double forecast_spread = 0.0;
    double analysis_spread = 0.0;
};

struct MetricsSeries {
    std::vector<CycleRecord> records;

    // `time,forecast_rmse,analysis_rmse,spread` rows (spread = analysis)
    std::string to_csv() const;
    std::string to_jsonl() const;
};

// everything the cycling loop needs from the clean model run; shared across
// experiment arms so truth and climatology are integrated once
struct TruthBundle {
    std::vector<std::vector<double>> climatology;  // every obs_interval
    std::vector<std::vector<double>> truth;        // index = cycle (0..cycles)
    double base_amplitude = 0.0;                   // climatological RMS
};

// Clean free run: random small-amplitude IC keyed by seed, spun up for
// `spinup` hours, then snapshots every obs_interval over `duration` hours
// (duration 0 = just the spun-up state).
std::vector<std::vector<double>> nature_run(const GridSpec& grid,
                                            const SqgParams& params,
                                            double spinup, double duration,
                                            double obs_interval,
                                            std::uint64_t seed);

TruthBundle make_truth_bundle(const ExperimentConfig& cfg);

// M distinct climatology snapshots, drawn without replacement
Ensemble initial_ensemble(const std::vector<std::vector<double>>& climatology,
                          int m, std::uint64_t seed);

struct RunAbortedError : std::runtime_error {
    int cycle;
    RunAbortedError(int c, const std::string& what)
        : std::runtime_error("cycle " + std::to_string(c) + ": " + what),
          cycle(c) {}
};

using CycleCallback = std::function<void(const CycleRecord&, const Ensemble&)>;

// One full twin experiment.  Per cycle: propagate obs_interval hours ->
// (imperfect only) inject model error -> forecast metrics vs truth ->
// (letkf/ensf) synthesize observation and analyze -> analysis metrics.
// Deterministic for a given config at any worker count.  On failure the
// records produced so far are flushed through `partial_out` (when given) and
// a RunAbortedError carrying the cycle index is thrown.
MetricsSeries run_experiment(const ExperimentConfig& cfg,
                             const TruthBundle* bundle = nullptr,
                             const CycleCallback& on_cycle = {},
                             int workers = 0, double* max_cfl_out = nullptr,
                             MetricsSeries* partial_out = nullptr);

}  // namespace turbda
