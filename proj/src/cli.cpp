#include "turbda/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "turbda/budget.hpp"
#include "turbda/config.hpp"
#include "turbda/snapshot.hpp"
#include "turbda/sqg.hpp"

namespace turbda {

namespace fs = std::filesystem;

namespace {

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    bool have_seed = false;
    std::uint64_t seed = 0;
    bool have_cycles = false;
    int cycles = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_cycles) {
    cmd->add_option("--config", opts.config_path, "experiment config file (JSON)");
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
    cmd->add_option("--workers", opts.workers, "worker threads (0 = TURBDA_WORKERS or cores)");
    cmd->add_option("--seed", opts.seed, "override RNG seed")
        ->each([&opts](const std::string&) { opts.have_seed = true; });
    if (with_cycles)
        cmd->add_option("--cycles", opts.cycles, "override cycle count")
            ->each([&opts](const std::string&) { opts.have_cycles = true; });
}

ExperimentConfig resolve_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
    if (opts.have_seed) cfg.seed = opts.seed;
    if (opts.have_cycles) cfg.cycles = opts.cycles;
    return cfg;
}

fs::path require_out_dir(const CommonOpts& opts) {
    if (opts.out_dir.empty()) throw ConfigError("--out-dir is required");
    fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::ordered_json manifest_stub(const std::string& tool,
                                     const ExperimentConfig& cfg) {
    nlohmann::ordered_json m;
    m["tool"] = tool;
    m["config_hash"] = config_hash(cfg);
    m["config"] = config_to_json(cfg);
    return m;
}

int cmd_simulate(const CommonOpts& opts, double duration) {
    ExperimentConfig cfg = resolve_config(opts);
    cfg.grid.validate();
    cfg.sqg.validate();
    const fs::path dir = require_out_dir(opts);

    auto snaps = nature_run(cfg.grid, cfg.sqg, cfg.spinup_hours, duration,
                            cfg.obs_interval, cfg.seed);

    nlohmann::ordered_json manifest = manifest_stub("simulate", cfg);
    manifest["duration_hours"] = duration;
    auto files = nlohmann::json::array();
    for (size_t k = 0; k < snaps.size(); ++k) {
        char name[40];
        std::snprintf(name, sizeof name, "snapshot_%04zu.sqg", k);
        PhysicalField field{cfg.grid, snaps[k]};
        write_snapshot(dir / name, field, double(k) * cfg.obs_interval);
        files.push_back(name);
    }
    manifest["snapshots"] = files;
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << snaps.size() << " snapshots to " << dir.string()
              << "\n";
    return 0;
}

int cmd_spectrum(const CommonOpts& opts, const std::string& snap_path,
                 int lo_shell, int hi_shell) {
    ExperimentConfig cfg = resolve_config(opts);
    if (snap_path.empty()) throw ConfigError("--snapshot is required");
    Snapshot snap = read_snapshot(snap_path);

    bool all_zero = true;
    for (double v : snap.field.data)
        if (v != 0.0) {
            all_zero = false;
            break;
        }
    if (all_zero) throw ConfigError("spectrum undefined for zero field");

    cfg.grid = snap.field.grid;
    SqgModel model(cfg.grid, cfg.sqg);
    const auto spec = model.forward_transform(snap.field);
    const auto bins = model.ke_spectrum(spec);
    const double slope =
        fit_loglog_slope(bins, lo_shell > 0 ? lo_shell : cfg.fit_lo_shell,
                         hi_shell > 0 ? hi_shell : cfg.fit_hi_shell);

    std::string out = "kappa,energy\n";
    for (const auto& b : bins) {
        out += num17(b.kappa);
        out += ',';
        out += num17(b.energy);
        out += '\n';
    }
    out += "slope," + num17(slope) + '\n';
    if (!opts.out_dir.empty()) {
        const fs::path dir = require_out_dir(opts);
        write_text(dir / "spectrum.csv", out);
    }
    std::cout << out;
    return 0;
}

void write_run_outputs(const fs::path& dir, const std::string& tag,
                       const ExperimentConfig& cfg, const MetricsSeries& metrics,
                       const TruthBundle& bundle, const Ensemble* final_ens,
                       double max_cfl) {
    const std::string base = tag.empty() ? "metrics" : "metrics_" + tag;
    write_text(dir / (base + ".csv"), metrics.to_csv());
    write_text(dir / (base + ".jsonl"), metrics.to_jsonl());

    nlohmann::ordered_json manifest = manifest_stub("assimilate", cfg);
    if (!tag.empty()) manifest["arm"] = tag;
    manifest["variant"] = variant_name(cfg.variant);
    manifest["model_quality"] = quality_name(cfg.model_quality);
    manifest["base_amplitude"] = bundle.base_amplitude;
    manifest["max_cfl"] = max_cfl;
    manifest["cycles_completed"] = metrics.records.size();
    if (final_ens) manifest["member_seeds"] = final_ens->member_seeds;
    const std::string mname = tag.empty() ? "manifest.json" : "manifest_" + tag + ".json";
    write_text(dir / mname, manifest.dump(2) + "\n");
}

int cmd_assimilate(const CommonOpts& opts, const std::string& variant,
                   const std::string& quality, int ensemble_size) {
    ExperimentConfig cfg = resolve_config(opts);
    if (!variant.empty()) cfg.variant = variant_from_name(variant);
    if (!quality.empty()) cfg.model_quality = quality_from_name(quality);
    if (ensemble_size > 0) cfg.ensemble_size = ensemble_size;
    cfg.validate();
    const fs::path dir = require_out_dir(opts);

    // stream records as they land so an aborted run still leaves metrics
    std::ofstream jsonl(dir / "metrics.jsonl", std::ios::binary);
    if (!jsonl) throw IoError("cannot write metrics.jsonl");
    Ensemble last;
    const CycleCallback cb = [&](const CycleRecord& rec, const Ensemble& ens) {
        MetricsSeries one;
        one.records.push_back(rec);
        jsonl << one.to_jsonl() << std::flush;
        last = ens;
    };

    const TruthBundle bundle = make_truth_bundle(cfg);
    double max_cfl = 0.0;
    MetricsSeries partial;
    try {
        MetricsSeries metrics =
            run_experiment(cfg, &bundle, cb, opts.workers, &max_cfl, &partial);
        write_run_outputs(dir, "", cfg, metrics, bundle,
                          last.members.empty() ? nullptr : &last, max_cfl);
    } catch (const RunAbortedError& e) {
        write_run_outputs(dir, "", cfg, partial, bundle,
                          last.members.empty() ? nullptr : &last, max_cfl);
        throw;
    }
    std::cout << "assimilate: " << variant_name(cfg.variant) << " ("
              << quality_name(cfg.model_quality) << "), " << cfg.cycles
              << " cycles -> " << dir.string() << "\n";
    return 0;
}

struct CompareArm {
    std::string tag;
    Variant variant;
    ModelQuality quality;
    int ensemble_size;  // 0 = keep config value
};

int cmd_compare(const CommonOpts& opts) {
    ExperimentConfig base = resolve_config(opts);
    base.validate();
    const fs::path dir = require_out_dir(opts);

    const CompareArm arms[] = {
        {"free_run", Variant::free_run, ModelQuality::imperfect, 1},
        {"letkf_perfect", Variant::letkf, ModelQuality::perfect, 0},
        {"ensf_perfect", Variant::ensf, ModelQuality::perfect, 0},
        {"letkf_imperfect", Variant::letkf, ModelQuality::imperfect, 0},
        {"ensf_imperfect", Variant::ensf, ModelQuality::imperfect, 0},
    };

    const TruthBundle bundle = make_truth_bundle(base);
    std::vector<MetricsSeries> results;
    for (const auto& arm : arms) {
        ExperimentConfig cfg = base;
        cfg.variant = arm.variant;
        cfg.model_quality = arm.quality;
        if (arm.ensemble_size > 0) cfg.ensemble_size = arm.ensemble_size;
        double max_cfl = 0.0;
        MetricsSeries metrics =
            run_experiment(cfg, &bundle, {}, opts.workers, &max_cfl);
        write_run_outputs(dir, arm.tag, cfg, metrics, bundle, nullptr, max_cfl);
        results.push_back(std::move(metrics));
        std::cout << arm.tag << ": done (" << results.back().records.size()
                  << " cycles)\n";
    }

    // merged analysis-RMSE table, one column per arm
    std::string table = "time";
    for (const auto& arm : arms) table += "," + arm.tag;
    table += '\n';
    for (size_t k = 0; k < results[0].records.size(); ++k) {
        table += num17(results[0].records[k].time);
        for (const auto& series : results)
            table += "," + num17(series.records[k].analysis_rmse);
        table += '\n';
    }
    write_text(dir / "rmse_table.csv", table);
    std::cout << "wrote " << (dir / "rmse_table.csv").string() << "\n";
    return 0;
}

int cmd_budget(int layers, long long dim, double mlp_ratio, bool flops,
               const BudgetSpec& spec_in) {
    const double params = vit_param_count(layers, dim, mlp_ratio);
    std::cout << format_sig(params) << "\n";
    if (flops) {
        BudgetSpec spec = spec_in;
        spec.layers = layers;
        spec.embed_dim = dim;
        spec.mlp_ratio = mlp_ratio;
        if (!(spec.params > 1.0)) spec.params = params;
        std::cout << format_sig(estimate_training_flops(spec)) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"two-level SQG turbulence + ensemble data assimilation toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    CommonOpts sim_opts;
    double sim_duration = 0.0;
    auto* sim = app.add_subcommand("simulate", "nature run, write snapshots");
    add_common(sim, sim_opts, false);
    sim->add_option("--duration", sim_duration, "hours after spinup (0 = one snapshot)");

    CommonOpts spec_opts;
    std::string snap_path;
    int lo_shell = 0, hi_shell = 0;
    auto* spec = app.add_subcommand("spectrum", "KE spectrum and slope fit");
    add_common(spec, spec_opts, false);
    spec->add_option("--snapshot", snap_path, "input snapshot file");
    spec->add_option("--fit-lo", lo_shell, "first shell of the fit range");
    spec->add_option("--fit-hi", hi_shell, "last shell of the fit range");

    CommonOpts asm_opts;
    std::string variant, quality;
    int ensemble_size = 0;
    auto* assim = app.add_subcommand("assimilate", "run one twin experiment");
    add_common(assim, asm_opts, true);
    assim->add_option("--variant", variant, "free_run | letkf | ensf");
    assim->add_option("--quality", quality, "perfect | imperfect");
    assim->add_option("--ensemble-size", ensemble_size, "override M");

    CommonOpts cmp_opts;
    auto* cmp = app.add_subcommand("compare", "run the experiment roster");
    add_common(cmp, cmp_opts, true);

    int layers = 24;
    long long dim = 2048;
    double mlp_ratio = 4.0;
    bool flops = false;
    BudgetSpec bspec;
    auto* bud = app.add_subcommand("budget", "compute-budget estimators");
    bud->add_option("--layers", layers, "transformer depth");
    bud->add_option("--dim", dim, "embedding dimension");
    bud->add_option("--mlp-ratio", mlp_ratio, "MLP expansion ratio");
    bud->add_flag("--flops", flops, "also print total training FLOPs");
    bud->add_option("--input", bspec.input_dims, "input pixels per axis");
    bud->add_option("--patch", bspec.patch_dims, "patch size per axis");
    bud->add_option("--epochs", bspec.epochs, "training epochs");
    bud->add_option("--images", bspec.dataset_images, "dataset size");
    bud->add_option("--params", bspec.params, "parameter count override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts, sim_duration);
        if (spec->parsed())
            return cmd_spectrum(spec_opts, snap_path, lo_shell, hi_shell);
        if (assim->parsed())
            return cmd_assimilate(asm_opts, variant, quality, ensemble_size);
        if (cmp->parsed()) return cmd_compare(cmp_opts);
        if (bud->parsed()) return cmd_budget(layers, dim, mlp_ratio, flops, bspec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}

}  // namespace turbda
