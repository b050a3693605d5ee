#include "turbda/config.hpp"

#include <fstream>

namespace turbda {

using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["grid"] = {{"nx", cfg.grid.nx},
                 {"ny", cfg.grid.ny},
                 {"nz", cfg.grid.nz},
                 {"lx", cfg.grid.lx},
                 {"ly", cfg.grid.ly},
                 {"h", cfg.grid.h}};
    j["sqg"] = {{"f", cfg.sqg.f},
                {"n", cfg.sqg.n},
                {"u0", cfg.sqg.u0},
                {"hyper_order", cfg.sqg.hyper_order},
                {"hyper_efold", cfg.sqg.hyper_efold},
                {"dt", cfg.sqg.dt},
                {"drag_tau", cfg.sqg.drag_tau},
                {"dealias_fraction", cfg.sqg.dealias_fraction}};
    j["ensf"] = {{"n_steps", cfg.ensf.n_steps},
                 {"eps", cfg.ensf.eps},
                 {"minibatch_j", cfg.ensf.minibatch_j},
                 {"damping_t", cfg.ensf.damping_t},
                 {"relax_factor", cfg.ensf.relax_factor}};
    j["letkf"] = {{"cutoff_km", cfg.letkf.cutoff_km},
                  {"domain_km", cfg.letkf.domain_km},
                  {"rtps_alpha", cfg.letkf.rtps_alpha},
                  {"obs_thinning", cfg.letkf.obs_thinning}};
    json comps = json::array();
    for (const auto& [p, a] : cfg.model_error.mixture)
        comps.push_back(json{{"probability", p}, {"amplitude_fraction", a}});
    j["model_error"] = {{"enabled", cfg.model_error.enabled},
                        {"base_amplitude", cfg.model_error.base_amplitude},
                        {"mixture", comps}};
    j["obs"] = {{"r", cfg.obs.r}, {"thinning_stride", cfg.obs.thinning_stride}};
    j["variant"] = variant_name(cfg.variant);
    j["model_quality"] = quality_name(cfg.model_quality);
    j["cycles"] = cfg.cycles;
    j["obs_interval"] = cfg.obs_interval;
    j["ensemble_size"] = cfg.ensemble_size;
    j["seed"] = cfg.seed;
    j["spinup_hours"] = cfg.spinup_hours;
    j["clim_hours"] = cfg.clim_hours;
    j["fit_lo_shell"] = cfg.fit_lo_shell;
    j["fit_hi_shell"] = cfg.fit_hi_shell;
    return j;
}

namespace {

template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (auto it = j.find("grid"); it != j.end()) {
        const json& g = *it;
        get_if_present(g, "nx", cfg.grid.nx);
        get_if_present(g, "ny", cfg.grid.ny);
        get_if_present(g, "nz", cfg.grid.nz);
        get_if_present(g, "lx", cfg.grid.lx);
        get_if_present(g, "ly", cfg.grid.ly);
        get_if_present(g, "h", cfg.grid.h);
    }
    if (auto it = j.find("sqg"); it != j.end()) {
        const json& s = *it;
        get_if_present(s, "f", cfg.sqg.f);
        get_if_present(s, "n", cfg.sqg.n);
        get_if_present(s, "u0", cfg.sqg.u0);
        get_if_present(s, "hyper_order", cfg.sqg.hyper_order);
        get_if_present(s, "hyper_efold", cfg.sqg.hyper_efold);
        get_if_present(s, "dt", cfg.sqg.dt);
        get_if_present(s, "drag_tau", cfg.sqg.drag_tau);
        get_if_present(s, "dealias_fraction", cfg.sqg.dealias_fraction);
    }
    if (auto it = j.find("ensf"); it != j.end()) {
        const json& e = *it;
        get_if_present(e, "n_steps", cfg.ensf.n_steps);
        get_if_present(e, "eps", cfg.ensf.eps);
        get_if_present(e, "minibatch_j", cfg.ensf.minibatch_j);
        get_if_present(e, "damping_t", cfg.ensf.damping_t);
        get_if_present(e, "relax_factor", cfg.ensf.relax_factor);
    }
    if (auto it = j.find("letkf"); it != j.end()) {
        const json& l = *it;
        get_if_present(l, "cutoff_km", cfg.letkf.cutoff_km);
        get_if_present(l, "domain_km", cfg.letkf.domain_km);
        get_if_present(l, "rtps_alpha", cfg.letkf.rtps_alpha);
        get_if_present(l, "obs_thinning", cfg.letkf.obs_thinning);
    }
    if (auto it = j.find("model_error"); it != j.end()) {
        const json& m = *it;
        get_if_present(m, "enabled", cfg.model_error.enabled);
        get_if_present(m, "base_amplitude", cfg.model_error.base_amplitude);
        if (auto c = m.find("mixture"); c != m.end()) {
            cfg.model_error.mixture.clear();
            for (const auto& e : *c)
                cfg.model_error.mixture.emplace_back(
                    e.at("probability").get<double>(),
                    e.at("amplitude_fraction").get<double>());
        }
    }
    if (auto it = j.find("obs"); it != j.end()) {
        const json& o = *it;
        get_if_present(o, "r", cfg.obs.r);
        get_if_present(o, "thinning_stride", cfg.obs.thinning_stride);
    }
    if (auto it = j.find("variant"); it != j.end())
        cfg.variant = variant_from_name(it->get<std::string>());
    if (auto it = j.find("model_quality"); it != j.end())
        cfg.model_quality = quality_from_name(it->get<std::string>());
    get_if_present(j, "cycles", cfg.cycles);
    get_if_present(j, "obs_interval", cfg.obs_interval);
    get_if_present(j, "ensemble_size", cfg.ensemble_size);
    get_if_present(j, "seed", cfg.seed);
    get_if_present(j, "spinup_hours", cfg.spinup_hours);
    get_if_present(j, "clim_hours", cfg.clim_hours);
    get_if_present(j, "fit_lo_shell", cfg.fit_lo_shell);
    get_if_present(j, "fit_hi_shell", cfg.fit_hi_shell);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("bad config '" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write config '" + path.string() + "'");
    out << config_to_json(cfg).dump(2) << '\n';
}

std::string config_hash(const ExperimentConfig& cfg) {
    // canonical form: sorted keys, so hashing is key-order independent
    const std::string dump = json(config_to_json(cfg)).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return std::string(buf);
}

}  // namespace turbda
