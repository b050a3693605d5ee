#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "turbda/forecast.hpp"
#include "turbda/osse.hpp"
#include "turbda/rng.hpp"

namespace testutil {

inline turbda::GridSpec small_grid(int n = 16) {
    turbda::GridSpec g;
    g.nx = g.ny = n;
    g.lx = g.ly = 62.83185307179586 * (n / 64.0);  // keep dx as at 64^2
    return g;
}

// spun-up small state, cached per (n, seed)
inline const std::vector<double>& spun_state(int n = 16, std::uint64_t seed = 1) {
    static std::map<std::pair<int, std::uint64_t>, std::vector<double>> cache;
    auto key = std::make_pair(n, seed);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto snaps = turbda::nature_run(small_grid(n), turbda::SqgParams{},
                                        7200.0, 0.0, 12.0, seed);
        it = cache.emplace(key, std::move(snaps[0])).first;
    }
    return it->second;
}

inline std::vector<double> gaussian_vec(std::size_t n, std::uint64_t seed,
                                        double mean = 0.0, double sd = 1.0) {
    turbda::RngStream rng(seed, turbda::StreamUse::generic, 9000);
    std::vector<double> v(n);
    for (auto& x : v) x = mean + sd * rng.normal();
    return v;
}

inline turbda::Ensemble gaussian_ensemble(int m, std::size_t d,
                                          std::uint64_t seed, double mean = 0.0,
                                          double sd = 1.0) {
    turbda::Ensemble ens;
    ens.valid_time = 0.0;
    for (int j = 0; j < m; ++j) {
        ens.members.push_back(gaussian_vec(d, seed * 1000 + std::uint64_t(j), mean, sd));
        ens.member_seeds.push_back(std::uint64_t(j) + 1);
    }
    return ens;
}

inline turbda::Observation identity_obs(const std::vector<double>& y, double r) {
    turbda::Observation obs;
    obs.y = y;
    obs.op = turbda::ObsOperator{turbda::ObsOperatorKind::identity, y.size(), {}};
    obs.r_diag.assign(y.size(), r);
    obs.locations.assign(y.size(), {0.0, 0.0});
    obs.time = 0.0;
    return obs;
}

inline double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace testutil
