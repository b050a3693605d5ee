#pragma once

#include <cstdint>
#include <vector>

#include "turbda/ensemble.hpp"
#include "turbda/observation.hpp"
#include "turbda/rng.hpp"

namespace turbda {

// Linear noise schedule: alpha_t = 1 - t, beta_t^2 = t.  The forward SDE
// dZ = b(t) Z dt + sigma(t) dW then has b = -1/(1-t) and
// sigma^2 = 1 + 2t/(1-t), so Z_0 ~ target and Z_1 ~ N(0, I).
struct NoiseSchedule {
    static double alpha(double t) { return 1.0 - t; }
    static double beta2(double t) { return t; }
    static double drift_b(double t) { return -1.0 / (1.0 - t); }
    static double sigma2(double t) { return 1.0 + 2.0 * t / (1.0 - t); }
};

struct EnsfConfig {
    int n_steps = 100;
    double eps = 0.01;
    int minibatch_j = 0;      // 0 or >= M: use every member
    double damping_t = 1.0;   // h(t) = damping_t - t
    double relax_factor = 1.0;

    void validate() const {
        if (!(eps > 0.0 && eps < 1.0))
            throw ConfigError("ensf: eps must lie in (0, 1)");
        if (n_steps < 10) throw ConfigError("ensf: n_steps >= 10");
        if (minibatch_j < 0) throw ConfigError("ensf: minibatch_j >= 0");
        if (relax_factor < 0.0 || relax_factor > 1.0)
            throw ConfigError("ensf: relax_factor in [0, 1]");
    }
};

// particle cloud at a fixed pseudo-time
struct DiffusionState {
    std::vector<std::vector<double>> particles;
    double t = 1.0;
};

// Monte-Carlo prior score at (z, t) from `batch` forecast members, one
// coordinate at a time: s_i = -(z_i - alpha_t xbar_i) / beta_t^2 where
// xbar_i = sum_j w_ji x_ji and w_ji = softmax_j(-(z_i - alpha_t x_ji)^2 /
// (2 beta_t^2)).  Factoring the weights per coordinate keeps a small
// ensemble informative in high dimension, where joint-norm weights would
// collapse onto the single nearest member.
// batch holds member indices (all members when empty).
std::vector<double> prior_score(const std::vector<double>& z, double t,
                                const Ensemble& forecast,
                                const std::vector<int>& batch = {},
                                double eps = 0.01);

// H^T R^-1 (y - H z) for the linear operators supported here
std::vector<double> likelihood_score(const std::vector<double>& z,
                                     const Observation& obs);

std::vector<double> posterior_score(const std::vector<double>& z, double t,
                                    const Ensemble& forecast,
                                    const Observation& obs,
                                    const EnsfConfig& cfg);

// One backward Euler-Maruyama update, evaluated with caller-supplied scores
// and standard-normal noise:
// z <- z - [b(t) z - sigma^2(t) s] dt + sigma(t) sqrt(dt) xi
void reverse_sde_step(std::vector<std::vector<double>>& particles, double t,
                      double dt_pseudo,
                      const std::vector<std::vector<double>>& scores,
                      const std::vector<std::vector<double>>& noise);

// Full EnSF update: M fresh N(0, I) particles are transported from t = 1
// down to t = eps along the reverse SDE driven by the posterior score
// (damped likelihood + Monte-Carlo prior score); spread relaxation is then
// applied with cfg.relax_factor.  Deterministic given (seed, cycle) at any
// worker count.
Ensemble analyze(const Ensemble& forecast, const Observation& obs,
                 const EnsfConfig& cfg, std::uint64_t seed,
                 std::uint64_t cycle, int workers = 0);

// Rescales analysis deviations per variable by
// (1 - factor) + factor * sigma_b / sigma_a; the mean is untouched.
Ensemble relax_spread(const Ensemble& analysis, const Ensemble& forecast,
                      double factor);

}  // namespace turbda
