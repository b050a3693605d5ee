#include "turbda/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "turbda/parallel.hpp"
#include "turbda/rng.hpp"

namespace turbda {

SqgStepper::SqgStepper(const GridSpec& grid, const SqgParams& params)
    : model_(grid, params) {}

void SqgStepper::advance(std::vector<double>& state, double hours) {
    const GridSpec& g = model_.grid();
    if (state.size() != g.grid_size())
        throw DimensionError("advance: state size does not match grid");
    const double dt = model_.params().dt;
    const double steps_real = hours / dt;
    const long steps = std::lround(steps_real);
    if (hours < 0.0 || std::fabs(steps_real - double(steps)) > 1e-9)
        throw ConfigError("advance: duration must be a multiple of dt");
    if (steps == 0) return;

    PhysicalField field(g);
    std::copy(state.begin(), state.end(), field.data.begin());
    SpectralField theta = model_.forward_transform(field);
    dealias(theta);
    for (long s = 0; s < steps; ++s) model_.step_rk4_inplace(theta);
    field = model_.inverse_transform(theta);
    std::copy(field.data.begin(), field.data.end(), state.begin());
}

StepperFactory sqg_stepper_factory(const GridSpec& grid,
                                   const SqgParams& params) {
    return [grid, params]() { return std::make_unique<SqgStepper>(grid, params); };
}

void advance(std::vector<double>& state, double hours, Stepper& stepper) {
    stepper.advance(state, hours);
}

Ensemble propagate_ensemble(const Ensemble& ens, double hours,
                            const StepperFactory& factory, int workers,
                            double* max_cfl_out) {
    ens.validate(false);
    if (workers < 1) throw ConfigError("propagate_ensemble: workers >= 1");
    const int m = ens.size();
    Ensemble out = ens;
    const int nw = std::min(workers, m);

    // one stepper per worker block so FFT scratch is never shared
    std::vector<std::unique_ptr<Stepper>> steppers(nw);
    const std::size_t q = std::size_t(m) / nw, r = std::size_t(m) % nw;
    auto block_of = [&](std::size_t i) {
        // inverse of the static partition in parallel_for
        const std::size_t cut = (q + 1) * r;
        return i < cut ? i / (q + 1) : r + (i - cut) / q;
    };
    for (int b = 0; b < nw; ++b) steppers[b] = factory();

    parallel_for(std::size_t(m), nw, [&](std::size_t i) {
        try {
            steppers[block_of(i)]->advance(out.members[i], hours);
        } catch (const BlowupError& e) {
            throw BlowupError(e.time_hours, int(i));
        }
    });

    double cfl = 0.0;
    for (const auto& s : steppers) cfl = std::max(cfl, s->max_cfl());
    if (max_cfl_out) *max_cfl_out = cfl;
    out.valid_time = ens.valid_time + hours;
    return out;
}

Ensemble inject_model_error(const Ensemble& ens, const ModelErrorConfig& cfg,
                            std::uint64_t cycle) {
    cfg.validate();
    if (!cfg.enabled) return ens;
    ens.validate(false);
    Ensemble out = ens;
    const std::size_t d = ens.dim();
    for (int m = 0; m < ens.size(); ++m) {
        RngStream stream(ens.member_seeds[m], StreamUse::model_error, cycle);
        auto& x = out.members[m];
        for (std::size_t i = 0; i < d; ++i) {
            const double u = stream.uniform();
            double acc = 0.0;
            for (const auto& [p, frac] : cfg.mixture) {
                acc += p;
                if (u < acc) {
                    x[i] += frac * cfg.base_amplitude * stream.normal();
                    break;
                }
            }
        }
    }
    return out;
}

double climatological_amplitude(
    const std::vector<std::vector<double>>& trajectory) {
    if (trajectory.empty())
        throw DimensionError("climatological_amplitude: empty trajectory");
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& snap : trajectory) {
        for (double v : snap) s += v * v;
        n += snap.size();
    }
    if (n == 0)
        throw DimensionError("climatological_amplitude: empty states");
    return std::sqrt(s / double(n));
}

}  // namespace turbda
