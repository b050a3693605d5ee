#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "turbda/ensemble.hpp"
#include "turbda/grid.hpp"
#include "turbda/sqg.hpp"

namespace turbda {

// A forecast model instance: advances one flattened state in place.  Each
// worker owns its own instance (scratch buffers, FFT plans), created through
// a StepperFactory.
class Stepper {
public:
    virtual ~Stepper() = default;
    virtual void advance(std::vector<double>& state, double hours) = 0;
    virtual double dt() const = 0;
    virtual double max_cfl() const { return 0.0; }
};

using StepperFactory = std::function<std::unique_ptr<Stepper>()>;

class SqgStepper : public Stepper {
public:
    SqgStepper(const GridSpec& grid, const SqgParams& params);
    void advance(std::vector<double>& state, double hours) override;
    double dt() const override { return model_.params().dt; }
    double max_cfl() const override { return model_.max_cfl(); }
    SqgModel& model() { return model_; }

private:
    SqgModel model_;
};

StepperFactory sqg_stepper_factory(const GridSpec& grid,
                                   const SqgParams& params);

// duration must be a non-negative multiple of the model dt; duration = 0 is
// the exact identity
void advance(std::vector<double>& state, double hours, Stepper& stepper);

// Each member advanced independently; bitwise independent of worker count.
// max_cfl_out (optional) receives the largest advective CFL value seen.
Ensemble propagate_ensemble(const Ensemble& ens, double hours,
                            const StepperFactory& factory, int workers,
                            double* max_cfl_out = nullptr);

struct ModelErrorConfig {
    // (probability, amplitude fraction) categories; leftover probability
    // means "no perturbation at this point"
    std::vector<std::pair<double, double>> mixture = {
        {0.20, 0.2}, {0.15, 0.3}, {0.10, 0.4}, {0.05, 0.5}};
    double base_amplitude = 0.0;  // climatological RMS of theta
    bool enabled = true;

    void validate() const {
        double psum = 0.0;
        for (const auto& [p, a] : mixture) {
            if (p < 0.0) throw ConfigError("model error: probability >= 0");
            if (!(a > 0.0)) throw ConfigError("model error: fraction > 0");
            psum += p;
        }
        if (psum > 1.0 + 1e-12)
            throw ConfigError("model error: probabilities sum to <= 1");
    }
};

// Per member, per grid point: draw a category (or none) and add a
// zero-mean Gaussian with sd = fraction * base_amplitude.  Keyed by the
// member's own seed and the cycle index, so execution order is irrelevant
// and changing one member's seed only changes that member.
Ensemble inject_model_error(const Ensemble& ens, const ModelErrorConfig& cfg,
                            std::uint64_t cycle);

// root-mean-square of theta over all points and snapshots
double climatological_amplitude(
    const std::vector<std::vector<double>>& trajectory);

}  // namespace turbda
