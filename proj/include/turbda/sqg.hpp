#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "turbda/grid.hpp"
#include "turbda/spectral.hpp"

namespace turbda {

// Nondimensional two-boundary Eady SQG: zero interior PV, theta = psi_z
// carried at z = 0 and z = H, advected by the boundary geostrophic flow plus
// a uniform shear U(0) = -u0/2, U(H) = +u0/2 with background gradient
// dTheta/dy = -u0/H.  Hyperdiffusion (del^(2p)) and a weak large-scale
// Rayleigh drag are applied through an exact integrating factor.
struct SqgParams {
    double f = 1.0;    // Coriolis
    double n = 10.0;   // buoyancy frequency
    double u0 = 0.1;   // shear velocity difference across the layer
    int hyper_order = 4;
    double hyper_efold = 5.0;  // e-folding time (hours) of the cutoff mode
    double dt = 0.25;          // hours
    double drag_tau = 200.0;   // Rayleigh drag timescale (hours); 0 = off
    double dealias_fraction = 2.0 / 3.0;

    void validate() const {
        if (f <= 0 || n <= 0 || u0 < 0 || hyper_efold <= 0 || dt <= 0)
            throw ConfigError("sqg: f, n, hyper_efold, dt must be positive");
        if (hyper_order < 1) throw ConfigError("sqg: hyper_order >= 1");
        if (drag_tau < 0) throw ConfigError("sqg: drag_tau >= 0");
        if (dealias_fraction != 2.0 / 3.0)
            throw ConfigError("sqg: dealias_fraction is fixed at 2/3");
    }

    bool operator==(const SqgParams&) const = default;
};

struct KeBin {
    double kappa;
    double energy;
};

// least-squares log-log slope over shells [lo_shell, hi_shell] (zero bins
// skipped); throws ConfigError when fewer than two usable bins remain
double fit_loglog_slope(const std::vector<KeBin>& spectrum, int lo_shell,
                        int hi_shell);

// Generic integrating-factor RK4 step: d(theta)/dt = tend(theta) for the
// explicit part, with per-mode decay factors e_full = exp(-lambda*dt) and
// e_half for the implicit part.  tend(in, out) must not alias.
template <class TendFn>
void ifrk4_step(std::vector<std::complex<double>>& theta, double dt,
                const std::vector<double>& e_full,
                const std::vector<double>& e_half, TendFn&& tend,
                std::vector<std::complex<double>>& k1,
                std::vector<std::complex<double>>& k2,
                std::vector<std::complex<double>>& k3,
                std::vector<std::complex<double>>& k4,
                std::vector<std::complex<double>>& stage) {
    const std::size_t n = theta.size();
    tend(theta, k1);
    for (std::size_t i = 0; i < n; ++i)
        stage[i] = e_half[i] * (theta[i] + 0.5 * dt * k1[i]);
    tend(stage, k2);
    for (std::size_t i = 0; i < n; ++i)
        stage[i] = e_half[i] * theta[i] + 0.5 * dt * k2[i];
    tend(stage, k3);
    for (std::size_t i = 0; i < n; ++i)
        stage[i] = e_full[i] * theta[i] + dt * e_half[i] * k3[i];
    tend(stage, k4);
    for (std::size_t i = 0; i < n; ++i)
        theta[i] =
            e_full[i] * theta[i] +
            dt / 6.0 *
                (e_full[i] * k1[i] + 2.0 * e_half[i] * (k2[i] + k3[i]) + k4[i]);
}

class SqgModel {
public:
    SqgModel(const GridSpec& grid, const SqgParams& params);
    ~SqgModel();

    SqgModel(const SqgModel&) = delete;
    SqgModel& operator=(const SqgModel&) = delete;

    SpectralField forward_transform(const PhysicalField& field);
    PhysicalField inverse_transform(const SpectralField& spec);

    // boundary streamfunction from boundary theta (and its inverse map)
    SpectralField invert_theta(const SpectralField& theta_hat) const;
    SpectralField theta_from_psi(const SpectralField& psi_hat) const;

    std::pair<PhysicalField, PhysicalField> velocities(
        const SpectralField& psi_hat);

    // non-diffusive part of d(theta_hat)/dt, dealiased
    SpectralField tendency(const SpectralField& theta_hat);

    // one dt step: RK4 on the advective tendency + integrating-factor
    // hyperdiffusion/drag; output dealiased; throws BlowupError on NaN/Inf
    SpectralField step_rk4(const SpectralField& theta_hat);
    void step_rk4_inplace(SpectralField& theta_hat);

    // shell-summed kinetic energy, bins at kappa = s * (2*pi/lx)
    std::vector<KeBin> ke_spectrum(const SpectralField& theta_hat) const;

    double last_cfl() const { return last_cfl_; }
    double max_cfl() const { return max_cfl_; }
    void reset_cfl() { max_cfl_ = 0.0; }

    void set_time(double hours) { t_hours_ = hours; }
    double time() const { return t_hours_; }

    const GridSpec& grid() const { return grid_; }
    const SqgParams& params() const { return params_; }
    double kappa_cut() const { return kappa_cut_; }
    double nu() const { return nu_; }

private:
    struct Scratch;
    void tendency_raw(const std::vector<std::complex<double>>& theta,
                      std::vector<std::complex<double>>& out);

    GridSpec grid_;
    SqgParams params_;
    SpectralTransform transform_;
    std::unique_ptr<Scratch> s_;

    std::vector<double> kx_, ky_;          // per spectral index
    std::vector<double> mask_;             // 1/0 dealias mask
    std::vector<double> i00_, i01_, i11_;  // inversion coefficients
    std::vector<double> e_full_, e_half_;  // integrating factors
    double kappa_cut_ = 0.0;
    double nu_ = 0.0;
    double last_cfl_ = 0.0;
    double max_cfl_ = 0.0;
    double t_hours_ = 0.0;
};

}  // namespace turbda
