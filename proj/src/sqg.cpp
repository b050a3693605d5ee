#include "turbda/sqg.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace turbda {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

// owns the fused-tendency FFT plans: one c2r over the four advection
// variables (u, v, theta_x, theta_y) on both levels, one r2c for the product
struct SqgModel::Scratch {
    fftw_complex* cvar = nullptr;  // [4][nz][ny][nkx]
    double* gvar = nullptr;        // [4][nz][ny][nx]
    fftw_complex* cten = nullptr;  // [nz][ny][nkx]
    double* gten = nullptr;        // [nz][ny][nx]
    fftw_plan c2r_vars = nullptr;
    fftw_plan r2c_ten = nullptr;

    std::vector<std::complex<double>> k1, k2, k3, k4, stage;
    double stage_cfl = 0.0;

    ~Scratch() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        if (c2r_vars) fftw_destroy_plan(c2r_vars);
        if (r2c_ten) fftw_destroy_plan(r2c_ten);
        if (cvar) fftw_free(cvar);
        if (gvar) fftw_free(gvar);
        if (cten) fftw_free(cten);
        if (gten) fftw_free(gten);
    }
};

SqgModel::SqgModel(const GridSpec& grid, const SqgParams& params)
    : grid_(grid), params_(params), transform_(grid) {
    grid_.validate();
    params_.validate();

    const int nx = grid_.nx, ny = grid_.ny, nkx = grid_.nkx(), nz = grid_.nz;
    const std::size_t nmode = std::size_t(ny) * nkx;
    const std::size_t nstate = std::size_t(nz) * nmode;

    kx_.resize(nmode);
    ky_.resize(nmode);
    mask_.resize(nmode);
    i00_.resize(nmode);
    i01_.resize(nmode);
    i11_.resize(nmode);
    e_full_.resize(nstate);
    e_half_.resize(nstate);

    const int cx = nx / 3, cy = ny / 3;
    kappa_cut_ = std::hypot(kTwoPi * cx / grid_.lx, kTwoPi * cy / grid_.ly);
    nu_ = 1.0 / (params_.hyper_efold *
                 std::pow(kappa_cut_ * kappa_cut_, params_.hyper_order));

    for (int jy = 0; jy < ny; ++jy) {
        const int jys = jy <= ny / 2 ? jy : jy - ny;
        for (int jx = 0; jx < nkx; ++jx) {
            const std::size_t i = std::size_t(jy) * nkx + jx;
            kx_[i] = kTwoPi * jx / grid_.lx;
            ky_[i] = kTwoPi * jys / grid_.ly;
            mask_[i] = dealias_keep(grid_, jx, jys) ? 1.0 : 0.0;

            const double kappa = std::hypot(kx_[i], ky_[i]);
            if (kappa > 0.0) {
                const double m = params_.n * kappa / params_.f;
                const double mu = m * grid_.h;
                const double coth = 1.0 / std::tanh(mu);
                const double csch = 1.0 / std::sinh(mu);
                i00_[i] = -coth / m;
                i01_[i] = csch / m;
                i11_[i] = coth / m;
            } else {
                i00_[i] = i01_[i] = i11_[i] = 0.0;  // psi gauge: zero mean
            }

            const double k2 = kx_[i] * kx_[i] + ky_[i] * ky_[i];
            double lambda = nu_ * std::pow(k2, params_.hyper_order);
            if (kappa > 0.0 && params_.drag_tau > 0.0)
                lambda += 1.0 / params_.drag_tau;
            const double ef = std::exp(-lambda * params_.dt);
            const double eh = std::exp(-0.5 * lambda * params_.dt);
            for (int lev = 0; lev < nz; ++lev) {
                e_full_[lev * nmode + i] = ef;
                e_half_[lev * nmode + i] = eh;
            }
        }
    }

    s_ = std::make_unique<Scratch>();
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        const int n2[2] = {ny, nx};
        const int rdist = ny * nx, cdist = ny * nkx;
        s_->cvar = fftw_alloc_complex(4 * nz * std::size_t(cdist));
        s_->gvar = fftw_alloc_real(4 * nz * std::size_t(rdist));
        s_->cten = fftw_alloc_complex(nz * std::size_t(cdist));
        s_->gten = fftw_alloc_real(nz * std::size_t(rdist));
        s_->c2r_vars =
            fftw_plan_many_dft_c2r(2, n2, 4 * nz, s_->cvar, nullptr, 1, cdist,
                                   s_->gvar, nullptr, 1, rdist, FFTW_ESTIMATE);
        s_->r2c_ten =
            fftw_plan_many_dft_r2c(2, n2, nz, s_->gten, nullptr, 1, rdist,
                                   s_->cten, nullptr, 1, cdist, FFTW_ESTIMATE);
        if (!s_->c2r_vars || !s_->r2c_ten)
            throw ConfigError("fftw plan creation failed");
    }
    s_->k1.resize(nstate);
    s_->k2.resize(nstate);
    s_->k3.resize(nstate);
    s_->k4.resize(nstate);
    s_->stage.resize(nstate);
}

SqgModel::~SqgModel() = default;

SpectralField SqgModel::forward_transform(const PhysicalField& field) {
    return transform_.forward(field);
}

PhysicalField SqgModel::inverse_transform(const SpectralField& spec) {
    return transform_.inverse(spec);
}

SpectralField SqgModel::invert_theta(const SpectralField& theta_hat) const {
    if (!(theta_hat.grid == grid_))
        throw DimensionError("invert_theta: grid mismatch");
    const std::size_t nmode = std::size_t(grid_.ny) * grid_.nkx();
    SpectralField psi(grid_);
    for (std::size_t i = 0; i < nmode; ++i) {
        const auto t0 = theta_hat.coeffs[i];
        const auto t1 = theta_hat.coeffs[nmode + i];
        psi.coeffs[i] = i00_[i] * t0 + i01_[i] * t1;
        psi.coeffs[nmode + i] = -i01_[i] * t0 + i11_[i] * t1;
    }
    return psi;
}

SpectralField SqgModel::theta_from_psi(const SpectralField& psi_hat) const {
    if (!(psi_hat.grid == grid_))
        throw DimensionError("theta_from_psi: grid mismatch");
    const std::size_t nmode = std::size_t(grid_.ny) * grid_.nkx();
    SpectralField theta(grid_);
    for (std::size_t i = 0; i < nmode; ++i) {
        const double kappa = std::hypot(kx_[i], ky_[i]);
        if (kappa == 0.0) {
            theta.coeffs[i] = theta.coeffs[nmode + i] = 0.0;
            continue;
        }
        const double m = params_.n * kappa / params_.f;
        const double mu = m * grid_.h;
        const double ch = std::cosh(mu), sh = std::sinh(mu);
        const auto p0 = psi_hat.coeffs[i];
        const auto p1 = psi_hat.coeffs[nmode + i];
        theta.coeffs[i] = m * (p1 - p0 * ch) / sh;
        theta.coeffs[nmode + i] = m * (p1 * ch - p0) / sh;
    }
    return theta;
}

std::pair<PhysicalField, PhysicalField> SqgModel::velocities(
    const SpectralField& psi_hat) {
    if (!(psi_hat.grid == grid_))
        throw DimensionError("velocities: grid mismatch");
    const std::size_t nmode = std::size_t(grid_.ny) * grid_.nkx();
    SpectralField uh(grid_), vh(grid_);
    const std::complex<double> im(0.0, 1.0);
    for (int lev = 0; lev < grid_.nz; ++lev) {
        for (std::size_t i = 0; i < nmode; ++i) {
            const auto p = psi_hat.coeffs[lev * nmode + i];
            uh.coeffs[lev * nmode + i] = -im * ky_[i] * p;
            vh.coeffs[lev * nmode + i] = im * kx_[i] * p;
        }
    }
    return {transform_.inverse(uh), transform_.inverse(vh)};
}

void SqgModel::tendency_raw(const std::vector<std::complex<double>>& theta,
                            std::vector<std::complex<double>>& out) {
    const int nx = grid_.nx, ny = grid_.ny, nkx = grid_.nkx(), nz = grid_.nz;
    const std::size_t nmode = std::size_t(ny) * nkx;
    const std::size_t cdist = nmode;
    const std::size_t rdist = std::size_t(ny) * nx;

    // spectral planes: u, v, theta_x, theta_y for both levels
    fftw_complex* cu = s_->cvar;
    fftw_complex* cv = s_->cvar + nz * cdist;
    fftw_complex* ctx = s_->cvar + 2 * nz * cdist;
    fftw_complex* cty = s_->cvar + 3 * nz * cdist;
    for (std::size_t i = 0; i < nmode; ++i) {
        const double msk = mask_[i];
        const double kx = kx_[i], ky = ky_[i];
        const std::complex<double> t0 = theta[i] * msk;
        const std::complex<double> t1 = theta[nmode + i] * msk;
        const std::complex<double> p0 = i00_[i] * t0 + i01_[i] * t1;
        const std::complex<double> p1 = -i01_[i] * t0 + i11_[i] * t1;
        // multiply by i*k: (re,im) -> (-k*im, k*re)
        cu[i][0] = ky * p0.imag();
        cu[i][1] = -ky * p0.real();
        cu[cdist + i][0] = ky * p1.imag();
        cu[cdist + i][1] = -ky * p1.real();
        cv[i][0] = -kx * p0.imag();
        cv[i][1] = kx * p0.real();
        cv[cdist + i][0] = -kx * p1.imag();
        cv[cdist + i][1] = kx * p1.real();
        ctx[i][0] = -kx * t0.imag();
        ctx[i][1] = kx * t0.real();
        ctx[cdist + i][0] = -kx * t1.imag();
        ctx[cdist + i][1] = kx * t1.real();
        cty[i][0] = -ky * t0.imag();
        cty[i][1] = ky * t0.real();
        cty[cdist + i][0] = -ky * t1.imag();
        cty[cdist + i][1] = ky * t1.real();
    }
    fftw_execute(s_->c2r_vars);

    const double* gu = s_->gvar;
    const double* gv = s_->gvar + nz * rdist;
    const double* gtx = s_->gvar + 2 * nz * rdist;
    const double* gty = s_->gvar + 3 * nz * rdist;
    const double grad_bg = params_.u0 / grid_.h;  // -dTheta/dy
    double umax = 0.0, vmax = 0.0;
    for (int lev = 0; lev < nz; ++lev) {
        const double ubg = (lev == 0 ? -0.5 : 0.5) * params_.u0;
        const double* u = gu + lev * rdist;
        const double* v = gv + lev * rdist;
        const double* tx = gtx + lev * rdist;
        const double* ty = gty + lev * rdist;
        double* t = s_->gten + lev * rdist;
        for (std::size_t i = 0; i < rdist; ++i) {
            const double ut = u[i] + ubg;
            t[i] = -(ut * tx[i] + v[i] * ty[i]) + grad_bg * v[i];
            const double au = std::fabs(ut), av = std::fabs(v[i]);
            if (au > umax) umax = au;
            if (av > vmax) vmax = av;
        }
    }
    s_->stage_cfl = params_.dt * std::max(umax / grid_.dx(), vmax / grid_.dy());

    fftw_execute(s_->r2c_ten);
    const double scale = 1.0 / (double(nx) * ny);
    for (int lev = 0; lev < nz; ++lev) {
        const fftw_complex* c = s_->cten + lev * cdist;
        for (std::size_t i = 0; i < nmode; ++i) {
            const double w = scale * mask_[i];
            out[lev * nmode + i] = std::complex<double>(c[i][0] * w, c[i][1] * w);
        }
    }
}

SpectralField SqgModel::tendency(const SpectralField& theta_hat) {
    if (!(theta_hat.grid == grid_))
        throw DimensionError("tendency: grid mismatch");
    SpectralField out(grid_);
    tendency_raw(theta_hat.coeffs, out.coeffs);
    last_cfl_ = s_->stage_cfl;
    if (last_cfl_ > max_cfl_) max_cfl_ = last_cfl_;
    return out;
}

void SqgModel::step_rk4_inplace(SpectralField& theta_hat) {
    if (!(theta_hat.grid == grid_))
        throw DimensionError("step_rk4: grid mismatch");
    double cfl = 0.0;
    auto tend = [this, &cfl](const std::vector<std::complex<double>>& in,
                             std::vector<std::complex<double>>& out) {
        tendency_raw(in, out);
        if (s_->stage_cfl > cfl) cfl = s_->stage_cfl;
    };
    ifrk4_step(theta_hat.coeffs, params_.dt, e_full_, e_half_, tend, s_->k1,
               s_->k2, s_->k3, s_->k4, s_->stage);

    const std::size_t nmode = std::size_t(grid_.ny) * grid_.nkx();
    bool finite = true;
    for (int lev = 0; lev < grid_.nz; ++lev) {
        for (std::size_t i = 0; i < nmode; ++i) {
            auto& c = theta_hat.coeffs[lev * nmode + i];
            c *= mask_[i];
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                finite = false;
        }
    }
    t_hours_ += params_.dt;
    last_cfl_ = cfl;
    if (cfl > max_cfl_) max_cfl_ = cfl;
    if (!finite) throw BlowupError(t_hours_);
}

SpectralField SqgModel::step_rk4(const SpectralField& theta_hat) {
    SpectralField out = theta_hat;
    step_rk4_inplace(out);
    return out;
}

std::vector<KeBin> SqgModel::ke_spectrum(const SpectralField& theta_hat) const {
    if (!(theta_hat.grid == grid_))
        throw DimensionError("ke_spectrum: grid mismatch");
    if (grid_.lx != grid_.ly)
        throw ConfigError("ke_spectrum: requires lx == ly");
    const int nkx = grid_.nkx();
    const std::size_t nmode = std::size_t(grid_.ny) * nkx;
    const double dk = kTwoPi / grid_.lx;

    const double kmax =
        std::hypot(kTwoPi * (grid_.nx / 2) / grid_.lx,
                   kTwoPi * (grid_.ny / 2) / grid_.ly);
    const int nshell = int(std::lround(kmax / dk)) + 1;
    std::vector<KeBin> bins(nshell);
    for (int sbin = 0; sbin < nshell; ++sbin) bins[sbin] = {sbin * dk, 0.0};

    SpectralField psi = invert_theta(theta_hat);
    for (int lev = 0; lev < grid_.nz; ++lev) {
        for (std::size_t i = 0; i < nmode; ++i) {
            const int jx = int(i % nkx);
            const double kappa = std::hypot(kx_[i], ky_[i]);
            const int sbin = int(std::lround(kappa / dk));
            const auto p = psi.coeffs[lev * nmode + i];
            const double u2 = std::norm(ky_[i] * p) + std::norm(kx_[i] * p);
            const double w = (jx == 0 || jx == grid_.nx / 2) ? 1.0 : 2.0;
            bins[sbin].energy += 0.5 * w * u2 / grid_.nz;
        }
    }
    return bins;
}

double fit_loglog_slope(const std::vector<KeBin>& spectrum, int lo_shell,
                        int hi_shell) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int sbin = lo_shell; sbin <= hi_shell; ++sbin) {
        if (sbin < 0 || sbin >= int(spectrum.size())) continue;
        if (spectrum[sbin].energy <= 0.0 || spectrum[sbin].kappa <= 0.0)
            continue;
        const double x = std::log(spectrum[sbin].kappa);
        const double y = std::log(spectrum[sbin].energy);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2)
        throw ConfigError("slope fit needs at least two non-empty bins");
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

}  // namespace turbda
