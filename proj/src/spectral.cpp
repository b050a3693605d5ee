#include "turbda/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace turbda {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SpectralTransform::SpectralTransform(const GridSpec& grid) : grid_(grid) {
    grid_.validate();
    const int n[2] = {grid_.ny, grid_.nx};
    const int howmany = grid_.nz;
    const int rdist = grid_.ny * grid_.nx;
    const int cdist = grid_.ny * grid_.nkx();

    std::lock_guard<std::mutex> lock(plan_mutex());
    real_buf_ = fftw_alloc_real(std::size_t(howmany) * rdist);
    fftw_complex* cb = fftw_alloc_complex(std::size_t(howmany) * cdist);
    cplx_buf_ = cb;
    plan_fwd_ = fftw_plan_many_dft_r2c(2, n, howmany, real_buf_, nullptr, 1,
                                       rdist, cb, nullptr, 1, cdist,
                                       FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_many_dft_c2r(2, n, howmany, cb, nullptr, 1, cdist,
                                       real_buf_, nullptr, 1, rdist,
                                       FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw ConfigError("fftw plan creation failed");
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    if (real_buf_) fftw_free(real_buf_);
    if (cplx_buf_) fftw_free(static_cast<fftw_complex*>(cplx_buf_));
}

void SpectralTransform::forward_raw(const double* in,
                                    std::complex<double>* out) {
    const std::size_t nr = grid_.grid_size();
    const std::size_t nc = grid_.spec_size();
    std::memcpy(real_buf_, in, nr * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double scale = 1.0 / (double(grid_.nx) * grid_.ny);
    const fftw_complex* cb = static_cast<fftw_complex*>(cplx_buf_);
    for (std::size_t i = 0; i < nc; ++i)
        out[i] = std::complex<double>(cb[i][0] * scale, cb[i][1] * scale);
}

void SpectralTransform::inverse_raw(const std::complex<double>* in,
                                    double* out) {
    const std::size_t nr = grid_.grid_size();
    const std::size_t nc = grid_.spec_size();
    fftw_complex* cb = static_cast<fftw_complex*>(cplx_buf_);
    for (std::size_t i = 0; i < nc; ++i) {
        cb[i][0] = in[i].real();
        cb[i][1] = in[i].imag();
    }
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::memcpy(out, real_buf_, nr * sizeof(double));
}

SpectralField SpectralTransform::forward(const PhysicalField& field) {
    if (!(field.grid == grid_))
        throw DimensionError("forward transform: grid mismatch");
    SpectralField out(grid_);
    forward_raw(field.data.data(), out.coeffs.data());
    return out;
}

PhysicalField SpectralTransform::inverse(const SpectralField& spec) {
    if (!(spec.grid == grid_))
        throw DimensionError("inverse transform: grid mismatch");
    PhysicalField out(grid_);
    inverse_raw(spec.coeffs.data(), out.data.data());
    return out;
}

bool dealias_keep(const GridSpec& grid, int jx, int jy_signed) {
    const int cx = grid.nx / 3;
    const int cy = grid.ny / 3;
    return jx <= cx && jy_signed <= cy && jy_signed >= -cy;
}

void dealias(SpectralField& spec) {
    const GridSpec& g = spec.grid;
    const int nkx = g.nkx();
    for (int lev = 0; lev < g.nz; ++lev) {
        for (int jy = 0; jy < g.ny; ++jy) {
            const int jys = jy <= g.ny / 2 ? jy : jy - g.ny;
            for (int jx = 0; jx < nkx; ++jx) {
                if (!dealias_keep(g, jx, jys)) spec.at(lev, jy, jx) = 0.0;
            }
        }
    }
}

}  // namespace turbda
