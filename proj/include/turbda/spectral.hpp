#pragma once

#include "turbda/grid.hpp"

namespace turbda {

// FFTW-backed transforms between PhysicalField and SpectralField.  Forward
// output is normalized by 1/(nx*ny) so the (0,0) coefficient is the domain
// mean and roundtrips are exact to rounding.
//
// Each instance owns its plans and scratch buffers, so distinct instances may
// run concurrently (plan creation itself is serialized internally; FFTW plan
// creation is not thread safe).  Plans use FFTW_ESTIMATE: planning is then a
// deterministic function of the shape, which keeps results bitwise
// reproducible across runs and worker counts.
class SpectralTransform {
public:
    explicit SpectralTransform(const GridSpec& grid);
    ~SpectralTransform();

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    SpectralField forward(const PhysicalField& field);
    PhysicalField inverse(const SpectralField& spec);

    // in-place raw transforms on caller buffers of grid shape
    void forward_raw(const double* in, std::complex<double>* out);
    void inverse_raw(const std::complex<double>* in, double* out);

    const GridSpec& grid() const { return grid_; }

private:
    GridSpec grid_;
    void* plan_fwd_ = nullptr;  // fftw_plan, kept opaque here
    void* plan_bwd_ = nullptr;
    double* real_buf_ = nullptr;
    void* cplx_buf_ = nullptr;  // fftw_complex*
};

// Zeroes every mode with |jx| > nx/3 or |jy| > ny/3 (2/3 rule).  Idempotent.
void dealias(SpectralField& spec);

// true if the mode (jx, jy signed) survives the 2/3 rule
bool dealias_keep(const GridSpec& grid, int jx, int jy_signed);

}  // namespace turbda
