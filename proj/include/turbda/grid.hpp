#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "turbda/errors.hpp"

namespace turbda {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Doubly periodic horizontal grid with two boundary levels (z = 0 and z = H).
struct GridSpec {
    int nx = 64;
    int ny = 64;
    int nz = 2;
    double lx = 62.83185307179586;  // 2*pi*10
    double ly = 62.83185307179586;
    double h = 0.3;  // layer depth

    int nkx() const { return nx / 2 + 1; }
    std::size_t grid_size() const {
        return std::size_t(nz) * ny * nx;
    }
    std::size_t spec_size() const {
        return std::size_t(nz) * ny * nkx();
    }
    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }

    void validate() const {
        if (!is_power_of_two(nx) || !is_power_of_two(ny) || nx < 8 || ny < 8)
            throw ConfigError("grid: nx, ny must be powers of two >= 8");
        if (nz != 2) throw ConfigError("grid: nz must be 2");
        if (lx <= 0 || ly <= 0 || h <= 0)
            throw ConfigError("grid: lx, ly, h must be positive");
    }

    bool operator==(const GridSpec&) const = default;
};

// theta on the grid, [nz][ny][nx] row-major
struct PhysicalField {
    GridSpec grid;
    std::vector<double> data;

    PhysicalField() = default;
    explicit PhysicalField(const GridSpec& g)
        : grid(g), data(g.grid_size(), 0.0) {}
    PhysicalField(const GridSpec& g, std::vector<double> d)
        : grid(g), data(std::move(d)) {
        if (data.size() != g.grid_size())
            throw DimensionError("PhysicalField: data size does not match grid");
    }

    double& at(int lev, int iy, int ix) {
        return data[(std::size_t(lev) * grid.ny + iy) * grid.nx + ix];
    }
    double at(int lev, int iy, int ix) const {
        return data[(std::size_t(lev) * grid.ny + iy) * grid.nx + ix];
    }
};

// r2c transform of theta, [nz][ny][nx/2+1] row-major
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g)
        : grid(g), coeffs(g.spec_size(), {0.0, 0.0}) {}

    std::complex<double>& at(int lev, int jy, int jx) {
        return coeffs[(std::size_t(lev) * grid.ny + jy) * grid.nkx() + jx];
    }
    std::complex<double> at(int lev, int jy, int jx) const {
        return coeffs[(std::size_t(lev) * grid.ny + jy) * grid.nkx() + jx];
    }
};

}  // namespace turbda
