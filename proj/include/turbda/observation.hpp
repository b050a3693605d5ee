#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "turbda/grid.hpp"
#include "turbda/rng.hpp"

namespace turbda {

enum class ObsOperatorKind { identity, index_selection };

// Linear observation operator: either the identity on the flattened state or
// a selection of flat state indices.
struct ObsOperator {
    ObsOperatorKind kind = ObsOperatorKind::identity;
    std::size_t state_dim = 0;
    std::vector<std::size_t> indices;  // used by index_selection

    std::size_t obs_dim() const {
        return kind == ObsOperatorKind::identity ? state_dim : indices.size();
    }
};

std::vector<double> apply_operator(const ObsOperator& op,
                                   const std::vector<double>& state);

// scatter obs-space vector back to state space (adjoint of apply_operator)
std::vector<double> adjoint_scatter(const ObsOperator& op,
                                    const std::vector<double>& w);

struct Observation {
    std::vector<double> y;
    std::vector<std::array<double, 2>> locations;  // (ix, iy) per scalar obs
    ObsOperator op;
    std::vector<double> r_diag;
    double time = 0.0;

    void validate() const {
        if (y.size() != locations.size() || y.size() != r_diag.size() ||
            y.size() != op.obs_dim())
            throw DimensionError("observation: length mismatch");
        for (double r : r_diag)
            if (!(r > 0.0)) throw ConfigError("observation: r_diag > 0");
    }
};

// identity operator over the grid, optionally thinned to every `stride`-th
// point of the flattened state
ObsOperator make_grid_operator(const GridSpec& grid, int thinning_stride = 0);

// obs locations (horizontal grid coordinates) for a grid operator
std::vector<std::array<double, 2>> operator_locations(const GridSpec& grid,
                                                      const ObsOperator& op);

// y = h(truth) + eta, eta ~ N(0, diag(r)); keyed by (seed, cycle)
Observation synthesize_observations(const std::vector<double>& truth,
                                    const GridSpec& grid,
                                    const ObsOperator& op, double r_variance,
                                    double time_hours, std::uint64_t seed,
                                    std::uint64_t cycle);

}  // namespace turbda
