#include "turbda/observation.hpp"

#include <cmath>

namespace turbda {

std::vector<double> apply_operator(const ObsOperator& op,
                                   const std::vector<double>& state) {
    if (state.size() != op.state_dim)
        throw DimensionError("apply_operator: state dimension mismatch");
    if (op.kind == ObsOperatorKind::identity) return state;
    std::vector<double> out(op.indices.size());
    for (std::size_t k = 0; k < op.indices.size(); ++k)
        out[k] = state[op.indices[k]];
    return out;
}

std::vector<double> adjoint_scatter(const ObsOperator& op,
                                    const std::vector<double>& w) {
    if (w.size() != op.obs_dim())
        throw DimensionError("adjoint_scatter: obs dimension mismatch");
    if (op.kind == ObsOperatorKind::identity) return w;
    std::vector<double> out(op.state_dim, 0.0);
    for (std::size_t k = 0; k < op.indices.size(); ++k)
        out[op.indices[k]] += w[k];
    return out;
}

ObsOperator make_grid_operator(const GridSpec& grid, int thinning_stride) {
    ObsOperator op;
    op.state_dim = grid.grid_size();
    if (thinning_stride <= 1) {
        op.kind = ObsOperatorKind::identity;
        return op;
    }
    op.kind = ObsOperatorKind::index_selection;
    for (std::size_t i = 0; i < op.state_dim;
         i += std::size_t(thinning_stride))
        op.indices.push_back(i);
    return op;
}

std::vector<std::array<double, 2>> operator_locations(const GridSpec& grid,
                                                      const ObsOperator& op) {
    std::vector<std::array<double, 2>> locs;
    const std::size_t plane = std::size_t(grid.ny) * grid.nx;
    auto coord = [&](std::size_t flat) -> std::array<double, 2> {
        const std::size_t h = flat % plane;
        return {double(h % grid.nx), double(h / grid.nx)};
    };
    if (op.kind == ObsOperatorKind::identity) {
        locs.reserve(op.state_dim);
        for (std::size_t i = 0; i < op.state_dim; ++i)
            locs.push_back(coord(i));
    } else {
        locs.reserve(op.indices.size());
        for (std::size_t i : op.indices) locs.push_back(coord(i));
    }
    return locs;
}

Observation synthesize_observations(const std::vector<double>& truth,
                                    const GridSpec& grid,
                                    const ObsOperator& op, double r_variance,
                                    double time_hours, std::uint64_t seed,
                                    std::uint64_t cycle) {
    if (!(r_variance >= 0.0))
        throw ConfigError("synthesize_observations: r must be >= 0");
    Observation obs;
    obs.op = op;
    obs.y = apply_operator(op, truth);
    obs.locations = operator_locations(grid, op);
    obs.time = time_hours;
    const double sd = std::sqrt(r_variance);
    RngStream stream(seed, StreamUse::obs_noise, cycle);
    for (auto& v : obs.y) v += sd * stream.normal();
    // R = 0 is allowed when synthesizing (y = h(x)); validate() enforces
    // positive variances before the value is used in an analysis
    obs.r_diag.assign(obs.y.size(), r_variance);
    return obs;
}

}  // namespace turbda
