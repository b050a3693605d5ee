#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "turbda/observation.hpp"

using namespace turbda;

TEST_CASE("ensemble mean, rmse and spread basics") {
    Ensemble ens;
    ens.members = {{1.0, 2.0}, {3.0, 4.0}};
    ens.member_seeds = {1, 2};
    const auto mean = ensemble_mean(ens);
    CHECK(mean[0] == 2.0);
    CHECK(mean[1] == 3.0);

    CHECK(rmse(mean, {2.0, 3.0}) == 0.0);
    CHECK(rmse({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(std::sqrt(12.5)));

    // identical members: zero spread
    Ensemble flat;
    flat.members = {{5.0, -1.0}, {5.0, -1.0}, {5.0, -1.0}};
    flat.member_seeds = {1, 2, 3};
    CHECK(spread(flat) == 0.0);

    // members +1 and -1 in every variable: per-variable variance 2
    Ensemble pm;
    pm.members = {std::vector<double>(8, 1.0), std::vector<double>(8, -1.0)};
    pm.member_seeds = {1, 2};
    CHECK(spread(pm) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("ensemble validation") {
    Ensemble ens;
    ens.members = {{1.0, 2.0}};
    ens.member_seeds = {1};
    CHECK_THROWS_AS(ens.validate(), DimensionError);
    CHECK_NOTHROW(ens.validate(false));
    ens.members.push_back({1.0});
    ens.member_seeds.push_back(2);
    CHECK_THROWS_AS(ens.validate(), DimensionError);  // ragged
    ens.members[1] = {0.0, 0.0};
    CHECK_NOTHROW(ens.validate());
    ens.member_seeds.pop_back();
    CHECK_THROWS_AS(ens.validate(), DimensionError);  // seed count
}

TEST_CASE("identity and thinned grid operators") {
    const GridSpec g = testutil::small_grid(16);
    const ObsOperator ident = make_grid_operator(g, 0);
    CHECK(ident.kind == ObsOperatorKind::identity);
    CHECK(ident.obs_dim() == g.grid_size());

    const ObsOperator thin = make_grid_operator(g, 4);
    CHECK(thin.kind == ObsOperatorKind::index_selection);
    CHECK(thin.obs_dim() == g.grid_size() / 4);

    const auto state = testutil::gaussian_vec(g.grid_size(), 3);
    const auto full = apply_operator(ident, state);
    CHECK(full == state);
    const auto some = apply_operator(thin, state);
    REQUIRE(some.size() == thin.obs_dim());
    for (std::size_t i = 0; i < some.size(); ++i)
        CHECK(some[i] == state[thin.indices[i]]);
}

TEST_CASE("adjoint scatter really is the adjoint") {
    const GridSpec g = testutil::small_grid(16);
    for (int stride : {0, 4}) {
        const ObsOperator op = make_grid_operator(g, stride);
        const auto x = testutil::gaussian_vec(g.grid_size(), 10);
        const auto w = testutil::gaussian_vec(op.obs_dim(), 11);
        const auto hx = apply_operator(op, x);
        const auto htw = adjoint_scatter(op, w);
        double lhs = 0, rhs = 0;  // <Hx, w> == <x, H^T w>
        for (std::size_t i = 0; i < w.size(); ++i) lhs += hx[i] * w[i];
        for (std::size_t i = 0; i < x.size(); ++i) rhs += x[i] * htw[i];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("operator locations sit on the horizontal grid") {
    const GridSpec g = testutil::small_grid(16);
    const ObsOperator op = make_grid_operator(g, 0);
    const auto locs = operator_locations(g, op);
    REQUIRE(locs.size() == op.obs_dim());
    // flattened [nz][ny][nx]: the horizontal position repeats over levels
    CHECK(locs[0][0] == 0.0);
    CHECK(locs[0][1] == 0.0);
    CHECK(locs[1][0] == 1.0);  // ix advances fastest
    CHECK(locs[1][1] == 0.0);
    CHECK(locs[16][0] == 0.0);
    CHECK(locs[16][1] == 1.0);
    const std::size_t plane = std::size_t(g.nx) * g.ny;
    CHECK(locs[plane][0] == locs[0][0]);  // level 1 mirrors level 0
    CHECK(locs[plane][1] == locs[0][1]);
}

TEST_CASE("synthesized observations have the configured noise moments") {
    const GridSpec g = testutil::small_grid(16);
    const ObsOperator op = make_grid_operator(g, 0);
    const auto truth = testutil::gaussian_vec(g.grid_size(), 20, 1.0, 2.0);

    // r -> 0 reproduces the truth exactly at observed points
    const Observation clean =
        synthesize_observations(truth, g, op, 0.0, 12.0, 7, 1);
    CHECK(testutil::max_abs_diff(clean.y, truth) == 0.0);

    // moment check over many cycles: residual variance ~ r
    const double r = 0.64;
    double sum = 0, sum2 = 0;
    std::size_t count = 0;
    for (std::uint64_t cycle = 1; cycle <= 40; ++cycle) {
        const Observation obs =
            synthesize_observations(truth, g, op, r, 12.0 * cycle, 7, cycle);
        for (std::size_t i = 0; i < obs.y.size(); ++i) {
            const double e = obs.y[i] - truth[i];
            sum += e;
            sum2 += e * e;
            ++count;
        }
    }
    const double mean = sum / double(count);
    const double var = sum2 / double(count) - mean * mean;
    CHECK(std::fabs(mean) < 0.02);
    CHECK(var / r == doctest::Approx(1.0).epsilon(0.03));

    // different cycles use different noise
    const Observation a = synthesize_observations(truth, g, op, r, 0.0, 7, 1);
    const Observation b = synthesize_observations(truth, g, op, r, 0.0, 7, 2);
    CHECK(testutil::max_abs_diff(a.y, b.y) > 0.0);
    const Observation c = synthesize_observations(truth, g, op, r, 0.0, 7, 1);
    CHECK(a.y == c.y);
}

TEST_CASE("observation validation") {
    Observation obs = testutil::identity_obs({1.0, 2.0}, 1.0);
    CHECK_NOTHROW(obs.validate());
    obs.r_diag[1] = 0.0;
    CHECK_THROWS_AS(obs.validate(), ConfigError);
    obs = testutil::identity_obs({1.0, 2.0}, 1.0);
    obs.y.push_back(3.0);
    CHECK_THROWS_AS(obs.validate(), DimensionError);
}
