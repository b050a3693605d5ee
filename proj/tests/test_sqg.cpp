#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "turbda/sqg.hpp"

using namespace turbda;
using testutil::small_grid;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

// solve psi'' = m^2 psi on [0, h] with psi'(0) = t0, psi'(h) = t1 by a
// second-order finite-difference scheme (Thomas algorithm); independent
// check of the closed-form boundary inversion
std::pair<double, double> bvp_psi(double m, double h, double t0, double t1,
                                  int n = 4000) {
    const double dz = h / n;
    std::vector<double> a(n + 1), b(n + 1), c(n + 1), r(n + 1);
    b[0] = -1.0 / dz - dz * m * m / 2.0;
    c[0] = 1.0 / dz;
    r[0] = t0;
    for (int i = 1; i < n; ++i) {
        a[i] = 1.0;
        b[i] = -(2.0 + dz * dz * m * m);
        c[i] = 1.0;
        r[i] = 0.0;
    }
    a[n] = -1.0 / dz;
    b[n] = 1.0 / dz + dz * m * m / 2.0;
    r[n] = t1;
    for (int i = 1; i <= n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        r[i] -= w * r[i - 1];
    }
    std::vector<double> psi(n + 1);
    psi[n] = r[n] / b[n];
    for (int i = n - 1; i >= 0; --i) psi[i] = (r[i] - c[i] * psi[i + 1]) / b[i];
    return {psi[0], psi[n]};
}

int signed_freq(int j, int n) { return j <= n / 2 ? j : j - n; }

// naive full-DFT implementation of the advective tendency, used as an oracle
// for the pseudo-spectral code path at 8x8
std::vector<cplx> naive_tendency(const GridSpec& g, const SqgParams& p,
                                 const std::vector<double>& theta) {
    const int n = g.nx;
    REQUIRE(g.ny == n);
    const int cut = n / 3;
    auto idx = [&](int l, int y, int x) { return (l * n + y) * n + x; };

    // forward DFT per level
    std::vector<std::vector<cplx>> that(2, std::vector<cplx>(n * n));
    for (int l = 0; l < 2; ++l)
        for (int jy = 0; jy < n; ++jy)
            for (int jx = 0; jx < n; ++jx) {
                cplx acc = 0;
                for (int y = 0; y < n; ++y)
                    for (int x = 0; x < n; ++x) {
                        const double ph =
                            -2.0 * kPi * (double(jx * x) / n + double(jy * y) / n);
                        acc += theta[idx(l, y, x)] * cplx(std::cos(ph), std::sin(ph));
                    }
                that[l][jy * n + jx] = acc / double(n * n);
            }

    // per-mode inversion and derivative coefficients
    std::vector<std::vector<cplx>> uhat(2, std::vector<cplx>(n * n, 0.0));
    auto vhat = uhat, txhat = uhat, tyhat = uhat;
    for (int jy = 0; jy < n; ++jy)
        for (int jx = 0; jx < n; ++jx) {
            const int fx = signed_freq(jx, n), fy = signed_freq(jy, n);
            if (std::abs(fx) > cut || std::abs(fy) > cut) continue;
            const double kx = 2.0 * kPi * fx / g.lx;
            const double ky = 2.0 * kPi * fy / g.ly;
            const double kappa = std::hypot(kx, ky);
            cplx psi0 = 0, psi1 = 0;
            if (kappa > 0) {
                const double m = p.n * kappa / p.f;
                const double mu = m * g.h;
                const cplx t0 = that[0][jy * n + jx], t1 = that[1][jy * n + jx];
                psi0 = (t1 - t0 * std::cosh(mu)) / (m * std::sinh(mu));
                psi1 = (t1 * std::cosh(mu) - t0) / (m * std::sinh(mu));
            }
            const cplx iu(0.0, 1.0);
            uhat[0][jy * n + jx] = -iu * ky * psi0;
            uhat[1][jy * n + jx] = -iu * ky * psi1;
            vhat[0][jy * n + jx] = iu * kx * psi0;
            vhat[1][jy * n + jx] = iu * kx * psi1;
            for (int l = 0; l < 2; ++l) {
                txhat[l][jy * n + jx] = iu * kx * that[l][jy * n + jx];
                tyhat[l][jy * n + jx] = iu * ky * that[l][jy * n + jx];
            }
        }

    auto to_grid = [&](const std::vector<cplx>& spec, int l) {
        std::vector<double> out(n * n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                cplx acc = 0;
                for (int jy = 0; jy < n; ++jy)
                    for (int jx = 0; jx < n; ++jx) {
                        const double ph =
                            2.0 * kPi * (double(jx * x) / n + double(jy * y) / n);
                        acc += spec[jy * n + jx] * cplx(std::cos(ph), std::sin(ph));
                    }
                out[y * n + x] = acc.real();
            }
        return out;
    };

    // grid-space tendency, then DFT and mask
    std::vector<double> tend(2 * n * n);
    for (int l = 0; l < 2; ++l) {
        const auto u = to_grid(uhat[l], l);
        const auto v = to_grid(vhat[l], l);
        const auto tx = to_grid(txhat[l], l);
        const auto ty = to_grid(tyhat[l], l);
        const double ubg = (l == 0 ? -0.5 : 0.5) * p.u0;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                tend[idx(l, y, x)] = -(u[y * n + x] + ubg) * tx[y * n + x] -
                                     v[y * n + x] * ty[y * n + x] +
                                     (p.u0 / g.h) * v[y * n + x];
    }

    // r2c layout to match SpectralField
    std::vector<cplx> out(std::size_t(2) * n * (n / 2 + 1), 0.0);
    for (int l = 0; l < 2; ++l)
        for (int jy = 0; jy < n; ++jy)
            for (int jx = 0; jx <= n / 2; ++jx) {
                const int fx = signed_freq(jx, n), fy = signed_freq(jy, n);
                if (std::abs(fx) > cut || std::abs(fy) > cut) continue;
                cplx acc = 0;
                for (int y = 0; y < n; ++y)
                    for (int x = 0; x < n; ++x) {
                        const double ph =
                            -2.0 * kPi * (double(jx * x) / n + double(jy * y) / n);
                        acc += tend[idx(l, y, x)] * cplx(std::cos(ph), std::sin(ph));
                    }
                out[(std::size_t(l) * n + jy) * (n / 2 + 1) + jx] =
                    acc / double(n * n);
            }
    return out;
}

SpectralField dealiased_random(SqgModel& model, std::uint64_t seed,
                               double amp = 1.0) {
    const GridSpec& g = model.grid();
    PhysicalField f(g, testutil::gaussian_vec(g.grid_size(), seed, 0.0, amp));
    auto spec = model.forward_transform(f);
    dealias(spec);
    return spec;
}

}  // namespace

TEST_CASE("boundary inversion matches the closed form at m = 1, H = 1") {
    GridSpec g = small_grid(16);
    g.lx = g.ly = 2.0 * kPi;  // jx = 1 -> kappa = 1
    g.h = 1.0;
    SqgParams p;
    p.n = 1.0;  // m = kappa
    SqgModel model(g, p);

    SpectralField theta(g);
    theta.at(0, 0, 1) = {1.0, 0.0};
    const auto psi = model.invert_theta(theta);
    CHECK(psi.at(0, 0, 1).real() ==
          doctest::Approx(-std::cosh(1.0) / std::sinh(1.0)).epsilon(1e-12));
    CHECK(psi.at(1, 0, 1).real() ==
          doctest::Approx(-1.0 / std::sinh(1.0)).epsilon(1e-12));
    CHECK(psi.at(0, 0, 1).imag() == doctest::Approx(0.0));
    // gauge: the horizontal-mean mode carries no streamfunction
    theta.at(0, 0, 0) = {5.0, 0.0};
    const auto psi2 = model.invert_theta(theta);
    CHECK(std::abs(psi2.at(0, 0, 0)) == 0.0);
    CHECK(std::abs(psi2.at(1, 0, 0)) == 0.0);
}

TEST_CASE("boundary inversion agrees with a finite-difference BVP solve") {
    const GridSpec g = small_grid(16);
    SqgParams p;
    p.n = 1.0;  // the BVP oracle below takes m = kappa
    SqgModel model(g, p);
    const double dk = 2.0 * kPi / g.lx;

    struct Case {
        int jx, jy;
        double t0, t1;
    };
    for (const Case tc : {Case{1, 0, 1.0, 0.0}, Case{2, 3, 0.7, -1.3},
                          Case{5, 14, -0.4, 0.9}}) {
        const int fy = signed_freq(tc.jy, g.ny);
        const double kappa = dk * std::hypot(double(tc.jx), double(fy));
        SpectralField theta(g);
        theta.at(0, tc.jy, tc.jx) = {tc.t0, 0.0};
        theta.at(1, tc.jy, tc.jx) = {tc.t1, 0.0};
        const auto psi = model.invert_theta(theta);
        const auto [p0, p1] = bvp_psi(kappa, g.h, tc.t0, tc.t1);
        CHECK(psi.at(0, tc.jy, tc.jx).real() == doctest::Approx(p0).epsilon(5e-6));
        CHECK(psi.at(1, tc.jy, tc.jx).real() == doctest::Approx(p1).epsilon(5e-6));
    }
}

TEST_CASE("level swap maps psi antisymmetrically") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    auto theta = dealiased_random(model, 31);
    const auto psi = model.invert_theta(theta);

    SpectralField swapped(g);
    const std::size_t plane = std::size_t(g.ny) * g.nkx();
    for (std::size_t i = 0; i < plane; ++i) {
        swapped.coeffs[i] = theta.coeffs[plane + i];
        swapped.coeffs[plane + i] = theta.coeffs[i];
    }
    const auto psi_sw = model.invert_theta(swapped);
    double err = 0;
    for (std::size_t i = 0; i < plane; ++i) {
        err = std::max(err, std::abs(psi_sw.coeffs[i] + psi.coeffs[plane + i]));
        err = std::max(err, std::abs(psi_sw.coeffs[plane + i] + psi.coeffs[i]));
    }
    CHECK(err < 1e-12);
}

TEST_CASE("theta_from_psi inverts invert_theta away from the mean mode") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    auto theta = dealiased_random(model, 32);
    theta.at(0, 0, 0) = 0.0;  // the gauge mode cannot round-trip
    theta.at(1, 0, 0) = 0.0;
    const auto back = model.theta_from_psi(model.invert_theta(theta));
    double err = 0;
    for (std::size_t i = 0; i < theta.coeffs.size(); ++i)
        err = std::max(err, std::abs(back.coeffs[i] - theta.coeffs[i]));
    CHECK(err < 1e-11);
}

TEST_CASE("velocities match analytic single-mode formulas") {
    GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    const double k = 2.0 * kPi / g.lx;     // jx = 1
    const double ly_k = 2.0 * kPi / g.ly;  // jy = 1

    // psi = sin(k x) * cos(l y): u = -psi_y, v = psi_x
    PhysicalField psi(g);
    for (int lev = 0; lev < 2; ++lev)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x)
                psi.at(lev, y, x) =
                    std::sin(k * x * g.dx()) * std::cos(ly_k * y * g.dy());
    const auto psi_hat = model.forward_transform(psi);
    const auto [u, v] = model.velocities(psi_hat);
    double err = 0;
    for (int lev = 0; lev < 2; ++lev)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) {
                const double xx = k * x * g.dx(), yy = ly_k * y * g.dy();
                err = std::max(err, std::fabs(u.at(lev, y, x) -
                                              ly_k * std::sin(xx) * std::sin(yy)));
                err = std::max(err, std::fabs(v.at(lev, y, x) -
                                              k * std::cos(xx) * std::cos(yy)));
            }
    CHECK(err < 1e-12);
}

TEST_CASE("velocities agree with a fourth-order finite difference") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    // low-wavenumber random psi so the FD truncation error stays small
    SpectralField psi_hat(g);
    RngStream rng(77, StreamUse::generic, 5);
    for (int lev = 0; lev < 2; ++lev)
        for (int jy : {0, 1, 2, 14, 15})
            for (int jx : {0, 1, 2})
                psi_hat.at(lev, jy, jx) = {0.3 * rng.normal(), 0.3 * rng.normal()};
    psi_hat.at(0, 0, 0) = 0.0;
    psi_hat.at(1, 0, 0) = 0.0;
    const auto psi = model.inverse_transform(psi_hat);
    const auto spec = model.forward_transform(psi);  // hermitian-clean copy
    const auto [u, v] = model.velocities(spec);

    auto wrap = [&](int i, int n) { return (i % n + n) % n; };
    double err = 0, scale = 0;
    for (int lev = 0; lev < 2; ++lev)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) {
                const double fd_v =
                    (8.0 * (psi.at(lev, y, wrap(x + 1, g.nx)) -
                            psi.at(lev, y, wrap(x - 1, g.nx))) -
                     (psi.at(lev, y, wrap(x + 2, g.nx)) -
                      psi.at(lev, y, wrap(x - 2, g.nx)))) /
                    (12.0 * g.dx());
                const double fd_u =
                    -(8.0 * (psi.at(lev, wrap(y + 1, g.ny), x) -
                             psi.at(lev, wrap(y - 1, g.ny), x)) -
                      (psi.at(lev, wrap(y + 2, g.ny), x) -
                       psi.at(lev, wrap(y - 2, g.ny), x))) /
                    (12.0 * g.dy());
                err = std::max(err, std::fabs(v.at(lev, y, x) - fd_v));
                err = std::max(err, std::fabs(u.at(lev, y, x) - fd_u));
                scale = std::max({scale, std::fabs(u.at(lev, y, x)),
                                  std::fabs(v.at(lev, y, x))});
            }
    CHECK(err < 0.03 * scale);
}

TEST_CASE("tendency vanishes for zero and constant states") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    SpectralField zero(g);
    auto t = model.tendency(zero);
    for (auto c : t.coeffs) CHECK(std::abs(c) == 0.0);

    SpectralField constant(g);
    constant.at(0, 0, 0) = {2.0, 0.0};
    constant.at(1, 0, 0) = {-1.0, 0.0};
    t = model.tendency(constant);
    double err = 0;
    for (auto c : t.coeffs) err = std::max(err, std::abs(c));
    CHECK(err < 1e-13);
}

TEST_CASE("single-mode tendency matches the hand-derived formula") {
    // theta = a cos(kx) at level 0 only: no self-advection, so the tendency
    // is the shear term plus the background-gradient term, both ~ sin(kx)
    const GridSpec g = small_grid(16);
    const SqgParams p;
    SqgModel model(g, p);
    const double a = 0.8, k = 2.0 * kPi / g.lx;
    const double m = p.n * k / p.f;
    const double mu = m * g.h;
    const double c00 = -std::cosh(mu) / (m * std::sinh(mu));
    const double c10 = -1.0 / (m * std::sinh(mu));

    PhysicalField theta(g);
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x)
            theta.at(0, y, x) = a * std::cos(k * x * g.dx());
    const auto tend =
        model.inverse_transform(model.tendency(model.forward_transform(theta)));

    double err = 0;
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            const double s = std::sin(k * x * g.dx());
            const double want0 = -(p.u0 / 2.0) * a * k * s -
                                 (p.u0 / g.h) * c00 * a * k * s;
            const double want1 = -(p.u0 / g.h) * c10 * a * k * s;
            err = std::max(err, std::fabs(tend.at(0, y, x) - want0));
            err = std::max(err, std::fabs(tend.at(1, y, x) - want1));
        }
    CHECK(err < 1e-12);
}

TEST_CASE("tendency matches a naive full-DFT oracle at 8x8") {
    GridSpec g = small_grid(8);
    SqgModel model(g, SqgParams{});
    auto theta = dealiased_random(model, 55, 0.7);
    const auto got = model.tendency(theta);

    const auto grid_theta = model.inverse_transform(theta);
    const auto want = naive_tendency(g, model.params(), grid_theta.data);
    REQUIRE(want.size() == got.coeffs.size());
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        err = std::max(err, std::abs(got.coeffs[i] - want[i]));
        scale = std::max(scale, std::abs(want[i]));
    }
    CHECK(scale > 0.0);
    CHECK(err < 1e-10 * std::max(1.0, scale));
}

TEST_CASE("zero state is a fixed point of the step") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    SpectralField theta(g);
    const auto next = model.step_rk4(theta);
    for (auto c : next.coeffs) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("pure hyperdiffusion decays the cutoff mode by exp(-dt/efold)") {
    const GridSpec g = small_grid(16);
    SqgParams p;
    p.u0 = 0.0;       // single mode self-advection vanishes
    p.drag_tau = 0.0; // hyperdiffusion only
    SqgModel model(g, p);

    const int jc = g.nx / 3;
    SpectralField theta(g);
    theta.at(0, jc, jc) = {0.3, -0.1};  // the corner retained mode = kappa_cut
    theta.at(1, jc, jc) = {0.2, 0.4};
    const auto next = model.step_rk4(theta);
    const double want = std::exp(-p.dt / p.hyper_efold);
    CHECK(std::abs(next.at(0, jc, jc) / theta.at(0, jc, jc) - want) < 1e-12);
    CHECK(std::abs(next.at(1, jc, jc) / theta.at(1, jc, jc) - want) < 1e-12);

    // lower modes decay strictly slower
    SpectralField low(g);
    low.at(0, 0, 1) = {1.0, 0.0};
    const auto next_low = model.step_rk4(low);
    CHECK(std::abs(next_low.at(0, 0, 1)) > want);
}

TEST_CASE("horizontal mean is conserved by stepping") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    auto theta = dealiased_random(model, 88, 1.5);
    theta.at(0, 0, 0) = {0.7, 0.0};
    theta.at(1, 0, 0) = {-0.3, 0.0};
    auto state = theta;
    for (int s = 0; s < 40; ++s) model.step_rk4_inplace(state);
    CHECK(std::abs(state.at(0, 0, 0) - theta.at(0, 0, 0)) < 1e-10);
    CHECK(std::abs(state.at(1, 0, 0) - theta.at(1, 0, 0)) < 1e-10);
}

TEST_CASE("step output stays dealiased") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    auto state = dealiased_random(model, 89, 2.0);
    for (int s = 0; s < 5; ++s) model.step_rk4_inplace(state);
    const int cut = g.nx / 3;
    for (int lev = 0; lev < 2; ++lev)
        for (int jy = 0; jy < g.ny; ++jy)
            for (int jx = 0; jx < g.nkx(); ++jx) {
                const int fy = signed_freq(jy, g.ny);
                if (jx > cut || std::abs(fy) > cut)
                    CHECK(std::abs(state.at(lev, jy, jx)) == 0.0);
            }
}

TEST_CASE("integrator converges at fourth order") {
    const GridSpec g = small_grid(16);
    const auto& base = testutil::spun_state(16, 1);

    auto integrate = [&](double dt, double T) {
        SqgParams p;
        p.dt = dt;
        SqgModel model(g, p);
        auto state = model.forward_transform(PhysicalField{g, base});
        dealias(state);
        const int steps = int(std::lround(T / dt));
        for (int s = 0; s < steps; ++s) model.step_rk4_inplace(state);
        return state;
    };

    const double T = 0.4;
    const auto ref = integrate(T / 64.0, T);
    auto l2err = [&](const SpectralField& a) {
        double e = 0;
        for (std::size_t i = 0; i < a.coeffs.size(); ++i)
            e += std::norm(a.coeffs[i] - ref.coeffs[i]);
        return std::sqrt(e);
    };
    const double e1 = l2err(integrate(T / 4.0, T));
    const double e2 = l2err(integrate(T / 8.0, T));
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.7);
    CHECK(order < 5.0);
}

TEST_CASE("blowup raises a typed error with the model time") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    SpectralField theta(g);
    theta.at(0, 1, 1) = {1e160, 0.0};
    theta.at(1, 2, 1) = {1e160, 0.0};
    bool thrown = false;
    try {
        auto state = theta;
        for (int s = 0; s < 50; ++s) model.step_rk4_inplace(state);
    } catch (const BlowupError& e) {
        thrown = true;
        CHECK(e.time_hours > 0.0);
    }
    CHECK(thrown);
}

TEST_CASE("CFL is tracked and positive for a turbulent state") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    auto state = model.forward_transform(PhysicalField{g, testutil::spun_state(16, 1)});
    dealias(state);
    model.step_rk4_inplace(state);
    CHECK(model.last_cfl() > 0.0);
    CHECK(model.max_cfl() >= model.last_cfl());
    CHECK(model.max_cfl() < 0.5);  // sanity at the default dt
    model.reset_cfl();
    CHECK(model.max_cfl() == 0.0);
}

TEST_CASE("kinetic energy spectrum puts a single shear mode in one bin") {
    GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    const int jk = 3;
    const double k = 2.0 * kPi / g.lx * jk;

    // psi = sin(k x) on both levels -> KE density = k^2/4, all in shell jk
    PhysicalField psi(g);
    for (int lev = 0; lev < 2; ++lev)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x)
                psi.at(lev, y, x) = std::sin(k * x * g.dx());
    const auto theta = model.theta_from_psi(model.forward_transform(psi));
    const auto bins = model.ke_spectrum(theta);
    REQUIRE(int(bins.size()) > jk);
    CHECK(bins[jk].kappa == doctest::Approx(k));
    CHECK(bins[jk].energy == doctest::Approx(k * k / 4.0).epsilon(1e-10));
    double elsewhere = 0;
    for (std::size_t s = 0; s < bins.size(); ++s)
        if (int(s) != jk) elsewhere += bins[s].energy;
    CHECK(elsewhere < 1e-12 * bins[jk].energy);
}

TEST_CASE("shell-summed energy equals the grid-average kinetic energy") {
    const GridSpec g = small_grid(16);
    SqgModel model(g, SqgParams{});
    auto theta = dealiased_random(model, 99, 1.2);
    const auto psi = model.invert_theta(theta);
    const auto [u, v] = model.velocities(psi);
    double grid_ke = 0;
    for (std::size_t i = 0; i < u.data.size(); ++i)
        grid_ke += 0.5 * (u.data[i] * u.data[i] + v.data[i] * v.data[i]);
    grid_ke /= double(u.data.size());

    double shell_ke = 0;
    for (const auto& b : model.ke_spectrum(theta)) shell_ke += b.energy;
    CHECK(shell_ke == doctest::Approx(grid_ke).epsilon(1e-10));
}

TEST_CASE("log-log slope fit recovers an exact power law") {
    std::vector<KeBin> bins;
    for (int s = 0; s <= 20; ++s) {
        const double kappa = 0.4 * s;
        bins.push_back({kappa, s == 0 ? 0.0 : 2.7 * std::pow(kappa, -5.0 / 3.0)});
    }
    CHECK(fit_loglog_slope(bins, 2, 17) ==
          doctest::Approx(-5.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(fit_loglog_slope(bins, 19, 2), ConfigError);
    std::vector<KeBin> zeros(8, KeBin{1.0, 0.0});
    CHECK_THROWS_AS(fit_loglog_slope(zeros, 0, 7), ConfigError);
}

TEST_CASE("parameter validation") {
    SqgParams p;
    p.dt = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SqgParams{};
    p.hyper_order = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SqgParams{};
    p.dealias_fraction = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SqgParams{};
    CHECK_NOTHROW(p.validate());
}
