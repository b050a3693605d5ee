#include "turbda/letkf.hpp"

#include <cmath>
#include <vector>

#include "turbda/parallel.hpp"

namespace turbda {

double gaspari_cohn(double r) {
    if (r < 0.0) throw ConfigError("gaspari_cohn: r >= 0");
    if (r >= 2.0) return 0.0;
    const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r;
    if (r <= 1.0)
        return 1.0 - 5.0 / 3.0 * r2 + 5.0 / 8.0 * r3 + 0.5 * r4 - 0.25 * r5;
    return 4.0 - 5.0 * r + 5.0 / 3.0 * r2 + 5.0 / 8.0 * r3 - 0.5 * r4 +
           r5 / 12.0 - 2.0 / (3.0 * r);
}

EtkfTransform etkf_local_analysis(const Eigen::MatrixXd& yb_pert,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& yb_mean,
                                  const Eigen::VectorXd& r_inv, int m) {
    const Eigen::Index p = yb_pert.rows();
    if (yb_pert.cols() != m || y.size() != p || yb_mean.size() != p ||
        r_inv.size() != p)
        throw DimensionError("etkf_local_analysis: shape mismatch");

    EtkfTransform out;
    if (p == 0) {  // no usable observations: analysis = background
        out.wbar = Eigen::VectorXd::Zero(m);
        out.w = Eigen::MatrixXd::Identity(m, m);
        return out;
    }

    const Eigen::MatrixXd c = yb_pert.transpose() * r_inv.asDiagonal();
    Eigen::MatrixXd a = c * yb_pert;
    a.diagonal().array() += double(m - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success)
        throw SingularAnalysisError(-1, -1);
    const Eigen::VectorXd& lam = eig.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (!std::isfinite(lam[i]) || lam[i] <= 0.0)
            throw SingularAnalysisError(-1, -1);

    const Eigen::MatrixXd& v = eig.eigenvectors();
    const Eigen::VectorXd inv_lam = lam.cwiseInverse();
    const Eigen::MatrixXd pa = v * inv_lam.asDiagonal() * v.transpose();
    out.wbar = pa * (c * (y - yb_mean));
    const Eigen::VectorXd isq = lam.cwiseSqrt().cwiseInverse();
    out.w = std::sqrt(double(m - 1)) * (v * isq.asDiagonal() * v.transpose());
    return out;
}

Ensemble letkf_analyze(const Ensemble& forecast, const Observation& obs,
                       const LetkfConfig& cfg, const GridSpec& grid,
                       int workers) {
    forecast.validate();
    obs.validate();
    cfg.validate();
    grid.validate();
    if (grid.nx != grid.ny || grid.lx != grid.ly)
        throw ConfigError("letkf_analyze: isotropic metric needs nx == ny");
    if (std::fabs(forecast.valid_time - obs.time) > 1e-6)
        throw ConfigError("letkf_analyze: forecast/observation time mismatch");
    const std::size_t d = forecast.dim();
    if (d != grid.grid_size() || obs.op.state_dim != d)
        throw DimensionError("letkf_analyze: state/grid size mismatch");
    if (workers <= 0) workers = default_worker_count();

    const int m = forecast.size();
    const int nx = grid.nx, ny = grid.ny;
    const double cutoff = cfg.cutoff_km / cfg.domain_km * nx;

    // obs-space background
    const std::size_t p_total = obs.y.size();
    Eigen::MatrixXd hxb(p_total, m);
    for (int j = 0; j < m; ++j) {
        const std::vector<double> hx =
            apply_operator(obs.op, forecast.members[j]);
        for (std::size_t k = 0; k < p_total; ++k) hxb(k, j) = hx[k];
    }
    const Eigen::VectorXd hxb_mean = hxb.rowwise().mean();
    hxb.colwise() -= hxb_mean;

    // state-space mean/perturbations
    const std::vector<double> xb_mean = ensemble_mean(forecast);

    // bucket observations by integer grid cell
    std::vector<std::vector<int>> cell_obs(std::size_t(nx) * ny);
    for (std::size_t k = 0; k < p_total; ++k) {
        const int cx = int(std::floor(obs.locations[k][0])) % nx;
        const int cy = int(std::floor(obs.locations[k][1])) % ny;
        cell_obs[std::size_t(cy) * nx + cx].push_back(int(k));
    }

    // relative cell offsets within the gather radius, with their
    // localization weights (identical for every grid point by periodicity)
    struct Offset {
        int ox, oy;
        double gc;
    };
    std::vector<Offset> offsets;
    const int reach = std::min(int(std::ceil(2.0 * cutoff)), nx / 2);
    // avoid counting the same cell twice when the reach spans the torus
    const int lo_x = (2 * reach >= nx) ? -nx / 2 + 1 : -reach;
    const int hi_x = (2 * reach >= nx) ? nx / 2 : reach;
    const int lo_y = (2 * reach >= ny) ? -ny / 2 + 1 : -reach;
    const int hi_y = (2 * reach >= ny) ? ny / 2 : reach;
    for (int oy = lo_y; oy <= hi_y; ++oy) {
        for (int ox = lo_x; ox <= hi_x; ++ox) {
            // minimum-image norm of the offset itself
            const int ax = std::min(std::abs(ox), nx - std::abs(ox));
            const int ay = std::min(std::abs(oy), ny - std::abs(oy));
            const double dist = std::hypot(double(ax), double(ay));
            const double r = dist / cutoff;
            if (r >= 2.0) continue;
            offsets.push_back({ox, oy, gaspari_cohn(r)});
        }
    }

    Ensemble analysis = forecast;
    std::vector<std::vector<double>>& xa = analysis.members;

    parallel_for(std::size_t(nx) * ny, workers, [&](std::size_t pt) {
        const int ix = int(pt % nx), iy = int(pt / nx);
        std::vector<int> local;
        std::vector<double> local_gc;
        for (const Offset& o : offsets) {
            const int cx = (ix + o.ox % nx + nx) % nx;
            const int cy = (iy + o.oy % ny + ny) % ny;
            for (int k : cell_obs[std::size_t(cy) * nx + cx]) {
                local.push_back(k);
                local_gc.push_back(o.gc);
            }
        }
        const int p = int(local.size());
        const std::size_t row0 = std::size_t(iy) * nx + ix;
        const std::size_t row1 = std::size_t(ny) * nx + row0;
        if (p == 0) return;  // nothing to assimilate here

        Eigen::MatrixXd yb(p, m);
        Eigen::VectorXd yv(p), ybm(p), rinv(p);
        for (int k = 0; k < p; ++k) {
            const int ko = local[k];
            yb.row(k) = hxb.row(ko);
            yv[k] = obs.y[ko];
            ybm[k] = hxb_mean[ko];
            rinv[k] = local_gc[k] / obs.r_diag[ko];
        }

        EtkfTransform tr;
        try {
            tr = etkf_local_analysis(yb, yv, ybm, rinv, m);
        } catch (const SingularAnalysisError&) {
            throw SingularAnalysisError(ix, iy);
        }

        // update the two levels at this point with the same weights
        for (const std::size_t row : {row0, row1}) {
            double mean = xb_mean[row];
            Eigen::VectorXd pert(m);
            for (int j = 0; j < m; ++j)
                pert[j] = forecast.members[j][row] - mean;
            const double wx = pert.dot(tr.wbar);
            const Eigen::VectorXd pw = tr.w.transpose() * pert;
            for (int j = 0; j < m; ++j) xa[j][row] = mean + wx + pw[j];
        }
    });

    return rtps_inflate(analysis, forecast, cfg.rtps_alpha);
}

Ensemble rtps_inflate(const Ensemble& analysis, const Ensemble& background,
                      double alpha) {
    if (alpha == 0.0) return analysis;
    analysis.validate(false);
    background.validate(false);
    if (analysis.size() != background.size() ||
        analysis.dim() != background.dim())
        throw DimensionError("rtps_inflate: shape mismatch");
    const int m = analysis.size();
    const std::size_t d = analysis.dim();
    if (m < 2) return analysis;

    const std::vector<double> ma = ensemble_mean(analysis);
    const std::vector<double> mb = ensemble_mean(background);
    std::vector<double> va(d, 0.0), vb(d, 0.0);
    for (int j = 0; j < m; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            const double da = analysis.members[j][k] - ma[k];
            const double db = background.members[j][k] - mb[k];
            va[k] += da * da;
            vb[k] += db * db;
        }
    Ensemble out = analysis;
    for (std::size_t k = 0; k < d; ++k) {
        const double sa = std::max(std::sqrt(va[k] / (m - 1)), 1e-12);
        const double sb = std::sqrt(vb[k] / (m - 1));
        const double scale = 1.0 + alpha * (sb - sa) / sa;
        for (int j = 0; j < m; ++j)
            out.members[j][k] = ma[k] + scale * (analysis.members[j][k] - ma[k]);
    }
    return out;
}

}  // namespace turbda
