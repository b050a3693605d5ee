#include "turbda/ensf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "turbda/fastexp.hpp"
#include "turbda/parallel.hpp"

namespace turbda {

namespace {

void check_score_time(double t, double eps) {
    if (t < eps)
        throw std::domain_error("prior_score: t below eps (beta -> 0)");
    if (t > 1.0) throw std::domain_error("prior_score: t > 1");
}

std::vector<int> full_batch(int m) {
    std::vector<int> b(m);
    for (int j = 0; j < m; ++j) b[j] = j;
    return b;
}

// Mixture score with the softmax taken componentwise: each state entry gets
// its own weights over the batch members. Keeping the weights scalar per
// component is what lets a small ensemble stay informative when the state
// dimension is large; a joint-norm softmax would put all mass on the single
// nearest member. Two passes over the batch: one to find the per-component
// smallest squared distance (softmax shift), one to accumulate.
void mixture_score(const std::vector<double>& z, double alpha, double beta2,
                   const Ensemble& forecast, const std::vector<int>& batch,
                   std::vector<double>& mind2, std::vector<double>& num,
                   std::vector<double>& den, std::vector<double>& out) {
    const std::size_t d = z.size();
    const int nj = int(batch.size());
    const double inv2b = 1.0 / (2.0 * beta2);

    std::fill(mind2.begin(), mind2.end(),
              std::numeric_limits<double>::infinity());
    for (int jj = 0; jj < nj; ++jj) {
        const auto& x = forecast.members[batch[jj]];
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = z[k] - alpha * x[k];
            const double d2 = diff * diff;
            mind2[k] = d2 < mind2[k] ? d2 : mind2[k];
        }
    }
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (int jj = 0; jj < nj; ++jj) {
        const auto& x = forecast.members[batch[jj]];
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = z[k] - alpha * x[k];
            const double w = fast_exp_nonpos((mind2[k] - diff * diff) * inv2b);
            den[k] += w;
            num[k] += w * x[k];
        }
    }
    for (std::size_t k = 0; k < d; ++k)
        out[k] = -(z[k] - alpha * num[k] / den[k]) / beta2;
}

}  // namespace

std::vector<double> prior_score(const std::vector<double>& z, double t,
                                const Ensemble& forecast,
                                const std::vector<int>& batch, double eps) {
    check_score_time(t, eps);
    forecast.validate(false);
    if (z.size() != forecast.dim())
        throw DimensionError("prior_score: dimension mismatch");
    const std::vector<int> b = batch.empty() ? full_batch(forecast.size())
                                             : batch;
    std::vector<double> mind2(z.size()), num(z.size()), den(z.size()),
        out(z.size());
    mixture_score(z, NoiseSchedule::alpha(t), NoiseSchedule::beta2(t),
                  forecast, b, mind2, num, den, out);
    return out;
}

std::vector<double> likelihood_score(const std::vector<double>& z,
                                     const Observation& obs) {
    obs.validate();
    if (z.size() != obs.op.state_dim)
        throw DimensionError("likelihood_score: dimension mismatch");
    const std::vector<double> hz = apply_operator(obs.op, z);
    std::vector<double> innov(hz.size());
    for (std::size_t k = 0; k < hz.size(); ++k)
        innov[k] = (obs.y[k] - hz[k]) / obs.r_diag[k];
    return adjoint_scatter(obs.op, innov);
}

std::vector<double> posterior_score(const std::vector<double>& z, double t,
                                    const Ensemble& forecast,
                                    const Observation& obs,
                                    const EnsfConfig& cfg) {
    cfg.validate();
    std::vector<double> s = prior_score(z, t, forecast, {}, cfg.eps);
    const std::vector<double> lik = likelihood_score(z, obs);
    const double h = cfg.damping_t - t;
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += h * lik[k];
    return s;
}

void reverse_sde_step(std::vector<std::vector<double>>& particles, double t,
                      double dt_pseudo,
                      const std::vector<std::vector<double>>& scores,
                      const std::vector<std::vector<double>>& noise) {
    if (dt_pseudo <= 0.0)
        throw ConfigError("reverse_sde_step: dt_pseudo > 0");
    if (scores.size() != particles.size() || noise.size() != particles.size())
        throw DimensionError("reverse_sde_step: array count mismatch");
    const double b = NoiseSchedule::drift_b(t);
    const double s2 = NoiseSchedule::sigma2(t);
    const double sig = std::sqrt(s2 * dt_pseudo);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        auto& z = particles[i];
        const auto& s = scores[i];
        const auto& xi = noise[i];
        if (s.size() != z.size() || xi.size() != z.size())
            throw DimensionError("reverse_sde_step: dimension mismatch");
        for (std::size_t k = 0; k < z.size(); ++k) {
            z[k] += -(b * z[k] - s2 * s[k]) * dt_pseudo + sig * xi[k];
            if (!std::isfinite(z[k])) throw SamplerDivergedError(t);
        }
    }
}

Ensemble analyze(const Ensemble& forecast, const Observation& obs,
                 const EnsfConfig& cfg, std::uint64_t seed,
                 std::uint64_t cycle, int workers) {
    forecast.validate(false);
    obs.validate();
    cfg.validate();
    if (std::fabs(forecast.valid_time - obs.time) > 1e-6)
        throw ConfigError("analyze: forecast/observation time mismatch");
    const int m = forecast.size();
    const std::size_t d = forecast.dim();
    if (obs.op.state_dim != d)
        throw DimensionError("analyze: observation operator dimension");
    if (workers <= 0) workers = default_worker_count();

    const int j_batch =
        (cfg.minibatch_j == 0 || cfg.minibatch_j >= m) ? m : cfg.minibatch_j;
    const int n_steps = cfg.n_steps;
    const double dt = (1.0 - cfg.eps) / n_steps;

    // member subsets per pseudo-time step, shared by all particles
    std::vector<std::vector<int>> batches;
    if (j_batch == m) {
        batches.assign(1, full_batch(m));
    } else {
        batches.resize(n_steps);
        for (int s = 0; s < n_steps; ++s) {
            RngStream rs(seed, StreamUse::ensf_batch,
                         (cycle << 20) + std::uint64_t(s));
            std::vector<int> pool = full_batch(m);
            for (int k = 0; k < j_batch; ++k) {
                const int r = k + int(rs.next_u64() % std::uint64_t(m - k));
                std::swap(pool[k], pool[r]);
            }
            pool.resize(j_batch);
            batches[s] = std::move(pool);
        }
    }

    // precompute y - 0 scaling is not possible: likelihood depends on z, so
    // it is evaluated inline per particle per step
    std::vector<std::vector<double>> particles(m);
    parallel_for(std::size_t(m), workers, [&](std::size_t i) {
        RngStream rs(seed, StreamUse::ensf_particles,
                     (cycle << 32) | std::uint64_t(i));
        std::vector<double>& z = particles[i];
        z.resize(d);
        for (std::size_t k = 0; k < d; ++k) z[k] = rs.normal();

        std::vector<double> mind2(d), num(d), den(d), sc(d), xi(d);
        std::vector<double> hz, innov;
        for (int s = 0; s < n_steps; ++s) {
            const double t_hi = 1.0 - s * dt;
            const double t_ev = std::max(t_hi - dt, cfg.eps);
            const double alpha = NoiseSchedule::alpha(t_ev);
            const double beta2 = NoiseSchedule::beta2(t_ev);
            const double b = NoiseSchedule::drift_b(t_ev);
            const double s2 = NoiseSchedule::sigma2(t_ev);
            const double damp = cfg.damping_t - t_ev;
            const double sig = std::sqrt(s2 * dt);

            const std::vector<int>& batch =
                batches.size() == 1 ? batches[0] : batches[s];
            mixture_score(z, alpha, beta2, forecast, batch, mind2, num, den,
                          sc);

            // damped likelihood term H^T R^-1 (y - Hz)
            hz = apply_operator(obs.op, z);
            for (std::size_t k = 0; k < hz.size(); ++k)
                hz[k] = (obs.y[k] - hz[k]) / obs.r_diag[k];
            if (obs.op.kind == ObsOperatorKind::identity) {
                for (std::size_t k = 0; k < d; ++k) sc[k] += damp * hz[k];
            } else {
                for (std::size_t k = 0; k < obs.op.indices.size(); ++k)
                    sc[obs.op.indices[k]] += damp * hz[k];
            }

            for (std::size_t k = 0; k < d; ++k) xi[k] = rs.normal();
            bool ok = true;
            for (std::size_t k = 0; k < d; ++k) {
                z[k] += -(b * z[k] - s2 * sc[k]) * dt + sig * xi[k];
                if (!std::isfinite(z[k])) ok = false;
            }
            if (!ok) throw SamplerDivergedError(t_ev);
        }
    });

    Ensemble analysis;
    analysis.members = std::move(particles);
    analysis.member_seeds = forecast.member_seeds;
    analysis.valid_time = forecast.valid_time;
    return relax_spread(analysis, forecast, cfg.relax_factor);
}

Ensemble relax_spread(const Ensemble& analysis, const Ensemble& forecast,
                      double factor) {
    if (factor == 0.0) return analysis;
    analysis.validate(false);
    forecast.validate(false);
    if (analysis.size() != forecast.size() ||
        analysis.dim() != forecast.dim())
        throw DimensionError("relax_spread: shape mismatch");
    const int m = analysis.size();
    const std::size_t d = analysis.dim();
    if (m < 2) return analysis;

    const std::vector<double> ma = ensemble_mean(analysis);
    const std::vector<double> mb = ensemble_mean(forecast);
    std::vector<double> va(d, 0.0), vb(d, 0.0);
    for (int j = 0; j < m; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            const double da = analysis.members[j][k] - ma[k];
            const double db = forecast.members[j][k] - mb[k];
            va[k] += da * da;
            vb[k] += db * db;
        }
    Ensemble out = analysis;
    std::vector<double> scale(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double sa = std::max(std::sqrt(va[k] / (m - 1)), 1e-12);
        const double sb = std::sqrt(vb[k] / (m - 1));
        scale[k] = (1.0 - factor) + factor * sb / sa;
    }
    for (int j = 0; j < m; ++j)
        for (std::size_t k = 0; k < d; ++k)
            out.members[j][k] = ma[k] + scale[k] * (analysis.members[j][k] - ma[k]);
    return out;
}

}  // namespace turbda
