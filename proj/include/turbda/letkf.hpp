#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "turbda/ensemble.hpp"
#include "turbda/grid.hpp"
#include "turbda/observation.hpp"

namespace turbda {

struct LetkfConfig {
    // physical cutoff plus the km width assigned to the (doubly periodic)
    // domain; the working cutoff in grid units is cutoff_km/domain_km * nx
    double cutoff_km = 2000.0;
    double domain_km = 20000.0;
    double rtps_alpha = 0.3;
    int obs_thinning = 0;

    void validate() const {
        if (!(cutoff_km > 0.0) || !(domain_km > 0.0))
            throw ConfigError("letkf: cutoff_km, domain_km > 0");
        if (rtps_alpha < 0.0 || rtps_alpha > 1.0)
            throw ConfigError("letkf: rtps_alpha in [0, 1]");
        if (obs_thinning < 0) throw ConfigError("letkf: obs_thinning >= 0");
    }
};

// compactly supported 5th-order Gaspari-Cohn correlation at normalized
// distance r = d/c; support is [0, 2]
double gaspari_cohn(double r);

struct EtkfTransform {
    Eigen::VectorXd wbar;  // mean weight vector (M)
    Eigen::MatrixXd w;     // symmetric transform (M x M)
};

// Hunt et al. (2007) local transform.  yb_pert is the p x M matrix of
// observation-space background perturbations, r_inv the R^-1 diagonal
// already multiplied by the localization weights.
EtkfTransform etkf_local_analysis(const Eigen::MatrixXd& yb_pert,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& yb_mean,
                                  const Eigen::VectorXd& r_inv, int m);

// Per grid point: gather observations within twice the cutoff (minimum-image
// torus distance), localize R^-1 with gaspari_cohn(dist/cutoff), solve the
// local ETKF, and update both levels at that point with the same weights.
// RTPS inflation is applied at the end.
Ensemble letkf_analyze(const Ensemble& forecast, const Observation& obs,
                       const LetkfConfig& cfg, const GridSpec& grid,
                       int workers = 0);

// deviations scaled per variable by 1 + alpha (sigma_b - sigma_a) / sigma_a
Ensemble rtps_inflate(const Ensemble& analysis, const Ensemble& background,
                      double alpha);

}  // namespace turbda
