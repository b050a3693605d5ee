#include "turbda/ensemble.hpp"

#include <cmath>

namespace turbda {

std::vector<double> ensemble_mean(const Ensemble& ens) {
    ens.validate(false);
    const std::size_t d = ens.dim();
    std::vector<double> mean(d, 0.0);
    for (const auto& m : ens.members)
        for (std::size_t i = 0; i < d; ++i) mean[i] += m[i];
    const double inv = 1.0 / ens.size();
    for (auto& v : mean) v *= inv;
    return mean;
}

double rmse(const std::vector<double>& mean,
            const std::vector<double>& truth) {
    if (mean.size() != truth.size())
        throw DimensionError("rmse: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double d = mean[i] - truth[i];
        s += d * d;
    }
    return std::sqrt(s / double(mean.size()));
}

double spread(const Ensemble& ens) {
    ens.validate(false);
    const int m = ens.size();
    if (m < 2) return 0.0;
    const std::size_t d = ens.dim();
    const std::vector<double> mean = ensemble_mean(ens);
    double s = 0.0;
    for (const auto& mem : ens.members)
        for (std::size_t i = 0; i < d; ++i) {
            const double dev = mem[i] - mean[i];
            s += dev * dev;
        }
    return std::sqrt(s / (double(m - 1) * double(d)));
}

}  // namespace turbda
