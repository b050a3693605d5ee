#pragma once

#include <cstdint>
#include <vector>

#include "turbda/errors.hpp"

namespace turbda {

// M flattened state vectors ([nz][ny][nx] layout) plus per-member seeds.
struct Ensemble {
    std::vector<std::vector<double>> members;
    std::vector<std::uint64_t> member_seeds;
    double valid_time = 0.0;  // model hours

    int size() const { return int(members.size()); }
    std::size_t dim() const { return members.empty() ? 0 : members[0].size(); }

    void validate(bool require_pair = true) const {
        if (require_pair && members.size() < 2)
            throw DimensionError("ensemble: needs at least 2 members");
        if (members.empty()) throw DimensionError("ensemble: empty");
        if (member_seeds.size() != members.size())
            throw DimensionError("ensemble: seeds/members length mismatch");
        const std::size_t d = members[0].size();
        for (const auto& m : members)
            if (m.size() != d)
                throw DimensionError("ensemble: member dimension mismatch");
    }
};

std::vector<double> ensemble_mean(const Ensemble& ens);

// sqrt(mean_i (x_mean_i - truth_i)^2)
double rmse(const std::vector<double>& mean, const std::vector<double>& truth);

// sqrt(mean over variables of the per-variable ensemble variance, with M-1
// normalization); 0 for a single member
double spread(const Ensemble& ens);

}  // namespace turbda
