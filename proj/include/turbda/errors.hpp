#pragma once

#include <stdexcept>
#include <string>

namespace turbda {

// Bad or inconsistent configuration / shapes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// NaN/Inf appeared during time integration.  Carries the model time and,
// when raised inside an ensemble sweep, the offending member index.
struct BlowupError : std::runtime_error {
    double time_hours;
    int member;
    explicit BlowupError(double t, int member_index = -1)
        : std::runtime_error(member_index < 0
              ? "integration blowup (NaN/Inf) at t=" + std::to_string(t) + " h"
              : "integration blowup (NaN/Inf) at t=" + std::to_string(t) +
                    " h in member " + std::to_string(member_index)),
          time_hours(t),
          member(member_index) {}
};

// Reverse-SDE sampler produced non-finite particles.
struct SamplerDivergedError : std::runtime_error {
    double pseudo_time;
    explicit SamplerDivergedError(double t)
        : std::runtime_error("reverse SDE diverged at pseudo-time t=" +
                             std::to_string(t)),
          pseudo_time(t) {}
};

// Local analysis failed (non-finite / non-positive eigenvalues).
struct SingularAnalysisError : std::runtime_error {
    int ix, iy;
    SingularAnalysisError(int ix_, int iy_)
        : std::runtime_error("singular local analysis at grid point (" +
                             std::to_string(ix_) + "," + std::to_string(iy_) +
                             ")"),
          ix(ix_),
          iy(iy_) {}
};

struct UnsupportedOperatorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace turbda
