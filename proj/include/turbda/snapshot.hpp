#pragma once

#include <iosfwd>
#include <string>

#include "turbda/grid.hpp"

namespace turbda {

// SQGSNAP v1: one ASCII header line `SQGSNAP v1 nx ny nz time` followed by
// nz*ny*nx little-endian float64 in [nz][ny][nx] row-major order.
void write_snapshot(std::ostream& out, const PhysicalField& field,
                    double time_hours);
void write_snapshot(const std::string& path, const PhysicalField& field,
                    double time_hours);

struct Snapshot {
    PhysicalField field;
    double time_hours = 0.0;
};

Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::string& path);

}  // namespace turbda
