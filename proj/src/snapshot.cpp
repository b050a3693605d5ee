#include "turbda/snapshot.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace turbda {

static_assert(std::endian::native == std::endian::little,
              "SQGSNAP writer assumes a little-endian host");

void write_snapshot(std::ostream& out, const PhysicalField& field,
                    double time_hours) {
    const GridSpec& g = field.grid;
    std::ostringstream header;
    header << "SQGSNAP v1 " << g.nx << " " << g.ny << " " << g.nz << " ";
    header.precision(17);
    header << time_hours << "\n";
    out << header.str();
    out.write(reinterpret_cast<const char*>(field.data.data()),
              std::streamsize(field.data.size() * sizeof(double)));
    if (!out) throw IoError("snapshot write failed");
}

void write_snapshot(const std::string& path, const PhysicalField& field,
                    double time_hours) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_snapshot(f, field, time_hours);
}

Snapshot read_snapshot(std::istream& in) {
    std::string magic, version;
    int nx = 0, ny = 0, nz = 0;
    double time = 0.0;
    in >> magic >> version >> nx >> ny >> nz >> time;
    if (!in || magic != "SQGSNAP" || version != "v1")
        throw IoError("not an SQGSNAP v1 stream");
    in.ignore(1);  // newline after the header

    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.nz = nz;
    try {
        g.validate();
    } catch (const ConfigError& e) {
        throw IoError(std::string("snapshot header invalid: ") + e.what());
    }
    Snapshot snap;
    snap.field = PhysicalField(g);
    snap.time_hours = time;
    in.read(reinterpret_cast<char*>(snap.field.data.data()),
            std::streamsize(snap.field.data.size() * sizeof(double)));
    if (!in) throw IoError("snapshot payload truncated");
    return snap;
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    return read_snapshot(f);
}

}  // namespace turbda
