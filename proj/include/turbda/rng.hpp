#pragma once

#include <array>
#include <cstdint>

namespace turbda {

// Philox4x32-10 counter-based generator (Salmon et al. 2011).  A stream is
// identified by a 64-bit key and a 64-bit entity id; draws are a pure
// function of (key, entity, position), so ensemble members, cycles and
// particles can be given independent streams that do not depend on
// scheduling or worker count.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

// Stream purposes; folded into the key so draws for different uses never
// collide even with equal (seed, entity).
enum class StreamUse : std::uint64_t {
    nature_ic = 1,
    init_select = 2,
    member_seed = 3,
    model_error = 4,
    obs_noise = 5,
    ensf_particles = 6,
    ensf_batch = 7,
    generic = 8,
};

class RngStream {
public:
    RngStream(std::uint64_t seed, StreamUse use, std::uint64_t entity = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // uniform in [2^-54, 1 - 2^-54], never exactly 0 or 1
    double uniform();
    // standard normal via Box-Muller (pairs cached)
    double normal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> entity_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;  // forces refill on first draw
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace turbda
