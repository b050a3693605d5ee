#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>

namespace turbda {

// exp(x) for x <= 0, accurate to ~2 ulp, written so the compiler can
// vectorize it inside hot loops (no libm call, no branches besides the
// underflow clamp). Inputs below -708 return 0 to stay clear of the
// subnormal range.
inline double fast_exp_nonpos(double x) {
    constexpr double kInvLn2 = 1.4426950408889634074;
    constexpr double kLn2Hi = 6.93147180369123816490e-01;
    constexpr double kLn2Lo = 1.90821492927058770002e-10;
    constexpr double kMagic = 6755399441055744.0;  // 1.5 * 2^52

    const bool under = x < -708.0;
    if (under) x = 0.0;

    const double t = x * kInvLn2 + kMagic;
    const double nf = t - kMagic;
    std::uint64_t tb;
    std::memcpy(&tb, &t, 8);
    const std::int32_t n = std::int32_t(tb & 0xffffffffu);

    double r = x - nf * kLn2Hi;
    r -= nf * kLn2Lo;

    double p = 1.0 / 479001600.0;
    p = p * r + 1.0 / 39916800.0;
    p = p * r + 1.0 / 3628800.0;
    p = p * r + 1.0 / 362880.0;
    p = p * r + 1.0 / 40320.0;
    p = p * r + 1.0 / 5040.0;
    p = p * r + 1.0 / 720.0;
    p = p * r + 1.0 / 120.0;
    p = p * r + 1.0 / 24.0;
    p = p * r + 1.0 / 6.0;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;

    std::uint64_t pb;
    std::memcpy(&pb, &p, 8);
    pb += std::uint64_t(std::int64_t(n)) << 52;
    std::memcpy(&p, &pb, 8);
    return under ? 0.0 : p;
}

}  // namespace turbda
