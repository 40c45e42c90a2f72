#ifndef GREENSEG_HALF_HPP
#define GREENSEG_HALF_HPP

#include <cstdint>
#include <cstring>

namespace greenseg {

/// IEEE 754 binary16 conversion, round-to-nearest-even, with Inf/NaN and
/// subnormal handling. Used for 16-bit feature quantization and the
/// feature file format.
inline std::uint16_t float_to_half(float value) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, 4);

    const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000u);
    const std::uint32_t exp = (bits >> 23) & 0xffu;
    std::uint32_t mant = bits & 0x7fffffu;

    if (exp == 0xffu) { // Inf or NaN
        const std::uint16_t payload = mant ? static_cast<std::uint16_t>(0x200u | (mant >> 13)) : 0;
        return static_cast<std::uint16_t>(sign | 0x7c00u | payload);
    }

    const int half_exp = static_cast<int>(exp) - 127 + 15;
    if (half_exp >= 31) { // overflow -> Inf
        return static_cast<std::uint16_t>(sign | 0x7c00u);
    }
    if (half_exp <= 0) { // subnormal or zero
        if (half_exp < -10) return sign;
        mant |= 0x800000u; // implied leading one
        const std::uint32_t shift = static_cast<std::uint32_t>(14 - half_exp);
        std::uint32_t half_mant = mant >> shift;
        // round to nearest even on the dropped bits
        const std::uint32_t rem = mant & ((1u << shift) - 1u);
        const std::uint32_t halfway = 1u << (shift - 1);
        if (rem > halfway || (rem == halfway && (half_mant & 1u)))
            ++half_mant;
        return static_cast<std::uint16_t>(sign | half_mant);
    }

    std::uint16_t out = static_cast<std::uint16_t>(sign | (half_exp << 10) | (mant >> 13));
    const std::uint32_t rem = mant & 0x1fffu;
    if (rem > 0x1000u || (rem == 0x1000u && (out & 1u)))
        ++out; // carries propagate into the exponent correctly
    return out;
}

inline float half_to_float(std::uint16_t h) {
    const std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000u) << 16;
    const std::uint32_t exp = (h >> 10) & 0x1fu;
    const std::uint32_t mant = h & 0x3ffu;

    std::uint32_t bits;
    if (exp == 0) {
        if (mant == 0) {
            bits = sign;
        } else {
            // normalize the subnormal
            std::uint32_t m = mant;
            int e = -1;
            do {
                m <<= 1;
                ++e;
            } while (!(m & 0x400u));
            bits = sign | ((127 - 15 - e) << 23) | ((m & 0x3ffu) << 13);
        }
    } else if (exp == 31) {
        bits = sign | 0x7f800000u | (mant << 13);
    } else {
        bits = sign | ((exp - 15 + 127) << 23) | (mant << 13);
    }
    float out;
    std::memcpy(&out, &bits, 4);
    return out;
}

/// Round a double through the given storage precision.
inline double round_to_f32(double v) { return static_cast<double>(static_cast<float>(v)); }
inline double round_to_f16(double v) {
    return static_cast<double>(half_to_float(float_to_half(static_cast<float>(v))));
}

} // namespace greenseg

#endif // GREENSEG_HALF_HPP
