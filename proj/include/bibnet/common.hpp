#pragma once

#include <cstdint>
#include <charconv>
#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <random>

namespace bibnet {

inline constexpr const char* version = "0.1.0";

using NodeId = std::uint32_t;

/// One link of a network. For undirected graphs the orientation is
/// irrelevant; builders normalize to source <= target internally.
struct Link {
    NodeId source = 0;
    NodeId target = 0;

    friend bool operator==(const Link&, const Link&) = default;
    friend auto operator<=>(const Link&, const Link&) = default;
};

/// Bad or missing input data (unreadable files, malformed records,
/// graphs that cannot be built from what was given).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A statistical procedure was invoked on data that does not meet its
/// preconditions (too few databases, degenerate columns, ...).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- deterministic random primitives -------------------------------------
//
// std::mt19937_64 is fully specified by the standard; the distribution
// adapters below replace std::uniform_*_distribution, whose algorithms are
// implementation-defined, so that byte-identical output is reproducible
// across toolchains and not just across runs.

/// Stateless 64-bit mix used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform integer in [0, bound) without implementation-defined behavior.
inline std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
    // Rejection sampling on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal deviate (Box-Muller, one value per call).
inline double next_normal(std::mt19937_64& rng) {
    double u = next_unit(rng);
    double v = next_unit(rng);
    if (u <= 0.0) u = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
}

// --- small formatting / hashing helpers ----------------------------------

/// Shortest round-trip decimal representation of a double; deterministic.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

/// FNV-1a 64-bit digest, used to fingerprint inputs and key tables.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ULL;
    }
    return state;
}

inline std::string digest_string(std::uint64_t digest) {
    char buf[19] = "0x";
    for (int i = 0; i < 16; ++i)
        buf[2 + i] = "0123456789abcdef"[(digest >> (60 - 4 * i)) & 0xf];
    return std::string(buf, 18);
}

} // namespace bibnet
