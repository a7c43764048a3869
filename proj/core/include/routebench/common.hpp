#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace routebench {

/// Grid coordinate, (row, col) with row 0 at the top.
struct PixelCoord {
    std::int32_t row = 0;
    std::int32_t col = 0;

    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
    friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

inline double euclidean(PixelCoord a, PixelCoord b) {
    const double dr = static_cast<double>(a.row) - b.row;
    const double dc = static_cast<double>(a.col) - b.col;
    return std::sqrt(dr * dr + dc * dc);
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or unreadable mask input (wrong magic, class id out of range, ...).
struct MaskFormatError : Error {
    using Error::Error;
};

/// Scenario violates the knowledge base (e.g. allowed class in T_N).
struct KbViolationError : Error {
    using Error::Error;
};

/// Query/mask pairing rejected: mask classes are not a superset of the query's.
struct IncompatibleMaskError : Error {
    using Error::Error;
};

/// No reachable start/end region pair under the constrained adjacency.
struct NoValidPairError : Error {
    using Error::Error;
};

/// Text backend failed to produce a compliant query within the retry budget.
struct GenerationFailedError : Error {
    using Error::Error;
};

/// Input file carries an unsupported schema_version or malformed records.
struct SchemaError : Error {
    using Error::Error;
};

}  // namespace routebench

template <>
struct std::hash<routebench::PixelCoord> {
    std::size_t operator()(const routebench::PixelCoord& p) const noexcept {
        const std::uint64_t k =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.row)) << 32) |
            static_cast<std::uint32_t>(p.col);
        return std::hash<std::uint64_t>{}(k);
    }
};
