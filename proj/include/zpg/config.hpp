#pragma once

#include <optional>

namespace zpg {

// Precision knobs. K1 = (exponent bound) + kHeadroom, K2 = K1 + kSecondGap.
inline constexpr int kHeadroom = 4;
inline constexpr int kSecondGap = 2;
// Identity checks use a wider margin for solver pivots.
inline constexpr int kIdentityHeadroom = 6;

struct PrecisionPair {
    int K1 = 0;
    int K2 = 0;
};

inline PrecisionPair precision_from_k1(int K1) { return {K1, K1 + kSecondGap}; }

// Reads ZPG_PRECISION (an integer K1) from the environment when set.
std::optional<int> precision_override_from_env();

}  // namespace zpg
