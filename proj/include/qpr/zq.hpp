#pragma once

#include <cstdint>
#include <vector>

#include "qpr/errors.hpp"

namespace qpr {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// The base coefficient ring Z/p^N, p an odd prime. Values live in [0, p^N).
struct ZqCtx {
    u64 p = 0;
    int N = 0;
    u64 pN = 0;

    ZqCtx() = default;
    ZqCtx(u64 p_, int N_);

    u64 add(u64 a, u64 b) const {
        u64 r = a + b;
        return r >= pN ? r - pN : r;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + pN - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : pN - a; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>((u128)a * b % pN); }
    u64 pow(u64 a, u64 e) const;

    /// p-adic valuation; returns N for 0.
    int val(u64 a) const;

    /// Inverse of a unit; throws NonUnit otherwise.
    u64 inv(u64 a) const;

    /// Exact division by p^j; requires val(a) >= j.
    u64 div_pow_p(u64 a, int j) const;

    u64 pow_p(int j) const;  // p^j as a value, j in [0, N]

    u64 from_int(i64 n) const;
};

bool is_small_prime(u64 p);

} // namespace qpr
