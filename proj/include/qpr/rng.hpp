#pragma once

#include "qpr/rh.hpp"

namespace qpr {

/// Deterministic counter-based generator (splitmix64): draw i of a stream
/// seeded with s is mix(s + (i+1) * 0x9E3779B97F4A7C15). Identical sequences
/// on every platform.
struct Rng {
    u64 state;

    explicit Rng(u64 seed) : state(seed) {}

    u64 next() {
        u64 z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    u64 below(u64 n) { return n == 0 ? 0 : next() % n; }
    i64 range(i64 lo, i64 hi) { return lo + static_cast<i64>(below(static_cast<u64>(hi - lo + 1))); }
};

BdrElement random_bdr(Rng& rng, const std::shared_ptr<const BdrContext>& ctx);
BdrElement random_bdr_unit(Rng& rng, const std::shared_ptr<const BdrContext>& ctx);
/// Element with vanishing theta image (a multiple of the kernel generator).
BdrElement random_bdr_kernel(Rng& rng, const std::shared_ptr<const BdrContext>& ctx);
CycloElement random_cyclo(Rng& rng, const std::shared_ptr<const CycloContext>& ctx);
CycloElement random_cyclo_unit(Rng& rng, const std::shared_ptr<const CycloContext>& ctx);

ToricElement random_toric(Rng& rng, const std::shared_ptr<const BdrContext>& ctx, int d, int level,
                          int max_terms);

/// Invertible gauge: unit diagonal times integer unipotent times (I + S) with
/// S one p- or t-small monomial.
ToricMat random_gauge(Rng& rng, const std::shared_ptr<const BdrContext>& ctx, int d, int r);

/// Constant diagonal connection with entries small enough for the stated
/// level, gauge-transformed by random_gauge. Always integrable.
TConnection random_connection(Rng& rng, const std::shared_ptr<const BdrContext>& ctx, int d, int r);

/// exp of a random_connection at the given level; passes the cocycle test by
/// construction and its entries are congruent to I mod p^2 up to the kernel.
Cocycle random_cocycle(u64 seed, int d, int r, int level, const PrecisionProfile& profile);

} // namespace qpr
