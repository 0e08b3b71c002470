#pragma once

#include <vector>

#include "qpr/fq.hpp"
#include "qpr/zq.hpp"

namespace qpr {

/// GR(p^N, s) = (Z/p^N)[w]/(g), g a fixed monic lift of an irreducible of
/// degree s over F_p. Elements are coefficient vectors of length s.
using GrElt = std::vector<u64>;

struct GrCtx {
    ZqCtx zq;
    int s = 0;
    std::vector<u64> g;  // monic, length s+1, coefficients in Zq
    FqCtx fq;            // residue field

    GrCtx() = default;
    GrCtx(const ZqCtx& zq_, int s_);

    GrElt zero() const { return GrElt(s, 0); }
    GrElt one() const { GrElt r(s, 0); r[0] = 1 % zq.pN; return r; }
    GrElt from_u64(u64 n) const { GrElt r(s, 0); r[0] = n % zq.pN; return r; }
    bool is_zero(const GrElt& a) const;

    GrElt add(const GrElt& a, const GrElt& b) const;
    GrElt sub(const GrElt& a, const GrElt& b) const;
    GrElt neg(const GrElt& a) const;
    GrElt mul(const GrElt& a, const GrElt& b) const;
    GrElt scale(u64 c, const GrElt& a) const;

    /// min p-adic valuation over coordinates; N for zero.
    int content(const GrElt& a) const;
    GrElt div_pow_p(const GrElt& a, int j) const;

    FqElt to_residue(const GrElt& a) const;
    GrElt lift_residue(const FqElt& a) const;

    /// Inverse of a unit (residue nonzero); Newton lifting. Throws NonUnit.
    GrElt inv(const GrElt& a) const;
};

} // namespace qpr
