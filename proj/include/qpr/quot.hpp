#pragma once

#include <vector>

#include "qpr/gr.hpp"

namespace qpr {

/// GR[x]/(F), F monic of degree `deg` and congruent to x^deg mod p.
/// Raw elements are flattened coefficient vectors of length deg*s
/// (coefficient i of x^i occupies the slice [i*s, (i+1)*s)).
struct QuotCtx {
    GrCtx gr;
    int deg = 0;
    std::vector<GrElt> modulus;  // monic, length deg+1

    QuotCtx() = default;
    QuotCtx(GrCtx gr_, std::vector<GrElt> modulus_);

    int width() const { return deg * gr.s; }

    std::vector<u64> zero() const { return std::vector<u64>(width(), 0); }
    std::vector<u64> one() const;
    std::vector<u64> from_gr(const GrElt& a) const;
    GrElt coeff(const std::vector<u64>& c, int i) const;
    void set_coeff(std::vector<u64>& c, int i, const GrElt& a) const;

    bool is_zero_raw(const std::vector<u64>& c) const;
    std::vector<u64> add_raw(const std::vector<u64>& a, const std::vector<u64>& b) const;
    std::vector<u64> sub_raw(const std::vector<u64>& a, const std::vector<u64>& b) const;
    std::vector<u64> neg_raw(const std::vector<u64>& a) const;
    std::vector<u64> mul_raw(const std::vector<u64>& a, const std::vector<u64>& b) const;
    std::vector<u64> scale_raw(const GrElt& c, const std::vector<u64>& a) const;

    /// Reduce an arbitrary-degree GR coefficient list modulo the modulus.
    std::vector<u64> reduce(std::vector<GrElt> poly) const;

    int content(const std::vector<u64>& c) const;  // min valuation, N for zero
    std::vector<u64> div_pow_p_raw(const std::vector<u64>& c, int j) const;

    /// Inverse of a unit (constant coefficient a unit in GR); Newton lifting.
    std::vector<u64> inv_raw(const std::vector<u64>& a) const;
    bool is_unit_raw(const std::vector<u64>& a) const;
};

/// Division with remainder of a GR coefficient list by a monic GR polynomial.
void gr_poly_divrem_monic(const GrCtx& gr, std::vector<GrElt> dividend,
                          const std::vector<GrElt>& divisor,
                          std::vector<GrElt>& quot, std::vector<GrElt>& rem);

constexpr i64 kExactPrec = i64(1) << 40;

/// A ring element scaled by a power of p: value = p^(-scale_exp) * poly,
/// poly stored mod p^N with unit (or zero) content. A is the window of
/// trusted mantissa digits; the value itself is trusted modulo
/// p^(A - scale_exp), which is the effective precision the ledger reports.
/// Every division by p^j raises scale_exp and so costs j digits of effective
/// precision; multiplications keep the window (the arithmetic is exact mod
/// p^N and errors stay in the scaled lattice).
struct Scaled {
    std::vector<u64> c;
    i64 e = 0;  // scale_exp
    i64 A = 0;  // trusted mantissa digits
};

i64 scaled_val(const QuotCtx& q, const Scaled& x);  // valuation of the value
i64 scaled_abs_prec(const Scaled& x);               // value trusted mod p^this
void scaled_normalize(const QuotCtx& q, Scaled& x);
Scaled scaled_from_int(const QuotCtx& q, i64 n);
Scaled scaled_from_gr(const QuotCtx& q, const GrElt& a);
Scaled scaled_zero(const QuotCtx& q);
Scaled scaled_one(const QuotCtx& q);
bool scaled_is_zero(const QuotCtx& q, const Scaled& x);  // zero at its own precision
Scaled scaled_add(const QuotCtx& q, const Scaled& a, const Scaled& b);
Scaled scaled_sub(const QuotCtx& q, const Scaled& a, const Scaled& b);
Scaled scaled_neg(const QuotCtx& q, const Scaled& a);
Scaled scaled_mul(const QuotCtx& q, const Scaled& a, const Scaled& b);
Scaled scaled_mul_int(const QuotCtx& q, const Scaled& a, i64 n);
Scaled scaled_inv(const QuotCtx& q, const Scaled& a);
Scaled scaled_div_pow_p(const QuotCtx& q, const Scaled& a, i64 j);
/// Exact division by an integer n = unit * p^v: multiply by the unit inverse,
/// then shift scale by v.
Scaled scaled_div_int(const QuotCtx& q, const Scaled& a, i64 n);
bool scaled_eq(const QuotCtx& q, const Scaled& a, const Scaled& b);
/// Compare modulo p^m after aligning scales (used across precision profiles).
bool scaled_agree_mod(const QuotCtx& qa, const Scaled& a, const QuotCtx& qb, const Scaled& b, i64 m);

} // namespace qpr
