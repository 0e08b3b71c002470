#pragma once

#include <memory>

#include "qpr/quot.hpp"

namespace qpr {

/// Parameters of the coefficient ring (Z/p^N)[y,w]/(Phi_{p^k}(1+y), g_s(w)).
struct CoeffRingDescriptor {
    u64 p = 5;
    int N = 12;
    int k = 1;
    int s = 1;

    void validate() const;
    bool operator==(const CoeffRingDescriptor&) const = default;
};

/// Phi_{p^k}(1+y) over GR, as a monic coefficient list of degree phi(p^k).
std::vector<GrElt> cyclotomic_shifted(const GrCtx& gr, u64 p, int k);

struct CycloContext {
    CoeffRingDescriptor desc;
    QuotCtx q;
    u64 phi = 0;

    static std::shared_ptr<const CycloContext> make(const CoeffRingDescriptor& d);
};

/// Element of the cyclotomic coefficient ring, a p-scaled polynomial with an
/// effective-precision ledger.
class CycloElement {
public:
    CycloElement() = default;
    CycloElement(std::shared_ptr<const CycloContext> ctx, Scaled v)
        : ctx_(std::move(ctx)), v_(std::move(v)) {}

    static CycloElement from_int(const std::shared_ptr<const CycloContext>& ctx, i64 n);
    static CycloElement zero(const std::shared_ptr<const CycloContext>& ctx);
    static CycloElement one(const std::shared_ptr<const CycloContext>& ctx);
    /// The generator y.
    static CycloElement gen(const std::shared_ptr<const CycloContext>& ctx);

    const std::shared_ptr<const CycloContext>& ctx() const { return ctx_; }
    const Scaled& raw() const { return v_; }
    i64 scale_exp() const { return v_.e; }
    i64 eff_prec() const { return scaled_abs_prec(v_); }

    bool is_zero() const { return scaled_is_zero(ctx_->q, v_); }
    CycloElement inv() const;
    CycloElement div_int(i64 n) const;
    CycloElement div_pow_p(i64 j) const;

    friend CycloElement operator+(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator-(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator*(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator-(const CycloElement& a);

private:
    std::shared_ptr<const CycloContext> ctx_;
    Scaled v_;
};

bool eq(const CycloElement& a, const CycloElement& b);

/// min p-adic valuation over coefficients adjusted by the scale; kExactPrec
/// for a value that is zero at precision.
i64 content_valuation(const CycloElement& a);

void check_same_ctx(const CycloElement& a, const CycloElement& b);

} // namespace qpr
