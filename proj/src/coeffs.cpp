#include "qpr/coeffs.hpp"

#include <algorithm>

namespace qpr {

void CoeffRingDescriptor::validate() const {
    if (p < 3 || !is_small_prime(p)) throw DomainViolation("p must be an odd prime >= 3");
    if (N < 4) throw DomainViolation("N must be >= 4");
    if (k < 1) throw DomainViolation("k must be >= 1");
    if (s < 1) throw DomainViolation("s must be >= 1");
}

std::vector<GrElt> cyclotomic_shifted(const GrCtx& gr, u64 p, int k) {
    // Phi_{p^k}(X) = sum_{i<p} X^(i*p^(k-1)) evaluated at X = 1+y.
    auto poly_mul = [&](const std::vector<GrElt>& a, const std::vector<GrElt>& b) {
        std::vector<GrElt> r(a.size() + b.size() - 1, gr.zero());
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                r[i + j] = gr.add(r[i + j], gr.mul(a[i], b[j]));
        return r;
    };
    std::vector<GrElt> base = {gr.one(), gr.one()};  // 1 + y
    u64 e = 1;
    for (int i = 1; i < k; ++i) e *= p;
    std::vector<GrElt> x_pk = {gr.one()};  // (1+y)^(p^(k-1))
    {
        std::vector<GrElt> b = base;
        u64 ee = e;
        while (ee) {
            if (ee & 1) x_pk = poly_mul(x_pk, b);
            b = poly_mul(b, b);
            ee >>= 1;
        }
    }
    std::vector<GrElt> acc = {gr.one()};
    std::vector<GrElt> pw = {gr.one()};
    for (u64 i = 1; i < p; ++i) {
        pw = poly_mul(pw, x_pk);
        if (acc.size() < pw.size()) acc.resize(pw.size(), gr.zero());
        for (size_t j = 0; j < pw.size(); ++j) acc[j] = gr.add(acc[j], pw[j]);
    }
    return acc;
}

std::shared_ptr<const CycloContext> CycloContext::make(const CoeffRingDescriptor& d) {
    d.validate();
    auto ctx = std::make_shared<CycloContext>();
    ctx->desc = d;
    GrCtx gr(ZqCtx(d.p, d.N), d.s);
    u64 phi = 1;
    for (int i = 1; i < d.k; ++i) phi *= d.p;
    phi *= d.p - 1;
    ctx->phi = phi;
    ctx->q = QuotCtx(gr, cyclotomic_shifted(gr, d.p, d.k));
    return ctx;
}

CycloElement CycloElement::from_int(const std::shared_ptr<const CycloContext>& ctx, i64 n) {
    return CycloElement(ctx, scaled_from_int(ctx->q, n));
}

CycloElement CycloElement::zero(const std::shared_ptr<const CycloContext>& ctx) {
    return CycloElement(ctx, scaled_zero(ctx->q));
}

CycloElement CycloElement::one(const std::shared_ptr<const CycloContext>& ctx) {
    return CycloElement(ctx, scaled_one(ctx->q));
}

CycloElement CycloElement::gen(const std::shared_ptr<const CycloContext>& ctx) {
    Scaled v = scaled_zero(ctx->q);
    v.A = ctx->q.gr.zq.N;
    if (ctx->q.deg < 2) throw DomainViolation("coefficient ring has no generator slot");
    v.c[static_cast<size_t>(ctx->q.gr.s)] = 1;
    return CycloElement(ctx, v);
}

void check_same_ctx(const CycloElement& a, const CycloElement& b) {
    if (!(a.ctx()->desc == b.ctx()->desc))
        throw DomainViolation("mixed coefficient ring descriptors");
}

CycloElement operator+(const CycloElement& a, const CycloElement& b) {
    check_same_ctx(a, b);
    return CycloElement(a.ctx(), scaled_add(a.ctx()->q, a.raw(), b.raw()));
}

CycloElement operator-(const CycloElement& a, const CycloElement& b) {
    check_same_ctx(a, b);
    return CycloElement(a.ctx(), scaled_sub(a.ctx()->q, a.raw(), b.raw()));
}

CycloElement operator*(const CycloElement& a, const CycloElement& b) {
    check_same_ctx(a, b);
    return CycloElement(a.ctx(), scaled_mul(a.ctx()->q, a.raw(), b.raw()));
}

CycloElement operator-(const CycloElement& a) {
    return CycloElement(a.ctx(), scaled_neg(a.ctx()->q, a.raw()));
}

namespace {

// ring automorphism y -> (1+y)^j - 1 (j prime to p), by Horner substitution
Scaled cyclo_conjugate(const QuotCtx& q, const Scaled& x, u64 j) {
    Scaled y = scaled_zero(q);
    y.A = q.gr.zq.N;
    y.c[static_cast<size_t>(q.gr.s)] = 1;
    Scaled one = scaled_one(q);
    Scaled base = scaled_add(q, y, one);
    Scaled uj = scaled_one(q);
    u64 e = j;
    while (e) {
        if (e & 1) uj = scaled_mul(q, uj, base);
        base = scaled_mul(q, base, base);
        e >>= 1;
    }
    uj = scaled_sub(q, uj, one);
    Scaled acc = scaled_zero(q);
    for (int i = q.deg - 1; i >= 0; --i) {
        acc = scaled_mul(q, acc, uj);
        acc = scaled_add(q, acc, scaled_from_gr(q, q.coeff(x.c, i)));
    }
    acc.e += x.e;
    acc.A = std::min(acc.A - x.e, x.A);
    scaled_normalize(q, acc);
    return acc;
}

} // namespace

CycloElement CycloElement::inv() const {
    const QuotCtx& q = ctx_->q;
    if (q.is_unit_raw(v_.c)) return CycloElement(ctx_, scaled_inv(q, v_));
    if (is_zero()) throw NonUnit("inverse of zero");
    if (scaled_abs_prec(v_) <= 0) throw PrecisionExhausted("inverse needs positive precision");
    // Invert through the product of cyclotomic conjugates: the full product is
    // a scalar, and scalars invert by a p-power shift plus a unit inverse.
    u64 pk = 1;
    for (int i = 0; i < ctx_->desc.k; ++i) pk *= ctx_->desc.p;
    Scaled prod = scaled_one(q);
    for (u64 j = 2; j < pk; ++j) {
        if (j % ctx_->desc.p == 0) continue;
        prod = scaled_mul(q, prod, cyclo_conjugate(q, v_, j));
    }
    Scaled norm = scaled_mul(q, v_, prod);
    for (int i = 1; i < q.deg; ++i) {
        Scaled coef{q.from_gr(q.coeff(norm.c, i)), norm.e, norm.A};
        if (!scaled_is_zero(q, coef)) throw NonUnit("conjugate norm is not scalar");
    }
    GrElt g0 = q.coeff(norm.c, 0);
    int v = q.gr.content(g0);
    if (v >= q.gr.zq.N) throw NonUnit("conjugate norm vanishes at precision");
    GrElt unit = q.gr.div_pow_p(g0, v);
    i64 norm_val = v - norm.e;
    Scaled scalar_inv{q.from_gr(q.gr.inv(unit)), norm_val, norm.A - v};
    scaled_normalize(q, scalar_inv);
    Scaled result = scaled_mul(q, prod, scalar_inv);
    Scaled check = scaled_mul(q, v_, result);
    if (!scaled_eq(q, check, scaled_one(q))) throw NonUnit("norm inversion failed at precision");
    return CycloElement(ctx_, result);
}

CycloElement CycloElement::div_int(i64 n) const {
    return CycloElement(ctx_, scaled_div_int(ctx_->q, v_, n));
}

CycloElement CycloElement::div_pow_p(i64 j) const {
    return CycloElement(ctx_, scaled_div_pow_p(ctx_->q, v_, j));
}

bool eq(const CycloElement& a, const CycloElement& b) {
    check_same_ctx(a, b);
    return scaled_eq(a.ctx()->q, a.raw(), b.raw());
}

i64 content_valuation(const CycloElement& a) { return scaled_val(a.ctx()->q, a.raw()); }

} // namespace qpr
