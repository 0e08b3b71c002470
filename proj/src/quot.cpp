#include "qpr/quot.hpp"

#include <algorithm>

namespace qpr {

QuotCtx::QuotCtx(GrCtx gr_, std::vector<GrElt> modulus_)
    : gr(std::move(gr_)), modulus(std::move(modulus_)) {
    deg = static_cast<int>(modulus.size()) - 1;
    if (deg < 1) throw DomainViolation("quotient modulus must be nonconstant");
    if (!(modulus.back() == gr.one())) throw DomainViolation("quotient modulus must be monic");
    for (int i = 0; i < deg; ++i)
        if (gr.content(modulus[i]) < 1)
            throw DomainViolation("quotient modulus must reduce to x^deg mod p");
}

std::vector<u64> QuotCtx::one() const {
    auto r = zero();
    r[0] = 1 % gr.zq.pN;
    return r;
}

std::vector<u64> QuotCtx::from_gr(const GrElt& a) const {
    auto r = zero();
    for (int i = 0; i < gr.s; ++i) r[i] = a[i];
    return r;
}

GrElt QuotCtx::coeff(const std::vector<u64>& c, int i) const {
    GrElt r(gr.s);
    for (int j = 0; j < gr.s; ++j) r[j] = c[static_cast<size_t>(i) * gr.s + j];
    return r;
}

void QuotCtx::set_coeff(std::vector<u64>& c, int i, const GrElt& a) const {
    for (int j = 0; j < gr.s; ++j) c[static_cast<size_t>(i) * gr.s + j] = a[j];
}

bool QuotCtx::is_zero_raw(const std::vector<u64>& c) const {
    for (u64 x : c)
        if (x != 0) return false;
    return true;
}

std::vector<u64> QuotCtx::add_raw(const std::vector<u64>& a, const std::vector<u64>& b) const {
    std::vector<u64> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = gr.zq.add(a[i], b[i]);
    return r;
}

std::vector<u64> QuotCtx::sub_raw(const std::vector<u64>& a, const std::vector<u64>& b) const {
    std::vector<u64> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = gr.zq.sub(a[i], b[i]);
    return r;
}

std::vector<u64> QuotCtx::neg_raw(const std::vector<u64>& a) const {
    std::vector<u64> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = gr.zq.neg(a[i]);
    return r;
}

std::vector<u64> QuotCtx::mul_raw(const std::vector<u64>& a, const std::vector<u64>& b) const {
    std::vector<GrElt> prod(2 * deg - 1, gr.zero());
    for (int i = 0; i < deg; ++i) {
        GrElt ai = coeff(a, i);
        if (gr.is_zero(ai)) continue;
        for (int j = 0; j < deg; ++j) {
            GrElt bj = coeff(b, j);
            if (gr.is_zero(bj)) continue;
            prod[i + j] = gr.add(prod[i + j], gr.mul(ai, bj));
        }
    }
    return reduce(std::move(prod));
}

std::vector<u64> QuotCtx::scale_raw(const GrElt& c, const std::vector<u64>& a) const {
    std::vector<u64> r = zero();
    for (int i = 0; i < deg; ++i) set_coeff(r, i, gr.mul(c, coeff(a, i)));
    return r;
}

std::vector<u64> QuotCtx::reduce(std::vector<GrElt> poly) const {
    for (int d = static_cast<int>(poly.size()) - 1; d >= deg; --d) {
        GrElt c = poly[d];
        if (gr.is_zero(c)) continue;
        poly[d] = gr.zero();
        for (int j = 0; j < deg; ++j)
            poly[d - deg + j] = gr.sub(poly[d - deg + j], gr.mul(modulus[j], c));
    }
    std::vector<u64> r = zero();
    for (int i = 0; i < std::min<int>(deg, static_cast<int>(poly.size())); ++i)
        set_coeff(r, i, poly[i]);
    return r;
}

int QuotCtx::content(const std::vector<u64>& c) const {
    int v = gr.zq.N;
    for (u64 x : c) {
        int w = gr.zq.val(x);
        if (w < v) v = w;
    }
    return v;
}

std::vector<u64> QuotCtx::div_pow_p_raw(const std::vector<u64>& c, int j) const {
    std::vector<u64> r(c.size());
    for (size_t i = 0; i < c.size(); ++i) r[i] = gr.zq.div_pow_p(c[i], j);
    return r;
}

bool QuotCtx::is_unit_raw(const std::vector<u64>& a) const {
    return !gr.fq.is_zero(gr.to_residue(coeff(a, 0)));
}

std::vector<u64> QuotCtx::inv_raw(const std::vector<u64>& a) const {
    if (!is_unit_raw(a)) throw NonUnit("constant coefficient not a unit");
    std::vector<u64> x = from_gr(gr.inv(coeff(a, 0)));
    std::vector<u64> two = zero();
    two[0] = 2 % gr.zq.pN;
    // 1 - a*x starts in the maximal ideal and squares each step
    int cap = 4;
    {
        long m = static_cast<long>(deg) * gr.zq.N;
        while ((1L << cap) < m) ++cap;
        cap += 2;
    }
    for (int it = 0; it < cap; ++it) {
        std::vector<u64> e = sub_raw(two, mul_raw(a, x));
        x = mul_raw(x, e);
        std::vector<u64> check = mul_raw(a, x);
        check[0] = gr.zq.sub(check[0], 1 % gr.zq.pN);
        if (is_zero_raw(check)) return x;
    }
    throw NonUnit("inverse iteration did not converge");
}

void gr_poly_divrem_monic(const GrCtx& gr, std::vector<GrElt> dividend,
                          const std::vector<GrElt>& divisor,
                          std::vector<GrElt>& quot, std::vector<GrElt>& rem) {
    int dd = static_cast<int>(divisor.size()) - 1;
    if (dd < 0 || !(divisor.back() == gr.one()))
        throw DomainViolation("divisor must be monic");
    int nd = static_cast<int>(dividend.size()) - 1;
    quot.assign(std::max(nd - dd + 1, 0) + 1, gr.zero());
    for (int d = nd; d >= dd; --d) {
        GrElt c = dividend[d];
        if (gr.is_zero(c)) continue;
        quot[d - dd] = c;
        for (int j = 0; j <= dd; ++j)
            dividend[d - dd + j] = gr.sub(dividend[d - dd + j], gr.mul(divisor[j], c));
    }
    dividend.resize(dd > 0 ? dd : 1, gr.zero());
    rem = std::move(dividend);
    while (quot.size() > 1 && gr.is_zero(quot.back())) quot.pop_back();
}

i64 scaled_val(const QuotCtx& q, const Scaled& x) {
    if (q.is_zero_raw(x.c)) return kExactPrec;
    return q.content(x.c) - x.e;
}

i64 scaled_abs_prec(const Scaled& x) {
    if (x.A >= kExactPrec) return kExactPrec;
    return x.A - x.e;
}

void scaled_normalize(const QuotCtx& q, Scaled& x) {
    if (x.A > static_cast<i64>(q.gr.zq.N) && x.A < kExactPrec) x.A = q.gr.zq.N;
    if (q.is_zero_raw(x.c)) {
        x.A -= x.e;  // keep the effective precision of the zero value
        x.e = 0;
        return;
    }
    int v = q.content(x.c);
    if (v > 0) {
        x.c = q.div_pow_p_raw(x.c, v);
        x.e -= v;
        x.A -= v;
    }
    if (x.A < 0) x.A = 0;
}

Scaled scaled_zero(const QuotCtx& q) { return Scaled{q.zero(), 0, kExactPrec}; }

Scaled scaled_one(const QuotCtx& q) { return Scaled{q.one(), 0, q.gr.zq.N}; }

Scaled scaled_from_int(const QuotCtx& q, i64 n) {
    if (n == 0) return Scaled{q.zero(), 0, kExactPrec};
    // extract the p-power from the integer itself, so negative values keep a
    // full trusted window (reducing first would wrap the mantissa short)
    i64 m = n;
    i64 v = 0;
    while (m % static_cast<i64>(q.gr.zq.p) == 0) {
        m /= static_cast<i64>(q.gr.zq.p);
        ++v;
    }
    Scaled r{q.zero(), -v, static_cast<i64>(q.gr.zq.N)};
    r.c[0] = q.gr.zq.from_int(m);
    return r;
}

Scaled scaled_from_gr(const QuotCtx& q, const GrElt& a) {
    Scaled r{q.from_gr(a), 0, static_cast<i64>(q.gr.zq.N)};
    if (q.is_zero_raw(r.c)) return Scaled{q.zero(), 0, kExactPrec};
    scaled_normalize(q, r);
    return r;
}

bool scaled_is_zero(const QuotCtx& q, const Scaled& x) {
    return scaled_val(q, x) >= scaled_abs_prec(x);
}

namespace {

std::vector<u64> shift_up(const QuotCtx& q, const std::vector<u64>& c, i64 j) {
    if (j <= 0) return c;
    if (j >= q.gr.zq.N) return q.zero();
    u64 f = q.gr.zq.pow_p(static_cast<int>(j));
    std::vector<u64> r(c.size());
    for (size_t i = 0; i < c.size(); ++i) r[i] = q.gr.zq.mul(c[i], f);
    return r;
}

} // namespace

Scaled scaled_add(const QuotCtx& q, const Scaled& a, const Scaled& b) {
    i64 E = std::max(a.e, b.e);
    Scaled r;
    r.c = q.add_raw(shift_up(q, a.c, E - a.e), shift_up(q, b.c, E - b.e));
    r.e = E;
    // shifted mantissas gain trusted digits, capped at the storage width
    i64 wa = std::min<i64>(a.A + (E - a.e), q.gr.zq.N);
    i64 wb = std::min<i64>(b.A + (E - b.e), q.gr.zq.N);
    if (a.A >= kExactPrec) wa = kExactPrec;
    if (b.A >= kExactPrec) wb = kExactPrec;
    r.A = std::min(wa, wb);
    scaled_normalize(q, r);
    return r;
}

Scaled scaled_neg(const QuotCtx& q, const Scaled& a) {
    Scaled r{q.neg_raw(a.c), a.e, a.A};
    return r;
}

Scaled scaled_sub(const QuotCtx& q, const Scaled& a, const Scaled& b) {
    return scaled_add(q, a, scaled_neg(q, b));
}

Scaled scaled_mul(const QuotCtx& q, const Scaled& a, const Scaled& b) {
    Scaled r;
    r.c = q.mul_raw(a.c, b.c);
    r.e = a.e + b.e;
    // normalized mantissas have unit content, so the product mantissa is
    // trusted on the smaller of the two windows
    i64 wa = a.A, wb = b.A;
    if (!q.is_zero_raw(a.c)) wb = std::min<i64>(wb + q.content(a.c), kExactPrec);
    if (!q.is_zero_raw(b.c)) wa = std::min<i64>(wa + q.content(b.c), kExactPrec);
    r.A = std::min(wa, wb);
    scaled_normalize(q, r);
    return r;
}

Scaled scaled_mul_int(const QuotCtx& q, const Scaled& a, i64 n) {
    return scaled_mul(q, a, scaled_from_int(q, n));
}

Scaled scaled_inv(const QuotCtx& q, const Scaled& a) {
    if (q.is_zero_raw(a.c)) throw NonUnit("inverse of zero");
    if (scaled_abs_prec(a) <= 0) throw PrecisionExhausted("inverse needs positive precision");
    Scaled r;
    r.c = q.inv_raw(a.c);
    r.e = -a.e;
    r.A = a.A;
    scaled_normalize(q, r);
    return r;
}

Scaled scaled_div_pow_p(const QuotCtx& q, const Scaled& a, i64 j) {
    Scaled r = a;
    r.e += j;
    scaled_normalize(q, r);
    return r;
}

Scaled scaled_div_int(const QuotCtx& q, const Scaled& a, i64 n) {
    if (n == 0) throw DomainViolation("division by zero integer");
    bool negate = n < 0;
    u64 m = static_cast<u64>(negate ? -n : n);
    int v = 0;
    while (m % q.gr.zq.p == 0) {
        m /= q.gr.zq.p;
        ++v;
    }
    Scaled r = scaled_mul(q, a, scaled_from_int(q, q.gr.zq.inv(m % q.gr.zq.pN)));
    if (negate) r = scaled_neg(q, r);
    return scaled_div_pow_p(q, r, v);
}

bool scaled_eq(const QuotCtx& q, const Scaled& a, const Scaled& b) {
    i64 m = std::min(scaled_abs_prec(a), scaled_abs_prec(b));
    if (m <= 0) throw PrecisionExhausted("comparison below zero precision");
    Scaled d = scaled_sub(q, a, b);
    return scaled_val(q, d) >= m;
}

bool scaled_agree_mod(const QuotCtx& qa, const Scaled& a, const QuotCtx& qb, const Scaled& b, i64 m) {
    // Values compared mod p^m; the two contexts may differ in digit count only.
    if (a.c.size() != b.c.size()) return false;
    i64 E = std::max(a.e, b.e);
    i64 digits = std::min({m + E, static_cast<i64>(qa.gr.zq.N), static_cast<i64>(qb.gr.zq.N)});
    if (digits <= 0) return true;
    u64 mod = 1;
    for (i64 i = 0; i < digits; ++i) mod *= qa.gr.zq.p;
    std::vector<u64> ca = shift_up(qa, a.c, E - a.e);
    std::vector<u64> cb = shift_up(qb, b.c, E - b.e);
    for (size_t i = 0; i < ca.size(); ++i)
        if (ca[i] % mod != cb[i] % mod) return false;
    return true;
}

} // namespace qpr
