#include "qpr/zq.hpp"

namespace qpr {

bool is_small_prime(u64 p) {
    if (p < 2) return false;
    for (u64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

ZqCtx::ZqCtx(u64 p_, int N_) : p(p_), N(N_) {
    if (!is_small_prime(p) || p < 3) throw DomainViolation("base prime must be an odd prime >= 3");
    if (N < 1) throw DomainViolation("digit count must be positive");
    u64 m = 1;
    for (int i = 0; i < N; ++i) {
        if (m > (u64(1) << 62) / p) throw DomainViolation("p^N exceeds 2^62");
        m *= p;
    }
    pN = m;
}

u64 ZqCtx::pow(u64 a, u64 e) const {
    u64 r = 1 % pN, b = a % pN;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

int ZqCtx::val(u64 a) const {
    if (a == 0) return N;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

u64 ZqCtx::inv(u64 a) const {
    if (a % p == 0) throw NonUnit("not invertible mod p^N");
    // Fermat inverse mod p, then Newton lifting to p^N.
    u64 x = 1, ap = a % p;
    {
        u64 r = 1, b = ap, e = p - 2;
        while (e) {
            if (e & 1) r = (r * b) % p;
            b = (b * b) % p;
            e >>= 1;
        }
        x = r;
    }
    for (int bits = 1; bits < N; bits *= 2)
        x = mul(x, sub(2 % pN, mul(a, x)));
    return x;
}

u64 ZqCtx::div_pow_p(u64 a, int j) const {
    u64 q = pow_p(j);
    if (a % q != 0) throw DomainViolation("inexact division by p^j");
    return a / q;
}

u64 ZqCtx::pow_p(int j) const {
    u64 r = 1;
    for (int i = 0; i < j; ++i) r *= p;
    return r;
}

u64 ZqCtx::from_int(i64 n) const {
    i64 m = n % static_cast<i64>(pN);
    if (m < 0) m += static_cast<i64>(pN);
    return static_cast<u64>(m);
}

} // namespace qpr
