#pragma once

// Independent reference computations for the test suites. Everything here is
// exact big-integer / rational arithmetic with no dependence on the library's
// own reduction or series code paths.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <vector>

#include "qpr/bdr.hpp"
#include "qpr/toric.hpp"

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using QPoly = std::vector<BigRat>;  // coefficient 0 first

inline QPoly qpoly_trim(QPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, BigRat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return qpoly_trim(r);
}

inline QPoly qpoly_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), BigRat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return qpoly_trim(r);
}

inline QPoly qpoly_scale(const BigRat& c, const QPoly& a) {
    QPoly r = a;
    for (auto& x : r) x *= c;
    return qpoly_trim(r);
}

/// Remainder of a modulo monic m, exact rational long division.
inline QPoly qpoly_mod(QPoly a, const QPoly& m) {
    int dm = static_cast<int>(m.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= dm) {
        BigRat c = a.back();
        size_t shift = a.size() - m.size();
        if (c != 0)
            for (size_t i = 0; i < m.size(); ++i) a[shift + i] -= c * m[i];
        a.pop_back();
        a = qpoly_trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline QPoly qpoly_pow(QPoly base, unsigned e) {
    QPoly acc = {BigRat(1)};
    while (e) {
        if (e & 1) acc = qpoly_mul(acc, base);
        base = qpoly_mul(base, base);
        e >>= 1;
    }
    return acc;
}

/// Phi_{p^k}(1+z) with exact integer coefficients.
inline QPoly cyclo_shifted_q(unsigned p, unsigned k) {
    QPoly onepz = {BigRat(1), BigRat(1)};
    unsigned e = 1;
    for (unsigned i = 1; i < k; ++i) e *= p;
    QPoly xp = qpoly_pow(onepz, e);
    QPoly acc = {BigRat(1)};
    QPoly pw = {BigRat(1)};
    for (unsigned i = 1; i < p; ++i) {
        pw = qpoly_mul(pw, xp);
        acc = qpoly_add(acc, pw);
    }
    return acc;
}

/// p^k * log(1+z) truncated: sum_{j=1..jmax} +-p^k z^j / j reduced mod xi^alpha.
inline QPoly t_series_q(unsigned p, unsigned k, unsigned alpha, unsigned jmax) {
    QPoly xi = cyclo_shifted_q(p, k);
    QPoly mod = qpoly_pow(xi, alpha);
    BigInt pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= p;
    QPoly acc;
    QPoly zpow = {BigRat(1)};
    QPoly z = {BigRat(0), BigRat(1)};
    for (unsigned j = 1; j <= jmax; ++j) {
        zpow = qpoly_mod(qpoly_mul(zpow, z), mod);
        BigRat c = BigRat(pk) / j;
        if (j % 2 == 0) c = -c;
        acc = qpoly_add(acc, qpoly_scale(c, zpow));
    }
    return qpoly_mod(acc, mod);
}

/// exp of a rational polynomial that is nilpotent mod `mod` (finite sum).
inline QPoly qpoly_exp_nilpotent(const QPoly& x, const QPoly& mod, unsigned cap) {
    QPoly acc = {BigRat(1)};
    QPoly term = {BigRat(1)};
    for (unsigned j = 1; j <= cap; ++j) {
        term = qpoly_mod(qpoly_mul(term, x), mod);
        term = qpoly_scale(BigRat(1) / j, term);
        if (term.empty()) break;
        acc = qpoly_add(acc, term);
    }
    return qpoly_mod(acc, mod);
}

inline QPoly qpoly_log_one_plus(const QPoly& x, const QPoly& mod, unsigned cap) {
    QPoly acc;
    QPoly pw = {BigRat(1)};
    for (unsigned j = 1; j <= cap; ++j) {
        pw = qpoly_mod(qpoly_mul(pw, x), mod);
        if (pw.empty()) break;
        BigRat c = BigRat(1) / j;
        if (j % 2 == 0) c = -c;
        acc = qpoly_add(acc, qpoly_scale(c, pw));
    }
    return qpoly_mod(acc, mod);
}

/// Congruence of an exact rational (with p-unit reduced denominator after
/// removing p-powers) against value = p^(-e) * digits mod p^m.
inline bool rat_matches_digits(const BigRat& value, qpr::u64 p, qpr::i64 e, qpr::u64 digit,
                               qpr::i64 m) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    if (m <= 0) return true;
    // compare value against digit / p^e modulo p^m: value * p^e == digit (mod p^m)
    BigInt pm = 1;
    for (qpr::i64 i = 0; i < m; ++i) pm *= p;
    BigRat shifted = value;
    if (e >= 0)
        for (qpr::i64 i = 0; i < e; ++i) shifted *= p;
    else
        for (qpr::i64 i = 0; i < -e; ++i) shifted /= p;
    BigInt num = numerator(shifted), den = denominator(shifted);
    if (den % p == 0) return false;  // still fractional after the scale shift
    // num * den^-1 mod pm
    BigInt d = den % pm, x = 1;
    // inverse by Fermat-Euler on the odd prime power: d^(phi(pm)-1)
    BigInt phi = pm / p * (p - 1) - 1;
    BigInt base = (d % pm + pm) % pm, acc = 1, ee = phi;
    while (ee > 0) {
        if (ee % 2 == 1) acc = acc * base % pm;
        base = base * base % pm;
        ee /= 2;
    }
    x = acc;
    BigInt lhs = ((num % pm + pm) % pm) * x % pm;
    return lhs == BigInt(digit % static_cast<qpr::u64>(pm)) % pm;
}

/// Check a library element against an exact rational polynomial, comparing
/// min(eff_prec, m_cap) digits of every coefficient.
inline bool bdr_matches_qpoly(const qpr::BdrElement& a, const QPoly& expect, qpr::i64 m_cap = 1 << 20) {
    const auto& ctx = a.ctx();
    if (ctx->prof.s != 1) return false;  // oracle works over the prime field tower
    // stored digits are trusted on the mantissa window, capped at N
    qpr::i64 m = std::min<qpr::i64>({a.raw().A, static_cast<qpr::i64>(ctx->prof.N), m_cap});
    if (m <= 0) return true;
    const auto& q = ctx->q;
    for (int i = 0; i < q.deg; ++i) {
        BigRat want = (static_cast<size_t>(i) < expect.size()) ? expect[static_cast<size_t>(i)] : BigRat(0);
        qpr::u64 digit = a.raw().c[static_cast<size_t>(i)];
        if (!rat_matches_digits(want, ctx->prof.p, a.raw().e, digit, m)) return false;
    }
    return true;
}

/// Extended Euclid over the integers (for frozen modular-inverse values).
inline qpr::i64 egcd_inverse(qpr::i64 a, qpr::i64 mod) {
    qpr::i64 t = 0, newt = 1, r = mod, newr = ((a % mod) + mod) % mod;
    while (newr != 0) {
        qpr::i64 qq = r / newr;
        t -= qq * newt;
        std::swap(t, newt);
        r -= qq * newr;
        std::swap(r, newr);
    }
    if (r != 1) throw std::runtime_error("egcd: not invertible");
    return ((t % mod) + mod) % mod;
}

} // namespace oracle
