#include "qpr/fq.hpp"

#include <algorithm>

namespace qpr {

FqElt FqCtx::one() const {
    FqElt r(s, 0);
    r[0] = 1 % p;
    return r;
}

FqElt FqCtx::from_u64(u64 n) const {
    FqElt r(s, 0);
    r[0] = n % p;
    return r;
}

bool FqCtx::is_zero(const FqElt& a) const {
    for (u64 c : a)
        if (c != 0) return false;
    return true;
}

FqElt FqCtx::add(const FqElt& a, const FqElt& b) const {
    FqElt r(s);
    for (int i = 0; i < s; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
}

FqElt FqCtx::sub(const FqElt& a, const FqElt& b) const {
    FqElt r(s);
    for (int i = 0; i < s; ++i) r[i] = (a[i] + p - b[i]) % p;
    return r;
}

FqElt FqCtx::neg(const FqElt& a) const {
    FqElt r(s);
    for (int i = 0; i < s; ++i) r[i] = a[i] == 0 ? 0 : p - a[i];
    return r;
}

FqElt FqCtx::mul(const FqElt& a, const FqElt& b) const {
    std::vector<u64> prod(2 * s - 1, 0);
    for (int i = 0; i < s; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < s; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    // reduce by monic g
    for (int d = 2 * s - 2; d >= s; --d) {
        u64 c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (int j = 0; j < s; ++j) prod[d - s + j] = (prod[d - s + j] + (p - g[j] % p) * c) % p;
    }
    prod.resize(s);
    return prod;
}

FqElt FqCtx::pow(FqElt a, u64 e) const {
    FqElt r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

FqElt FqCtx::inv(const FqElt& a) const {
    if (is_zero(a)) throw NonUnit("zero in residue field");
    return pow(a, order() - 2);
}

u64 FqCtx::order() const {
    u64 q = 1;
    for (int i = 0; i < s; ++i) q *= p;
    return q;
}

std::vector<FqElt> FqCtx::all_elements() const {
    std::vector<FqElt> out;
    out.reserve(order());
    FqElt cur(s, 0);
    while (true) {
        out.push_back(cur);
        int i = s - 1;
        while (i >= 0) {
            cur[i]++;
            if (cur[i] == p) {
                cur[i] = 0;
                --i;
            } else
                break;
        }
        if (i < 0) break;
    }
    // lexicographic on (c_0, ..., c_{s-1})
    std::sort(out.begin(), out.end());
    return out;
}

FqPoly fq_poly_trim(const FqCtx& F, FqPoly f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
    return f;
}

int fq_poly_deg(const FqPoly& f) { return static_cast<int>(f.size()) - 1; }

FqPoly fq_poly_add(const FqCtx& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    return fq_poly_trim(F, r);
}

FqPoly fq_poly_sub(const FqCtx& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
    return fq_poly_trim(F, r);
}

FqPoly fq_poly_mul(const FqCtx& F, const FqPoly& a, const FqPoly& b) {
    if (a.empty() || b.empty()) return {};
    FqPoly r(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return fq_poly_trim(F, r);
}

FqPoly fq_poly_scale(const FqCtx& F, const FqElt& c, const FqPoly& a) {
    FqPoly r(a.size(), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(c, a[i]);
    return fq_poly_trim(F, r);
}

void fq_poly_divrem(const FqCtx& F, const FqPoly& a, const FqPoly& b, FqPoly& q, FqPoly& r) {
    if (b.empty()) throw DomainViolation("polynomial division by zero");
    r = a;
    q.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, F.zero());
    FqElt lead_inv = F.inv(b.back());
    while (static_cast<int>(r.size()) >= static_cast<int>(b.size()) && !r.empty()) {
        FqElt c = F.mul(r.back(), lead_inv);
        size_t shift = r.size() - b.size();
        if (!F.is_zero(c)) {
            q[shift] = F.add(q[shift], c);
            for (size_t i = 0; i < b.size(); ++i)
                r[shift + i] = F.sub(r[shift + i], F.mul(c, b[i]));
        }
        r.pop_back();
        r = fq_poly_trim(F, r);
        if (r.empty()) break;
        if (r.size() < b.size()) break;
    }
    q = fq_poly_trim(F, q);
    r = fq_poly_trim(F, r);
}

FqPoly fq_poly_monic(const FqCtx& F, const FqPoly& a) {
    if (a.empty()) return a;
    return fq_poly_scale(F, F.inv(a.back()), a);
}

FqPoly fq_poly_gcd(const FqCtx& F, FqPoly a, FqPoly b) {
    a = fq_poly_trim(F, a);
    b = fq_poly_trim(F, b);
    while (!b.empty()) {
        FqPoly q, r;
        fq_poly_divrem(F, a, b, q, r);
        a = b;
        b = r;
    }
    return fq_poly_monic(F, a);
}

void fq_poly_bezout_coprime(const FqCtx& F, const FqPoly& a, const FqPoly& b, FqPoly& u, FqPoly& v) {
    FqPoly r0 = fq_poly_trim(F, a), r1 = fq_poly_trim(F, b);
    FqPoly u0 = {F.one()}, u1 = {}, v0 = {}, v1 = {F.one()};
    while (!r1.empty()) {
        FqPoly q, r;
        fq_poly_divrem(F, r0, r1, q, r);
        FqPoly nu = fq_poly_sub(F, u0, fq_poly_mul(F, q, u1));
        FqPoly nv = fq_poly_sub(F, v0, fq_poly_mul(F, q, v1));
        r0 = r1; r1 = r;
        u0 = u1; u1 = nu;
        v0 = v1; v1 = nv;
    }
    if (fq_poly_deg(r0) != 0) throw DomainViolation("bezout: inputs not coprime");
    FqElt c = F.inv(r0[0]);
    u = fq_poly_scale(F, c, u0);
    v = fq_poly_scale(F, c, v0);
}

FqElt fq_poly_eval(const FqCtx& F, const FqPoly& f, const FqElt& x) {
    FqElt r = F.zero();
    for (size_t i = f.size(); i-- > 0;) r = F.add(F.mul(r, x), f[i]);
    return r;
}

std::vector<std::pair<FqElt, int>> fq_poly_roots(const FqCtx& F, const FqPoly& f, FqPoly& remaining) {
    std::vector<std::pair<FqElt, int>> roots;
    remaining = fq_poly_monic(F, fq_poly_trim(F, f));
    for (const FqElt& x : F.all_elements()) {
        int mult = 0;
        while (fq_poly_deg(remaining) >= 1 && F.is_zero(fq_poly_eval(F, remaining, x))) {
            FqPoly lin = {F.neg(x), F.one()};
            FqPoly q, r;
            fq_poly_divrem(F, remaining, lin, q, r);
            remaining = q;
            ++mult;
        }
        if (mult > 0) roots.emplace_back(x, mult);
    }
    return roots;
}

namespace {

// F_p[x] helpers for the irreducibility search, coefficients plain mod p.
using PPoly = std::vector<u64>;

PPoly ppoly_mulmod(u64 p, const PPoly& a, const PPoly& b, const PPoly& mod) {
    std::vector<u64> prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    int dm = static_cast<int>(mod.size()) - 1;
    for (int d = static_cast<int>(prod.size()) - 1; d >= dm; --d) {
        u64 c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (int j = 0; j < dm; ++j) prod[d - dm + j] = (prod[d - dm + j] + (p - mod[j]) * c) % p;
    }
    prod.resize(dm);
    return prod;
}

PPoly ppoly_xpow_pe(u64 p, u64 e, const PPoly& mod) {
    // x^(p^e) mod `mod` by repeated p-th powering
    PPoly x(mod.size() - 1, 0);
    if (x.size() > 1) x[1] = 1;
    PPoly r = x;
    for (u64 i = 0; i < e; ++i) {
        PPoly acc(mod.size() - 1, 0);
        acc[0] = 1;
        PPoly base = r;
        u64 exp = p;
        while (exp) {
            if (exp & 1) acc = ppoly_mulmod(p, acc, base, mod);
            base = ppoly_mulmod(p, base, base, mod);
            exp >>= 1;
        }
        r = acc;
    }
    return r;
}

u64 ppoly_gcd_deg(u64 p, PPoly a, PPoly b) {
    auto trim = [](PPoly& f) { while (!f.empty() && f.back() == 0) f.pop_back(); };
    trim(a); trim(b);
    while (!b.empty()) {
        // a mod b
        u64 li = 1;
        {  // inverse of lead of b mod p
            u64 e = p - 2, base = b.back() % p, r = 1;
            while (e) { if (e & 1) r = r * base % p; base = base * base % p; e >>= 1; }
            li = r;
        }
        while (a.size() >= b.size() && !a.empty()) {
            u64 c = a.back() % p * li % p;
            size_t shift = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + (p - b[i] % p) * c) % p;
            trim(a);
            if (a.empty() || a.size() < b.size()) break;
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

bool ppoly_irreducible(u64 p, const PPoly& g) {
    int s = static_cast<int>(g.size()) - 1;
    if (s == 1) return true;
    // x^(p^s) == x mod g, and gcd(x^(p^(s/q)) - x, g) = 1 for every prime q | s
    PPoly xq = ppoly_xpow_pe(p, static_cast<u64>(s), g);
    PPoly x(g.size() - 1, 0);
    if (x.size() > 1) x[1] = 1;
    if (xq != x) return false;
    for (int q = 2; q <= s; ++q) {
        if (s % q != 0 || !is_small_prime(static_cast<u64>(q))) continue;
        PPoly xe = ppoly_xpow_pe(p, static_cast<u64>(s / q), g);
        PPoly diff(g.size() - 1, 0);
        for (size_t i = 0; i < diff.size(); ++i) diff[i] = (xe[i] + (i == 1 ? p - 1 : 0)) % p;
        if (ppoly_gcd_deg(p, diff, g) != 0) return false;
    }
    return true;
}

} // namespace

std::vector<u64> find_irreducible_mod_p(u64 p, int s) {
    if (s == 1) return {0, 1};  // w
    std::vector<u64> g(static_cast<size_t>(s) + 1, 0);
    g[s] = 1;
    while (true) {
        if (ppoly_irreducible(p, g)) return g;
        int i = 0;
        while (i < s) {
            g[i]++;
            if (g[i] == p) { g[i] = 0; ++i; } else break;
        }
        if (i == s) throw DomainViolation("no irreducible polynomial found");
    }
}

FqMat fq_mat_identity(const FqCtx& F, int n) {
    FqMat m;
    m.n = n;
    m.a.assign(static_cast<size_t>(n) * n, F.zero());
    for (int i = 0; i < n; ++i) m.at(i, i) = F.one();
    return m;
}

FqMat fq_mat_mul(const FqCtx& F, const FqMat& x, const FqMat& y) {
    FqMat r;
    r.n = x.n;
    r.a.assign(static_cast<size_t>(x.n) * x.n, F.zero());
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            if (F.is_zero(x.at(i, k))) continue;
            for (int j = 0; j < x.n; ++j)
                r.at(i, j) = F.add(r.at(i, j), F.mul(x.at(i, k), y.at(k, j)));
        }
    return r;
}

bool fq_mat_is_zero(const FqCtx& F, const FqMat& x) {
    for (const auto& e : x.a)
        if (!F.is_zero(e)) return false;
    return true;
}

FqMat fq_mat_inverse(const FqCtx& F, FqMat x) {
    int n = x.n;
    FqMat inv = fq_mat_identity(F, n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (!F.is_zero(x.at(row, col))) { piv = row; break; }
        if (piv < 0) throw NonUnit("residual matrix singular");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(x.at(piv, j), x.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        FqElt d = F.inv(x.at(col, col));
        for (int j = 0; j < n; ++j) {
            x.at(col, j) = F.mul(d, x.at(col, j));
            inv.at(col, j) = F.mul(d, inv.at(col, j));
        }
        for (int row = 0; row < n; ++row) {
            if (row == col || F.is_zero(x.at(row, col))) continue;
            FqElt c = x.at(row, col);
            for (int j = 0; j < n; ++j) {
                x.at(row, j) = F.sub(x.at(row, j), F.mul(c, x.at(col, j)));
                inv.at(row, j) = F.sub(inv.at(row, j), F.mul(c, inv.at(col, j)));
            }
        }
    }
    return inv;
}

namespace {

// Nullspace basis of an n x n matrix over F_q (vectors as length-n columns).
std::vector<std::vector<FqElt>> fq_mat_nullspace(const FqCtx& F, FqMat m) {
    int n = m.n;
    std::vector<int> pivot_col_of_row;
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int piv = -1;
        for (int r = row; r < n; ++r)
            if (!F.is_zero(m.at(r, col))) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(row, j));
        FqElt d = F.inv(m.at(row, col));
        for (int j = 0; j < n; ++j) m.at(row, j) = F.mul(d, m.at(row, j));
        for (int r = 0; r < n; ++r) {
            if (r == row || F.is_zero(m.at(r, col))) continue;
            FqElt c = m.at(r, col);
            for (int j = 0; j < n; ++j) m.at(r, j) = F.sub(m.at(r, j), F.mul(c, m.at(row, j)));
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col_of_row) is_pivot[c] = true;
    std::vector<std::vector<FqElt>> basis;
    for (int free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<FqElt> v(n, F.zero());
        v[free_col] = F.one();
        for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
            v[pivot_col_of_row[r]] = F.neg(m.at(static_cast<int>(r), free_col));
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

FqMat fq_nilpotent_triangularize(const FqCtx& F, const FqMat& nil) {
    // Flag basis refining the kernel filtration ker(nil) <= ker(nil^2) <= ...,
    // so each basis vector maps into the span of earlier ones.
    int n = nil.n;
    std::vector<FqMat> powers;
    powers.push_back(fq_mat_identity(F, n));
    for (int i = 1; i <= n; ++i) powers.push_back(fq_mat_mul(F, powers.back(), nil));
    if (!fq_mat_is_zero(F, powers[n])) throw DomainViolation("matrix is not nilpotent");

    std::vector<std::vector<FqElt>> echelon_rows;
    auto try_add = [&](const std::vector<FqElt>& v) {
        std::vector<FqElt> w = v;
        for (const auto& e : echelon_rows) {
            int lead = -1;
            for (int i = 0; i < n; ++i)
                if (!F.is_zero(e[i])) { lead = i; break; }
            if (lead >= 0 && !F.is_zero(w[lead])) {
                FqElt c = F.mul(w[lead], F.inv(e[lead]));
                for (int i = 0; i < n; ++i) w[i] = F.sub(w[i], F.mul(c, e[i]));
            }
        }
        for (int i = 0; i < n; ++i)
            if (!F.is_zero(w[i])) {
                echelon_rows.push_back(w);
                return true;
            }
        return false;
    };

    FqMat v;
    v.n = n;
    v.a.assign(static_cast<size_t>(n) * n, F.zero());
    int placed = 0;
    for (int l = 1; l <= n && placed < n; ++l) {
        for (const auto& kv : fq_mat_nullspace(F, powers[l])) {
            if (placed == n) break;
            if (!try_add(kv)) continue;
            for (int i = 0; i < n; ++i) v.at(i, placed) = kv[i];
            ++placed;
        }
    }
    if (placed != n) throw DomainViolation("nilpotent flag construction failed");
    return v;
}

} // namespace qpr
