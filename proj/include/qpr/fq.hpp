#pragma once

#include <vector>

#include "qpr/zq.hpp"

namespace qpr {

/// F_{p^s} = F_p[w]/(g), g monic irreducible of degree s. Elements are
/// coefficient vectors of length s with entries in [0, p).
using FqElt = std::vector<u64>;

struct FqCtx {
    u64 p = 0;
    int s = 0;
    std::vector<u64> g;  // monic, length s+1, coefficients mod p

    FqCtx() = default;
    FqCtx(u64 p_, int s_, std::vector<u64> g_) : p(p_), s(s_), g(std::move(g_)) {}

    FqElt zero() const { return FqElt(s, 0); }
    FqElt one() const;
    FqElt from_u64(u64 n) const;
    bool is_zero(const FqElt& a) const;
    bool eq(const FqElt& a, const FqElt& b) const { return a == b; }

    FqElt add(const FqElt& a, const FqElt& b) const;
    FqElt sub(const FqElt& a, const FqElt& b) const;
    FqElt neg(const FqElt& a) const;
    FqElt mul(const FqElt& a, const FqElt& b) const;
    FqElt pow(FqElt a, u64 e) const;
    FqElt inv(const FqElt& a) const;

    u64 order() const;  // p^s

    /// Enumerate all field elements in lexicographic coordinate order.
    std::vector<FqElt> all_elements() const;
};

/// Dense polynomials over F_q, coefficient 0 first. Normalized: no trailing zeros.
using FqPoly = std::vector<FqElt>;

FqPoly fq_poly_trim(const FqCtx& F, FqPoly f);
int fq_poly_deg(const FqPoly& f);  // -1 for zero
FqPoly fq_poly_add(const FqCtx& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_poly_sub(const FqCtx& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_poly_mul(const FqCtx& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_poly_scale(const FqCtx& F, const FqElt& c, const FqPoly& a);
/// Division with remainder by a nonzero divisor (leading coefficient inverted).
void fq_poly_divrem(const FqCtx& F, const FqPoly& a, const FqPoly& b, FqPoly& q, FqPoly& r);
FqPoly fq_poly_monic(const FqCtx& F, const FqPoly& a);
FqPoly fq_poly_gcd(const FqCtx& F, FqPoly a, FqPoly b);
/// Extended gcd for coprime a, b: returns (u, v) with u*a + v*b = 1.
void fq_poly_bezout_coprime(const FqCtx& F, const FqPoly& a, const FqPoly& b, FqPoly& u, FqPoly& v);
FqElt fq_poly_eval(const FqCtx& F, const FqPoly& f, const FqElt& x);

/// Roots in F_q with multiplicities, sorted by coordinate-lexicographic order.
/// remaining is the rootless cofactor (monic; degree 0 when f splits).
std::vector<std::pair<FqElt, int>> fq_poly_roots(const FqCtx& F, const FqPoly& f, FqPoly& remaining);

/// Deterministic monic irreducible of degree s over F_p (coefficient-lex search).
std::vector<u64> find_irreducible_mod_p(u64 p, int s);

struct FqMat {
    int n = 0;
    std::vector<FqElt> a;  // row major
    FqElt& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const FqElt& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

FqMat fq_mat_identity(const FqCtx& F, int n);
FqMat fq_mat_mul(const FqCtx& F, const FqMat& x, const FqMat& y);
bool fq_mat_is_zero(const FqCtx& F, const FqMat& x);
FqMat fq_mat_inverse(const FqCtx& F, FqMat x);  // throws NonUnit if singular

/// For nilpotent n: an invertible V with V^-1 n V strictly upper triangular.
FqMat fq_nilpotent_triangularize(const FqCtx& F, const FqMat& nil);

} // namespace qpr
