#pragma once

#include "qpr/fq.hpp"
#include "qpr/rh.hpp"

namespace qpr {

// Point-matrix algorithms over the level-k model ring R. The derivation
// twist fixes scalars, so on these matrices the group translate enters only
// through the t-adic staircase of each solver; the translate argument is kept
// in the signatures for the callers that track it.

using BdrPoly = std::vector<BdrElement>;  // coefficient 0 first

BdrPoly char_poly(const BdrMat& m);
BdrMat eval_poly(const BdrPoly& f, const BdrMat& m);
FqPoly residual_poly(const BdrPoly& f);
FqElt residual_scalar(const BdrElement& a);
FqMat residual_matrix(const BdrMat& m);

std::shared_ptr<const BdrContext> bottom_context(const std::shared_ptr<const BdrContext>& ctx);
/// Reduction modulo t into the alpha = 1 sibling ring.
BdrElement to_alpha1(const BdrElement& a);
/// Section of the quotient by t^alpha' into a higher-alpha sibling ring.
BdrElement lift_into(const BdrElement& a, const std::shared_ptr<const BdrContext>& target);
BdrMat mat_to_alpha1(const BdrMat& m);
BdrMat mat_lift_into(const BdrMat& m, const std::shared_ptr<const BdrContext>& target);

struct CanonicalForm {
    BdrMat conjugator;
    std::vector<std::pair<int, BdrMat>> blocks;  // (size, block)

    std::vector<int> type() const;
    BdrMat assembled() const;
};

/// Split a matrix along its residual eigenvalues (which must all lie in the
/// residue field): exact projectors from lifted idempotents, blocks ordered by
/// the coordinate-lexicographic order on residual eigenvalues.
CanonicalForm hensel_split(const BdrMat& psi);

/// Unique Y with Phi_i Y - act_beta(Y) Phi_j = X, given disjoint residual
/// spectra; t-adic digit staircase with one residual solve per digit.
BdrMat twisted_sylvester(const BdrMat& phi_i, const BdrMat& phi_j, const GammaVector& beta,
                         const BdrMat& x);

/// For H with diagonal blocks of the given sizes, residually disjoint, and
/// off-diagonal blocks divisible by t: M with (I+tM)^-1 H act(I+tM) block
/// diagonal, blocks congruent to the input diagonal blocks mod t.
std::pair<BdrMat, std::vector<BdrMat>> block_diagonalize(const BdrMat& h,
                                                         const std::vector<int>& sizes,
                                                         const GammaVector& beta);

struct SimultaneousCanonicalForm {
    BdrMat conjugator;
    std::vector<int> type;
    std::vector<std::vector<BdrMat>> blocks;  // [matrix][block]
};

/// Common conjugator bringing a twisted-commuting family to block-diagonal
/// form with simple blocks and a shared type vector.
SimultaneousCanonicalForm simultaneous_canonical_form(const std::vector<BdrMat>& psis,
                                                      int m_level);

/// (1+U+X)^(1/M) for exactly nilpotent U and p-adically small X.
BdrMat binomial_root_series(const BdrMat& u, const BdrMat& x, i64 M);

/// Y with sum_{i=1..M} B^(i-1) Y B^(M-i) = X, B simple.
BdrMat sum_conjugation_solve(const BdrMat& b, i64 M, const BdrMat& x);

/// Unique Phi_1 congruent to the seed mod t whose M-fold twisted product is
/// Phi. The seed must be an M-th root of Phi modulo t.
BdrMat twisted_mth_root(const BdrMat& phi, const GammaVector& beta, i64 M, const BdrMat& seed);

/// Canonical seed: residual M-th root of the single residual eigenvalue
/// (lex-least, via the binomial series on the alpha = 1 layer).
BdrMat mth_root_seed(const BdrMat& phi, i64 M);

/// Extend a cocycle on M Gamma (constant matrices, derivation twist) to a
/// cocycle on Gamma whose restriction is exact.
Cocycle extend_cocycle(const Cocycle& psi, i64 M);

} // namespace qpr
