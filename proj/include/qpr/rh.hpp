#pragma once

#include <string>

#include "qpr/matrix.hpp"
#include "qpr/toric.hpp"

namespace qpr {

using ToricMat = Mat<ToricElement>;
using BdrMat = Mat<BdrElement>;

enum class TwistTag { Galois, ExpDerivation, Natural };

std::string twist_name(TwistTag t);
TwistTag twist_from_name(const std::string& name);

/// Apply the tagged action by gamma entrywise.
ToricElement act(TwistTag twist, const GammaVector& g, const ToricElement& x);
ToricMat act(TwistTag twist, const GammaVector& g, const ToricMat& m);

ToricMat toric_identity(const std::shared_ptr<const BdrContext>& ctx, int d, int r);
ToricMat toric_embed(const BdrMat& m, int d);
/// Extraction for constant matrices (throws DomainViolation otherwise).
BdrMat toric_constant_part(const ToricMat& m);
bool toric_mat_is_constant(const ToricMat& m);

/// Inverse of a matrix whose non-constant part is topologically small: the
/// constant part is inverted over the base ring, then Newton refined. Fails
/// with NonUnit when the iteration does not reach an exact inverse.
ToricMat toric_mat_inverse(const ToricMat& m);
BdrMat bdr_mat_identity(const std::shared_ptr<const BdrContext>& ctx, int r);
BdrMat bdr_mat_inverse(const BdrMat& m);  // unit-pivot Gaussian elimination

/// The generator matrices Phi_i = Phi at p^level gamma_i of a cocycle on
/// p^level Gamma, twisted by the tagged action.
struct Cocycle {
    int d = 0;
    int r = 0;
    int level = 0;
    TwistTag twist = TwistTag::ExpDerivation;
    std::vector<ToricMat> mats;

    GammaVector beta(int i) const;  // p^level * gamma_i, 1-based
};

/// Framed t-connection: phi_i is the matrix of the derivation direction
/// gamma_i in the standard frame.
struct TConnection {
    int d = 0;
    int r = 0;
    std::string frame = "standard";
    std::vector<ToricMat> mats;
};

struct CocycleCheckResult {
    bool ok = true;
    std::vector<ToricMat> residuals;  // one per pair i < j
};

/// Twisted commutation of the generator matrices, with residuals.
CocycleCheckResult cocycle_check(const Cocycle& c);

/// Value of the cocycle at an element of p^level Gamma (twisted products,
/// negative coordinates through twisted inverses).
ToricMat cocycle_eval(const Cocycle& c, const GammaVector& g);

/// Operator logarithm of the semilinear action v -> Phi * act_beta(v),
/// evaluated columnwise on the standard frame.
ToricMat operator_log(const ToricMat& phi, TwistTag twist, const GammaVector& beta, int margin);

struct IntegrabilityResult {
    bool ok = true;
    std::vector<ToricMat> residuals;
};

IntegrabilityResult integrability_check(const TConnection& n);

/// Cocycle -> integrable t-connection; requires entries congruent to the
/// identity modulo p^margin up to the kernel.
TConnection log_correspondence(const Cocycle& c);

/// Integrable t-connection -> cocycle on p^level Gamma; level must be large
/// enough that p^level * phi_i enters the convergence range.
Cocycle exp_correspondence(const TConnection& n, int level);

/// Smallest admissible level for exp_correspondence.
int min_exp_level(const TConnection& n);

/// phi_i -> V^-1 phi_i V + V^-1 partial_i(V).
TConnection gauge_transform(const TConnection& n, const ToricMat& v);

/// Phi_i -> V^-1 Phi_i act_beta_i(V).
Cocycle cocycle_gauge(const Cocycle& c, const ToricMat& v);

} // namespace qpr
