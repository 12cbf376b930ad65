/**
 * @file levi.hpp
 * @brief Defining function rho, its Wirtinger calculus, and the Levi form on
 *        the complex tangent space of the Hua-domain boundary.
 *
 * rho(z,w) = sum_j ||w_(j)||^(2 p_j) - N(z, conj z), so rho = -hua_margin and
 * the boundary is {rho = 0}. Strong pseudoconvexity is decided by the minimum
 * eigenvalue of the Levi matrix restricted to the kernel of <d rho, .>.
 */
#pragma once

#include "huadom/hua.hpp"

namespace huadom {

struct TangentVector {
    CVector xi;                ///< base part, length d
    std::vector<CVector> eta;  ///< fiber parts, dims n_1..n_r
};

CVector flatten(const TangentVector& t);
TangentVector unflatten_tangent(const HuaSpec& spec, const CVector& v);

struct LeviReport {
    HuaPoint point;
    std::vector<double> eigenvalues; ///< ascending, size d + |n| - 1
    double min_eigenvalue = 0.0;
    bool strongly_pseudoconvex = false;
};

enum class LeviMode { Analytic, FiniteDiff };

/// Defining function; equals -hua_margin (and shares its preconditions).
double rho(const HuaSpec& spec, const HuaPoint& p);

/// Holomorphic gradient d rho. Fiber entries p_k ||w_k||^(2(p_k-1)) conj(w_k);
/// base part is the analytic -dN/dz for the spec's kind.
/// Throws NonSmoothPointError for a vanishing block with p_k < 1. If
/// smoothness_warning is non-null it is set when some exponent lies in (0,1).
TangentVector gradient_rho(const HuaSpec& spec, const HuaPoint& p,
                           bool* smoothness_warning = nullptr);

/// Orthonormal basis (size d + |n| - 1) of { T : <d rho(P), T> = 0 }.
/// Requires a B0/B1 point with a nonvanishing gradient.
std::vector<TangentVector> complex_tangent_basis(const HuaSpec& spec, const HuaPoint& p);

/// Levi form L_rho(T, conj T) at a boundary point (|rho| <= 1e-9), for T in
/// the complex tangent space within 1e-8. Analytic mode contracts the closed-
/// form complex Hessian; finite-difference mode uses central differences with
/// step 1e-4 along the complex line spanned by T.
double levi_form(const HuaSpec& spec, const HuaPoint& p, const TangentVector& t, LeviMode mode);

/// The three nonnegative brackets of the Levi-form expansion at a B0 point:
/// { per-block Gram defect, exponent-weighted Cauchy-Schwarz defect, base
/// term }. Their sum equals levi_form for tangent T at the boundary.
std::array<double, 3> levi_form_parts(const HuaSpec& spec, const HuaPoint& p,
                                      const TangentVector& t);

/// Assembles the Levi matrix on complex_tangent_basis and classifies:
/// strongly pseudoconvex iff the minimum eigenvalue exceeds tol.
/// Rejects BaseEdge points and vanishing blocks with exponent in (0,1)u(1,2)
/// as non-smooth, matching the C^2 caveat of the boundary analysis.
LeviReport classify_pseudoconvexity(const HuaSpec& spec, const HuaPoint& p, double tol = 1e-7);

} // namespace huadom
