/**
 * @file cartan.hpp
 * @brief Classical bounded symmetric domains in Harish-Chandra realization.
 *
 * Covers the four classical families plus the unit ball as its own kind:
 * membership margins, genus/rank tables, the generic norm N (diagonal and
 * polarized), and the first/second Wirtinger derivatives of N used by the
 * Levi-form machinery.
 *
 * Points are stored as flat coordinate vectors of length ambient_dim():
 *   - TypeI(m,n): the m*n matrix entries, row-major;
 *   - TypeII(n):  the strict upper triangle of the antisymmetric matrix,
 *                 row-major (z^t = -z);
 *   - TypeIII(n): the upper triangle including the diagonal (z^t = z);
 *   - TypeIV(n), Ball(d): the row vector itself.
 */
#pragma once

#include <cstdint>

#include "huadom/linalg.hpp"

namespace huadom {

enum class CartanKind { TypeI, TypeII, TypeIII, TypeIV, Ball };

/// Membership slack for "closed domain" checks.
inline constexpr double kClosedDomainSlack = 1e-9;

struct CartanSpec {
    CartanKind kind = CartanKind::Ball;
    int m = 0; ///< TypeI row count; unused otherwise
    int n = 0; ///< TypeI col count, TypeII/III/IV matrix size, Ball dimension

    static CartanSpec type_i(int m, int n);
    static CartanSpec type_ii(int n);
    static CartanSpec type_iii(int n);
    static CartanSpec type_iv(int n);
    static CartanSpec ball(int d);

    int ambient_dim() const;
    int genus() const;
    int rank() const;

    bool operator==(const CartanSpec&) const = default;
};

using BasePoint = CVector;

/// Packs flat coordinates into the constrained matrix form (see file header).
CMatrix to_matrix(const CartanSpec& spec, const BasePoint& z);

/// Inverse of to_matrix; validates the symmetry constraint within 1e-12.
BasePoint from_matrix(const CartanSpec& spec, const CMatrix& m);

/// Signed membership margin, positive iff z lies in the open domain:
/// min eigenvalue of I - z z^H for the matrix types, min(N, 1 - |z|^2) for
/// TypeIV, 1 - |z|^2 for the ball.
double base_margin(const CartanSpec& spec, const BasePoint& z);

/// Polarized generic norm N(z, conj(xi)). Both points must lie in the closed
/// domain (margin >= -kClosedDomainSlack). TypeII tracks the square-root
/// branch continuously from N(0,0) = 1 along the straight segment.
Complex generic_norm(const CartanSpec& spec, const BasePoint& z, const BasePoint& xi);

/// Diagonal generic norm N(z, conj(z)); real, in (0,1] on the open domain.
double generic_norm_diag(const CartanSpec& spec, const BasePoint& z);

/// Holomorphic Wirtinger gradient dN(z, conj(z))/dz over the flat coordinates.
CVector norm_gradient(const CartanSpec& spec, const BasePoint& z);

/// Mixed Wirtinger Hessian H(a,b) = d^2 N / dz_a dzbar_b at the diagonal.
CMatrix norm_mixed_hessian(const CartanSpec& spec, const BasePoint& z);

/// Diagonal generic norm without the closed-domain precondition; the
/// polynomial/determinant formulas extend to all of C^d. Used by finite
/// differences near the boundary.
double generic_norm_diag_unchecked(const CartanSpec& spec, const BasePoint& z);

/// Scales z along its ray to the base boundary (|margin| < tol). z != 0.
BasePoint project_base_boundary(const CartanSpec& spec, const BasePoint& z, double tol = 1e-9);

/// Seeded interior sample: random direction, radius a uniform fraction of the
/// ray's boundary radius (fraction in [0.05, 0.95]).
BasePoint sample_base_interior(const CartanSpec& spec, Rng& rng);

} // namespace huadom
