/**
 * @file hua.hpp
 * @brief Hua domains H_Omega(n;p) and generalized complex ellipsoids Sigma(n;p).
 *
 * A Hua domain fibers over a classical bounded symmetric domain: a point
 * (z, w_(1), ..., w_(r)) belongs to it iff sum_j ||w_(j)||^(2 p_j) < N(z, conj z).
 * This module owns the specs, the standard form, membership and exhaustion,
 * the boundary stratification b0 / b1 / (bOmega x {0}), projections Pr_j,
 * ray scaling and the seeded samplers.
 */
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "huadom/cartan.hpp"

namespace huadom {

struct FiberBlock {
    int dim = 0;      ///< n_j >= 1
    double exp = 0.0; ///< p_j > 0; "p = 1" comparisons are exact

    bool operator==(const FiberBlock&) const = default;
};

struct HuaSpec {
    CartanSpec base;
    std::vector<FiberBlock> fibers;

    int r() const { return static_cast<int>(fibers.size()); }
    int fiber_total() const;
    int total_dim() const { return base.ambient_dim() + fiber_total(); }

    /// 1 iff p_1 == 1 (the delta of the boundary decomposition), else 0.
    int delta() const;

    /// Standard form: Ball base has no unit exponent; rank >= 2 base allows
    /// p = 1 only in slot 1. Rank-1 bases in disguise are not standard.
    bool is_standard() const;

    /// Throws InvalidSpecError on structural violations (empty blocks,
    /// nonpositive exponents, two or more exponents equal to 1).
    void validate() const;

    bool operator==(const HuaSpec&) const = default;
};

struct EllipsoidSpec {
    std::vector<FiberBlock> blocks;

    int r() const { return static_cast<int>(blocks.size()); }
    int total_dim() const;
    int delta() const;

    /// At most one unit exponent, and only in slot 1.
    void validate() const;

    bool operator==(const EllipsoidSpec&) const = default;
};

struct HuaPoint {
    BasePoint z;
    std::vector<CVector> w;
};

/// Row-concatenation of (z, w_(1), ..., w_(r)) into ambient coordinates.
CVector flatten(const HuaPoint& p);
HuaPoint unflatten(const HuaSpec& spec, const CVector& v);

void require_point_shape(const HuaSpec& spec, const HuaPoint& p, const char* op);

enum class StratumTag { Interior, Exterior, B0, B1, BaseEdge };

struct BoundaryStratum {
    StratumTag tag = StratumTag::Interior;
    int vanishing_block = 0; ///< B1 only: smallest j >= 1+delta with ||w_(j)|| = 0; 1-based
};

const char* stratum_name(StratumTag tag);

/// Coordinate transport attached to standardize(): permutation of the fiber
/// blocks, possibly after merging one unit-exponent block into a ball base.
struct Relabeling {
    HuaSpec from;
    HuaSpec to;
    std::vector<int> block_perm; ///< to-block i holds from-block block_perm[i] (0-based)
    int merged_block = -1;       ///< from-block absorbed into the ball base, or -1
};

HuaPoint relabel(const Relabeling& r, const HuaPoint& p);

/// Transport in the opposite direction (to-spec coordinates back to from-spec).
HuaPoint relabel_back(const Relabeling& r, const HuaPoint& p);

/// Rewrites the spec in standard form:
///  - rank-1 bases (TypeI with min(m,n)=1, TypeII(2), TypeII(3)) become the
///    Ball they are, coordinates unchanged;
///  - a unit-exponent block over a ball base is merged into the base;
///  - over a rank >= 2 base, a unit-exponent block is moved to slot 1.
/// Membership is invariant under the returned relabeling.
std::pair<HuaSpec, Relabeling> standardize(const HuaSpec& spec);

/// N(z, conj z) - sum_j ||w_(j)||^(2 p_j); positive iff the point is interior.
/// Throws DomainError when z is outside the closed base.
double hua_margin(const HuaSpec& spec, const HuaPoint& p);

/// Same value without the closed-base precondition (polynomial extension of N);
/// finite-difference probes near the boundary use this.
double hua_margin_unchecked(const HuaSpec& spec, const HuaPoint& p);

/// max{ N / (N - sum ||w||^(2p)), 1/N }; >= 1, blows up at the boundary.
double exhaustion(const HuaSpec& spec, const HuaPoint& p);

/// Boundary stratification at tolerance tol (default 1e-9). Requires the spec
/// in standard form. For r = 0 over a ball base the whole boundary is the
/// sphere and is tagged B0; r = 0 over a rank >= 2 base tags bOmega as BaseEdge.
BoundaryStratum classify_boundary(const HuaSpec& spec, const HuaPoint& p, double tol = 1e-9);

/// Scales the direction bundle by the unique s > 0 with
/// sum_j (s ||v_j||)^(2 p_j) = N(z, conj z); bisection to |margin| < 1e-12.
HuaPoint project_to_boundary(const HuaSpec& spec, const BasePoint& z,
                             const std::vector<CVector>& w_dirs);

/// (t z, t w_(1), ..., t w_(r)) for t in [0,1]; interior stays interior.
HuaPoint ray_scale(const HuaSpec& spec, const HuaPoint& p, double t);

/// Pr_j: copy of p with block j zeroed (j is 1-based).
HuaPoint pr_j(const HuaSpec& spec, const HuaPoint& p, int j);

/// Seeded interior sample (base point and fiber radius both random).
HuaPoint sample_hua_interior(const HuaSpec& spec, Rng& rng);

/// Seeded boundary sample through project_to_boundary over a random interior
/// base point. vanish_block > 0 (1-based) zeroes that direction to land in b1.
/// For r = 0 returns a base-boundary point.
HuaPoint sample_hua_boundary(const HuaSpec& spec, Rng& rng, int vanish_block = 0);

// --- Generalized complex ellipsoids -------------------------------------

using EllipsoidPoint = std::vector<CVector>;

CVector flatten_ellipsoid(const EllipsoidPoint& p);
EllipsoidPoint unflatten_ellipsoid(const EllipsoidSpec& spec, const CVector& v);

/// 1 - sum_k ||zeta_k||^(2 p_k).
double ellipsoid_margin(const EllipsoidSpec& spec, const EllipsoidPoint& p);

/// b0/b1 tags of the ellipsoid boundary; BaseEdge never occurs.
BoundaryStratum classify_ellipsoid_boundary(const EllipsoidSpec& spec, const EllipsoidPoint& p,
                                            double tol = 1e-9);

EllipsoidPoint project_to_ellipsoid_boundary(const EllipsoidSpec& spec,
                                             const std::vector<CVector>& dirs);

EllipsoidPoint sample_ellipsoid_interior(const EllipsoidSpec& spec, Rng& rng);
EllipsoidPoint sample_ellipsoid_boundary(const EllipsoidSpec& spec, Rng& rng,
                                         int vanish_block = 0);

} // namespace huadom
