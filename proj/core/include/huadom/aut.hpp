/**
 * @file aut.hpp
 * @brief Explicit automorphisms: Aut(Omega) generators, the Hua-domain
 *        subgroup Gamma, and the generalized-ellipsoid automorphisms.
 *
 * Base automorphisms of the matrix-type domains (Ball, TypeI/II/III) are kept
 * as fractional-linear actions z -> (A z + B)(C z + D)^{-1} on the matrix
 * form, which makes composition and inversion exact block-matrix algebra.
 * TypeIV carries only its linear isotropy z -> exp(i theta) z O with O real
 * orthogonal; its Moebius maps are out of scope here.
 *
 * A Gamma element acts by
 *   (z, w_(j)) -> ( phi(z),
 *                   U_j w_(j) * N(z0,z0)^(1/(2 p_j)) / N(z, z0)^(1/p_j) ),
 * with z0 = phi^{-1}(0) stored explicitly and fractional powers taken on the
 * principal branch.
 */
#pragma once

#include "huadom/hua.hpp"

namespace huadom {

class BaseAut {
public:
    /// Identity automorphism.
    static BaseAut identity(const CartanSpec& spec);

    /// Linear automorphism from per-kind unitary data:
    ///   TypeI: z -> U z V;  TypeII/III: z -> U z U^t;  Ball: z -> U z;
    ///   TypeIV: z -> exp(i theta) z O (pass O in `u`, theta in `phase`).
    static BaseAut linear(const CartanSpec& spec, const CMatrix& u,
                          const CMatrix& v = CMatrix(), double phase = 0.0);

    /// Seeded random linear automorphism.
    static BaseAut random_linear(const CartanSpec& spec, std::uint64_t seed);

    /// Seeded random automorphism (Moebius at a random interior point
    /// composed with a random linear; pure linear for TypeIV).
    static BaseAut random(const CartanSpec& spec, std::uint64_t seed);

    const CartanSpec& spec() const { return spec_; }

    BasePoint apply(const BasePoint& z) const;
    BaseAut inverse() const;

    /// this after other.
    BaseAut compose(const BaseAut& other) const;

    /// phi^{-1}(0).
    BasePoint origin_preimage() const;

    /// True when the action has no translation part (B = C = 0).
    bool is_linear() const;

    // Fractional-linear blocks (matrix kinds). Exposed for serialization.
    const CMatrix& fl_a() const { return a_; }
    const CMatrix& fl_b() const { return b_; }
    const CMatrix& fl_c() const { return c_; }
    const CMatrix& fl_d() const { return d_; }
    double iv_phase() const { return iv_phase_; }
    const Eigen::MatrixXd& iv_ortho() const { return iv_ortho_; }

    static BaseAut from_fractional_linear(const CartanSpec& spec, const CMatrix& a,
                                          const CMatrix& b, const CMatrix& c, const CMatrix& d);
    static BaseAut from_iv_linear(const CartanSpec& spec, double phase,
                                  const Eigen::MatrixXd& ortho);

private:
    explicit BaseAut(const CartanSpec& spec) : spec_(spec) {}

    CartanSpec spec_;
    CMatrix a_, b_, c_, d_; // fractional-linear blocks (matrix kinds)
    double iv_phase_ = 0.0;
    Eigen::MatrixXd iv_ortho_; // TypeIV only
};

/// Rudin's involutive ball Moebius with T_a(a) = 0 and T_a . T_a = id.
/// a = 0 gives the identity.
BaseAut ball_mobius(const CVector& a);

/// Classical matrix-ball Moebius
///   z -> (I - a a^H)^{-1/2} (z - a) (I - a^H z)^{-1} (I - a^H a)^{1/2},
/// mapping a to 0. Valid for Ball and TypeI; applied on the constrained
/// matrix form for TypeII/III (symmetry preservation asserted at evaluation).
BaseAut type_i_mobius(const CartanSpec& spec, const BasePoint& a);

/// Automorphism with phi(from) = to, as M_to^{-1} . M_from. TypeIV is
/// unsupported (no Moebius maps in scope).
BaseAut base_aut_for(const CartanSpec& spec, const BasePoint& from, const BasePoint& to);

struct GammaAut {
    HuaSpec spec;
    BaseAut phi;
    BasePoint z0; ///< phi^{-1}(0)
    std::vector<CMatrix> unitaries; ///< U_1..U_r, sizes n_1..n_r
};

GammaAut gamma_identity(const HuaSpec& spec);

/// Builds a Gamma element from phi and fiber unitaries (z0 computed from phi).
GammaAut make_gamma(const HuaSpec& spec, const BaseAut& phi, std::vector<CMatrix> unitaries);

/// Seeded random Gamma element.
GammaAut random_gamma(const HuaSpec& spec, std::uint64_t seed);

/// Applies the Gamma action. P must lie in the closed domain; interior points
/// map to interior points (asserted).
HuaPoint gamma_apply(const GammaAut& g, const HuaPoint& p);

/// Gamma element inverting g: phi^{-1}, z0 = phi(0), adjoint unitaries.
GammaAut gamma_invert(const GammaAut& g);

/// Closure witness for g1 . g2: a Gamma element with phi = phi1 . phi2 and
/// unitaries mu_j U1_j U2_j, where the unimodular mu_j is fixed at a probe
/// point. Agreement with the actual composition is a numerical property
/// checked by the test suite.
GammaAut gamma_compose(const GammaAut& g1, const GammaAut& g2);

// --- Generalized-ellipsoid automorphisms --------------------------------

struct EllipsoidAut {
    EllipsoidSpec spec;
    bool mobius = false;
    // Linear part (Eq.-(1) shape): output block i reads input block sigma[i].
    std::vector<int> sigma;      ///< 0-based permutation
    std::vector<CMatrix> gammas; ///< unitaries, gammas[i] of size n_i
    // Moebius part (requires p_1 = 1): T_a on block 1, psi_a powers on the rest.
    CVector a;
};

/// Block-permuted unitary map; requires n_{sigma(i)} = n_i and
/// p_{sigma(i)} = p_i (invalid-aut error otherwise). sigma is 0-based.
EllipsoidAut ellipsoid_linear(const std::vector<int>& sigma, const std::vector<CMatrix>& gammas,
                              const EllipsoidSpec& spec);

/// phi_a of Theorem 1.B(ii): (T_a(z_1), z_2 psi_a(z_1)^{1/(2 p_2)}, ...)
/// with psi_a(z_1) = (1 - |a|^2) / (1 - <z_1,a>)^2. Requires p_1 = 1, |a| < 1.
EllipsoidAut ellipsoid_mobius(const EllipsoidSpec& spec, const CVector& a);

EllipsoidAut random_ellipsoid_aut(const EllipsoidSpec& spec, std::uint64_t seed);

EllipsoidPoint ellipsoid_apply(const EllipsoidAut& aut, const EllipsoidPoint& p);

} // namespace huadom
