/**
 * @file equiv.hpp
 * @brief The rigidity algebra: block-solvability dichotomy, recovery of
 *        permutation/block-unitary structure from linear isomorphisms, and
 *        equivalence deciders with witnesses for ellipsoids and Hua domains.
 *
 * Linear maps between ellipsoids follow the row convention of the underlying
 * algebra: h(zeta) = zeta * L with zeta a row vector, so block (i, j) of L
 * feeds input block i into output block j.
 */
#pragma once

#include <optional>
#include <string>

#include "huadom/hua.hpp"

namespace huadom {

/// Row-convention application of L to a flattened ellipsoid point.
CVector apply_row_linear(const CMatrix& l, const CVector& zeta);

struct SolvabilityVerdict {
    enum class Tag { Exists, UniqueNonzeroBlock };
    Tag tag = Tag::Exists;
    std::vector<CVector> witness; ///< Exists: alpha_1..alpha_r, every block nonzero
    int unique_block = 0;         ///< UniqueNonzeroBlock: 1-based j0
};

/// Decides whether sum_j zeta_j D_j = 0 admits a solution with every block
/// nonzero. Blocks D_j are n_j x m over a common column count m; the stacked
/// matrix must have full column rank (checked). Structural shortcuts from the
/// dichotomy are applied first; seeded randomized search is the fallback.
SolvabilityVerdict block_solvability(const std::vector<CMatrix>& blocks, double tol);

struct IsomorphismCheck {
    bool ok = false;
    double max_residual = 0.0;
    std::string failure; ///< first violated sample, empty when ok
};

/// Samples seeded interior and boundary points of the input ellipsoid and
/// checks interior -> interior, boundary -> boundary (|defining value| < 1e-8)
/// and stratum preservation b0 -> b0, b1 -> b1 under zeta -> zeta L.
IsomorphismCheck verify_linear_isomorphism(const CMatrix& l, const EllipsoidSpec& in_spec,
                                           const EllipsoidSpec& out_spec, int samples,
                                           std::uint64_t seed);

struct RecoveryResult {
    bool accepted = false;
    std::vector<int> sigma;         ///< 0-based: output block j reads input block sigma[j]
    std::vector<CMatrix> unitaries; ///< unitaries[j] = the block at (sigma[j], j)
    int offending_row = -1;
    int offending_col = -1;
    std::string reason;
};

/// Reads the block decomposition of a verified linear isomorphism against the
/// (n, m) partitions; accepts iff it is a block permutation with unitary
/// blocks matching the signatures. Zero-ness threshold is tol * ||L||_F.
RecoveryResult recover_block_structure(const CMatrix& l, const EllipsoidSpec& in_spec,
                                       const EllipsoidSpec& out_spec, double tol = 1e-8);

/// Permutation sigma (0-based) with n_{sigma(j)} = m_j and p_{sigma(j)} = q_j,
/// found by multiset matching; p_tol > 0 relaxes exponent equality.
std::optional<std::vector<int>> ellipsoid_equivalent(const EllipsoidSpec& in_spec,
                                                     const EllipsoidSpec& out_spec,
                                                     double p_tol = 0.0);

enum class EquivStatus { Equivalent, NotEquivalent, Undetermined };

/// Witness of the block-diagonal normal form: standardization transports on
/// both sides, the base map (identity or the TypeI transpose), the fiber
/// permutation and identity unitaries.
struct EquivWitness {
    Relabeling rel1;
    Relabeling rel2;
    std::vector<int> sigma; ///< 0-based on standardized fibers
    bool base_transpose = false;
    std::vector<CMatrix> unitaries;

    /// Maps a point of the first (original) spec to the second, linearly.
    HuaPoint apply(const HuaPoint& p) const;
};

struct EquivResult {
    EquivStatus status = EquivStatus::NotEquivalent;
    std::optional<EquivWitness> witness;
    std::string note; ///< Undetermined: the unresolved base coincidence
};

/// Decides biholomorphic equivalence of two Hua domains. Standardizes both
/// specs, compares base domains by kind and parameters (TypeI transpose
/// allowed; the known cross-kind low-dimensional coincidences are reported as
/// Undetermined), and matches fiber signatures.
EquivResult hua_equivalent(const HuaSpec& s1, const HuaSpec& s2, double p_tol = 0.0);

} // namespace huadom
