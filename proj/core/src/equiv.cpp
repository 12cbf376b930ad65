#include "huadom/equiv.hpp"

#include <algorithm>
#include <cmath>

namespace huadom {

namespace {

std::vector<int> block_offsets(const std::vector<FiberBlock>& blocks) {
    std::vector<int> offs(blocks.size() + 1, 0);
    for (std::size_t i = 0; i < blocks.size(); ++i) offs[i + 1] = offs[i] + blocks[i].dim;
    return offs;
}

// Left-null unit vector of a block (x with x^T D = 0), or nullopt at full row rank.
std::optional<CVector> left_null_vector(const CMatrix& d, double tol) {
    auto basis = null_space(d, tol);
    if (basis.empty()) return std::nullopt;
    return basis.front();
}

// Row vector maximizing ||x^T D||: conjugate of the top left singular vector.
CVector top_row_vector(const CMatrix& d) {
    Eigen::JacobiSVD<CMatrix> svd(d, Eigen::ComputeFullU);
    return svd.matrixU().col(0).conjugate();
}

bool is_pair(const CartanSpec& a, const CartanSpec& b, const CartanSpec& x, const CartanSpec& y) {
    return (a == x && b == y) || (a == y && b == x);
}

// Cross-kind bases that are linearly isomorphic by the classical coincidences;
// the explicit map is not assembled, so the decider reports Undetermined.
bool known_base_coincidence(const CartanSpec& a, const CartanSpec& b, std::string& note) {
    if (is_pair(a, b, CartanSpec::type_iv(3), CartanSpec::type_iii(2))) {
        note = "bases TypeIV(3) and TypeIII(2) coincide classically; witness map undetermined";
        return true;
    }
    if (is_pair(a, b, CartanSpec::type_iv(4), CartanSpec::type_i(2, 2))) {
        note = "bases TypeIV(4) and TypeI(2,2) coincide classically; witness map undetermined";
        return true;
    }
    if (is_pair(a, b, CartanSpec::type_iv(6), CartanSpec::type_ii(4))) {
        note = "bases TypeIV(6) and TypeII(4) coincide classically; witness map undetermined";
        return true;
    }
    return false;
}

} // namespace

CVector apply_row_linear(const CMatrix& l, const CVector& zeta) {
    if (l.rows() != zeta.size())
        throw DimensionError("apply_row_linear: size mismatch");
    return l.transpose() * zeta;
}

SolvabilityVerdict block_solvability(const std::vector<CMatrix>& blocks, double tol) {
    if (blocks.empty()) throw DimensionError("block_solvability: no blocks");
    if (tol <= 0.0) throw DomainError("block_solvability: tol must be positive", tol);
    const auto m = blocks.front().cols();
    Eigen::Index total_rows = 0;
    for (const auto& d : blocks) {
        if (d.cols() != m) throw DimensionError("block_solvability: inconsistent column counts");
        total_rows += d.rows();
    }
    CMatrix stacked(total_rows, m);
    Eigen::Index at = 0;
    for (const auto& d : blocks) {
        stacked.middleRows(at, d.rows()) = d;
        at += d.rows();
    }
    Eigen::JacobiSVD<CMatrix> ssvd(stacked);
    const auto& sv = ssvd.singularValues();
    if (sv.size() < m || sv(m - 1) <= tol * sv(0))
        throw DomainError("block_solvability: stacked matrix must have full column rank",
                          sv.size() > 0 ? sv(m - 1) : 0.0);

    const int r = static_cast<int>(blocks.size());
    const double scale = stacked.norm();
    std::vector<bool> zero(r), full_row_rank(r);
    std::vector<std::optional<CVector>> nulls(r);
    for (int j = 0; j < r; ++j) {
        zero[j] = blocks[j].norm() <= tol * scale;
        nulls[j] = left_null_vector(blocks[j], tol);
        full_row_rank[j] = !nulls[j].has_value();
    }

    auto finish_exists = [&](std::vector<CVector> alphas) {
        double maxn = 0.0;
        for (const auto& a : alphas) maxn = std::max(maxn, a.norm());
        for (auto& a : alphas) a /= maxn;
        return SolvabilityVerdict{SolvabilityVerdict::Tag::Exists, std::move(alphas), 0};
    };

    // Structural shortcut: a left-null vector in every block is already a
    // witness. This covers "all n_j > m" and "all square blocks singular".
    bool all_have_null = true;
    for (int j = 0; j < r; ++j) all_have_null = all_have_null && nulls[j].has_value();
    if (all_have_null) {
        std::vector<CVector> alphas;
        for (int j = 0; j < r; ++j) alphas.push_back(*nulls[j]);
        return finish_exists(std::move(alphas));
    }

    // The other horn of the dichotomy: one nonzero block, square nonsingular.
    std::vector<int> nonzero;
    for (int j = 0; j < r; ++j)
        if (!zero[j]) nonzero.push_back(j);
    if (nonzero.size() == 1 && full_row_rank[nonzero[0]] && blocks[nonzero[0]].rows() == m) {
        return SolvabilityVerdict{SolvabilityVerdict::Tag::UniqueNonzeroBlock, {}, nonzero[0] + 1};
    }

    // Mixed case, following the constructive argument of the dichotomy: fix a
    // nonsingular square block j*, give every other block a nonzero alpha with
    // combined contribution s != 0, and solve alpha_{j*} D_{j*} = -s.
    std::vector<int> full_idx;
    for (int j = 0; j < r; ++j)
        if (full_row_rank[j]) full_idx.push_back(j);
    if (!full_idx.empty()) {
        const int jstar = full_idx.front();
        Eigen::PartialPivLU<CMatrix> lu(blocks[jstar].transpose());
        for (int trial = 0; trial < 200; ++trial) {
            Rng rng(Rng::derive(0x50fab1e5ull, static_cast<std::uint64_t>(trial)));
            std::vector<CVector> alphas(r);
            CVector s = CVector::Zero(m);
            bool forced_nonzero = false;
            for (int j = 0; j < r; ++j) {
                if (j == jstar) continue;
                if (full_row_rank[j]) {
                    CVector v = random_gaussian_vector(static_cast<int>(blocks[j].rows()), rng);
                    alphas[j] = v / v.norm();
                    s += blocks[j].transpose() * alphas[j];
                } else if (!zero[j] && full_idx.size() == 1 && !forced_nonzero) {
                    alphas[j] = top_row_vector(blocks[j]);
                    s += blocks[j].transpose() * alphas[j];
                    forced_nonzero = true;
                } else {
                    alphas[j] = nulls[j].value();
                }
            }
            if (s.norm() <= tol * std::max(1.0, scale)) continue;
            alphas[jstar] = -lu.solve(s);
            bool ok = true;
            for (int j = 0; j < r && ok; ++j) ok = alphas[j].norm() > tol;
            if (!ok) continue;
            CVector resid = CVector::Zero(m);
            for (int j = 0; j < r; ++j) resid += blocks[j].transpose() * alphas[j];
            if (resid.norm() <= 1e3 * tol * std::max(1.0, scale))
                return finish_exists(std::move(alphas));
        }
    }

    // Randomized combinations of the stacked null basis, as a last resort.
    std::vector<FiberBlock> fb;
    for (const auto& d : blocks) fb.push_back({static_cast<int>(d.rows()), 1.0});
    const auto offs = block_offsets(fb);
    const auto basis = null_space(stacked, tol);
    for (int trial = 0; trial < 200 && !basis.empty(); ++trial) {
        Rng rng(Rng::derive(0xb10c55ull, static_cast<std::uint64_t>(trial)));
        CVector x = CVector::Zero(total_rows);
        for (const auto& v : basis) x += rng.complex_gaussian() * v;
        x /= x.norm();
        bool ok = true;
        std::vector<CVector> alphas;
        for (int j = 0; j < r && ok; ++j) {
            alphas.push_back(x.segment(offs[j], blocks[j].rows()));
            ok = alphas.back().norm() > tol;
        }
        if (ok) return finish_exists(std::move(alphas));
    }

    throw DomainError("block_solvability: dichotomy violated (is some n_j < m?)", 0.0);
}

IsomorphismCheck verify_linear_isomorphism(const CMatrix& l, const EllipsoidSpec& in_spec,
                                           const EllipsoidSpec& out_spec, int samples,
                                           std::uint64_t seed) {
    if (samples < 1)
        throw DomainError("verify_linear_isomorphism: samples must be >= 1", samples);
    if (l.rows() != in_spec.total_dim() || l.cols() != out_spec.total_dim())
        throw DimensionError("verify_linear_isomorphism: matrix does not match the specs");

    IsomorphismCheck check;
    check.ok = true;
    const int delta = in_spec.delta();
    for (int i = 0; i < samples; ++i) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));

        const EllipsoidPoint interior = sample_ellipsoid_interior(in_spec, rng);
        const CVector mapped_in = apply_row_linear(l, flatten_ellipsoid(interior));
        const double out_margin =
            ellipsoid_margin(out_spec, unflatten_ellipsoid(out_spec, mapped_in));
        if (out_margin <= 0.0) {
            check.ok = false;
            check.failure = "interior sample " + std::to_string(i) + " mapped outside";
            return check;
        }

        int vanish = 0;
        if (in_spec.r() > 1 && in_spec.r() - delta >= 1 && i % 4 == 1) {
            const int eligible = in_spec.r() - delta;
            vanish = 1 + delta + static_cast<int>(rng.next_u64() % eligible);
            if (vanish > in_spec.r()) vanish = 0;
        }
        const EllipsoidPoint boundary = sample_ellipsoid_boundary(in_spec, rng, vanish);
        const CVector mapped_b = apply_row_linear(l, flatten_ellipsoid(boundary));
        const EllipsoidPoint image = unflatten_ellipsoid(out_spec, mapped_b);
        const double value = std::abs(ellipsoid_margin(out_spec, image));
        check.max_residual = std::max(check.max_residual, value);
        if (value >= 1e-8) {
            check.ok = false;
            check.failure = "boundary sample " + std::to_string(i) + " left the boundary";
            return check;
        }
        const auto tag_in = classify_ellipsoid_boundary(in_spec, boundary).tag;
        const auto tag_out = classify_ellipsoid_boundary(out_spec, image).tag;
        if (tag_in != tag_out) {
            check.ok = false;
            check.failure = "boundary sample " + std::to_string(i) + " changed stratum (" +
                            stratum_name(tag_in) + " -> " + stratum_name(tag_out) + ")";
            return check;
        }
    }
    return check;
}

RecoveryResult recover_block_structure(const CMatrix& l, const EllipsoidSpec& in_spec,
                                       const EllipsoidSpec& out_spec, double tol) {
    RecoveryResult res;
    if (in_spec.total_dim() != out_spec.total_dim())
        throw DimensionError("recover_block_structure: specs are not equidimensional");
    if (l.rows() != l.cols() || l.rows() != in_spec.total_dim())
        throw DimensionError("recover_block_structure: matrix size mismatch");

    const IsomorphismCheck iso = verify_linear_isomorphism(l, in_spec, out_spec, 200, 0x15071ull);
    if (!iso.ok) {
        res.reason = "not a linear isomorphism: " + iso.failure;
        return res;
    }

    const int r_in = in_spec.r();
    const int r_out = out_spec.r();
    const auto in_offs = block_offsets(in_spec.blocks);
    const auto out_offs = block_offsets(out_spec.blocks);
    const double thresh = tol * l.norm();

    // Exactly one nonzero block per block-row and per block-column.
    std::vector<int> sigma(r_out, -1);
    std::vector<int> row_hits(r_in, 0);
    for (int j = 0; j < r_out; ++j) {
        int hits = 0;
        for (int i = 0; i < r_in; ++i) {
            const double bn = l.block(in_offs[i], out_offs[j], in_spec.blocks[i].dim,
                                      out_spec.blocks[j].dim)
                                  .norm();
            if (bn > thresh) {
                ++hits;
                sigma[j] = i;
                ++row_hits[i];
            }
        }
        if (hits != 1) {
            res.offending_col = j;
            res.reason = "column " + std::to_string(j + 1) + " has " + std::to_string(hits) +
                         " nonzero blocks";
            return res;
        }
    }
    for (int i = 0; i < r_in; ++i) {
        if (row_hits[i] != 1) {
            res.offending_row = i;
            res.reason = "row " + std::to_string(i + 1) + " has " + std::to_string(row_hits[i]) +
                         " nonzero blocks";
            return res;
        }
    }

    for (int j = 0; j < r_out; ++j) {
        const int i = sigma[j];
        if (in_spec.blocks[i].dim != out_spec.blocks[j].dim) {
            res.offending_row = i;
            res.offending_col = j;
            res.reason = "block (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") is not square";
            return res;
        }
        if (in_spec.blocks[i].exp != out_spec.blocks[j].exp) {
            res.offending_row = i;
            res.offending_col = j;
            res.reason = "exponent mismatch under the induced permutation";
            return res;
        }
        const CMatrix u = l.block(in_offs[i], out_offs[j], in_spec.blocks[i].dim,
                                  out_spec.blocks[j].dim);
        if (!unitary_check(u, std::max(tol, 1e-10))) {
            res.offending_row = i;
            res.offending_col = j;
            res.reason = "block (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") is not unitary";
            return res;
        }
        res.unitaries.push_back(u);
    }
    res.sigma = std::move(sigma);
    res.accepted = true;
    return res;
}

std::optional<std::vector<int>> ellipsoid_equivalent(const EllipsoidSpec& in_spec,
                                                     const EllipsoidSpec& out_spec, double p_tol) {
    if (in_spec.r() != out_spec.r()) return std::nullopt;
    const int r = in_spec.r();
    std::vector<int> sigma(r, -1);
    std::vector<bool> used(r, false);
    for (int j = 0; j < r; ++j) {
        int best = -1;
        for (int i = 0; i < r; ++i) {
            if (used[i]) continue;
            if (in_spec.blocks[i].dim != out_spec.blocks[j].dim) continue;
            const bool p_match = p_tol == 0.0
                                     ? in_spec.blocks[i].exp == out_spec.blocks[j].exp
                                     : std::abs(in_spec.blocks[i].exp - out_spec.blocks[j].exp) <=
                                           p_tol;
            if (!p_match) continue;
            if (best < 0 ||
                std::abs(in_spec.blocks[i].exp - out_spec.blocks[j].exp) <
                    std::abs(in_spec.blocks[best].exp - out_spec.blocks[j].exp))
                best = i;
        }
        if (best < 0) return std::nullopt;
        used[best] = true;
        sigma[j] = best;
    }
    return sigma;
}

HuaPoint EquivWitness::apply(const HuaPoint& p) const {
    const HuaPoint q1 = relabel(rel1, p);
    HuaPoint q2;
    if (base_transpose) {
        const CartanSpec& b1 = rel1.to.base;
        const CartanSpec b2t = rel2.to.base;
        q2.z = from_matrix(b2t, to_matrix(b1, q1.z).transpose());
    } else {
        q2.z = q1.z;
    }
    for (std::size_t j = 0; j < sigma.size(); ++j) q2.w.push_back(unitaries[j] * q1.w[sigma[j]]);
    return relabel_back(rel2, q2);
}

EquivResult hua_equivalent(const HuaSpec& s1, const HuaSpec& s2, double p_tol) {
    EquivResult result;
    auto [std1, rel1] = standardize(s1);
    auto [std2, rel2] = standardize(s2);

    bool transpose = false;
    if (std1.base == std2.base) {
        transpose = false;
    } else if (std1.base.kind == CartanKind::TypeI && std2.base.kind == CartanKind::TypeI &&
               std1.base.m == std2.base.n && std1.base.n == std2.base.m) {
        transpose = true;
    } else if (known_base_coincidence(std1.base, std2.base, result.note)) {
        result.status = EquivStatus::Undetermined;
        return result;
    } else {
        result.status = EquivStatus::NotEquivalent;
        result.note = "base domains are not linearly isomorphic";
        return result;
    }

    EllipsoidSpec f1{std1.fibers}, f2{std2.fibers};
    const auto sigma = ellipsoid_equivalent(f1, f2, p_tol);
    if (!sigma) {
        result.status = EquivStatus::NotEquivalent;
        result.note = "fiber signatures do not match under any permutation";
        return result;
    }

    EquivWitness w;
    w.rel1 = rel1;
    w.rel2 = rel2;
    w.sigma = *sigma;
    w.base_transpose = transpose;
    for (int j = 0; j < std2.r(); ++j)
        w.unitaries.push_back(CMatrix::Identity(std2.fibers[j].dim, std2.fibers[j].dim));
    result.status = EquivStatus::Equivalent;
    result.witness = std::move(w);
    return result;
}

} // namespace huadom
