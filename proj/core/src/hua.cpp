#include "huadom/hua.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace huadom {

namespace {

double block_power(const CVector& w, double p) {
    return std::pow(w.squaredNorm(), p);
}

double fiber_sum(const std::vector<FiberBlock>& blocks, const std::vector<CVector>& w) {
    double s = 0.0;
    for (std::size_t j = 0; j < blocks.size(); ++j) s += block_power(w[j], blocks[j].exp);
    return s;
}

// Unique s > 0 with sum_j (s ||v_j||)^(2 p_j) = target; strictly increasing
// in s, so plain bisection converges.
double solve_fiber_scale(const std::vector<FiberBlock>& blocks, const std::vector<CVector>& dirs,
                         double target) {
    auto value = [&](double s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < blocks.size(); ++j)
            acc += std::pow(s * s * dirs[j].squaredNorm(), blocks[j].exp);
        return acc;
    };
    double lo = 0.0, hi = 1.0;
    while (value(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw DomainError("project_to_boundary: scale diverged", hi);
    }
    double s = hi;
    for (int it = 0; it < 200; ++it) {
        s = 0.5 * (lo + hi);
        const double v = value(s);
        if (std::abs(target - v) < 1e-12) return s;
        (v < target ? lo : hi) = s;
    }
    return s;
}

void validate_blocks(const std::vector<FiberBlock>& blocks, const char* what) {
    int unit_count = 0;
    for (const auto& b : blocks) {
        if (b.dim < 1) throw InvalidSpecError(std::string(what) + ": fiber dimension must be >= 1");
        if (!(b.exp > 0.0) || !std::isfinite(b.exp))
            throw InvalidSpecError(std::string(what) + ": exponent must be positive and finite");
        if (b.exp == 1.0) ++unit_count;
    }
    if (unit_count > 1)
        throw InvalidSpecError(std::string(what) + ": two or more exponents equal to 1");
}

// TypeI with a single row/column, TypeII(2) and TypeII(3) are the unit ball
// in the stored coordinates; rewrite the kind so the standard-form rules see it.
CartanSpec canonical_base(const CartanSpec& base) {
    switch (base.kind) {
        case CartanKind::TypeI:
            if (base.m == 1 || base.n == 1) return CartanSpec::ball(base.m * base.n);
            return base;
        case CartanKind::TypeII:
            if (base.n == 2) return CartanSpec::ball(1);
            if (base.n == 3) return CartanSpec::ball(3);
            return base;
        default:
            return base;
    }
}

} // namespace

int HuaSpec::fiber_total() const {
    int t = 0;
    for (const auto& b : fibers) t += b.dim;
    return t;
}

int HuaSpec::delta() const {
    return (!fibers.empty() && fibers.front().exp == 1.0) ? 1 : 0;
}

bool HuaSpec::is_standard() const {
    if (canonical_base(base) != base) return false;
    for (std::size_t k = 0; k < fibers.size(); ++k) {
        if (fibers[k].exp == 1.0) {
            if (base.kind == CartanKind::Ball) return false;
            if (k != 0) return false;
        }
    }
    return true;
}

void HuaSpec::validate() const {
    validate_blocks(fibers, "HuaSpec");
}

int EllipsoidSpec::total_dim() const {
    int t = 0;
    for (const auto& b : blocks) t += b.dim;
    return t;
}

int EllipsoidSpec::delta() const {
    return (!blocks.empty() && blocks.front().exp == 1.0) ? 1 : 0;
}

void EllipsoidSpec::validate() const {
    validate_blocks(blocks, "EllipsoidSpec");
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        if (blocks[k].exp == 1.0)
            throw InvalidSpecError("EllipsoidSpec: unit exponent must sit in slot 1");
    }
}

void require_point_shape(const HuaSpec& spec, const HuaPoint& p, const char* op) {
    if (p.z.size() != spec.base.ambient_dim())
        throw DimensionError(std::string(op) + ": base coordinate count mismatch");
    if (static_cast<int>(p.w.size()) != spec.r())
        throw DimensionError(std::string(op) + ": fiber block count mismatch");
    for (int j = 0; j < spec.r(); ++j) {
        if (p.w[j].size() != spec.fibers[j].dim)
            throw DimensionError(std::string(op) + ": fiber block dimension mismatch");
    }
}

CVector flatten(const HuaPoint& p) {
    Eigen::Index total = p.z.size();
    for (const auto& w : p.w) total += w.size();
    CVector v(total);
    Eigen::Index at = 0;
    v.segment(at, p.z.size()) = p.z;
    at += p.z.size();
    for (const auto& w : p.w) {
        v.segment(at, w.size()) = w;
        at += w.size();
    }
    return v;
}

HuaPoint unflatten(const HuaSpec& spec, const CVector& v) {
    if (v.size() != spec.total_dim())
        throw DimensionError("unflatten: coordinate count mismatch");
    HuaPoint p;
    Eigen::Index at = 0;
    p.z = v.segment(at, spec.base.ambient_dim());
    at += spec.base.ambient_dim();
    for (const auto& b : spec.fibers) {
        p.w.push_back(v.segment(at, b.dim));
        at += b.dim;
    }
    return p;
}

const char* stratum_name(StratumTag tag) {
    switch (tag) {
        case StratumTag::Interior: return "interior";
        case StratumTag::Exterior: return "exterior";
        case StratumTag::B0: return "b0";
        case StratumTag::B1: return "b1";
        case StratumTag::BaseEdge: return "base_edge";
    }
    return "?";
}

HuaPoint relabel(const Relabeling& r, const HuaPoint& p) {
    require_point_shape(r.from, p, "relabel");
    HuaPoint q;
    if (r.merged_block >= 0) {
        const auto& extra = p.w[r.merged_block];
        CVector z(p.z.size() + extra.size());
        z << p.z, extra;
        q.z = z;
    } else {
        q.z = p.z;
    }
    for (int idx : r.block_perm) q.w.push_back(p.w[idx]);
    require_point_shape(r.to, q, "relabel(result)");
    return q;
}

HuaPoint relabel_back(const Relabeling& r, const HuaPoint& p) {
    require_point_shape(r.to, p, "relabel_back");
    HuaPoint q;
    q.w.resize(r.from.r());
    if (r.merged_block >= 0) {
        const int d = r.from.base.ambient_dim();
        q.z = p.z.head(d);
        q.w[r.merged_block] = p.z.tail(p.z.size() - d);
    } else {
        q.z = p.z;
    }
    for (std::size_t i = 0; i < r.block_perm.size(); ++i) q.w[r.block_perm[i]] = p.w[i];
    require_point_shape(r.from, q, "relabel_back(result)");
    return q;
}

std::pair<HuaSpec, Relabeling> standardize(const HuaSpec& spec) {
    spec.validate();
    HuaSpec out;
    out.base = canonical_base(spec.base);
    Relabeling rel;
    rel.from = spec;
    rel.merged_block = -1;

    int unit_idx = -1;
    for (int k = 0; k < spec.r(); ++k) {
        if (spec.fibers[k].exp == 1.0) unit_idx = k;
    }

    std::vector<int> perm;
    if (unit_idx >= 0 && out.base.kind == CartanKind::Ball) {
        // Merge the unit-exponent block into the ball base.
        out.base = CartanSpec::ball(out.base.ambient_dim() + spec.fibers[unit_idx].dim);
        for (int k = 0; k < spec.r(); ++k)
            if (k != unit_idx) perm.push_back(k);
        rel.merged_block = unit_idx;
    } else if (unit_idx > 0) {
        perm.push_back(unit_idx);
        for (int k = 0; k < spec.r(); ++k)
            if (k != unit_idx) perm.push_back(k);
    } else {
        perm.resize(spec.r());
        std::iota(perm.begin(), perm.end(), 0);
    }

    for (int idx : perm) out.fibers.push_back(spec.fibers[idx]);
    rel.block_perm = std::move(perm);
    rel.to = out;
    return {out, rel};
}

double hua_margin(const HuaSpec& spec, const HuaPoint& p) {
    require_point_shape(spec, p, "hua_margin");
    const double bm = base_margin(spec.base, p.z);
    if (bm < -kClosedDomainSlack)
        throw DomainError("hua_margin: base point outside the closed domain", bm);
    return generic_norm_diag_unchecked(spec.base, p.z) - fiber_sum(spec.fibers, p.w);
}

double hua_margin_unchecked(const HuaSpec& spec, const HuaPoint& p) {
    return generic_norm_diag_unchecked(spec.base, p.z) - fiber_sum(spec.fibers, p.w);
}

double exhaustion(const HuaSpec& spec, const HuaPoint& p) {
    const double margin = hua_margin(spec, p);
    if (margin <= 0.0)
        throw DomainError("exhaustion: point is not interior", margin);
    const double n = generic_norm_diag_unchecked(spec.base, p.z);
    return std::max(n / margin, 1.0 / n);
}

BoundaryStratum classify_boundary(const HuaSpec& spec, const HuaPoint& p, double tol) {
    if (!spec.is_standard())
        throw InvalidSpecError("classify_boundary: spec must be in standard form");
    require_point_shape(spec, p, "classify_boundary");

    const double bm = base_margin(spec.base, p.z);
    if (bm < -tol) return {StratumTag::Exterior, 0};
    const double margin = hua_margin_unchecked(spec, p);
    if (margin > tol) return {StratumTag::Interior, 0};
    if (margin < -tol) return {StratumTag::Exterior, 0};

    if (spec.r() == 0) {
        // Pure base: a ball boundary is entirely strongly pseudoconvex (B0);
        // a higher-rank bOmega is the degenerate edge.
        return {spec.base.kind == CartanKind::Ball ? StratumTag::B0 : StratumTag::BaseEdge, 0};
    }

    bool all_zero = true;
    for (const auto& w : p.w) {
        if (w.norm() > tol) {
            all_zero = false;
            break;
        }
    }
    if (all_zero && bm <= tol) return {StratumTag::BaseEdge, 0};

    const int delta = spec.delta();
    for (int j = 1 + delta; j <= spec.r(); ++j) {
        if (p.w[j - 1].norm() <= tol) return {StratumTag::B1, j};
    }
    return {StratumTag::B0, 0};
}

HuaPoint project_to_boundary(const HuaSpec& spec, const BasePoint& z,
                             const std::vector<CVector>& w_dirs) {
    if (static_cast<int>(w_dirs.size()) != spec.r())
        throw DimensionError("project_to_boundary: direction block count mismatch");
    const double bm = base_margin(spec.base, z);
    if (bm <= 0.0)
        throw DomainError("project_to_boundary: base point must be strictly interior", bm);
    double max_norm = 0.0;
    for (const auto& v : w_dirs) max_norm = std::max(max_norm, v.norm());
    if (max_norm == 0.0)
        throw DomainError("project_to_boundary: all directions are zero", 0.0);

    const double target = generic_norm_diag(spec.base, z);
    const double s = solve_fiber_scale(spec.fibers, w_dirs, target);
    HuaPoint p;
    p.z = z;
    for (const auto& v : w_dirs) p.w.push_back(s * v);
    return p;
}

HuaPoint ray_scale(const HuaSpec& spec, const HuaPoint& p, double t) {
    if (t < 0.0 || t > 1.0)
        throw DomainError("ray_scale: t must lie in [0,1]", t);
    const double margin = hua_margin(spec, p);
    if (margin <= 0.0)
        throw DomainError("ray_scale: point is not interior", margin);
    HuaPoint q;
    q.z = t * p.z;
    for (const auto& w : p.w) q.w.push_back(t * w);
    const double scaled_margin = hua_margin(spec, q);
    if (scaled_margin <= 0.0)
        throw DomainError("ray_scale: starlikeness violated numerically", scaled_margin);
    return q;
}

HuaPoint pr_j(const HuaSpec& spec, const HuaPoint& p, int j) {
    require_point_shape(spec, p, "pr_j");
    if (j < 1 || j > spec.r())
        throw DimensionError("pr_j: block index out of range");
    HuaPoint q = p;
    q.w[j - 1].setZero();
    return q;
}

HuaPoint sample_hua_interior(const HuaSpec& spec, Rng& rng) {
    HuaPoint p;
    p.z = sample_base_interior(spec.base, rng);
    if (spec.r() == 0) return p;
    std::vector<CVector> dirs;
    for (const auto& b : spec.fibers) dirs.push_back(random_gaussian_vector(b.dim, rng));
    const HuaPoint edge = project_to_boundary(spec, p.z, dirs);
    const double t = 0.05 + 0.9 * rng.uniform();
    for (const auto& w : edge.w) p.w.push_back(t * w);
    return p;
}

HuaPoint sample_hua_boundary(const HuaSpec& spec, Rng& rng, int vanish_block) {
    if (spec.r() == 0) {
        HuaPoint p;
        p.z = project_base_boundary(spec.base, sample_base_interior(spec.base, rng), 1e-12);
        return p;
    }
    if (vanish_block < 0 || vanish_block > spec.r())
        throw DimensionError("sample_hua_boundary: vanish block out of range");
    const BasePoint z = sample_base_interior(spec.base, rng);
    std::vector<CVector> dirs;
    for (const auto& b : spec.fibers) dirs.push_back(random_gaussian_vector(b.dim, rng));
    if (vanish_block > 0) dirs[vanish_block - 1].setZero();
    return project_to_boundary(spec, z, dirs);
}

CVector flatten_ellipsoid(const EllipsoidPoint& p) {
    Eigen::Index total = 0;
    for (const auto& b : p) total += b.size();
    CVector v(total);
    Eigen::Index at = 0;
    for (const auto& b : p) {
        v.segment(at, b.size()) = b;
        at += b.size();
    }
    return v;
}

EllipsoidPoint unflatten_ellipsoid(const EllipsoidSpec& spec, const CVector& v) {
    if (v.size() != spec.total_dim())
        throw DimensionError("unflatten_ellipsoid: coordinate count mismatch");
    EllipsoidPoint p;
    Eigen::Index at = 0;
    for (const auto& b : spec.blocks) {
        p.push_back(v.segment(at, b.dim));
        at += b.dim;
    }
    return p;
}

double ellipsoid_margin(const EllipsoidSpec& spec, const EllipsoidPoint& p) {
    if (static_cast<int>(p.size()) != spec.r())
        throw DimensionError("ellipsoid_margin: block count mismatch");
    return 1.0 - fiber_sum(spec.blocks, p);
}

BoundaryStratum classify_ellipsoid_boundary(const EllipsoidSpec& spec, const EllipsoidPoint& p,
                                            double tol) {
    const double margin = ellipsoid_margin(spec, p);
    if (margin > tol) return {StratumTag::Interior, 0};
    if (margin < -tol) return {StratumTag::Exterior, 0};
    const int delta = spec.delta();
    for (int j = 1 + delta; j <= spec.r(); ++j) {
        if (p[j - 1].norm() <= tol) return {StratumTag::B1, j};
    }
    return {StratumTag::B0, 0};
}

EllipsoidPoint project_to_ellipsoid_boundary(const EllipsoidSpec& spec,
                                             const std::vector<CVector>& dirs) {
    if (static_cast<int>(dirs.size()) != spec.r())
        throw DimensionError("project_to_ellipsoid_boundary: block count mismatch");
    double max_norm = 0.0;
    for (const auto& v : dirs) max_norm = std::max(max_norm, v.norm());
    if (max_norm == 0.0)
        throw DomainError("project_to_ellipsoid_boundary: all directions are zero", 0.0);
    const double s = solve_fiber_scale(spec.blocks, dirs, 1.0);
    EllipsoidPoint p;
    for (const auto& v : dirs) p.push_back(s * v);
    return p;
}

EllipsoidPoint sample_ellipsoid_interior(const EllipsoidSpec& spec, Rng& rng) {
    std::vector<CVector> dirs;
    for (const auto& b : spec.blocks) dirs.push_back(random_gaussian_vector(b.dim, rng));
    const EllipsoidPoint edge = project_to_ellipsoid_boundary(spec, dirs);
    const double t = 0.05 + 0.9 * rng.uniform();
    EllipsoidPoint p;
    for (const auto& b : edge) p.push_back(t * b);
    return p;
}

EllipsoidPoint sample_ellipsoid_boundary(const EllipsoidSpec& spec, Rng& rng, int vanish_block) {
    if (vanish_block < 0 || vanish_block > spec.r())
        throw DimensionError("sample_ellipsoid_boundary: vanish block out of range");
    std::vector<CVector> dirs;
    for (const auto& b : spec.blocks) dirs.push_back(random_gaussian_vector(b.dim, rng));
    if (vanish_block > 0) dirs[vanish_block - 1].setZero();
    return project_to_ellipsoid_boundary(spec, dirs);
}

} // namespace huadom
