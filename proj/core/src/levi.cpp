#include "huadom/levi.hpp"

#include <array>
#include <cmath>

namespace huadom {

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kTangencyTol = 1e-8;
constexpr double kFdStep = 1e-4;
constexpr double kZeroBlockNorm = 1e-14;

double rho_unchecked(const HuaSpec& spec, const HuaPoint& p) {
    return -hua_margin_unchecked(spec, p);
}

// Fiber block of the mixed Hessian: p h^(p-1) I + p(p-1) h^(p-2) conj(w) w^T,
// h = ||w||^2. At w = 0 the limit exists only for p = 1 (identity) or p >= 2
// (zero); anything else is a genuine C^2 failure of the boundary.
CMatrix fiber_hessian_block(const CVector& w, double p) {
    const int n = static_cast<int>(w.size());
    const double h = w.squaredNorm();
    if (w.norm() <= kZeroBlockNorm) {
        if (p == 1.0) return CMatrix::Identity(n, n);
        if (p >= 2.0) return CMatrix::Zero(n, n);
        throw NonSmoothPointError("levi: vanishing fiber block with exponent below 2");
    }
    CMatrix block = p * std::pow(h, p - 1.0) * CMatrix::Identity(n, n);
    block += p * (p - 1.0) * std::pow(h, p - 2.0) * (w.conjugate() * w.transpose());
    return block;
}

// Full mixed Hessian H(I,J) = d^2 rho / dx_I dxbar_J; block diagonal in
// (base, fiber_1, ..., fiber_r) since rho has no z-w cross terms.
CMatrix rho_mixed_hessian(const HuaSpec& spec, const HuaPoint& p) {
    const int total = spec.total_dim();
    const int d = spec.base.ambient_dim();
    CMatrix h = CMatrix::Zero(total, total);
    h.topLeftCorner(d, d) = -norm_mixed_hessian(spec.base, p.z);
    int at = d;
    for (int k = 0; k < spec.r(); ++k) {
        const int nk = spec.fibers[k].dim;
        h.block(at, at, nk, nk) = fiber_hessian_block(p.w[k], spec.fibers[k].exp);
        at += nk;
    }
    return h;
}

void require_boundary(const HuaSpec& spec, const HuaPoint& p, const char* op) {
    const double r = rho_unchecked(spec, p);
    if (std::abs(r) > kBoundaryTol)
        throw DomainError(std::string(op) + ": point is not on the boundary", r);
}

void require_tangent(const CVector& grad, const CVector& t, const char* op) {
    Complex pairing(0.0, 0.0);
    for (Eigen::Index i = 0; i < grad.size(); ++i) pairing += grad(i) * t(i);
    const double scale = std::max(1.0, grad.norm() * t.norm());
    if (std::abs(pairing) > kTangencyTol * scale)
        throw DomainError(std::string(op) + ": vector is not complex-tangent", std::abs(pairing));
}

} // namespace

CVector flatten(const TangentVector& t) {
    HuaPoint tmp;
    tmp.z = t.xi;
    tmp.w = t.eta;
    return flatten(tmp);
}

TangentVector unflatten_tangent(const HuaSpec& spec, const CVector& v) {
    const HuaPoint tmp = unflatten(spec, v);
    return {tmp.z, tmp.w};
}

double rho(const HuaSpec& spec, const HuaPoint& p) {
    return -hua_margin(spec, p);
}

TangentVector gradient_rho(const HuaSpec& spec, const HuaPoint& p, bool* smoothness_warning) {
    require_point_shape(spec, p, "gradient_rho");
    if (base_margin(spec.base, p.z) < -kClosedDomainSlack)
        throw DomainError("gradient_rho: base point must lie in the closed domain",
                          base_margin(spec.base, p.z));
    if (smoothness_warning) *smoothness_warning = false;
    TangentVector g;
    g.xi = -norm_gradient(spec.base, p.z);
    for (int k = 0; k < spec.r(); ++k) {
        const double pk = spec.fibers[k].exp;
        const CVector& w = p.w[k];
        if (smoothness_warning && pk < 1.0) *smoothness_warning = true;
        if (w.norm() <= kZeroBlockNorm) {
            if (pk < 1.0)
                throw NonSmoothPointError("gradient_rho: vanishing block with exponent below 1");
            g.eta.push_back(CVector::Zero(w.size()));
            continue;
        }
        const double h = w.squaredNorm();
        g.eta.push_back(pk * std::pow(h, pk - 1.0) * w.conjugate());
    }
    return g;
}

std::vector<TangentVector> complex_tangent_basis(const HuaSpec& spec, const HuaPoint& p) {
    const BoundaryStratum s = classify_boundary(spec, p, kBoundaryTol);
    if (s.tag != StratumTag::B0 && s.tag != StratumTag::B1)
        throw DomainError("complex_tangent_basis: point must lie on b0 or b1", 0.0);
    const CVector g = flatten(gradient_rho(spec, p));
    if (g.norm() < 1e-12)
        throw DomainError("complex_tangent_basis: vanishing gradient (singular point)", g.norm());

    // <d rho, T> = 0 is Hermitian orthogonality to conj(g); complete it to a
    // unitary frame and drop the first column.
    const Eigen::Index total = g.size();
    CMatrix col(total, 1);
    col.col(0) = g.conjugate();
    Eigen::HouseholderQR<CMatrix> qr(col);
    const CMatrix q = qr.householderQ();
    std::vector<TangentVector> basis;
    for (Eigen::Index j = 1; j < total; ++j)
        basis.push_back(unflatten_tangent(spec, q.col(j)));
    return basis;
}

double levi_form(const HuaSpec& spec, const HuaPoint& p, const TangentVector& t, LeviMode mode) {
    require_point_shape(spec, p, "levi_form");
    require_boundary(spec, p, "levi_form");
    const CVector grad = flatten(gradient_rho(spec, p));
    const CVector u = flatten(t);
    if (u.size() != spec.total_dim())
        throw DimensionError("levi_form: tangent vector dimension mismatch");
    require_tangent(grad, u, "levi_form");

    if (mode == LeviMode::Analytic) {
        const CMatrix h = rho_mixed_hessian(spec, p);
        Complex val(0.0, 0.0);
        for (Eigen::Index i = 0; i < u.size(); ++i)
            for (Eigen::Index j = 0; j < u.size(); ++j)
                val += h(i, j) * u(i) * std::conj(u(j));
        if (std::abs(val.imag()) > 1e-9)
            throw DomainError("levi_form: non-real analytic value", val.imag());
        return val.real();
    }

    // d/dt dbar/dt of rho(x + t u) at t = 0, via the 5-point Laplacian in t.
    auto eval = [&](const Complex& step) {
        const CVector x = flatten(p) + step * u;
        return rho_unchecked(spec, unflatten(spec, x));
    };
    const double h = kFdStep;
    const double center = rho_unchecked(spec, p);
    const double lap = (eval(Complex(h, 0.0)) + eval(Complex(-h, 0.0)) +
                        eval(Complex(0.0, h)) + eval(Complex(0.0, -h)) - 4.0 * center) /
                       (h * h);
    return 0.25 * lap;
}

std::array<double, 3> levi_form_parts(const HuaSpec& spec, const HuaPoint& p,
                                      const TangentVector& t) {
    require_point_shape(spec, p, "levi_form_parts");
    double fiber_gram = 0.0;
    double weighted_sq = 0.0;
    Complex pairing(0.0, 0.0);
    double sum_powers = 0.0;
    for (int k = 0; k < spec.r(); ++k) {
        const CVector& w = p.w[k];
        const CVector& eta = t.eta[k];
        const double pk = spec.fibers[k].exp;
        const double h = w.squaredNorm();
        sum_powers += std::pow(h, pk);
        if (w.norm() <= kZeroBlockNorm) continue;
        const Complex dot = w.dot(eta); // sum conj(w_i) eta_i
        const double dot2 = std::norm(dot);
        fiber_gram += pk * std::pow(h, pk - 2.0) * (h * eta.squaredNorm() - dot2);
        weighted_sq += pk * pk * std::pow(h, pk - 2.0) * dot2;
        pairing += pk * std::pow(h, pk - 1.0) * dot;
    }
    if (sum_powers <= 0.0)
        throw DomainError("levi_form_parts: needs a point with nonzero fiber part", sum_powers);
    const double exponent_weighted = weighted_sq - std::norm(pairing) / sum_powers;

    const CMatrix nh = norm_mixed_hessian(spec.base, p.z);
    Complex base_hess(0.0, 0.0);
    for (Eigen::Index a = 0; a < t.xi.size(); ++a)
        for (Eigen::Index b = 0; b < t.xi.size(); ++b)
            base_hess += nh(a, b) * t.xi(a) * std::conj(t.xi(b));
    const CVector gn = norm_gradient(spec.base, p.z);
    Complex npair(0.0, 0.0);
    for (Eigen::Index a = 0; a < t.xi.size(); ++a) npair += gn(a) * t.xi(a);
    const double n = generic_norm_diag_unchecked(spec.base, p.z);
    const double base_part = -base_hess.real() + std::norm(npair) / n;

    return {fiber_gram, exponent_weighted, base_part};
}

LeviReport classify_pseudoconvexity(const HuaSpec& spec, const HuaPoint& p, double tol) {
    const BoundaryStratum s = classify_boundary(spec, p, kBoundaryTol);
    if (s.tag == StratumTag::BaseEdge)
        throw NonSmoothPointError("classify_pseudoconvexity: base-edge points are not smooth");
    if (s.tag != StratumTag::B0 && s.tag != StratumTag::B1)
        throw DomainError("classify_pseudoconvexity: point must lie on the boundary", 0.0);
    for (int k = 0; k < spec.r(); ++k) {
        const double pk = spec.fibers[k].exp;
        if (p.w[k].norm() <= kBoundaryTol && pk != 1.0 && pk < 2.0)
            throw NonSmoothPointError(
                "classify_pseudoconvexity: vanishing block with exponent below 2");
    }

    const auto basis = complex_tangent_basis(spec, p);
    const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
    CMatrix b(spec.total_dim(), dim);
    for (Eigen::Index j = 0; j < dim; ++j) b.col(j) = flatten(basis[j]);

    // Quadratic form q(v) = sum H_IJ v_I conj(v_J) as v^H (H^T) v.
    const CMatrix a = rho_mixed_hessian(spec, p).transpose();
    CMatrix levi = b.adjoint() * a * b;
    if ((levi - levi.adjoint()).norm() > 1e-9 * std::max(1.0, levi.norm()))
        throw DomainError("classify_pseudoconvexity: Levi matrix is not Hermitian",
                          (levi - levi.adjoint()).norm());
    levi = 0.5 * (levi + levi.adjoint().eval());

    Eigen::SelfAdjointEigenSolver<CMatrix> es(levi, Eigen::EigenvaluesOnly);
    LeviReport report;
    report.point = p;
    report.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);
    report.min_eigenvalue = report.eigenvalues.empty() ? 0.0 : report.eigenvalues.front();
    report.strongly_pseudoconvex = report.min_eigenvalue > tol;
    return report;
}

} // namespace huadom
