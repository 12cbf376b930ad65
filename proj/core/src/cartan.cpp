#include "huadom/cartan.hpp"

#include <cmath>
#include <vector>

namespace huadom {

namespace {

void require_dim(const CartanSpec& spec, const BasePoint& z, const char* op) {
    if (z.size() != spec.ambient_dim()) {
        throw DimensionError(std::string(op) + ": coordinate count does not match ambient dimension");
    }
}

void require_closed(const CartanSpec& spec, const BasePoint& z, const char* op) {
    if (base_margin(spec, z) < -kClosedDomainSlack) {
        throw DomainError(std::string(op) + ": point outside the closed domain", base_margin(spec, z));
    }
}

// One summand of Z = sum_k c_k * (coeff * E_{row,col}).
struct Placement {
    int row;
    int col;
    double coeff;
};

// Placements of flat coordinate k inside the constrained matrix.
std::vector<Placement> placements(const CartanSpec& spec, int k) {
    switch (spec.kind) {
        case CartanKind::TypeI: {
            return {{k / spec.n, k % spec.n, 1.0}};
        }
        case CartanKind::TypeII: {
            int idx = 0;
            for (int a = 0; a < spec.n; ++a) {
                for (int b = a + 1; b < spec.n; ++b) {
                    if (idx == k) return {{a, b, 1.0}, {b, a, -1.0}};
                    ++idx;
                }
            }
            break;
        }
        case CartanKind::TypeIII: {
            int idx = 0;
            for (int a = 0; a < spec.n; ++a) {
                for (int b = a; b < spec.n; ++b) {
                    if (idx == k) {
                        if (a == b) return {{a, a, 1.0}};
                        return {{a, b, 1.0}, {b, a, 1.0}};
                    }
                    ++idx;
                }
            }
            break;
        }
        default:
            break;
    }
    throw DimensionError("placements: coordinate index out of range");
}

bool is_matrix_kind(CartanKind k) {
    return k == CartanKind::TypeI || k == CartanKind::TypeII || k == CartanKind::TypeIII;
}

// Determinant D = det(I - Z W) with W = Z^H, plus the pieces entering the
// first and second Wirtinger derivatives of D.
struct DetCalculus {
    double value;   // D, real on the diagonal
    CMatrix w_xinv;   // W X^{-1}            (n x m)
    CMatrix xinv;     // X^{-1}              (m x m)
    CMatrix xinv_z;   // X^{-1} Z            (m x n)
    CMatrix w_xinv_z; // W X^{-1} Z          (n x n)

    Complex d_entry(int a, int b) const {
        return -value * w_xinv(b, a);
    }
    Complex d2_entry(int a, int b, int c, int d) const {
        Complex t = xinv_z(c, d) * w_xinv(b, a) - w_xinv_z(b, d) * xinv(c, a);
        if (b == d) t -= xinv(c, a);
        return value * t;
    }
};

DetCalculus det_calculus(const CMatrix& z) {
    const auto rows = z.rows();
    const CMatrix w = z.adjoint();
    const CMatrix x = CMatrix::Identity(rows, rows) - z * w;
    Eigen::PartialPivLU<CMatrix> lu(x);
    DetCalculus c;
    c.value = lu.determinant().real();
    if (std::abs(c.value) < 1e-250)
        throw DomainError("norm derivatives are singular at the base boundary", c.value);
    c.xinv = lu.inverse();
    c.w_xinv = w * c.xinv;
    c.xinv_z = c.xinv * z;
    c.w_xinv_z = w * c.xinv_z;
    return c;
}

// Continuous square-root continuation of f along t in [0,1], anchored at
// sqrt(f(0)) = 1. Sixteen steps are plenty at desk scale.
template <typename F>
Complex tracked_sqrt(F&& f) {
    constexpr int kSteps = 16;
    Complex prev(1.0, 0.0);
    for (int k = 1; k <= kSteps; ++k) {
        const double t = static_cast<double>(k) / kSteps;
        const Complex d = f(t);
        if (std::abs(d) < 1e-280) {
            throw BranchError("generic_norm: square-root branch tracking hit a zero of the determinant");
        }
        Complex s = std::sqrt(d);
        if (std::abs(-s - prev) < std::abs(s - prev)) s = -s;
        prev = s;
    }
    return prev;
}

Complex type_iv_polarized(const BasePoint& z, const BasePoint& xi) {
    Complex dot(0.0, 0.0);
    Complex zsq(0.0, 0.0), xisq(0.0, 0.0);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        dot += z(i) * std::conj(xi(i));
        zsq += z(i) * z(i);
        xisq += xi(i) * xi(i);
    }
    return Complex(1.0, 0.0) - 2.0 * dot + zsq * std::conj(xisq);
}

Complex polarized_norm_impl(const CartanSpec& spec, const BasePoint& z, const BasePoint& xi) {
    switch (spec.kind) {
        case CartanKind::Ball: {
            Complex dot(0.0, 0.0);
            for (Eigen::Index i = 0; i < z.size(); ++i) dot += z(i) * std::conj(xi(i));
            return Complex(1.0, 0.0) - dot;
        }
        case CartanKind::TypeIV:
            return type_iv_polarized(z, xi);
        case CartanKind::TypeI:
        case CartanKind::TypeIII: {
            const CMatrix zm = to_matrix(spec, z);
            const CMatrix xm = to_matrix(spec, xi);
            return det(CMatrix(CMatrix::Identity(zm.rows(), zm.rows()) - zm * xm.adjoint()));
        }
        case CartanKind::TypeII: {
            const CMatrix zm = to_matrix(spec, z);
            const CMatrix prod = zm * to_matrix(spec, xi).adjoint();
            const CMatrix eye = CMatrix::Identity(zm.rows(), zm.rows());
            return tracked_sqrt([&](double t) { return det(CMatrix(eye - (t * t) * prod)); });
        }
    }
    throw DimensionError("generic_norm: unknown kind");
}

} // namespace

CartanSpec CartanSpec::type_i(int m, int n) {
    if (m < 1 || n < 1) throw InvalidSpecError("TypeI requires m, n >= 1");
    return {CartanKind::TypeI, m, n};
}
CartanSpec CartanSpec::type_ii(int n) {
    if (n < 2) throw InvalidSpecError("TypeII requires n >= 2");
    return {CartanKind::TypeII, 0, n};
}
CartanSpec CartanSpec::type_iii(int n) {
    if (n < 2) throw InvalidSpecError("TypeIII requires n >= 2");
    return {CartanKind::TypeIII, 0, n};
}
CartanSpec CartanSpec::type_iv(int n) {
    if (n < 3) throw InvalidSpecError("TypeIV requires n >= 3");
    return {CartanKind::TypeIV, 0, n};
}
CartanSpec CartanSpec::ball(int d) {
    if (d < 1) throw InvalidSpecError("Ball requires d >= 1");
    return {CartanKind::Ball, 0, d};
}

int CartanSpec::ambient_dim() const {
    switch (kind) {
        case CartanKind::TypeI: return m * n;
        case CartanKind::TypeII: return n * (n - 1) / 2;
        case CartanKind::TypeIII: return n * (n + 1) / 2;
        case CartanKind::TypeIV: return n;
        case CartanKind::Ball: return n;
    }
    return 0;
}

int CartanSpec::genus() const {
    switch (kind) {
        case CartanKind::TypeI: return m + n;
        case CartanKind::TypeII: return 2 * (n - 1);
        case CartanKind::TypeIII: return n + 1;
        case CartanKind::TypeIV: return n;
        case CartanKind::Ball: return n + 1;
    }
    return 0;
}

int CartanSpec::rank() const {
    switch (kind) {
        case CartanKind::TypeI: return std::min(m, n);
        case CartanKind::TypeII: return n / 2;
        case CartanKind::TypeIII: return n;
        case CartanKind::TypeIV: return 2;
        case CartanKind::Ball: return 1;
    }
    return 0;
}

CMatrix to_matrix(const CartanSpec& spec, const BasePoint& z) {
    require_dim(spec, z, "to_matrix");
    switch (spec.kind) {
        case CartanKind::TypeI: {
            CMatrix m(spec.m, spec.n);
            for (int i = 0; i < spec.m; ++i)
                for (int j = 0; j < spec.n; ++j) m(i, j) = z(i * spec.n + j);
            return m;
        }
        case CartanKind::TypeII: {
            CMatrix m = CMatrix::Zero(spec.n, spec.n);
            int k = 0;
            for (int a = 0; a < spec.n; ++a)
                for (int b = a + 1; b < spec.n; ++b) {
                    m(a, b) = z(k);
                    m(b, a) = -z(k);
                    ++k;
                }
            return m;
        }
        case CartanKind::TypeIII: {
            CMatrix m(spec.n, spec.n);
            int k = 0;
            for (int a = 0; a < spec.n; ++a)
                for (int b = a; b < spec.n; ++b) {
                    m(a, b) = z(k);
                    m(b, a) = z(k);
                    ++k;
                }
            return m;
        }
        case CartanKind::TypeIV:
        case CartanKind::Ball: {
            CMatrix m(1, spec.n);
            for (int j = 0; j < spec.n; ++j) m(0, j) = z(j);
            return m;
        }
    }
    throw DimensionError("to_matrix: unknown kind");
}

BasePoint from_matrix(const CartanSpec& spec, const CMatrix& m) {
    constexpr double kSymTol = 1e-12;
    const int d = spec.ambient_dim();
    BasePoint z(d);
    switch (spec.kind) {
        case CartanKind::TypeI: {
            if (m.rows() != spec.m || m.cols() != spec.n)
                throw DimensionError("from_matrix: TypeI shape mismatch");
            for (int i = 0; i < spec.m; ++i)
                for (int j = 0; j < spec.n; ++j) z(i * spec.n + j) = m(i, j);
            return z;
        }
        case CartanKind::TypeII: {
            if (m.rows() != spec.n || m.cols() != spec.n)
                throw DimensionError("from_matrix: TypeII shape mismatch");
            if ((m + m.transpose()).norm() > kSymTol * std::max(1.0, m.norm()))
                throw DomainError("from_matrix: matrix is not antisymmetric", (m + m.transpose()).norm());
            int k = 0;
            for (int a = 0; a < spec.n; ++a)
                for (int b = a + 1; b < spec.n; ++b) z(k++) = m(a, b);
            return z;
        }
        case CartanKind::TypeIII: {
            if (m.rows() != spec.n || m.cols() != spec.n)
                throw DimensionError("from_matrix: TypeIII shape mismatch");
            if ((m - m.transpose()).norm() > kSymTol * std::max(1.0, m.norm()))
                throw DomainError("from_matrix: matrix is not symmetric", (m - m.transpose()).norm());
            int k = 0;
            for (int a = 0; a < spec.n; ++a)
                for (int b = a; b < spec.n; ++b) z(k++) = m(a, b);
            return z;
        }
        case CartanKind::TypeIV:
        case CartanKind::Ball: {
            if (m.rows() != 1 || m.cols() != spec.n)
                throw DimensionError("from_matrix: row-vector shape mismatch");
            for (int j = 0; j < spec.n; ++j) z(j) = m(0, j);
            return z;
        }
    }
    throw DimensionError("from_matrix: unknown kind");
}

double base_margin(const CartanSpec& spec, const BasePoint& z) {
    require_dim(spec, z, "base_margin");
    switch (spec.kind) {
        case CartanKind::Ball:
            return 1.0 - z.squaredNorm();
        case CartanKind::TypeIV: {
            const double quartic = type_iv_polarized(z, z).real();
            return std::min(quartic, 1.0 - z.squaredNorm());
        }
        default: {
            const CMatrix zm = to_matrix(spec, z);
            const CMatrix g = CMatrix::Identity(zm.rows(), zm.rows()) - zm * zm.adjoint();
            Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
            return es.eigenvalues().minCoeff();
        }
    }
}

Complex generic_norm(const CartanSpec& spec, const BasePoint& z, const BasePoint& xi) {
    require_dim(spec, z, "generic_norm");
    require_dim(spec, xi, "generic_norm");
    require_closed(spec, z, "generic_norm");
    require_closed(spec, xi, "generic_norm");
    return polarized_norm_impl(spec, z, xi);
}

double generic_norm_diag(const CartanSpec& spec, const BasePoint& z) {
    require_dim(spec, z, "generic_norm");
    require_closed(spec, z, "generic_norm");
    return generic_norm_diag_unchecked(spec, z);
}

double generic_norm_diag_unchecked(const CartanSpec& spec, const BasePoint& z) {
    switch (spec.kind) {
        case CartanKind::Ball:
            return 1.0 - z.squaredNorm();
        case CartanKind::TypeIV:
            return type_iv_polarized(z, z).real();
        case CartanKind::TypeI:
        case CartanKind::TypeIII: {
            const CMatrix zm = to_matrix(spec, z);
            return det(CMatrix(CMatrix::Identity(zm.rows(), zm.rows()) - zm * zm.adjoint())).real();
        }
        case CartanKind::TypeII: {
            // det(I - z z^H) is a perfect square (paired singular values), so
            // the tracked branch on the diagonal is the nonnegative root.
            const CMatrix zm = to_matrix(spec, z);
            const double d = det(CMatrix(CMatrix::Identity(zm.rows(), zm.rows()) - zm * zm.adjoint())).real();
            return std::sqrt(std::max(d, 0.0));
        }
    }
    throw DimensionError("generic_norm: unknown kind");
}

CVector norm_gradient(const CartanSpec& spec, const BasePoint& z) {
    require_dim(spec, z, "norm_gradient");
    const int d = spec.ambient_dim();
    CVector g(d);
    switch (spec.kind) {
        case CartanKind::Ball:
            for (int a = 0; a < d; ++a) g(a) = -std::conj(z(a));
            return g;
        case CartanKind::TypeIV: {
            Complex zsq(0.0, 0.0);
            for (int i = 0; i < d; ++i) zsq += z(i) * z(i);
            for (int a = 0; a < d; ++a) g(a) = -2.0 * std::conj(z(a)) + 2.0 * z(a) * std::conj(zsq);
            return g;
        }
        case CartanKind::TypeI:
        case CartanKind::TypeIII: {
            const DetCalculus c = det_calculus(to_matrix(spec, z));
            for (int k = 0; k < d; ++k) {
                Complex s(0.0, 0.0);
                for (const auto& p : placements(spec, k)) s += p.coeff * c.d_entry(p.row, p.col);
                g(k) = s;
            }
            return g;
        }
        case CartanKind::TypeII: {
            const DetCalculus c = det_calculus(to_matrix(spec, z));
            const double nval = std::sqrt(std::max(c.value, 0.0));
            if (nval <= 0.0) {
                throw DomainError("norm_gradient: determinant vanished", c.value);
            }
            for (int k = 0; k < d; ++k) {
                Complex s(0.0, 0.0);
                for (const auto& p : placements(spec, k)) s += p.coeff * c.d_entry(p.row, p.col);
                g(k) = 0.5 * s / nval;
            }
            return g;
        }
    }
    throw DimensionError("norm_gradient: unknown kind");
}

CMatrix norm_mixed_hessian(const CartanSpec& spec, const BasePoint& z) {
    require_dim(spec, z, "norm_mixed_hessian");
    const int d = spec.ambient_dim();
    CMatrix h(d, d);
    switch (spec.kind) {
        case CartanKind::Ball:
            return -CMatrix::Identity(d, d);
        case CartanKind::TypeIV: {
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    h(a, b) = (a == b ? Complex(-2.0, 0.0) : Complex(0.0, 0.0)) +
                              4.0 * z(a) * std::conj(z(b));
            return h;
        }
        case CartanKind::TypeI:
        case CartanKind::TypeIII: {
            const DetCalculus c = det_calculus(to_matrix(spec, z));
            for (int k = 0; k < d; ++k) {
                const auto pk = placements(spec, k);
                for (int l = 0; l < d; ++l) {
                    const auto pl = placements(spec, l);
                    Complex s(0.0, 0.0);
                    for (const auto& a : pk)
                        for (const auto& b : pl)
                            s += a.coeff * b.coeff * c.d2_entry(a.row, a.col, b.row, b.col);
                    h(k, l) = s;
                }
            }
            return h;
        }
        case CartanKind::TypeII: {
            const DetCalculus c = det_calculus(to_matrix(spec, z));
            const double dv = c.value;
            if (dv <= 0.0) {
                throw DomainError("norm_mixed_hessian: determinant vanished", dv);
            }
            const double inv_sqrt = 1.0 / std::sqrt(dv);
            CVector dD(d);
            for (int k = 0; k < d; ++k) {
                Complex s(0.0, 0.0);
                for (const auto& p : placements(spec, k)) s += p.coeff * c.d_entry(p.row, p.col);
                dD(k) = s;
            }
            for (int k = 0; k < d; ++k) {
                const auto pk = placements(spec, k);
                for (int l = 0; l < d; ++l) {
                    const auto pl = placements(spec, l);
                    Complex s(0.0, 0.0);
                    for (const auto& a : pk)
                        for (const auto& b : pl)
                            s += a.coeff * b.coeff * c.d2_entry(a.row, a.col, b.row, b.col);
                    // d^2 sqrt(D) = (D'' - D' Dbar' / (2 D)) / (2 sqrt(D))
                    h(k, l) = 0.5 * inv_sqrt * (s - 0.5 * dD(k) * std::conj(dD(l)) / dv);
                }
            }
            return h;
        }
    }
    throw DimensionError("norm_mixed_hessian: unknown kind");
}

BasePoint project_base_boundary(const CartanSpec& spec, const BasePoint& z, double tol) {
    require_dim(spec, z, "project_base_boundary");
    if (z.norm() == 0.0) {
        throw DomainError("project_base_boundary: zero direction", 0.0);
    }
    auto margin_at = [&](double s) { return base_margin(spec, BasePoint(s * z)); };
    double lo = 0.0, hi = 1.0;
    while (margin_at(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) throw DomainError("project_base_boundary: boundary not found", hi);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = margin_at(mid);
        if (std::abs(m) < tol) return BasePoint(mid * z);
        (m > 0.0 ? lo : hi) = mid;
    }
    return BasePoint(0.5 * (lo + hi) * z);
}

BasePoint sample_base_interior(const CartanSpec& spec, Rng& rng) {
    const int d = spec.ambient_dim();
    CVector v = random_gaussian_vector(d, rng);
    if (v.norm() == 0.0) v(0) = Complex(1.0, 0.0);
    v /= v.norm();
    const BasePoint edge = project_base_boundary(spec, v, 1e-12);
    const double t = 0.05 + 0.9 * rng.uniform();
    return BasePoint(t * edge);
}

} // namespace huadom
