#include "huadom/aut.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace huadom {

namespace {

constexpr double kUnitaryTol = 1e-10;

// Matrix form used by the fractional-linear action. The ball uses the column
// orientation so Moebius denominators are scalars.
CMatrix matrix_form(const CartanSpec& spec, const BasePoint& z) {
    if (spec.kind == CartanKind::Ball) return z;
    return to_matrix(spec, z);
}

BasePoint from_matrix_form(const CartanSpec& spec, const CMatrix& m) {
    switch (spec.kind) {
        case CartanKind::Ball:
            return CVector(m.col(0));
        case CartanKind::TypeII: {
            // Assert and then project the symmetry class; the fractional-linear
            // action preserves it exactly in exact arithmetic.
            const double dev = (m + m.transpose()).norm();
            if (dev > 1e-9 * std::max(1.0, m.norm()))
                throw DomainError("base automorphism left the antisymmetric class", dev);
            return from_matrix(spec, CMatrix(0.5 * (m - m.transpose())));
        }
        case CartanKind::TypeIII: {
            const double dev = (m - m.transpose()).norm();
            if (dev > 1e-9 * std::max(1.0, m.norm()))
                throw DomainError("base automorphism left the symmetric class", dev);
            return from_matrix(spec, CMatrix(0.5 * (m + m.transpose())));
        }
        default:
            return from_matrix(spec, m);
    }
}

std::pair<int, int> form_shape(const CartanSpec& spec) {
    switch (spec.kind) {
        case CartanKind::Ball: return {spec.ambient_dim(), 1};
        case CartanKind::TypeI: return {spec.m, spec.n};
        case CartanKind::TypeII:
        case CartanKind::TypeIII: return {spec.n, spec.n};
        case CartanKind::TypeIV: return {1, spec.n};
    }
    return {0, 0};
}

CMatrix inv_sqrt_pd(const CMatrix& m) {
    return hermitian_sqrt(m).inverse();
}

Complex principal_power(Complex x, double alpha, const char* what) {
    const double mag = std::abs(x);
    if (mag == 0.0 || (x.real() <= 0.0 && std::abs(x.imag()) <= 1e-14 * mag))
        throw BranchError(std::string(what) + ": value on the principal-branch cut");
    return std::exp(alpha * std::log(x));
}

// Scalar of Eq. (3): N(z0,z0)^(1/(2p)) / N(z,z0)^(1/p).
Complex gamma_factor(const CartanSpec& base, const BasePoint& z0, double p, const BasePoint& z) {
    const double n0 = generic_norm_diag(base, z0);
    const Complex nz = generic_norm(base, z, z0);
    return std::pow(n0, 0.5 / p) / principal_power(nz, 1.0 / p, "gamma_apply");
}

Eigen::MatrixXd random_real_orthogonal(int n, Rng& rng) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = rng.next_u64() % i;
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace

BaseAut BaseAut::identity(const CartanSpec& spec) {
    BaseAut g(spec);
    if (spec.kind == CartanKind::TypeIV) {
        g.iv_phase_ = 0.0;
        g.iv_ortho_ = Eigen::MatrixXd::Identity(spec.n, spec.n);
        return g;
    }
    const auto [rows, cols] = form_shape(spec);
    g.a_ = CMatrix::Identity(rows, rows);
    g.b_ = CMatrix::Zero(rows, cols);
    g.c_ = CMatrix::Zero(cols, rows);
    g.d_ = CMatrix::Identity(cols, cols);
    return g;
}

BaseAut BaseAut::from_fractional_linear(const CartanSpec& spec, const CMatrix& a, const CMatrix& b,
                                        const CMatrix& c, const CMatrix& d) {
    if (spec.kind == CartanKind::TypeIV)
        throw InvalidSpecError("TypeIV has no fractional-linear representation here");
    const auto [rows, cols] = form_shape(spec);
    if (a.rows() != rows || a.cols() != rows || b.rows() != rows || b.cols() != cols ||
        c.rows() != cols || c.cols() != rows || d.rows() != cols || d.cols() != cols)
        throw DimensionError("fractional-linear blocks have inconsistent shapes");
    BaseAut g(spec);
    g.a_ = a;
    g.b_ = b;
    g.c_ = c;
    g.d_ = d;
    return g;
}

BaseAut BaseAut::from_iv_linear(const CartanSpec& spec, double phase,
                                const Eigen::MatrixXd& ortho) {
    if (spec.kind != CartanKind::TypeIV)
        throw InvalidSpecError("iv_linear requires a TypeIV spec");
    if (ortho.rows() != spec.n || ortho.cols() != spec.n)
        throw DimensionError("orthogonal factor has the wrong size");
    if ((ortho * ortho.transpose() - Eigen::MatrixXd::Identity(spec.n, spec.n)).norm() > 1e-9)
        throw DomainError("factor is not orthogonal",
                          (ortho * ortho.transpose() - Eigen::MatrixXd::Identity(spec.n, spec.n)).norm());
    BaseAut g(spec);
    g.iv_phase_ = phase;
    g.iv_ortho_ = ortho;
    return g;
}

BaseAut BaseAut::linear(const CartanSpec& spec, const CMatrix& u, const CMatrix& v, double phase) {
    switch (spec.kind) {
        case CartanKind::TypeIV: {
            Eigen::MatrixXd o = u.real();
            if (u.imag().norm() > 0.0)
                throw InvalidSpecError("TypeIV linear factor must be real orthogonal");
            return from_iv_linear(spec, phase, o);
        }
        case CartanKind::Ball: {
            if (!unitary_check(u, kUnitaryTol))
                throw DomainError("ball linear factor is not unitary", 0.0);
            BaseAut g = identity(spec);
            g.a_ = u;
            return g;
        }
        case CartanKind::TypeI: {
            if (!unitary_check(u, kUnitaryTol) || !unitary_check(v, kUnitaryTol))
                throw DomainError("TypeI linear factors must be unitary", 0.0);
            BaseAut g = identity(spec);
            g.a_ = u;
            g.d_ = v.adjoint(); // (U z)(V^H)^{-1} = U z V
            return g;
        }
        case CartanKind::TypeII:
        case CartanKind::TypeIII: {
            if (!unitary_check(u, kUnitaryTol))
                throw DomainError("linear factor is not unitary", 0.0);
            BaseAut g = identity(spec);
            g.a_ = u;
            g.d_ = u.conjugate(); // (U z)(conj U)^{-1} = U z U^t
            return g;
        }
    }
    throw InvalidSpecError("linear: unknown kind");
}

bool BaseAut::is_linear() const {
    if (spec_.kind == CartanKind::TypeIV) return true;
    return b_.norm() == 0.0 && c_.norm() == 0.0;
}

BasePoint BaseAut::apply(const BasePoint& z) const {
    if (z.size() != spec_.ambient_dim())
        throw DimensionError("BaseAut::apply: coordinate count mismatch");
    if (spec_.kind == CartanKind::TypeIV) {
        const Complex phase = std::polar(1.0, iv_phase_);
        return phase * (iv_ortho_.transpose() * z);
    }
    const CMatrix zm = matrix_form(spec_, z);
    const CMatrix num = a_ * zm + b_;
    const CMatrix den = c_ * zm + d_;
    Eigen::FullPivLU<CMatrix> lu(den);
    if (!lu.isInvertible())
        throw DomainError("BaseAut::apply: singular denominator", std::abs(lu.determinant()));
    const CMatrix res = num * lu.inverse();
    return from_matrix_form(spec_, res);
}

BaseAut BaseAut::inverse() const {
    if (spec_.kind == CartanKind::TypeIV)
        return from_iv_linear(spec_, -iv_phase_, iv_ortho_.transpose());
    const auto rows = a_.rows();
    const auto cols = d_.rows();
    CMatrix g(rows + cols, rows + cols);
    g.topLeftCorner(rows, rows) = a_;
    g.topRightCorner(rows, cols) = b_;
    g.bottomLeftCorner(cols, rows) = c_;
    g.bottomRightCorner(cols, cols) = d_;
    Eigen::FullPivLU<CMatrix> lu(g);
    if (!lu.isInvertible())
        throw DomainError("BaseAut::inverse: singular representation", std::abs(lu.determinant()));
    const CMatrix gi = lu.inverse();
    BaseAut out(spec_);
    out.a_ = gi.topLeftCorner(rows, rows);
    out.b_ = gi.topRightCorner(rows, cols);
    out.c_ = gi.bottomLeftCorner(cols, rows);
    out.d_ = gi.bottomRightCorner(cols, cols);
    return out;
}

BaseAut BaseAut::compose(const BaseAut& other) const {
    if (!(spec_ == other.spec_))
        throw DimensionError("BaseAut::compose: spec mismatch");
    if (spec_.kind == CartanKind::TypeIV)
        return from_iv_linear(spec_, iv_phase_ + other.iv_phase_, other.iv_ortho_ * iv_ortho_);
    BaseAut out(spec_);
    out.a_ = a_ * other.a_ + b_ * other.c_;
    out.b_ = a_ * other.b_ + b_ * other.d_;
    out.c_ = c_ * other.a_ + d_ * other.c_;
    out.d_ = c_ * other.b_ + d_ * other.d_;
    return out;
}

BasePoint BaseAut::origin_preimage() const {
    return inverse().apply(CVector::Zero(spec_.ambient_dim()));
}

BaseAut ball_mobius(const CVector& a) {
    const int d = static_cast<int>(a.size());
    const CartanSpec spec = CartanSpec::ball(d);
    const double norm2 = a.squaredNorm();
    if (norm2 >= 1.0)
        throw DomainError("ball_mobius: point must lie in the open ball", norm2);
    if (a.norm() < 1e-15) return BaseAut::identity(spec);
    const double s = std::sqrt(1.0 - norm2);
    const CMatrix proj = (a * a.adjoint()) / norm2;
    const CMatrix eye = CMatrix::Identity(d, d);
    const CMatrix amat = -(proj + s * (eye - proj));
    return BaseAut::from_fractional_linear(spec, amat, a, -a.adjoint(), CMatrix::Constant(1, 1, 1.0));
}

BaseAut type_i_mobius(const CartanSpec& spec, const BasePoint& a) {
    if (spec.kind == CartanKind::TypeIV)
        throw DomainError("type_i_mobius: TypeIV Moebius maps are out of scope", 0.0);
    if (base_margin(spec, a) <= 0.0)
        throw DomainError("type_i_mobius: base point must be interior", base_margin(spec, a));
    const CMatrix am = matrix_form(spec, a);
    const auto rows = am.rows();
    const auto cols = am.cols();
    const CMatrix left = inv_sqrt_pd(CMatrix(CMatrix::Identity(rows, rows) - am * am.adjoint()));
    const CMatrix right = inv_sqrt_pd(CMatrix(CMatrix::Identity(cols, cols) - am.adjoint() * am));
    return BaseAut::from_fractional_linear(spec, left, CMatrix(-left * am),
                                           CMatrix(-right * am.adjoint()), right);
}

BaseAut base_aut_for(const CartanSpec& spec, const BasePoint& from, const BasePoint& to) {
    if (spec.kind == CartanKind::TypeIV)
        throw DomainError("base_aut_for: TypeIV transitivity is out of scope", 0.0);
    return type_i_mobius(spec, to).inverse().compose(type_i_mobius(spec, from));
}

BaseAut BaseAut::random_linear(const CartanSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    switch (spec.kind) {
        case CartanKind::Ball:
            return linear(spec, random_unitary(spec.ambient_dim(), Rng::derive(seed, 1)));
        case CartanKind::TypeI:
            return linear(spec, random_unitary(spec.m, Rng::derive(seed, 1)),
                          random_unitary(spec.n, Rng::derive(seed, 2)));
        case CartanKind::TypeII:
        case CartanKind::TypeIII:
            return linear(spec, random_unitary(spec.n, Rng::derive(seed, 1)));
        case CartanKind::TypeIV: {
            const double theta = 2.0 * std::numbers::pi * rng.uniform();
            return from_iv_linear(spec, theta, random_real_orthogonal(spec.n, rng));
        }
    }
    throw InvalidSpecError("random_linear: unknown kind");
}

BaseAut BaseAut::random(const CartanSpec& spec, std::uint64_t seed) {
    if (spec.kind == CartanKind::TypeIV) return random_linear(spec, seed);
    Rng rng(Rng::derive(seed, 17));
    const BasePoint a = sample_base_interior(spec, rng);
    return random_linear(spec, Rng::derive(seed, 18)).compose(type_i_mobius(spec, a));
}

GammaAut gamma_identity(const HuaSpec& spec) {
    std::vector<CMatrix> us;
    for (const auto& b : spec.fibers) us.push_back(CMatrix::Identity(b.dim, b.dim));
    return make_gamma(spec, BaseAut::identity(spec.base), std::move(us));
}

GammaAut make_gamma(const HuaSpec& spec, const BaseAut& phi, std::vector<CMatrix> unitaries) {
    if (!(phi.spec() == spec.base))
        throw DimensionError("make_gamma: base spec mismatch");
    if (static_cast<int>(unitaries.size()) != spec.r())
        throw DimensionError("make_gamma: unitary count mismatch");
    for (int j = 0; j < spec.r(); ++j) {
        if (unitaries[j].rows() != spec.fibers[j].dim || unitaries[j].cols() != spec.fibers[j].dim)
            throw DimensionError("make_gamma: unitary size mismatch");
        if (!unitary_check(unitaries[j], kUnitaryTol))
            throw DomainError("make_gamma: fiber factor is not unitary", 0.0);
    }
    return {spec, phi, phi.origin_preimage(), std::move(unitaries)};
}

GammaAut random_gamma(const HuaSpec& spec, std::uint64_t seed) {
    std::vector<CMatrix> us;
    for (int j = 0; j < spec.r(); ++j)
        us.push_back(random_unitary(spec.fibers[j].dim, Rng::derive(seed, 100 + j)));
    return make_gamma(spec, BaseAut::random(spec.base, seed), std::move(us));
}

HuaPoint gamma_apply(const GammaAut& g, const HuaPoint& p) {
    require_point_shape(g.spec, p, "gamma_apply");
    const double margin = hua_margin(g.spec, p);
    if (margin < -kClosedDomainSlack)
        throw DomainError("gamma_apply: point outside the closed domain", margin);

    HuaPoint out;
    out.z = g.phi.apply(p.z);
    for (int j = 0; j < g.spec.r(); ++j) {
        const Complex factor = gamma_factor(g.spec.base, g.z0, g.spec.fibers[j].exp, p.z);
        out.w.push_back(factor * (g.unitaries[j] * p.w[j]));
    }
    if (margin > 1e-12 && hua_margin(g.spec, out) <= 0.0)
        throw DomainError("gamma_apply: interior point mapped outside", hua_margin(g.spec, out));
    return out;
}

GammaAut gamma_invert(const GammaAut& g) {
    std::vector<CMatrix> us;
    for (const auto& u : g.unitaries) us.push_back(u.adjoint());
    return make_gamma(g.spec, g.phi.inverse(), std::move(us));
}

GammaAut gamma_compose(const GammaAut& g1, const GammaAut& g2) {
    if (!(g1.spec == g2.spec))
        throw DimensionError("gamma_compose: spec mismatch");
    const BaseAut phi = g1.phi.compose(g2.phi);
    const BasePoint z0 = phi.origin_preimage();
    const BasePoint origin = CVector::Zero(g1.spec.base.ambient_dim());
    const BasePoint phi2_origin = g2.phi.apply(origin);

    std::vector<CMatrix> us;
    for (int j = 0; j < g1.spec.r(); ++j) {
        const double p = g1.spec.fibers[j].exp;
        const Complex c1 = gamma_factor(g1.spec.base, g1.z0, p, phi2_origin);
        const Complex c2 = gamma_factor(g2.spec.base, g2.z0, p, origin);
        const Complex c12 = gamma_factor(g1.spec.base, z0, p, origin);
        const Complex mu = c1 * c2 / c12;
        if (std::abs(std::abs(mu) - 1.0) > 1e-8)
            throw BranchError("gamma_compose: closure factor is not unimodular");
        us.push_back(mu * (g1.unitaries[j] * g2.unitaries[j]));
    }
    GammaAut out{g1.spec, phi, z0, std::move(us)};
    return out;
}

EllipsoidAut ellipsoid_linear(const std::vector<int>& sigma, const std::vector<CMatrix>& gammas,
                              const EllipsoidSpec& spec) {
    spec.validate();
    const int r = spec.r();
    if (static_cast<int>(sigma.size()) != r || static_cast<int>(gammas.size()) != r)
        throw DimensionError("ellipsoid_linear: permutation/unitary count mismatch");
    std::vector<bool> seen(r, false);
    for (int i = 0; i < r; ++i) {
        const int s = sigma[i];
        if (s < 0 || s >= r || seen[s])
            throw InvalidSpecError("ellipsoid_linear: sigma is not a permutation");
        seen[s] = true;
        if (spec.blocks[s].dim != spec.blocks[i].dim)
            throw InvalidSpecError("ellipsoid_linear: sigma violates the dimension matching");
        if (spec.blocks[s].exp != spec.blocks[i].exp)
            throw InvalidSpecError("ellipsoid_linear: sigma violates the exponent matching");
        if (gammas[i].rows() != spec.blocks[i].dim || !unitary_check(gammas[i], kUnitaryTol))
            throw InvalidSpecError("ellipsoid_linear: block factor is not unitary of the right size");
    }
    EllipsoidAut aut;
    aut.spec = spec;
    aut.mobius = false;
    aut.sigma = sigma;
    aut.gammas = gammas;
    return aut;
}

EllipsoidAut ellipsoid_mobius(const EllipsoidSpec& spec, const CVector& a) {
    spec.validate();
    if (spec.delta() != 1)
        throw InvalidSpecError("ellipsoid_mobius: requires p_1 = 1");
    if (a.size() != spec.blocks.front().dim)
        throw DimensionError("ellipsoid_mobius: center dimension mismatch");
    if (a.squaredNorm() >= 1.0)
        throw DomainError("ellipsoid_mobius: center must lie in the open ball", a.squaredNorm());
    EllipsoidAut aut;
    aut.spec = spec;
    aut.mobius = true;
    aut.a = a;
    return aut;
}

EllipsoidAut random_ellipsoid_aut(const EllipsoidSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const int r = spec.r();
    if (spec.delta() == 1 && rng.uniform() < 0.5) {
        const int n1 = spec.blocks.front().dim;
        CVector a = random_gaussian_vector(n1, rng);
        a *= (0.85 * rng.uniform()) / std::max(a.norm(), 1e-12);
        EllipsoidAut aut = ellipsoid_mobius(spec, a);
        for (int j = 0; j < r; ++j)
            aut.gammas.push_back(random_unitary(spec.blocks[j].dim, Rng::derive(seed, 200 + j)));
        return aut;
    }
    // Random sigma permuting only blocks with equal (n, p).
    std::vector<int> sigma(r);
    std::iota(sigma.begin(), sigma.end(), 0);
    for (int i = 0; i < r; ++i) {
        std::vector<int> group;
        for (int j = 0; j < r; ++j)
            if (spec.blocks[j] == spec.blocks[i]) group.push_back(j);
        if (group.size() > 1 && group.front() == i) {
            std::vector<int> shuffled = group;
            seeded_shuffle(shuffled, rng);
            for (std::size_t k = 0; k < group.size(); ++k) sigma[group[k]] = shuffled[k];
        }
    }
    std::vector<CMatrix> gammas;
    for (int j = 0; j < r; ++j)
        gammas.push_back(random_unitary(spec.blocks[j].dim, Rng::derive(seed, 300 + j)));
    return ellipsoid_linear(sigma, gammas, spec);
}

EllipsoidPoint ellipsoid_apply(const EllipsoidAut& aut, const EllipsoidPoint& p) {
    const int r = aut.spec.r();
    if (static_cast<int>(p.size()) != r)
        throw DimensionError("ellipsoid_apply: block count mismatch");
    EllipsoidPoint out(r);
    if (!aut.mobius) {
        for (int i = 0; i < r; ++i) out[i] = aut.gammas[i] * p[aut.sigma[i]];
        return out;
    }
    const BaseAut t_a = ball_mobius(aut.a);
    out[0] = t_a.apply(p[0]);
    const Complex denom = Complex(1.0, 0.0) - aut.a.dot(p[0]); // 1 - <zeta_1, a>
    if (denom.real() <= 0.0)
        throw BranchError("ellipsoid_mobius: psi_a left the principal branch");
    const Complex psi = (1.0 - aut.a.squaredNorm()) / (denom * denom);
    for (int k = 1; k < r; ++k) {
        const double pk = aut.spec.blocks[k].exp;
        out[k] = principal_power(psi, 0.5 / pk, "ellipsoid_mobius") * p[k];
    }
    if (!aut.gammas.empty()) {
        for (int k = 0; k < r; ++k) out[k] = aut.gammas[k] * out[k];
    }
    return out;
}

} // namespace huadom
