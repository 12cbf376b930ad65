// Shared fixtures and independent oracles for the test suites.
#pragma once

#include <functional>
#include <vector>

#include "huadom/hua.hpp"

namespace huadom::testing {

inline std::vector<CartanSpec> five_base_kinds() {
    return {CartanSpec::type_i(2, 3), CartanSpec::type_ii(3), CartanSpec::type_iii(2),
            CartanSpec::type_iv(3), CartanSpec::ball(3)};
}

// Standard-form Hua fixtures covering all five base kinds.
inline std::vector<HuaSpec> hua_fixtures() {
    return {
        HuaSpec{CartanSpec::ball(2), {{2, 2.0}, {2, 3.0}}},
        HuaSpec{CartanSpec::type_i(2, 2), {{2, 1.0}, {2, 2.0}}},
        HuaSpec{CartanSpec::type_iii(2), {{1, 2.0}, {2, 1.5}}},
        HuaSpec{CartanSpec::type_iv(3), {{2, 2.0}}},
        HuaSpec{CartanSpec::type_ii(4), {{2, 1.0}, {2, 2.0}}},
    };
}

using RealField = std::function<double(const CVector&)>;

// Central-difference Wirtinger gradient df/dz_a = (f_x - i f_y)/2.
inline CVector fd_wirtinger_gradient(const RealField& f, const CVector& z, double h = 1e-5) {
    const auto d = z.size();
    CVector g(d);
    for (Eigen::Index a = 0; a < d; ++a) {
        CVector zp = z, zm = z;
        zp(a) += h;
        zm(a) -= h;
        const double fx = (f(zp) - f(zm)) / (2.0 * h);
        zp = z;
        zm = z;
        zp(a) += Complex(0.0, h);
        zm(a) -= Complex(0.0, h);
        const double fy = (f(zp) - f(zm)) / (2.0 * h);
        g(a) = 0.5 * Complex(fx, -fy);
    }
    return g;
}

// Central-difference mixed Hessian d^2 f / dz_a dzbar_b.
inline CMatrix fd_mixed_hessian(const RealField& f, const CVector& z, double h = 1e-4) {
    const auto d = z.size();
    const auto shift = [&](Eigen::Index a, bool imag, double s) {
        CVector out = z;
        out(a) += imag ? Complex(0.0, s) : Complex(s, 0.0);
        return out;
    };
    // Real Hessian over the 2d real coordinates (x_a, y_a).
    auto second = [&](Eigen::Index a, bool ia, Eigen::Index b, bool ib) {
        if (a == b && ia == ib) {
            return (f(shift(a, ia, h)) - 2.0 * f(z) + f(shift(a, ia, -h))) / (h * h);
        }
        auto shift2 = [&](double sa, double sb) {
            CVector out = z;
            out(a) += ia ? Complex(0.0, sa) : Complex(sa, 0.0);
            out(b) += ib ? Complex(0.0, sb) : Complex(sb, 0.0);
            return f(out);
        };
        return (shift2(h, h) - shift2(h, -h) - shift2(-h, h) + shift2(-h, -h)) / (4.0 * h * h);
    };
    CMatrix out(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            const double xx = second(a, false, b, false);
            const double yy = second(a, true, b, true);
            const double xy = second(a, false, b, true);
            const double yx = second(a, true, b, false);
            out(a, b) = 0.25 * Complex(xx + yy, xy - yx);
        }
    }
    return out;
}

} // namespace huadom::testing
