#include "doctest.h"

#include "helpers.hpp"
#include "huadom/aut.hpp"

using namespace huadom;
using namespace huadom::testing;

namespace {

CVector ball_point(std::initializer_list<double> xs) {
    CVector v(xs.size());
    int i = 0;
    for (double x : xs) v(i++) = Complex(x, 0.0);
    return v;
}

} // namespace

TEST_CASE("ball_mobius: identity at zero, maps a to the origin, involution") {
    CHECK((ball_mobius(CVector::Zero(3)).apply(ball_point({0.1, 0.2, 0.3})) -
           ball_point({0.1, 0.2, 0.3}))
              .norm() < 1e-14);

    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        CVector a = random_gaussian_vector(3, rng);
        a *= 0.9 * rng.uniform() / a.norm();
        const BaseAut t = ball_mobius(a);
        CHECK(t.apply(a).norm() < 1e-12);

        // membership preservation
        for (int k = 0; k < 5; ++k) {
            CVector x = random_gaussian_vector(3, rng);
            x *= 0.999 * rng.uniform() / x.norm();
            CHECK(t.apply(x).norm() < 1.0);
        }

        // involution T_a . T_a = id
        CVector x = random_gaussian_vector(3, rng);
        x *= 0.9 * rng.uniform() / x.norm();
        CHECK((t.apply(t.apply(x)) - x).norm() < 1e-10);
    }

    CHECK_THROWS_AS(ball_mobius(ball_point({1.0, 0.0})), DomainError);
}

TEST_CASE("type_i_mobius: maps a to zero and preserves membership") {
    for (const auto& spec : {CartanSpec::type_i(2, 2), CartanSpec::type_i(2, 3),
                             CartanSpec::type_ii(3), CartanSpec::type_ii(4),
                             CartanSpec::type_iii(2), CartanSpec::ball(3)}) {
        Rng rng(5);
        // a = 0 gives the identity
        const BaseAut id = type_i_mobius(spec, CVector::Zero(spec.ambient_dim()));
        const BasePoint probe = sample_base_interior(spec, rng);
        CHECK((id.apply(probe) - probe).norm() < 1e-12);

        for (int i = 0; i < 50; ++i) {
            const BasePoint a = sample_base_interior(spec, rng);
            const BaseAut phi = type_i_mobius(spec, a);
            CHECK(phi.apply(a).norm() < 1e-10);
            const BasePoint z = sample_base_interior(spec, rng);
            const BasePoint img = phi.apply(z);
            CHECK(base_margin(spec, img) > 0.0);
            CHECK(generic_norm_diag(spec, img) > 0.0);
        }
    }
    const CartanSpec iv = CartanSpec::type_iv(3);
    CHECK_THROWS_AS(type_i_mobius(iv, CVector::Zero(3)), DomainError);
}

TEST_CASE("type_i_mobius preserves the symmetry classes") {
    // TypeIII: symmetric matrices stay symmetric (checked inside apply);
    // TypeII: antisymmetric stay antisymmetric. A throw would fail the test.
    for (const auto& spec : {CartanSpec::type_ii(4), CartanSpec::type_iii(3)}) {
        Rng rng(7);
        for (int i = 0; i < 100; ++i) {
            const BasePoint a = sample_base_interior(spec, rng);
            const BasePoint z = sample_base_interior(spec, rng);
            CHECK_NOTHROW(type_i_mobius(spec, a).apply(z));
        }
    }
}

TEST_CASE("base_aut_for: identity case and transitivity") {
    for (const auto& spec : {CartanSpec::ball(3), CartanSpec::type_i(2, 3),
                             CartanSpec::type_ii(3), CartanSpec::type_iii(2)}) {
        Rng rng(11);
        const BasePoint a = sample_base_interior(spec, rng);
        const BaseAut same = base_aut_for(spec, a, a);
        for (int i = 0; i < 10; ++i) {
            const BasePoint x = sample_base_interior(spec, rng);
            CHECK((same.apply(x) - x).norm() < 1e-9);
        }
        for (int i = 0; i < 50; ++i) {
            const BasePoint from = sample_base_interior(spec, rng);
            const BasePoint to = sample_base_interior(spec, rng);
            const BaseAut phi = base_aut_for(spec, from, to);
            CHECK((phi.apply(from) - to).norm() < 1e-8);
        }
    }
    CHECK_THROWS_AS(base_aut_for(CartanSpec::type_iv(3), CVector::Zero(3), CVector::Zero(3)),
                    DomainError);
}

TEST_CASE("base_aut_for(TypeI(2,2), a, 0) equals type_i_mobius(a)") {
    const CartanSpec spec = CartanSpec::type_i(2, 2);
    Rng rng(13);
    const BasePoint a = sample_base_interior(spec, rng);
    const BaseAut lhs = base_aut_for(spec, a, CVector::Zero(4));
    const BaseAut rhs = type_i_mobius(spec, a);
    for (int i = 0; i < 20; ++i) {
        const BasePoint z = sample_base_interior(spec, rng);
        CHECK((lhs.apply(z) - rhs.apply(z)).norm() < 1e-10);
    }
}

TEST_CASE("TypeIV linear isotropy preserves the domain") {
    const CartanSpec iv = CartanSpec::type_iv(3);
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        const BaseAut g = BaseAut::random(iv, Rng::derive(17, i));
        for (int k = 0; k < 20; ++k) {
            const BasePoint z = sample_base_interior(iv, rng);
            CHECK(base_margin(iv, g.apply(z)) > 0.0);
            CHECK(std::abs(generic_norm_diag(iv, g.apply(z)) - generic_norm_diag(iv, z)) < 1e-10);
        }
    }
}

TEST_CASE("gamma_apply: identity, unitary case, margin preservation") {
    for (const auto& spec : hua_fixtures()) {
        const GammaAut id = gamma_identity(spec);
        Rng rng(19);
        for (int i = 0; i < 20; ++i) {
            const HuaPoint p = sample_hua_interior(spec, rng);
            CHECK((flatten(gamma_apply(id, p)) - flatten(p)).norm() < 1e-12);
        }

        // phi = id with random unitaries twists fibers, margin unchanged
        std::vector<CMatrix> us;
        for (int j = 0; j < spec.r(); ++j)
            us.push_back(random_unitary(spec.fibers[j].dim, Rng::derive(19, j)));
        const GammaAut twist = make_gamma(spec, BaseAut::identity(spec.base), us);
        for (int i = 0; i < 20; ++i) {
            const HuaPoint p = sample_hua_interior(spec, rng);
            const HuaPoint q = gamma_apply(twist, p);
            CHECK((q.z - p.z).norm() < 1e-14);
            CHECK(hua_margin(spec, q) == doctest::Approx(hua_margin(spec, p)).epsilon(1e-12));
        }

        // random Gamma elements preserve the interior
        for (int g = 0; g < 5; ++g) {
            const GammaAut gamma = random_gamma(spec, Rng::derive(23, g));
            for (int i = 0; i < 100; ++i) {
                const HuaPoint p = sample_hua_interior(spec, rng);
                CHECK(hua_margin(spec, gamma_apply(gamma, p)) > 0.0);
            }
        }
    }
}

TEST_CASE("gamma_apply: base slice and boundary strata are preserved") {
    for (const auto& spec : hua_fixtures()) {
        Rng rng(29);
        for (int g = 0; g < 5; ++g) {
            const GammaAut gamma = random_gamma(spec, Rng::derive(31, g));

            // w = 0 maps to w = 0 exactly
            HuaPoint slice;
            slice.z = sample_base_interior(spec.base, rng);
            for (const auto& b : spec.fibers) slice.w.push_back(CVector::Zero(b.dim));
            const HuaPoint mapped = gamma_apply(gamma, slice);
            for (const auto& w : mapped.w) CHECK(w.norm() == 0.0);

            for (int i = 0; i < 40; ++i) {
                int vanish = 0;
                if (spec.r() >= 2 && spec.r() - spec.delta() >= 1 && i % 2 == 1)
                    vanish = 1 + spec.delta() +
                             static_cast<int>(rng.next_u64() % (spec.r() - spec.delta()));
                const HuaPoint b = sample_hua_boundary(spec, rng, vanish);
                const auto before = classify_boundary(spec, b);
                const auto after = classify_boundary(spec, gamma_apply(gamma, b), 1e-7);
                CHECK(before.tag == after.tag);
            }
        }
    }
}

TEST_CASE("gamma_invert and gamma_compose act as claimed") {
    for (const auto& spec : hua_fixtures()) {
        Rng rng(37);
        const GammaAut g = random_gamma(spec, 101);
        const GammaAut gi = gamma_invert(g);
        const GammaAut id_witness = gamma_compose(g, gi);
        for (int i = 0; i < 200; ++i) {
            const HuaPoint p = sample_hua_interior(spec, rng);
            CHECK((flatten(gamma_apply(gi, gamma_apply(g, p))) - flatten(p)).norm() < 1e-8);
            CHECK((flatten(gamma_apply(id_witness, p)) - flatten(p)).norm() < 1e-8);
        }

        const GammaAut h = random_gamma(spec, 202);
        const GammaAut gh = gamma_compose(g, h);
        for (int i = 0; i < 200; ++i) {
            const HuaPoint p = sample_hua_interior(spec, rng);
            const CVector direct = flatten(gamma_apply(g, gamma_apply(h, p)));
            const CVector witness = flatten(gamma_apply(gh, p));
            CHECK((direct - witness).norm() < 1e-8);
        }

        // invert(identity) = identity
        const GammaAut id = gamma_identity(spec);
        const GammaAut idi = gamma_invert(id);
        const HuaPoint p = sample_hua_interior(spec, rng);
        CHECK((flatten(gamma_apply(idi, p)) - flatten(p)).norm() < 1e-12);
    }
}

TEST_CASE("ellipsoid_mobius: psi value, membership, identity at zero") {
    EllipsoidSpec spec{{{2, 1.0}, {2, 2.0}, {1, 3.0}}};

    // psi_a(0) = 1 - |a|^2 = 0.75 at a = (0.5, 0)
    const CVector a = ball_point({0.5, 0.0});
    const EllipsoidAut phi = ellipsoid_mobius(spec, a);
    EllipsoidPoint zero{CVector::Zero(2), CVector::Zero(2), CVector::Zero(1)};
    CHECK((ellipsoid_apply(phi, zero)[0] - a).norm() < 1e-12); // T_a(0) = a

    EllipsoidPoint probe{CVector::Zero(2), ball_point({0.5, 0.0}), ball_point({0.5})};
    const EllipsoidPoint img = ellipsoid_apply(phi, probe);
    // block 2 scaled by psi^(1/(2 p_2)) = 0.75^(1/4)
    CHECK(img[1].norm() == doctest::Approx(0.5 * std::pow(0.75, 0.25)));

    const EllipsoidAut at0 = ellipsoid_mobius(spec, CVector::Zero(2));
    const EllipsoidPoint same = ellipsoid_apply(at0, probe);
    CHECK((flatten_ellipsoid(same) - flatten_ellipsoid(probe)).norm() < 1e-12);

    Rng rng(41);
    for (int i = 0; i < 1000; ++i) {
        const EllipsoidPoint x = sample_ellipsoid_interior(spec, rng);
        CHECK(ellipsoid_margin(spec, ellipsoid_apply(phi, x)) > 0.0);
    }

    EllipsoidSpec no_unit{{{2, 2.0}}};
    CHECK_THROWS_AS(ellipsoid_mobius(no_unit, CVector::Zero(2)), InvalidSpecError);
}

TEST_CASE("ellipsoid_linear: validity and margin invariance") {
    EllipsoidSpec spec{{{2, 3.0}, {2, 3.0}}};
    std::vector<CMatrix> ident{CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};

    const EllipsoidAut id = ellipsoid_linear({0, 1}, ident, spec);
    const EllipsoidAut swap = ellipsoid_linear({1, 0}, ident, spec);
    Rng rng(43);
    for (int i = 0; i < 100; ++i) {
        const EllipsoidPoint x = sample_ellipsoid_interior(spec, rng);
        CHECK(ellipsoid_margin(spec, ellipsoid_apply(id, x)) ==
              doctest::Approx(ellipsoid_margin(spec, x)));
        CHECK(ellipsoid_margin(spec, ellipsoid_apply(swap, x)) ==
              doctest::Approx(ellipsoid_margin(spec, x)));
    }

    // n mismatch under sigma is rejected
    EllipsoidSpec uneven{{{2, 2.0}, {3, 3.0}}};
    std::vector<CMatrix> us{CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)};
    CHECK_THROWS_AS(ellipsoid_linear({1, 0}, us, uneven), InvalidSpecError);
}

TEST_CASE("random ellipsoid automorphisms preserve membership") {
    EllipsoidSpec spec{{{2, 1.0}, {2, 2.0}, {2, 2.0}}};
    Rng rng(47);
    for (int g = 0; g < 10; ++g) {
        const EllipsoidAut aut = random_ellipsoid_aut(spec, Rng::derive(53, g));
        for (int i = 0; i < 100; ++i) {
            const EllipsoidPoint x = sample_ellipsoid_interior(spec, rng);
            CHECK(ellipsoid_margin(spec, ellipsoid_apply(aut, x)) > 0.0);
        }
    }
}
