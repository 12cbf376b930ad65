#include "doctest.h"

#include "helpers.hpp"
#include "huadom/hua.hpp"

using namespace huadom;
using namespace huadom::testing;

namespace {

HuaPoint origin_point(const HuaSpec& spec) {
    HuaPoint p;
    p.z = CVector::Zero(spec.base.ambient_dim());
    for (const auto& b : spec.fibers) p.w.push_back(CVector::Zero(b.dim));
    return p;
}

} // namespace

TEST_CASE("spec validation rejects two unit exponents") {
    HuaSpec bad{CartanSpec::ball(2), {{1, 1.0}, {1, 1.0}}};
    CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
    HuaSpec ok{CartanSpec::ball(2), {{1, 1.0}, {1, 2.0}}};
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("standardize merges a unit-exponent block into a ball base") {
    // H_{B^2}((2,2);(1,2)) = H_{B^4}((2);(2))
    HuaSpec spec{CartanSpec::ball(2), {{2, 1.0}, {2, 2.0}}};
    auto [std_spec, rel] = standardize(spec);
    CHECK(std_spec.base == CartanSpec::ball(4));
    REQUIRE(std_spec.r() == 1);
    CHECK(std_spec.fibers[0].dim == 2);
    CHECK(std_spec.fibers[0].exp == 2.0);
    CHECK(rel.merged_block == 0);
    CHECK(std_spec.is_standard());
}

TEST_CASE("standardize moves the unit exponent to slot 1 over a rank >= 2 base") {
    HuaSpec spec{CartanSpec::type_i(2, 2), {{3, 2.0}, {2, 1.0}}};
    auto [std_spec, rel] = standardize(spec);
    CHECK(std_spec.base == spec.base);
    REQUIRE(std_spec.r() == 2);
    CHECK(std_spec.fibers[0].dim == 2);
    CHECK(std_spec.fibers[0].exp == 1.0);
    CHECK(std_spec.fibers[1].dim == 3);
    CHECK(std_spec.delta() == 1);
    CHECK(rel.block_perm == std::vector<int>{1, 0});
}

TEST_CASE("standardize leaves a standard spec unchanged") {
    HuaSpec spec{CartanSpec::type_iv(3), {{2, 2.0}}};
    auto [std_spec, rel] = standardize(spec);
    CHECK(std_spec == spec);
    CHECK(rel.merged_block == -1);
    CHECK(rel.block_perm == std::vector<int>{0});
}

TEST_CASE("standardize rewrites rank-1 bases as balls") {
    // TypeII(3) is the unit ball in C^3 in the stored coordinates
    HuaSpec spec{CartanSpec::type_ii(3), {{2, 2.0}}};
    auto [std_spec, rel] = standardize(spec);
    CHECK(std_spec.base == CartanSpec::ball(3));

    HuaSpec row{CartanSpec::type_i(1, 4), {{1, 3.0}}};
    CHECK(standardize(row).first.base == CartanSpec::ball(4));
}

TEST_CASE("standardization preserves membership under the relabeling") {
    const std::vector<HuaSpec> specs = {
        HuaSpec{CartanSpec::ball(2), {{2, 1.0}, {2, 2.0}}},
        HuaSpec{CartanSpec::type_i(2, 2), {{3, 2.0}, {2, 1.0}}},
        HuaSpec{CartanSpec::type_ii(3), {{2, 2.0}, {1, 1.0}}},
    };
    for (const auto& spec : specs) {
        auto [std_spec, rel] = standardize(spec);
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            const HuaPoint p = sample_hua_interior(spec, rng);
            const HuaPoint q = relabel(rel, p);
            CHECK(hua_margin(spec, p) == doctest::Approx(hua_margin(std_spec, q)).epsilon(1e-12));
            // transport is invertible
            const HuaPoint back = relabel_back(rel, q);
            CHECK((flatten(back) - flatten(p)).norm() == 0.0);
        }
    }
}

TEST_CASE("hua_margin: frozen examples") {
    for (const auto& spec : hua_fixtures()) {
        CHECK(hua_margin(spec, origin_point(spec)) == doctest::Approx(1.0));
    }

    HuaSpec b1{CartanSpec::ball(1), {{2, 2.0}}};
    HuaPoint p = origin_point(b1);
    p.w[0] << Complex(0.5, 0.0), Complex(0.5, 0.0);
    CHECK(hua_margin(b1, p) == doctest::Approx(0.75));

    HuaSpec i11{CartanSpec::type_i(1, 1), {{1, 2.0}}};
    HuaPoint q = origin_point(i11);
    q.w[0] << Complex(1.0, 0.0);
    CHECK(hua_margin(i11, q) == doctest::Approx(0.0));

    // z outside the closed base
    HuaPoint far = origin_point(b1);
    far.z << Complex(2.0, 0.0);
    CHECK_THROWS_AS(hua_margin(b1, far), DomainError);
}

TEST_CASE("exhaustion: frozen examples") {
    HuaSpec spec{CartanSpec::ball(1), {{1, 1.0}}};
    CHECK(exhaustion(spec, origin_point(spec)) == doctest::Approx(1.0));

    // N = 0.5, margin = 1e-3 -> first term 500
    HuaPoint p = origin_point(spec);
    p.z << Complex(std::sqrt(0.5), 0.0);
    p.w[0] << Complex(std::sqrt(0.5 - 1e-3), 0.0);
    CHECK(exhaustion(spec, p) == doctest::Approx(500.0).epsilon(1e-9));

    // w = 0, N = 0.25 -> 1/N = 4 dominates
    HuaPoint q = origin_point(spec);
    q.z << Complex(std::sqrt(0.75), 0.0);
    CHECK(exhaustion(spec, q) == doctest::Approx(4.0));

    CHECK_THROWS_AS(exhaustion(spec, [&] {
                        HuaPoint bad = origin_point(spec);
                        bad.w[0] << Complex(1.5, 0.0);
                        return bad;
                    }()),
                    DomainError);
}

TEST_CASE("classify_boundary: frozen examples") {
    HuaSpec spec{CartanSpec::type_i(2, 2), {{2, 1.0}, {2, 2.0}}}; // delta = 1
    REQUIRE(spec.is_standard());

    // (0, |w1| = 1, w2 = 0) -> B1 with witness 2
    HuaPoint p = origin_point(spec);
    p.w[0] << Complex(1.0, 0.0), Complex(0.0, 0.0);
    const auto b1 = classify_boundary(spec, p);
    CHECK(b1.tag == StratumTag::B1);
    CHECK(b1.vanishing_block == 2);

    // both blocks nonzero on the boundary -> B0
    HuaPoint q = origin_point(spec);
    q.w[0] << Complex(std::sqrt(0.5), 0.0), Complex(0.0, 0.0);
    q.w[1] << Complex(std::pow(0.5, 0.25), 0.0), Complex(0.0, 0.0);
    CHECK(classify_boundary(spec, q).tag == StratumTag::B0);

    // base edge: z on bOmega, all w zero
    HuaPoint e = origin_point(spec);
    e.z << 1, 0, 0, 1;
    CHECK(classify_boundary(spec, e).tag == StratumTag::BaseEdge);

    // interior and exterior
    CHECK(classify_boundary(spec, origin_point(spec)).tag == StratumTag::Interior);
    HuaPoint x = origin_point(spec);
    x.w[0] << Complex(2.0, 0.0), Complex(0.0, 0.0);
    CHECK(classify_boundary(spec, x).tag == StratumTag::Exterior);

    // non-standard spec is rejected
    HuaSpec nonstd{CartanSpec::ball(2), {{2, 1.0}}};
    CHECK_THROWS_AS(classify_boundary(nonstd, origin_point(nonstd)), InvalidSpecError);
}

TEST_CASE("pure-base specs classify as sphere or base edge") {
    HuaSpec ball{CartanSpec::ball(2), {}};
    Rng rng(7);
    HuaPoint p;
    p.z = project_base_boundary(ball.base, sample_base_interior(ball.base, rng), 1e-12);
    CHECK(classify_boundary(ball, p).tag == StratumTag::B0);

    HuaSpec i22{CartanSpec::type_i(2, 2), {}};
    HuaPoint q;
    q.z = CVector(4);
    q.z << 1, 0, 0, 0.5;
    CHECK(classify_boundary(i22, q).tag == StratumTag::BaseEdge);
}

TEST_CASE("project_to_boundary: frozen examples and residuals") {
    HuaSpec spec{CartanSpec::ball(1), {{1, 2.0}}};
    std::vector<CVector> dirs(1, CVector::Ones(1));
    const HuaPoint p = project_to_boundary(spec, CVector::Zero(1), dirs);
    CHECK(std::abs(p.w[0](0) - Complex(1.0, 0.0)) < 1e-9);

    // N = 0.25, single block with p = 1, unit direction -> s = 0.5
    HuaSpec lin{CartanSpec::ball(1), {{1, 1.0}}};
    CVector z(1);
    z << Complex(std::sqrt(0.75), 0.0);
    const HuaPoint q = project_to_boundary(lin, z, dirs);
    CHECK(std::abs(q.w[0](0) - Complex(0.5, 0.0)) < 1e-9);

    for (const auto& fixture : hua_fixtures()) {
        Rng rng(11);
        for (int i = 0; i < 100; ++i) {
            const HuaPoint b = sample_hua_boundary(fixture, rng);
            CHECK(std::abs(hua_margin(fixture, b)) < 1e-12);
        }
    }

    CHECK_THROWS_AS(project_to_boundary(spec, CVector::Zero(1),
                                        std::vector<CVector>(1, CVector::Zero(1))),
                    DomainError);
}

TEST_CASE("ray_scale: endpoints and starlikeness") {
    for (const auto& spec : hua_fixtures()) {
        Rng rng(13);
        for (int i = 0; i < 50; ++i) {
            const HuaPoint p = sample_hua_interior(spec, rng);
            const HuaPoint at0 = ray_scale(spec, p, 0.0);
            CHECK(hua_margin(spec, at0) == doctest::Approx(1.0));
            const HuaPoint at1 = ray_scale(spec, p, 1.0);
            CHECK((flatten(at1) - flatten(p)).norm() == 0.0);
            const HuaPoint mid = ray_scale(spec, p, 0.5);
            CHECK(hua_margin(spec, mid) >= hua_margin(spec, p) - 1e-12);
        }
    }
    HuaSpec spec = hua_fixtures().front();
    Rng rng(14);
    const HuaPoint p = sample_hua_interior(spec, rng);
    CHECK_THROWS_AS(ray_scale(spec, p, 1.5), DomainError);
}

TEST_CASE("pr_j zeroes one block and never shrinks the margin") {
    HuaSpec spec{CartanSpec::ball(2), {{2, 2.0}, {2, 3.0}}};
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const HuaPoint p = sample_hua_interior(spec, rng);
        for (int j = 1; j <= spec.r(); ++j) {
            const HuaPoint q = pr_j(spec, p, j);
            CHECK(q.w[j - 1].norm() == 0.0);
            CHECK(hua_margin(spec, q) >= hua_margin(spec, p) - 1e-15);
        }
        // the full cascade lands on the base slice
        HuaPoint cascade = p;
        for (int j = 1 + spec.delta(); j <= spec.r(); ++j) cascade = pr_j(spec, cascade, j);
        for (int j = spec.delta(); j < spec.r(); ++j) CHECK(cascade.w[j].norm() == 0.0);
    }
    const HuaPoint p = sample_hua_interior(spec, rng);
    CHECK_THROWS_AS(pr_j(spec, p, 3), DimensionError);
    const HuaPoint same = pr_j(spec, pr_j(spec, p, 1), 1);
    CHECK((flatten(same) - flatten(pr_j(spec, p, 1))).norm() == 0.0);
}

TEST_CASE("stratum partition over sampled boundary points") {
    for (const auto& spec : hua_fixtures()) {
        Rng rng(19);
        int b0 = 0, b1 = 0;
        for (int i = 0; i < 100; ++i) {
            int vanish = 0;
            if (spec.r() >= 2 && spec.r() - spec.delta() >= 1 && i % 3 == 2)
                vanish = 1 + spec.delta() +
                         static_cast<int>(rng.next_u64() % (spec.r() - spec.delta()));
            const HuaPoint p = sample_hua_boundary(spec, rng, vanish);
            const auto s = classify_boundary(spec, p);
            const bool in_partition = s.tag == StratumTag::B0 || s.tag == StratumTag::B1 ||
                                      s.tag == StratumTag::BaseEdge;
            CHECK(in_partition);
            if (s.tag == StratumTag::B0) ++b0;
            if (s.tag == StratumTag::B1) {
                ++b1;
                CHECK(s.vanishing_block >= 1 + spec.delta());
                CHECK(p.w[s.vanishing_block - 1].norm() <= 1e-9);
            }
        }
        CHECK(b0 > 0);
        if (spec.r() >= 2 && spec.r() - spec.delta() >= 1) CHECK(b1 > 0);
    }
}

TEST_CASE("exhaustion blows up towards the boundary") {
    HuaSpec spec{CartanSpec::ball(2), {{2, 2.0}, {2, 3.0}}};
    Rng rng(23);
    const HuaPoint edge = sample_hua_boundary(spec, rng);
    const double tol = 1e-8;

    double prev = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double t = 1.0 - 5e-10 * (11 - k);
        HuaPoint p = edge;
        for (auto& w : p.w) w *= t;
        const double e = exhaustion(spec, p);
        CHECK(e >= prev);
        prev = e;
    }

    // shave the fiber radius so the margin is a fixed fraction of N
    const double n = generic_norm_diag(spec.base, edge.z);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        HuaPoint p = edge;
        for (auto& w : p.w) w *= mid;
        (hua_margin(spec, p) > 0.5 * tol * n ? lo : hi) = mid;
    }
    HuaPoint p = edge;
    for (auto& w : p.w) w *= lo;
    CHECK(hua_margin(spec, p) < tol);
    CHECK(exhaustion(spec, p) > 1.0 / tol);
}

TEST_CASE("ellipsoid margins, classification and samplers") {
    EllipsoidSpec spec{{{2, 1.0}, {2, 2.0}}};
    spec.validate();
    CHECK(spec.delta() == 1);

    EllipsoidPoint origin{CVector::Zero(2), CVector::Zero(2)};
    CHECK(ellipsoid_margin(spec, origin) == doctest::Approx(1.0));

    Rng rng(29);
    for (int i = 0; i < 100; ++i) {
        const EllipsoidPoint p = sample_ellipsoid_boundary(spec, rng);
        CHECK(std::abs(ellipsoid_margin(spec, p)) < 1e-12);
        CHECK(classify_ellipsoid_boundary(spec, p).tag == StratumTag::B0);
        const EllipsoidPoint q = sample_ellipsoid_boundary(spec, rng, 2);
        CHECK(classify_ellipsoid_boundary(spec, q).tag == StratumTag::B1);
    }

    EllipsoidSpec bad{{{2, 2.0}, {2, 1.0}}};
    CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
}

TEST_CASE("samplers are deterministic per seed") {
    const HuaSpec spec = hua_fixtures().front();
    Rng a(99), b(99);
    const HuaPoint p = sample_hua_interior(spec, a);
    const HuaPoint q = sample_hua_interior(spec, b);
    CHECK((flatten(p) - flatten(q)).norm() == 0.0);
}
