#include "doctest.h"

#include "helpers.hpp"
#include <limits>

#include "huadom/json_io.hpp"

using namespace huadom;
using namespace huadom::testing;

TEST_CASE("spec JSON round-trips") {
    for (const auto& base : five_base_kinds()) {
        CHECK(cartan_from_json(cartan_to_json(base)) == base);
    }
    for (const auto& spec : hua_fixtures()) {
        CHECK(hua_spec_from_json(hua_spec_to_json(spec)) == spec);
    }
    EllipsoidSpec e{{{2, 1.0}, {3, 2.5}}};
    CHECK(ellipsoid_spec_from_json(ellipsoid_spec_to_json(e)) == e);
}

TEST_CASE("spec JSON validation") {
    CHECK_THROWS_AS(cartan_from_json(Json{{"kind", "V"}, {"n", 3}}), InvalidSpecError);
    CHECK_THROWS_AS(cartan_from_json(Json{{"kind", "IV"}, {"n", 2}}), InvalidSpecError);
    // two unit exponents
    Json bad = Json::parse(R"({"base":{"kind":"ball","d":2},
                               "fibers":[{"dim":1,"exp":1.0},{"dim":1,"exp":1.0}]})");
    CHECK_THROWS_AS(hua_spec_from_json(bad), InvalidSpecError);
}

TEST_CASE("point JSON round-trips and rejects non-finite entries") {
    const HuaSpec spec = hua_fixtures().front();
    Rng rng(71);
    const HuaPoint p = sample_hua_interior(spec, rng);
    const HuaPoint q = hua_point_from_json(hua_point_to_json(p));
    CHECK((flatten(p) - flatten(q)).norm() == 0.0);

    Json bad;
    bad["z"] = Json::array({Json::array({std::numeric_limits<double>::infinity(), 0.0})});
    bad["w"] = Json::array();
    CHECK_THROWS_AS(hua_point_from_json(bad), DimensionError);
}

TEST_CASE("gamma JSON round-trip reproduces the action") {
    for (const auto& spec : hua_fixtures()) {
        const GammaAut g = random_gamma(spec, 4242);
        const GammaAut h = gamma_from_json(gamma_to_json(g));
        Rng rng(73);
        for (int i = 0; i < 20; ++i) {
            const HuaPoint p = sample_hua_interior(spec, rng);
            CHECK((flatten(gamma_apply(g, p)) - flatten(gamma_apply(h, p))).norm() < 1e-12);
        }
    }
}

TEST_CASE("reports: JSON and CSV round-trip to identical values") {
    Report r;
    r.columns = {"index", "tag", "margin"};
    r.add_row({0.0, std::string("b0"), 0.12345678901234567});
    r.add_row({1.0, std::string("b1"), -3.5e-12});
    r.add_row({2.0, std::string("interior"), 1.0 / 3.0});

    CHECK(report_from_json(report_to_json(r)) == r);
    CHECK(report_from_csv(report_to_csv(r)) == r);

    // identical serialization is byte-identical
    CHECK(report_to_json(r) == report_to_json(r));
    CHECK(report_to_csv(r) == report_to_csv(r));
}
