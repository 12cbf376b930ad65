// huadom CLI: spec/point file I/O, batch computation, report emission.
//
// Subcommands: norm, member, classify, levi, aut-sample, aut-apply, equiv,
// recover, sample-boundary, selftest.
// Exit codes: 0 ok, 1 violation/reject, 2 usage, 3 parse error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "huadom/json_io.hpp"
#include "huadom/levi.hpp"

using namespace huadom;

namespace {

struct ParseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseFailure("cannot open " + path);
    try {
        Json j;
        in >> j;
        return j;
    } catch (const Json::exception& e) {
        throw ParseFailure(path + ": " + e.what());
    }
}

std::vector<HuaPoint> read_points_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseFailure("cannot open " + path);
    std::vector<HuaPoint> points;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            points.push_back(hua_point_from_json(Json::parse(line)));
        } catch (const std::exception& e) {
            throw ParseFailure(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return points;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParseFailure("cannot open " + out_path + " for writing");
    out << text;
}

void emit_report(const Report& report, const std::string& format, const std::string& out_path) {
    write_output(out_path, format == "csv" ? report_to_csv(report) : report_to_json(report));
    if (out_path.empty() || out_path == "-") std::cout << "\n";
}

std::string stratum_label(const BoundaryStratum& s) {
    return stratum_name(s.tag);
}

// Common options shared by every subcommand.
struct Common {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int samples = 1000;
    std::string format = "json";
    std::string out = "-";

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "numerical tolerance")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "64-bit RNG seed");
        cmd->add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", out, "output path, - for stdout");
    }
};

int cmd_norm(const std::string& spec_path, const std::string& points_path, const Common& c) {
    const HuaSpec spec = hua_spec_from_json(read_json_file(spec_path));
    const auto points = read_points_jsonl(points_path);
    Report report;
    report.columns = {"index", "N", "margin"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double margin = hua_margin(spec, points[i]);
        const double n = generic_norm_diag_unchecked(spec.base, points[i].z);
        report.add_row({static_cast<double>(i), n, margin});
    }
    emit_report(report, c.format, c.out);
    return 0;
}

int cmd_member(const std::string& spec_path, const std::string& points_path, const Common& c) {
    const HuaSpec spec = hua_spec_from_json(read_json_file(spec_path));
    const auto points = read_points_jsonl(points_path);
    Report report;
    report.columns = {"index", "base_margin", "margin", "inside"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double bm = base_margin(spec.base, points[i].z);
        const double margin = hua_margin_unchecked(spec, points[i]);
        const bool inside = bm > 0.0 && margin > 0.0;
        report.add_row({static_cast<double>(i), bm, margin, inside ? 1.0 : 0.0});
    }
    emit_report(report, c.format, c.out);
    return 0;
}

std::vector<HuaPoint> boundary_samples(const HuaSpec& spec, int count, std::uint64_t seed,
                                       double b1_fraction) {
    std::vector<HuaPoint> points;
    const int eligible = spec.r() - spec.delta();
    for (int i = 0; i < count; ++i) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
        int vanish = 0;
        if (spec.r() >= 2 && eligible >= 1 && rng.uniform() < b1_fraction)
            vanish = 1 + spec.delta() + static_cast<int>(rng.next_u64() % eligible);
        points.push_back(sample_hua_boundary(spec, rng, vanish));
    }
    return points;
}

int cmd_classify(const std::string& spec_path, const std::string& points_path, int sample_count,
                 const Common& c) {
    const HuaSpec spec = hua_spec_from_json(read_json_file(spec_path));
    std::vector<HuaPoint> points;
    if (!points_path.empty()) {
        points = read_points_jsonl(points_path);
    } else {
        points = boundary_samples(spec, sample_count, c.seed, 0.25);
    }
    Report report;
    report.columns = {"index", "tag", "vanishing_block", "value"};
    std::map<std::string, int> counts;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto s = classify_boundary(spec, points[i], c.tol);
        counts[stratum_label(s)]++;
        report.add_row({static_cast<double>(i), stratum_label(s),
                        static_cast<double>(s.vanishing_block),
                        hua_margin_unchecked(spec, points[i])});
    }
    for (const auto& [tag, count] : counts)
        report.add_row({-1.0, "count_" + tag, 0.0, static_cast<double>(count)});
    emit_report(report, c.format, c.out);
    return 0;
}

int cmd_levi(const std::string& spec_path, const std::string& points_path, int sample_count,
             const std::string& mode, const Common& c) {
    const HuaSpec spec = hua_spec_from_json(read_json_file(spec_path));
    std::vector<HuaPoint> points;
    if (!points_path.empty()) {
        points = read_points_jsonl(points_path);
    } else {
        points = boundary_samples(spec, sample_count, c.seed, 0.0);
    }
    Report report;
    report.columns = {"index", "tag", "strongly_pseudoconvex", "min_eig"};
    const int tdim = spec.total_dim() - 1;
    for (int k = 0; k < tdim; ++k) report.columns.push_back("eig_" + std::to_string(k + 1));
    if (mode == "both") report.columns.push_back("fd_max_rel_err");

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto s = classify_boundary(spec, points[i], c.tol);
        const auto rep = classify_pseudoconvexity(spec, points[i]);
        std::vector<Report::Cell> row{static_cast<double>(i), stratum_label(s),
                                      rep.strongly_pseudoconvex ? 1.0 : 0.0,
                                      rep.min_eigenvalue};
        for (double e : rep.eigenvalues) row.emplace_back(e);
        if (mode == "both") {
            double max_rel = 0.0;
            const auto basis = complex_tangent_basis(spec, points[i]);
            for (const auto& t : basis) {
                const double la = levi_form(spec, points[i], t, LeviMode::Analytic);
                const double lf = levi_form(spec, points[i], t, LeviMode::FiniteDiff);
                max_rel = std::max(max_rel, std::abs(la - lf) / std::max(1.0, std::abs(la)));
            }
            row.emplace_back(max_rel);
        }
        report.add_row(std::move(row));
    }
    emit_report(report, c.format, c.out);
    return 0;
}

int cmd_aut_sample(const std::string& spec_path, int count, const Common& c) {
    const HuaSpec spec = hua_spec_from_json(read_json_file(spec_path));
    Json list = Json::array();
    for (int i = 0; i < count; ++i)
        list.push_back(gamma_to_json(random_gamma(spec, Rng::derive(c.seed, i))));
    write_output(c.out, list.dump());
    if (c.out.empty() || c.out == "-") std::cout << "\n";
    return 0;
}

int cmd_aut_apply(const std::string& aut_path, const std::string& points_path, const Common& c) {
    const Json j = read_json_file(aut_path);
    const GammaAut g = gamma_from_json(j.is_array() ? j.at(0) : j);
    const auto points = read_points_jsonl(points_path);
    Report report;
    report.columns = {"index", "margin_before", "margin_after", "tag_before", "tag_after"};
    bool violated = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const HuaPoint image = gamma_apply(g, points[i]);
        const double before = hua_margin(g.spec, points[i]);
        const double after = hua_margin(g.spec, image);
        const auto tb = classify_boundary(g.spec, points[i], c.tol);
        const auto ta = classify_boundary(g.spec, image, std::max(c.tol, 1e-7));
        if ((before > 0) != (after > 0) || tb.tag != ta.tag) violated = true;
        report.add_row({static_cast<double>(i), before, after, stratum_label(tb),
                        stratum_label(ta)});
    }
    emit_report(report, c.format, c.out);
    return violated ? 1 : 0;
}

int cmd_equiv(const std::string& spec1_path, const std::string& spec2_path, double p_tol,
              const Common& c) {
    const HuaSpec s1 = hua_spec_from_json(read_json_file(spec1_path));
    const HuaSpec s2 = hua_spec_from_json(read_json_file(spec2_path));
    const EquivResult res = hua_equivalent(s1, s2, p_tol);

    Json out;
    out["equivalent"] = res.status == EquivStatus::Equivalent;
    out["status"] = res.status == EquivStatus::Equivalent       ? "equivalent"
                    : res.status == EquivStatus::NotEquivalent ? "not_equivalent"
                                                               : "undetermined";
    if (!res.note.empty()) out["note"] = res.note;
    if (res.witness) {
        Json sigma = Json::array();
        for (int s : res.witness->sigma) sigma.push_back(s + 1);
        out["sigma"] = sigma;
        out["base_map"] = res.witness->base_transpose ? "transpose" : "identity";

        // margin-sign preservation of the assembled witness on seeded samples
        double max_dev = 0.0;
        int agreements = 0;
        for (int i = 0; i < c.samples; ++i) {
            Rng rng(Rng::derive(c.seed, static_cast<std::uint64_t>(i)));
            HuaPoint p = sample_hua_interior(s1, rng);
            if (i % 3 == 2)
                for (auto& w : p.w) w *= 2.0;
            const double before = hua_margin_unchecked(s1, p);
            const double after = hua_margin_unchecked(s2, res.witness->apply(p));
            if ((before > 0) == (after > 0)) ++agreements;
            max_dev = std::max(max_dev, std::abs(before - after));
        }
        out["residuals"] =
            Json{{"margin_sign_agreements", agreements}, {"samples", c.samples},
                 {"max_margin_deviation", max_dev}};
        if (agreements != c.samples) {
            write_output(c.out, out.dump());
            return 1;
        }
    }
    write_output(c.out, out.dump());
    if (c.out.empty() || c.out == "-") std::cout << "\n";
    return res.status == EquivStatus::Equivalent ? 0 : 1;
}

int cmd_recover(const std::string& matrix_path, const std::string& in_path,
                const std::string& out_spec_path, const Common& c) {
    const CMatrix l = cmatrix_from_json(read_json_file(matrix_path));
    const EllipsoidSpec in_spec = ellipsoid_spec_from_json(read_json_file(in_path));
    const EllipsoidSpec out_spec = ellipsoid_spec_from_json(read_json_file(out_spec_path));
    const RecoveryResult res = recover_block_structure(l, in_spec, out_spec,
                                                       std::min(c.tol, 1e-8));
    Json out;
    out["accepted"] = res.accepted;
    if (res.accepted) {
        Json sigma = Json::array();
        for (int s : res.sigma) sigma.push_back(s + 1);
        out["sigma"] = sigma;
        double max_resid = 0.0;
        for (const auto& u : res.unitaries) {
            const double r =
                (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
            max_resid = std::max(max_resid, r);
        }
        out["max_unitarity_residual"] = max_resid;
    } else {
        out["reason"] = res.reason;
        if (res.offending_row >= 0) out["offending_row"] = res.offending_row + 1;
        if (res.offending_col >= 0) out["offending_col"] = res.offending_col + 1;
    }
    write_output(c.out, out.dump());
    if (c.out.empty() || c.out == "-") std::cout << "\n";
    return res.accepted ? 0 : 1;
}

int cmd_sample_boundary(const std::string& spec_path, int count, double b1_fraction,
                        const Common& c) {
    const HuaSpec spec = hua_spec_from_json(read_json_file(spec_path));
    const auto points = boundary_samples(spec, count, c.seed, b1_fraction);
    std::ostringstream out;
    for (const auto& p : points) out << hua_point_to_json(p).dump() << "\n";
    write_output(c.out, out.str());
    return 0;
}

// Deterministic invariant battery; exits nonzero on the first violation.
int cmd_selftest(const Common& c, std::ostream& os) {
    const std::vector<HuaSpec> fixtures = {
        HuaSpec{CartanSpec::ball(2), {{2, 2.0}, {2, 3.0}}},
        HuaSpec{CartanSpec::type_i(2, 2), {{2, 1.0}, {2, 2.0}}},
        HuaSpec{CartanSpec::type_iii(2), {{1, 2.0}, {2, 1.5}}},
        HuaSpec{CartanSpec::type_iv(3), {{2, 2.0}}},
        HuaSpec{CartanSpec::type_ii(4), {{2, 1.0}, {2, 2.0}}},
    };
    const int n = std::max(10, c.samples / 10);
    char buf[128];

    auto fail = [&](const std::string& name, const std::string& detail) {
        os << "FAIL " << name << ": " << detail << "\n";
        return 1;
    };

    int checks = 0;
    for (std::size_t f = 0; f < fixtures.size(); ++f) {
        const HuaSpec& spec = fixtures[f];
        Rng rng(Rng::derive(c.seed, 1000 + f));

        for (int i = 0; i < n; ++i) {
            // norm bounds and monotonicity along rays
            const BasePoint z = sample_base_interior(spec.base, rng);
            const double nv = generic_norm_diag(spec.base, z);
            if (!(nv > 0.0 && nv <= 1.0)) return fail("norm_bounds", "N out of (0,1]");
            double prev = 1.0;
            for (int k = 1; k <= 10; ++k) {
                const double cur = generic_norm_diag(spec.base, BasePoint(0.1 * k * z));
                if (cur > prev + 1e-12) return fail("norm_monotone", "ray increased");
                prev = cur;
            }
            ++checks;

            // starlikeness
            const HuaPoint p = sample_hua_interior(spec, rng);
            for (int k = 0; k <= 10; ++k) {
                if (hua_margin(spec, ray_scale(spec, p, 0.1 * k)) <= 0.0)
                    return fail("starlike", "ray_scale left the domain");
            }
            ++checks;

            // boundary partition
            const HuaPoint b = sample_hua_boundary(spec, rng);
            const auto tag = classify_boundary(spec, b, c.tol).tag;
            if (tag != StratumTag::B0 && tag != StratumTag::B1 && tag != StratumTag::BaseEdge)
                return fail("stratum_partition", "boundary sample not on the boundary");
            ++checks;

            // Gamma preserves the interior and the base slice
            const GammaAut g = random_gamma(spec, Rng::derive(c.seed, 5000 + 10 * f + i % 7));
            if (hua_margin(spec, gamma_apply(g, p)) <= 0.0)
                return fail("gamma_interior", "interior point mapped outside");
            HuaPoint slice;
            slice.z = p.z;
            for (const auto& fb : spec.fibers) slice.w.push_back(CVector::Zero(fb.dim));
            const HuaPoint mapped = gamma_apply(g, slice);
            for (const auto& w : mapped.w)
                if (w.norm() != 0.0) return fail("gamma_base_slice", "w = 0 not preserved");
            ++checks;

            // Levi strong pseudoconvexity at B0
            if (i < 5) {
                const auto rep = classify_pseudoconvexity(spec, b);
                if (!rep.strongly_pseudoconvex)
                    return fail("levi_b0", "B0 point not strongly pseudoconvex");
                ++checks;
            }
        }
        std::snprintf(buf, sizeof(buf), "ok fixture_%zu checks=%d", f, checks);
        os << buf << "\n";
    }

    // equivalence decider versus its oracle shape on the merged-ball pair
    const auto res = hua_equivalent(HuaSpec{CartanSpec::ball(2), {{2, 1.0}, {2, 2.0}}},
                                    HuaSpec{CartanSpec::ball(4), {{2, 2.0}}});
    if (res.status != EquivStatus::Equivalent)
        return fail("equiv_merge", "merged-ball pair not recognized");
    os << "ok equiv_merge\n";

    // solvability dichotomy spot checks
    std::vector<CMatrix> blocks{CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)};
    if (block_solvability(blocks, 1e-9).tag != SolvabilityVerdict::Tag::UniqueNonzeroBlock)
        return fail("solvability", "unique-block case misclassified");
    blocks[1] = CMatrix::Identity(2, 2);
    if (block_solvability(blocks, 1e-9).tag != SolvabilityVerdict::Tag::Exists)
        return fail("solvability", "cancellation case misclassified");
    os << "ok solvability\n";

    os << "selftest ok seed=" << c.seed << " checks=" << checks << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometry and rigidity toolkit for Hua domains"};
    app.require_subcommand(1);

    Common common;
    std::string spec_path, spec2_path, points_path, aut_path, matrix_path;
    int count = 100;
    int sample_count = 0;
    double p_tol = 0.0;
    double b1_fraction = 0.0;
    std::string mode = "analytic";

    auto* norm = app.add_subcommand("norm", "generic norm and margin at supplied points");
    norm->add_option("--spec", spec_path)->required();
    norm->add_option("--points", points_path)->required();
    common.attach(norm);

    auto* member = app.add_subcommand("member", "membership margins at supplied points");
    member->add_option("--spec", spec_path)->required();
    member->add_option("--points", points_path)->required();
    common.attach(member);

    auto* classify = app.add_subcommand("classify", "boundary stratification");
    classify->add_option("--spec", spec_path)->required();
    classify->add_option("--points", points_path);
    classify->add_option("--sample", sample_count, "sample this many boundary points");
    common.attach(classify);

    auto* levi = app.add_subcommand("levi", "Levi spectra at boundary points");
    levi->add_option("--spec", spec_path)->required();
    levi->add_option("--points", points_path);
    levi->add_option("--sample", sample_count);
    levi->add_option("--mode", mode)->check(CLI::IsMember({"analytic", "both"}));
    common.attach(levi);

    auto* aut_sample = app.add_subcommand("aut-sample", "sample Gamma automorphisms");
    aut_sample->add_option("--spec", spec_path)->required();
    aut_sample->add_option("--count", count);
    common.attach(aut_sample);

    auto* aut_apply = app.add_subcommand("aut-apply", "apply an automorphism file to points");
    aut_apply->add_option("--aut", aut_path)->required();
    aut_apply->add_option("--points", points_path)->required();
    common.attach(aut_apply);

    auto* equiv = app.add_subcommand("equiv", "decide biholomorphic equivalence of two specs");
    equiv->add_option("--spec1", spec_path)->required();
    equiv->add_option("--spec2", spec2_path)->required();
    equiv->add_option("--p-tol", p_tol, "fuzzy exponent matching tolerance");
    common.attach(equiv);

    auto* recover = app.add_subcommand("recover", "recover block structure of a linear map");
    recover->add_option("--matrix", matrix_path)->required();
    recover->add_option("--in-spec", spec_path)->required();
    recover->add_option("--out-spec", spec2_path)->required();
    common.attach(recover);

    auto* sample_boundary = app.add_subcommand("sample-boundary", "emit boundary samples");
    sample_boundary->add_option("--spec", spec_path)->required();
    sample_boundary->add_option("--count", count);
    sample_boundary->add_option("--b1-fraction", b1_fraction)->check(CLI::Range(0.0, 1.0));
    common.attach(sample_boundary);

    auto* selftest = app.add_subcommand("selftest", "run the invariant battery");
    common.attach(selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*norm) return cmd_norm(spec_path, points_path, common);
        if (*member) return cmd_member(spec_path, points_path, common);
        if (*classify) {
            if (points_path.empty() && sample_count <= 0) {
                std::cerr << "classify: need --points or --sample\n";
                return 2;
            }
            return cmd_classify(spec_path, points_path, sample_count, common);
        }
        if (*levi) {
            if (points_path.empty() && sample_count <= 0) {
                std::cerr << "levi: need --points or --sample\n";
                return 2;
            }
            return cmd_levi(spec_path, points_path, sample_count, mode, common);
        }
        if (*aut_sample) return cmd_aut_sample(spec_path, count, common);
        if (*aut_apply) return cmd_aut_apply(aut_path, points_path, common);
        if (*equiv) return cmd_equiv(spec_path, spec2_path, p_tol, common);
        if (*recover) return cmd_recover(matrix_path, spec_path, spec2_path, common);
        if (*sample_boundary)
            return cmd_sample_boundary(spec_path, count, b1_fraction, common);
        if (*selftest) return cmd_selftest(common, std::cout);
    } catch (const ParseFailure& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidSpecError& e) {
        std::cerr << "invalid spec: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
