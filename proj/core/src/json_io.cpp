#include "huadom/json_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace huadom {

namespace {

double finite_number(const Json& j, const char* what) {
    if (!j.is_number())
        throw DimensionError(std::string(what) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw DimensionError(std::string(what) + ": non-finite entry");
    return v;
}

} // namespace

Json complex_to_json(const Complex& c) {
    return Json::array({c.real(), c.imag()});
}

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw DimensionError("complex: expected [re, im]");
    return {finite_number(j[0], "complex"), finite_number(j[1], "complex")};
}

Json cvector_to_json(const CVector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
    return a;
}

CVector cvector_from_json(const Json& j) {
    if (!j.is_array()) throw DimensionError("vector: expected an array");
    CVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

Json cmatrix_to_json(const CMatrix& m) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(complex_to_json(m(i, j)));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

CMatrix cmatrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw DimensionError("matrix: expected {rows, cols, entries}");
    const auto rows = j["rows"].get<Eigen::Index>();
    const auto cols = j["cols"].get<Eigen::Index>();
    const auto& entries = j["entries"];
    if (rows < 0 || cols < 0 || !entries.is_array() ||
        entries.size() != static_cast<std::size_t>(rows * cols))
        throw DimensionError("matrix: rows*cols does not match the entry count");
    CMatrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(entries[k++]);
    return m;
}

Json cartan_to_json(const CartanSpec& spec) {
    switch (spec.kind) {
        case CartanKind::TypeI: return Json{{"kind", "I"}, {"m", spec.m}, {"n", spec.n}};
        case CartanKind::TypeII: return Json{{"kind", "II"}, {"n", spec.n}};
        case CartanKind::TypeIII: return Json{{"kind", "III"}, {"n", spec.n}};
        case CartanKind::TypeIV: return Json{{"kind", "IV"}, {"n", spec.n}};
        case CartanKind::Ball: return Json{{"kind", "ball"}, {"d", spec.n}};
    }
    throw InvalidSpecError("cartan_to_json: unknown kind");
}

CartanSpec cartan_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw InvalidSpecError("CartanSpec: expected {kind, ...}");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "I") return CartanSpec::type_i(j.at("m").get<int>(), j.at("n").get<int>());
    if (kind == "II") return CartanSpec::type_ii(j.at("n").get<int>());
    if (kind == "III") return CartanSpec::type_iii(j.at("n").get<int>());
    if (kind == "IV") return CartanSpec::type_iv(j.at("n").get<int>());
    if (kind == "ball") return CartanSpec::ball(j.at("d").get<int>());
    throw InvalidSpecError("CartanSpec: unknown kind \"" + kind + "\"");
}

Json hua_spec_to_json(const HuaSpec& spec) {
    Json fibers = Json::array();
    for (const auto& f : spec.fibers) fibers.push_back(Json{{"dim", f.dim}, {"exp", f.exp}});
    return Json{{"base", cartan_to_json(spec.base)}, {"fibers", fibers}};
}

HuaSpec hua_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("base"))
        throw InvalidSpecError("HuaSpec: expected {base, fibers}");
    HuaSpec spec;
    spec.base = cartan_from_json(j["base"]);
    if (j.contains("fibers")) {
        for (const auto& f : j["fibers"])
            spec.fibers.push_back({f.at("dim").get<int>(), finite_number(f.at("exp"), "exp")});
    }
    spec.validate();
    return spec;
}

Json ellipsoid_spec_to_json(const EllipsoidSpec& spec) {
    Json blocks = Json::array();
    for (const auto& b : spec.blocks) blocks.push_back(Json{{"dim", b.dim}, {"exp", b.exp}});
    return Json{{"blocks", blocks}};
}

EllipsoidSpec ellipsoid_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("blocks"))
        throw InvalidSpecError("EllipsoidSpec: expected {blocks}");
    EllipsoidSpec spec;
    for (const auto& b : j["blocks"])
        spec.blocks.push_back({b.at("dim").get<int>(), finite_number(b.at("exp"), "exp")});
    spec.validate();
    return spec;
}

Json hua_point_to_json(const HuaPoint& p) {
    Json w = Json::array();
    for (const auto& block : p.w) w.push_back(cvector_to_json(block));
    return Json{{"z", cvector_to_json(p.z)}, {"w", w}};
}

HuaPoint hua_point_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("z"))
        throw DimensionError("HuaPoint: expected {z, w}");
    HuaPoint p;
    p.z = cvector_from_json(j["z"]);
    if (j.contains("w"))
        for (const auto& block : j["w"]) p.w.push_back(cvector_from_json(block));
    return p;
}

Json base_aut_to_json(const BaseAut& phi) {
    Json j{{"spec", cartan_to_json(phi.spec())}};
    if (phi.spec().kind == CartanKind::TypeIV) {
        j["kind"] = "linear";
        j["phase"] = phi.iv_phase();
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < phi.iv_ortho().rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < phi.iv_ortho().cols(); ++c)
                row.push_back(phi.iv_ortho()(i, c));
            rows.push_back(row);
        }
        j["ortho"] = rows;
        return j;
    }
    j["kind"] = phi.is_linear() ? "linear" : "mobius";
    j["fl"] = Json{{"a", cmatrix_to_json(phi.fl_a())},
                   {"b", cmatrix_to_json(phi.fl_b())},
                   {"c", cmatrix_to_json(phi.fl_c())},
                   {"d", cmatrix_to_json(phi.fl_d())}};
    return j;
}

BaseAut base_aut_from_json(const Json& j) {
    const CartanSpec spec = cartan_from_json(j.at("spec"));
    if (spec.kind == CartanKind::TypeIV) {
        const auto& rows = j.at("ortho");
        Eigen::MatrixXd o(rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t c = 0; c < rows[i].size(); ++c)
                o(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                    finite_number(rows[i][c], "ortho");
        return BaseAut::from_iv_linear(spec, finite_number(j.at("phase"), "phase"), o);
    }
    const auto& fl = j.at("fl");
    return BaseAut::from_fractional_linear(spec, cmatrix_from_json(fl.at("a")),
                                           cmatrix_from_json(fl.at("b")),
                                           cmatrix_from_json(fl.at("c")),
                                           cmatrix_from_json(fl.at("d")));
}

Json gamma_to_json(const GammaAut& g) {
    Json us = Json::array();
    for (const auto& u : g.unitaries) us.push_back(cmatrix_to_json(u));
    return Json{{"spec", hua_spec_to_json(g.spec)},
                {"phi", base_aut_to_json(g.phi)},
                {"unitaries", us}};
}

GammaAut gamma_from_json(const Json& j) {
    const HuaSpec spec = hua_spec_from_json(j.at("spec"));
    const BaseAut phi = base_aut_from_json(j.at("phi"));
    std::vector<CMatrix> us;
    for (const auto& u : j.at("unitaries")) us.push_back(cmatrix_from_json(u));
    return make_gamma(spec, phi, std::move(us));
}

void Report::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw DimensionError("Report: row width does not match the header");
    rows.push_back(std::move(row));
}

std::string report_to_json(const Report& r) {
    Json j;
    j["columns"] = r.columns;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json jr = Json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<double>(cell))
                jr.push_back(std::get<double>(cell));
            else
                jr.push_back(std::get<std::string>(cell));
        }
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j.dump();
}

Report report_from_json(const std::string& text) {
    const Json j = Json::parse(text);
    Report r;
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& jr : j.at("rows")) {
        std::vector<Report::Cell> row;
        for (const auto& cell : jr) {
            if (cell.is_number())
                row.emplace_back(cell.get<double>());
            else
                row.emplace_back(cell.get<std::string>());
        }
        r.add_row(std::move(row));
    }
    return r;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_full_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

std::string report_to_csv(const Report& r) {
    std::ostringstream out;
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        if (c) out << ',';
        out << r.columns[c];
    }
    out << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            if (std::holds_alternative<double>(row[c])) {
                out << format_double(std::get<double>(row[c]));
            } else {
                const std::string& s = std::get<std::string>(row[c]);
                if (s.find_first_of(",\n\"") != std::string::npos)
                    throw DimensionError("report_to_csv: cell contains a CSV delimiter");
                out << s;
            }
        }
        out << '\n';
    }
    return out.str();
}

Report report_from_csv(const std::string& text) {
    Report r;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (header) {
            r.columns = cells;
            header = false;
            continue;
        }
        std::vector<Report::Cell> row;
        for (const auto& cell : cells) {
            double v = 0.0;
            if (parse_full_double(cell, v))
                row.emplace_back(v);
            else
                row.emplace_back(cell);
        }
        r.add_row(std::move(row));
    }
    return r;
}

} // namespace huadom
