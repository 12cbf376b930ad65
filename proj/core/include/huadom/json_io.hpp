/**
 * @file json_io.hpp
 * @brief JSON wire formats (specs, points, automorphisms) and the tabular
 *        report container with JSON/CSV encodings.
 *
 * Complex numbers serialize as [re, im] pairs; matrices as row-major entry
 * arrays. Parsing validates shapes and finiteness.
 */
#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "huadom/aut.hpp"
#include "huadom/equiv.hpp"

namespace huadom {

using Json = nlohmann::json;

Json complex_to_json(const Complex& c);
Complex complex_from_json(const Json& j);

Json cvector_to_json(const CVector& v);
CVector cvector_from_json(const Json& j);

Json cmatrix_to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const Json& j);

/// {"kind":"I"|"II"|"III"|"IV"|"ball", "m":..., "n":..., "d":...}
Json cartan_to_json(const CartanSpec& spec);
CartanSpec cartan_from_json(const Json& j);

/// {"base": <CartanSpec>, "fibers":[{"dim":n_j,"exp":p_j}, ...]}
Json hua_spec_to_json(const HuaSpec& spec);
HuaSpec hua_spec_from_json(const Json& j);

/// {"blocks":[{"dim":n_k,"exp":p_k}, ...]}
Json ellipsoid_spec_to_json(const EllipsoidSpec& spec);
EllipsoidSpec ellipsoid_spec_from_json(const Json& j);

/// {"z":[[re,im],...], "w":[[[re,im],...], ...]}
Json hua_point_to_json(const HuaPoint& p);
HuaPoint hua_point_from_json(const Json& j);

Json base_aut_to_json(const BaseAut& phi);
BaseAut base_aut_from_json(const Json& j);

/// {"spec": <HuaSpec>, "phi": <BaseAut>, "unitaries":[<matrix>, ...]}
Json gamma_to_json(const GammaAut& g);
GammaAut gamma_from_json(const Json& j);

/// Flat tabular report; the common currency of the CLI subcommands.
struct Report {
    using Cell = std::variant<double, std::string>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    bool operator==(const Report&) const = default;
};

std::string report_to_json(const Report& r);
std::string report_to_csv(const Report& r);
Report report_from_json(const std::string& text);
Report report_from_csv(const std::string& text);

} // namespace huadom
