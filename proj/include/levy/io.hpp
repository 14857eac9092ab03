#pragma once

#include <Eigen/Dense>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "levy/field.hpp"
#include "levy/kernel.hpp"
#include "levy/version.hpp"

namespace levy {

using Json = nlohmann::ordered_json;

/// Shortest-free, locale-independent rendering with 17 significant digits.
inline std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {
inline void write_json(std::ostream& os, const Json& j) {
    switch (j.type()) {
        case Json::value_t::object: {
            os << '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) os << ',';
                first = false;
                os << Json(k).dump() << ':';
                write_json(os, v);
            }
            os << '}';
            break;
        }
        case Json::value_t::array: {
            os << '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ',';
                first = false;
                write_json(os, v);
            }
            os << ']';
            break;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            os << (std::isfinite(x) ? format_double(x) : "null");
            break;
        }
        default:
            os << j.dump();
    }
}
}  // namespace detail

/// Compact JSON in insertion key order, floats with 17 significant digits.
inline std::string canonical_json(const Json& j) {
    std::ostringstream os;
    detail::write_json(os, j);
    return os.str();
}

// ---------------------------------------------------------------------------
// Witness certificates

inline Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const Json& rows) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
        throw std::invalid_argument("certificate: point must be a non-empty array of rows");
    }
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c) {
            throw std::invalid_argument("certificate: ragged point matrix");
        }
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

inline Json certificate_to_json(const WitnessCertificate& c) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "witness_certificate";
    j["group"] = c.group.name();
    j["n"] = c.group.n;
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(matrix_to_json(p));
    j["points"] = std::move(pts);
    j["weights"] = c.weights;
    j["value"] = c.value;
    j["scale"] = c.scale;
    j["seed"] = {{"seed", c.seed}, {"stream", c.stream}, {"trial", c.trial}};
    j["method"] = c.method;
    j["tool_version"] = kToolVersion;
    return j;
}

inline WitnessCertificate certificate_from_json(const Json& j) {
    WitnessCertificate c;
    const auto group = j.at("group").get<std::string>();
    const int n = j.at("n").get<int>();
    if (group == "su2") {
        c.group = GroupSpec::su2();
    } else if (group == "so3" || group == "son") {
        c.group = GroupSpec::son(n);
    } else {
        throw std::invalid_argument("certificate: unknown group '" + group + "'");
    }
    for (const auto& p : j.at("points")) c.points.push_back(matrix_from_json(p));
    c.weights = j.at("weights").get<std::vector<double>>();
    c.value = j.at("value").get<double>();
    c.scale = j.value("scale", 1.0);
    const auto& s = j.at("seed");
    c.seed = s.at("seed").get<std::uint64_t>();
    c.stream = s.at("stream").get<std::uint64_t>();
    c.trial = s.at("trial").get<int>();
    c.method = j.value("method", std::string("eigen"));
    return c;
}

// ---------------------------------------------------------------------------
// Field output

inline void write_variogram_csv(std::ostream& os, std::span<const VariogramEntry> entries) {
    os << "pair_i,pair_j,distance,estimate,stderr\n";
    for (const auto& e : entries) {
        os << e.i << ',' << e.j << ',' << format_double(e.distance) << ','
           << format_double(e.estimate) << ',' << format_double(e.std_error) << '\n';
    }
}

inline constexpr int kMaxCsvRealizations = 100;

/// One row per point, one column per realization (at most 100 columns).
inline void write_field_csv(std::ostream& os, const Eigen::MatrixXd& values) {
    const auto cols = std::min<Eigen::Index>(values.cols(), kMaxCsvRealizations);
    os << "point";
    for (Eigen::Index r = 0; r < cols; ++r) os << ",r" << r;
    os << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        os << i;
        for (Eigen::Index r = 0; r < cols; ++r) os << ',' << format_double(values(i, r));
        os << '\n';
    }
}

inline constexpr char kFieldMagic[8] = {'L', 'V', 'Y', 'F', 'L', 'D', '0', '1'};

namespace detail {
inline void put_u64_le(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
    os.write(b, 8);
}
inline std::uint64_t get_u64_le(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) {
        throw std::runtime_error("field binary: truncated input");
    }
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
}
}  // namespace detail

/// "LVYFLD01", rows and cols as little-endian u64, then rows*cols
/// little-endian float64 values, one realization (column) after another.
inline void write_field_binary(std::ostream& os, const Eigen::MatrixXd& values) {
    os.write(kFieldMagic, 8);
    detail::put_u64_le(os, static_cast<std::uint64_t>(values.rows()));
    detail::put_u64_le(os, static_cast<std::uint64_t>(values.cols()));
    for (Eigen::Index r = 0; r < values.cols(); ++r) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            detail::put_u64_le(os, std::bit_cast<std::uint64_t>(values(i, r)));
        }
    }
}

inline Eigen::MatrixXd read_field_binary(std::istream& is) {
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kFieldMagic, 8) != 0) {
        throw std::runtime_error("field binary: bad magic header");
    }
    const auto rows = detail::get_u64_le(is);
    const auto cols = detail::get_u64_le(is);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < values.cols(); ++r) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            values(i, r) = std::bit_cast<double>(detail::get_u64_le(is));
        }
    }
    return values;
}

}  // namespace levy
