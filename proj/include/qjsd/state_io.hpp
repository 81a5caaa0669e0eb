#pragma once

// State files: {"dim": N, "matrix": [[[re, im], ...N], ...N]}

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qjsd/error.hpp"
#include "qjsd/states.hpp"

namespace qjsd {

namespace detail {

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

} // namespace detail

/// Serialises a state with 17 significant digits per component.
inline std::string state_to_json(const DensityMatrix& rho)
{
    const std::size_t n = rho.dim();
    std::string out = "{\"dim\": " + std::to_string(n) + ", \"matrix\": [";
    for (std::size_t i = 0; i < n; ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < n; ++j) {
            const auto z = rho.matrix()(i, j);
            out += (j ? ", [" : "[") + detail::format_double(z.real()) + ", " + detail::format_double(z.imag()) + "]";
        }
        out += "]";
    }
    out += "]}";
    return out;
}

/// Parses and validates (Hermiticity, trace, positivity) a state document.
inline DensityMatrix state_from_json(const nlohmann::json& doc)
{
    try {
        const auto n = doc.at("dim").get<std::size_t>();
        const auto& rows = doc.at("matrix");
        if (n == 0) throw ParseError("dim must be positive");
        if (!rows.is_array() || rows.size() != n) throw ParseError("matrix must have dim rows");
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& row = rows[i];
            if (!row.is_array() || row.size() != n) throw ParseError("row " + std::to_string(i) + " has wrong length");
            for (std::size_t j = 0; j < n; ++j) {
                const auto& entry = row[j];
                if (!entry.is_array() || entry.size() != 2) throw ParseError("entries must be [re, im] pairs");
                m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
            }
        }
        return DensityMatrix(HermitianMatrix(Matrix(n, std::vector<Complex>(m.data().begin(), m.data().end()))));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

inline DensityMatrix state_from_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    return state_from_json(doc);
}

inline DensityMatrix read_state_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return state_from_json(ss.str());
}

inline void write_state_file(const std::string& path, const DensityMatrix& rho)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << state_to_json(rho) << '\n';
}

} // namespace qjsd
