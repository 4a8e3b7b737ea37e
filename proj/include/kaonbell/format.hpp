#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kaonbell/params.hpp"

namespace kaonbell {

inline constexpr const char* kVersion = "1.0.0";

/// %.12g, with -0 printed as 0 so that outputs compare byte for byte.
inline std::string format_number(double x) {
    if (x == 0.0) x = 0.0;
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Provenance block written at the top of every output.
struct Metadata {
    std::string command;
    MesonParameters params{};
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> extra;

    Metadata& add(std::string key, std::string value) {
        extra.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    Metadata& add(std::string key, double value) { return add(std::move(key), format_number(value)); }

    /// Ordered key/value view of the whole header.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries() const {
        std::vector<std::pair<std::string, std::string>> out{
            {"tool", "kaonbell"},
            {"version", kVersion},
            {"command", command},
            {"preset", params.label},
            {"gamma_S", format_number(params.gamma_S)},
            {"gamma_L", format_number(params.gamma_L)},
            {"delta_m", format_number(params.delta_m)},
            {"seed", std::to_string(seed)},
        };
        out.insert(out.end(), extra.begin(), extra.end());
        return out;
    }
};

/// "# key: value" lines preceding a CSV table.
inline void write_comment_header(std::ostream& os, const Metadata& meta) {
    for (const auto& [k, v] : meta.entries()) os << "# " << k << ": " << v << '\n';
}

inline void write_csv_row(std::ostream& os, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_number(values[i]);
    os << '\n';
}

} // namespace kaonbell
