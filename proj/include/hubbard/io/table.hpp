#pragma once
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hubbard/errors.hpp"

namespace hubbard::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

enum class Format { csv, json };

inline Format format_from_string(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw domain_error("output.format must be csv or json, got '" + s + "'");
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Numeric result table. `meta` carries the echoed inputs; CSV stores it on a leading '#' line.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    json meta = json::object();

    Table() = default;
    explicit Table(std::vector<std::string> cols, json m = json::object()) : columns(std::move(cols)), meta(std::move(m)) {}

    void add(std::vector<double> row) {
        if (row.size() != columns.size()) throw domain_error("table row width does not match the header");
        rows.push_back(std::move(row));
    }

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw domain_error("no column named '" + name + "'");
    }
    std::vector<double> values(const std::string& name) const {
        auto c = column(name);
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

inline std::string to_csv(const Table& t) {
    std::ostringstream os;
    json m = t.meta;
    m["schema"] = schema_version;
    os << "# " << m.dump() << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
        os << '\n';
    }
    return os.str();
}

// Doubles are written through the same 17-digit formatting as CSV so both formats round-trip.
inline std::string to_json(const Table& t) {
    std::ostringstream os;
    json m = t.meta;
    m["schema"] = schema_version;
    os << "{\n  \"meta\": " << m.dump() << ",\n  \"columns\": " << json(t.columns).dump() << ",\n  \"rows\": [";
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        os << (k ? ",\n    [" : "\n    [");
        for (std::size_t i = 0; i < t.rows[k].size(); ++i) {
            double v = t.rows[k][i];
            os << (i ? ", " : "") << (std::isfinite(v) ? format_double(v) : json(format_double(v)).dump());
        }
        os << ']';
    }
    os << (t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

// strtod rather than stod: stod rejects subnormals, which the writer can legitimately emit.
inline double parse_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw domain_error("malformed number '" + s + "'");
    return v;
}

inline Table from_csv(const std::string& text) {
    Table t;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!header) t.meta = json::parse(line.substr(1));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!header) {
            t.columns = cells;
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_double(c));
        t.add(std::move(row));
    }
    t.meta.erase("schema");
    return t;
}

inline Table from_json(const std::string& text) {
    json j = json::parse(text);
    Table t(j.at("columns").get<std::vector<std::string>>(), j.value("meta", json::object()));
    for (const auto& r : j.at("rows")) {
        std::vector<double> row;
        for (const auto& v : r) row.push_back(v.is_string() ? parse_double(v.get<std::string>()) : v.get<double>());
        t.add(std::move(row));
    }
    t.meta.erase("schema");
    return t;
}

inline std::string render(const Table& t, Format f) { return f == Format::csv ? to_csv(t) : to_json(t); }

inline Table parse(const std::string& text, Format f) { return f == Format::csv ? from_csv(text) : from_json(text); }

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw domain_error("cannot open '" + path + "' for writing");
    os << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw domain_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline Format format_of_path(const std::string& path) {
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? Format::json : Format::csv;
}

inline void save(const Table& t, const std::string& path) { write_file(path, render(t, format_of_path(path))); }
inline Table load(const std::string& path) { return parse(read_file(path), format_of_path(path)); }

}  // namespace hubbard::io
