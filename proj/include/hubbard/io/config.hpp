#pragma once
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "hubbard/errors.hpp"
#include "hubbard/io/table.hpp"
#include "hubbard/lattice.hpp"

namespace hubbard::io {

// Raised for malformed or inconsistent configuration; the message names the offending key.
struct config_error : domain_error {
    using domain_error::domain_error;
};

// Nested configuration:
//   lattice.{extent, J, U, boundary}, model, experiment,
//   numeric.{t_final, dt, grid, E0, tau, a, T, samples, pulse, k, range, particles}, output.{path, format}
// Values from a file are merged over defaults; flags override with dotted keys.
class RunConfig {
public:
    RunConfig() : data_(defaults()) {}

    static json defaults() {
        return json{
            {"lattice", {{"extent", json::array({64})}, {"J", 0.1}, {"U", 1.0}, {"boundary", "periodic"}}},
            {"model", "bose"},
            {"experiment", "ground"},
            {"numeric",
             {{"t_final", 5.0}, {"dt", 1e-3}, {"grid", 64}, {"E0", 0.0}, {"tau", 1.0}, {"a", 0.0}, {"T", 0.1},
              {"samples", 51}, {"pulse", "sauter"}, {"k", 0.0}, {"range", ""}, {"particles", 0}}},
            {"output", {{"path", ""}, {"format", "csv"}}},
        };
    }

    static RunConfig from_text(const std::string& text) {
        json j;
        try {
            j = json::parse(text, nullptr, true, true);
        } catch (const json::parse_error& e) {
            throw config_error(std::string("config is not valid JSON: ") + e.what());
        }
        RunConfig c;
        c.merge(j, "");
        return c;
    }
    static RunConfig from_file(const std::string& path) { return from_text(read_file(path)); }

    // Override one dotted key with a value written as on the command line.
    void set(const std::string& key, const std::string& raw) {
        json& slot = locate(key);
        explicit_.insert(key);
        try {
            if (slot.is_string()) {
                slot = raw;
            } else if (slot.is_array()) {
                json arr = json::array();
                std::size_t pos = 0;
                while (pos <= raw.size()) {
                    auto next = raw.find_first_of("x,", pos);
                    arr.push_back(std::stoi(raw.substr(pos, next - pos)));
                    if (next == std::string::npos) break;
                    pos = next + 1;
                }
                slot = arr;
            } else if (slot.is_number_integer()) {
                slot = std::stoi(raw);
            } else {
                slot = parse_double(raw);
            }
        } catch (const std::logic_error&) {
            throw config_error("key '" + key + "': cannot parse '" + raw + "'");
        }
    }

    double number(const std::string& key) const { return const_cast<RunConfig*>(this)->locate(key).get<double>(); }
    int integer(const std::string& key) const { return const_cast<RunConfig*>(this)->locate(key).get<int>(); }
    std::string text(const std::string& key) const {
        return const_cast<RunConfig*>(this)->locate(key).get<std::string>();
    }
    const json& data() const { return data_; }
    bool explicitly_set(const std::string& key) const { return explicit_.count(key) > 0; }

    LatticeSpec lattice() const {
        LatticeSpec s;
        s.extent = data_["lattice"]["extent"].get<std::vector<int>>();
        s.J = number("lattice.J");
        s.U = number("lattice.U");
        s.boundary = boundary_from_string(text("lattice.boundary"));
        return s;
    }

    void validate() const {
        for (const char* key : {"lattice.J", "lattice.U", "numeric.t_final", "numeric.dt", "numeric.E0", "numeric.tau",
                                "numeric.a", "numeric.T"}) {
            double v = number(key);
            if (!std::isfinite(v) || v < 0.0) throw config_error("key '" + std::string(key) + "' must be non-negative");
        }
        if (!(number("numeric.dt") > 0.0)) throw config_error("key 'numeric.dt' must be positive");
        if (!(number("numeric.dt") < number("numeric.t_final")) && number("numeric.t_final") > 0.0)
            throw config_error("key 'numeric.dt' must be smaller than numeric.t_final");
        if (integer("numeric.grid") < 1) throw config_error("key 'numeric.grid' must be at least 1");
        if (integer("numeric.particles") < 0) throw config_error("key 'numeric.particles' must be non-negative");
        if (integer("numeric.samples") < 1) throw config_error("key 'numeric.samples' must be at least 1");
        auto extent = data_["lattice"]["extent"];
        if (extent.empty() || extent.size() > 3) throw config_error("key 'lattice.extent' needs 1 to 3 entries");
        for (const auto& e : extent)
            if (e.get<int>() < 1) throw config_error("key 'lattice.extent' entries must be positive");
        auto model = text("model");
        if (model != "bose" && model != "fermi") throw config_error("key 'model' must be bose or fermi");
        if (!(number("lattice.U") > 0.0)) throw config_error("key 'lattice.U' must be positive");
        try {
            boundary_from_string(text("lattice.boundary"));
            format_from_string(text("output.format"));
        } catch (const domain_error& e) {
            throw config_error(e.what());
        }
    }

private:
    json& locate(const std::string& key) {
        json* node = &data_;
        std::size_t pos = 0;
        while (true) {
            auto dot = key.find('.', pos);
            std::string part = key.substr(pos, dot - pos);
            if (!node->is_object() || !node->contains(part)) throw config_error("unknown config key '" + key + "'");
            node = &(*node)[part];
            if (dot == std::string::npos) return *node;
            pos = dot + 1;
        }
    }

    void merge(const json& j, const std::string& prefix) {
        if (!j.is_object()) throw config_error("config section '" + prefix + "' must be an object");
        for (const auto& [k, v] : j.items()) {
            std::string key = prefix.empty() ? k : prefix + "." + k;
            json& slot = locate(key);
            if (slot.is_object()) {
                merge(v, key);
                continue;
            }
            bool ok = (slot.is_string() && v.is_string()) || (slot.is_array() && v.is_array()) ||
                      (slot.is_number_integer() && v.is_number_integer()) ||
                      (slot.is_number_float() && v.is_number());
            if (!ok) throw config_error("key '" + key + "' has the wrong type");
            slot = slot.is_number_float() ? json(v.get<double>()) : v;
            explicit_.insert(key);
        }
    }

    json data_;
    std::set<std::string> explicit_;
};

}  // namespace hubbard::io
