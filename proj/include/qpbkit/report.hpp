#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qpbkit/checks.hpp"
#include "qpbkit/cyclotomic.hpp"
#include "qpbkit/textio.hpp"

namespace qpbkit {

inline const char* tool_version() { return "qpbkit 1.0.0"; }

// One executed check with its stable identifier.
struct CheckRecord {
    std::string name;
    std::string anchor;  // stable machine identifier of the verified identity
    bool pass = false;
    std::string witness;
};

// Deterministic structured run report: stable ordering, canonical scalar
// printing, and named exact-value payloads for golden comparisons.
struct Report {
    std::string version = tool_version();
    std::string input_digest;
    std::vector<CheckRecord> checks;
    // named matrices of canonical scalar strings (frames, connections, ...)
    std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> data;
    int conductor = 1;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(const CheckReport& rep, const std::string& prefix) {
        for (const auto& c : rep.checks)
            checks.push_back({prefix + "." + c.name, "qpbkit." + prefix + "." + c.name,
                              c.pass, c.witness});
    }
    void add_check(const std::string& name, bool pass, const std::string& witness = "") {
        checks.push_back({name, "qpbkit." + name, pass, witness});
    }
    void add_matrix(const std::string& name, const Matrix& m) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::vector<std::string> row;
            for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
            rows.push_back(std::move(row));
        }
        data.push_back({name, std::move(rows)});
    }
    void add_vector(const std::string& name, const Vec& v) {
        std::vector<std::vector<std::string>> rows(1);
        for (const auto& x : v) rows[0].push_back(x.to_string());
        data.push_back({name, std::move(rows)});
    }
};

inline std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline nlohmann::ordered_json report_to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["tool"] = r.version;
    j["input_digest"] = r.input_digest;
    j["conductor"] = r.conductor;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["anchor"] = c.anchor;
        jc["status"] = c.pass ? "pass" : "fail";
        jc["witness"] = c.witness;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    for (const auto& [name, rows] : r.data) data[name] = rows;
    j["data"] = data;
    std::size_t passed = 0;
    for (const auto& c : r.checks)
        if (c.pass) ++passed;
    j["summary"] = {{"total", r.checks.size()},
                    {"passed", passed},
                    {"failed", r.checks.size() - passed}};
    return j;
}

inline std::string report_to_text(const Report& r) {
    std::string out;
    out += r.version;
    out += "\ninput digest: " + r.input_digest + "\n";
    for (const auto& c : r.checks) {
        out += c.pass ? "PASS " : "FAIL ";
        out += c.name;
        if (!c.witness.empty()) out += "  [" + c.witness + "]";
        out += "\n";
    }
    for (const auto& [name, rows] : r.data) {
        out += name + " =\n";
        for (const auto& row : rows) {
            out += "  ";
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (j) out += ", ";
                out += row[j];
            }
            out += "\n";
        }
    }
    std::size_t passed = 0;
    for (const auto& c : r.checks)
        if (c.pass) ++passed;
    out += "summary: " + std::to_string(passed) + "/" + std::to_string(r.checks.size()) +
           " checks passed\n";
    return out;
}

// Field-by-field comparison of two JSON reports. Check lists are canonicalized
// by name; data cells are compared as exact scalars, not strings.
struct GoldenDiff {
    bool equal = true;
    std::vector<std::string> differences;

    void note(const std::string& d) {
        equal = false;
        differences.push_back(d);
    }
};

inline GoldenDiff diff_golden(const nlohmann::ordered_json& a, const nlohmann::ordered_json& b) {
    GoldenDiff out;
    auto canon_checks = [](const nlohmann::ordered_json& j) {
        std::vector<nlohmann::ordered_json> cs;
        if (j.contains("checks"))
            for (const auto& c : j["checks"]) cs.push_back(c);
        std::sort(cs.begin(), cs.end(),
                  [](const nlohmann::ordered_json& x, const nlohmann::ordered_json& y) {
                      return x.value("name", "") < y.value("name", "");
                  });
        return cs;
    };
    auto ca = canon_checks(a), cb = canon_checks(b);
    if (ca.size() != cb.size()) {
        out.note("check count " + std::to_string(ca.size()) + " vs " +
                 std::to_string(cb.size()));
    } else {
        for (std::size_t i = 0; i < ca.size(); ++i) {
            for (const char* field : {"name", "anchor", "status", "witness"}) {
                if (ca[i].value(field, "") != cb[i].value(field, ""))
                    out.note("check '" + ca[i].value("name", "") + "' differs in " + field);
            }
        }
    }
    int cond_a = a.value("conductor", 1), cond_b = b.value("conductor", 1);
    auto da = a.contains("data") ? a["data"] : nlohmann::ordered_json::object();
    auto db = b.contains("data") ? b["data"] : nlohmann::ordered_json::object();
    for (auto it = da.begin(); it != da.end(); ++it) {
        if (!db.contains(it.key())) {
            out.note("data '" + it.key() + "' missing in the second report");
            continue;
        }
        const auto& ra = it.value();
        const auto& rb = db[it.key()];
        if (ra.size() != rb.size()) {
            out.note("data '" + it.key() + "' has different shape");
            continue;
        }
        for (std::size_t i = 0; i < ra.size(); ++i) {
            if (ra[i].size() != rb[i].size()) {
                out.note("data '" + it.key() + "' has different shape");
                break;
            }
            for (std::size_t j = 0; j < ra[i].size(); ++j) {
                CycScalar va = textio::parse_scalar(ra[i][j].get<std::string>(), cond_a);
                CycScalar vb = textio::parse_scalar(rb[i][j].get<std::string>(), cond_b);
                if (va != vb)
                    out.note("data '" + it.key() + "' differs at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
            }
        }
    }
    for (auto it = db.begin(); it != db.end(); ++it)
        if (!da.contains(it.key())) out.note("data '" + it.key() + "' missing in the first report");
    return out;
}

}  // namespace qpbkit
