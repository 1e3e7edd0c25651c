#pragma once

#include <string>
#include <vector>

namespace qpbkit {

// One verified identity: name, outcome, and a witness locating the first
// failure (empty on pass).
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct CheckReport {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(std::string name, bool pass, std::string witness = "") {
        checks.push_back({std::move(name), pass, std::move(witness)});
    }

    void merge(const CheckReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

}  // namespace qpbkit
