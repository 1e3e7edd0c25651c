#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/hopf.hpp"

namespace qpbkit {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int l, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

namespace textio {

// --- scalar syntax ------------------------------------------------------------
//
// rationals as p/q, cyclotomics as polynomials in z: "1/2 + 1/2*z^3".

inline CycScalar parse_scalar(const std::string& text, int conductor, int line = 0) {
    CycScalar acc = CycScalar::zero(conductor);
    std::size_t i = 0;
    auto skip_ws = [&]() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) throw ParseError(line, "empty scalar");
    bool first = true;
    while (true) {
        skip_ws();
        if (i == text.size()) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw ParseError(line, "expected '+' or '-' in scalar");
        }
        // monomial: [p[/q]] [*] [z[^k]]
        Rational coeff(1);
        bool have_coeff = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            BigInt num = BigInt::from_string(text.substr(i, j - i));
            i = j;
            skip_ws();
            BigInt den(1);
            if (i < text.size() && text[i] == '/') {
                ++i;
                skip_ws();
                std::size_t k = i;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                if (k == i) throw ParseError(line, "expected denominator");
                den = BigInt::from_string(text.substr(i, k - i));
                if (den.is_zero()) throw ParseError(line, "zero denominator");
                i = k;
            }
            coeff = Rational(num, den);
            have_coeff = true;
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        long long power = 0;
        bool have_z = false;
        if (i < text.size() && text[i] == 'z') {
            have_z = true;
            ++i;
            power = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                std::size_t k = i;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                if (k == i) throw ParseError(line, "expected exponent after '^'");
                power = std::stoll(text.substr(i, k - i));
                i = k;
            }
        }
        if (!have_coeff && !have_z) throw ParseError(line, "expected scalar term");
        CycScalar term = CycScalar::cyc(sign < 0 ? -coeff : coeff, power, conductor);
        acc += term;
        first = false;
        skip_ws();
        if (i < text.size() && text[i] != '+' && text[i] != '-')
            throw ParseError(line, "unexpected character in scalar: '" +
                                        std::string(1, text[i]) + "'");
    }
    return acc;
}

// Algebra-element expressions: sums of [coeff *] label with coefficients either
// plain rationals / z-monomials or parenthesized scalars, e.g.
// "b1 - b2", "1/2*b1 + (1/2 + 1/2*z^3)*b4".
inline AlgElem parse_element(const std::string& text,
                             const std::map<std::string, std::size_t>& labels,
                             std::size_t dim, int conductor, int line = 0) {
    AlgElem out(dim, CycScalar(0));
    std::size_t i = 0;
    auto skip_ws = [&]() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    bool first = true;
    while (true) {
        skip_ws();
        if (i == text.size()) {
            if (first) throw ParseError(line, "empty element expression");
            break;
        }
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw ParseError(line, "expected '+' or '-' in element expression");
        }
        CycScalar coeff = CycScalar::one(conductor);
        if (i < text.size() && text[i] == '(') {
            std::size_t depth = 1, j = i + 1;
            while (j < text.size() && depth) {
                if (text[j] == '(') ++depth;
                if (text[j] == ')') --depth;
                ++j;
            }
            if (depth) throw ParseError(line, "unbalanced parenthesis");
            coeff = parse_scalar(text.substr(i + 1, j - i - 2), conductor, line);
            i = j;
            skip_ws();
            if (i >= text.size() || text[i] != '*')
                throw ParseError(line, "expected '*' after coefficient");
            ++i;
            skip_ws();
        } else if (i < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == 'z')) {
            std::size_t j = i;
            while (j < text.size() && text[j] != '*') ++j;
            if (j >= text.size())
                throw ParseError(line, "scalar term without a basis label");
            coeff = parse_scalar(text.substr(i, j - i), conductor, line);
            i = j + 1;
            skip_ws();
        }
        std::size_t j = i;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                   text[j] == '_'))
            ++j;
        if (j == i) throw ParseError(line, "expected basis label");
        std::string label = text.substr(i, j - i);
        auto it = labels.find(label);
        if (it == labels.end()) throw ParseError(line, "unknown basis label '" + label + "'");
        i = j;
        CycScalar c = sign < 0 ? -coeff : coeff;
        out[it->second] += c;
        first = false;
    }
    return out;
}

// --- the sectioned input file ---------------------------------------------------

struct KeyValue {
    std::string key, value;
    int line = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::vector<KeyValue> entries;

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& kv : entries)
            if (kv.key == key) return kv.value;
        return std::nullopt;
    }
    std::string require(const std::string& key) const {
        auto v = get(key);
        if (!v) throw ParseError(line, "section [" + name + "] is missing '" + key + "'");
        return *v;
    }
    std::vector<const KeyValue*> all(const std::string& key) const {
        std::vector<const KeyValue*> out;
        for (const auto& kv : entries)
            if (kv.key == key) out.push_back(&kv);
        return out;
    }
};

struct InputFile {
    int conductor = 1;
    std::vector<Section> sections;

    const Section* find(const std::string& name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }
    std::vector<const Section*> find_all(const std::string& name) const {
        std::vector<const Section*> out;
        for (const auto& s : sections)
            if (s.name == name) out.push_back(&s);
        return out;
    }
};

inline InputFile parse_input(const std::string& content) {
    InputFile file;
    Section preamble{"", 0, {}};
    Section* current = &preamble;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string line = content.substr(pos, eol == std::string::npos ? std::string::npos
                                                                        : eol - pos);
        pos = eol == std::string::npos ? content.size() + 1 : eol + 1;
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        line = line.substr(b, e - b);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, "malformed section header");
            file.sections.push_back(Section{line.substr(1, line.size() - 2), lineno, {}});
            current = &file.sections.back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string s) {
            std::size_t b2 = 0, e2 = s.size();
            while (b2 < e2 && std::isspace(static_cast<unsigned char>(s[b2]))) ++b2;
            while (e2 > b2 && std::isspace(static_cast<unsigned char>(s[e2 - 1]))) --e2;
            return s.substr(b2, e2 - b2);
        };
        key = trim(key);
        value = trim(value);
        if (key.empty()) throw ParseError(lineno, "empty key");
        if (current == &preamble) {
            if (key == "conductor") {
                file.conductor = std::stoi(value);
                if (file.conductor < 1) throw ParseError(lineno, "conductor must be >= 1");
            } else {
                throw ParseError(lineno, "unexpected key outside a section: '" + key + "'");
            }
        } else {
            current->entries.push_back({key, value, lineno});
        }
    }
    return file;
}

inline CayleyTable parse_cayley(const std::string& text, int line) {
    CayleyTable t;
    std::vector<std::size_t> row;
    std::size_t i = 0;
    auto flush_row = [&]() {
        if (!row.empty()) {
            t.push_back(row);
            row.clear();
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            long v = std::stol(text.substr(i, j - i));
            if (v < 1) throw ParseError(line, "Cayley entries are 1-based");
            row.push_back(static_cast<std::size_t>(v - 1));
            i = j;
        } else if (c == ';') {
            flush_row();
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            ++i;
        } else {
            throw ParseError(line, "unexpected character in Cayley table");
        }
    }
    flush_row();
    if (t.empty()) throw ParseError(line, "empty Cayley table");
    return t;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace textio
}  // namespace qpbkit
