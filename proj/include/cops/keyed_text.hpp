#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cops/text.hpp"
#include "cops/types.hpp"

namespace cops {
namespace detail {

// Line-oriented "key: value" files with a mandatory leading format pin.
// Keys may appear in any order but each exactly once; '#' lines and blank
// lines are skipped. Shared by the model and plan file formats.
struct KeyedText {
    std::string path;
    std::map<std::string, std::string, std::less<>> values;
    std::map<std::string, std::size_t, std::less<>> lines;

    [[noreturn]] void fail(std::string_view key, const std::string& message) const {
        auto it = lines.find(key);
        std::string at = it == lines.end() ? path : path + " line " + std::to_string(it->second);
        throw std::runtime_error(at + ": " + message);
    }

    bool has(std::string_view key) const { return values.find(key) != values.end(); }

    const std::string& get(std::string_view key) const {
        auto it = values.find(key);
        if (it == values.end())
            throw std::runtime_error(path + ": missing key '" + std::string(key) + "'");
        return it->second;
    }

    double get_double(std::string_view key) const {
        double v = 0.0;
        if (!parse_double(get(key), v))
            fail(key, "invalid number '" + get(key) + "' for key '" + std::string(key) + "'");
        return v;
    }

    long long get_ll(std::string_view key) const {
        long long v = 0;
        if (!parse_ll(get(key), v))
            fail(key, "invalid integer '" + get(key) + "' for key '" + std::string(key) + "'");
        return v;
    }

    double get_double_or(std::string_view key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    long long get_ll_or(std::string_view key, long long fallback) const {
        return has(key) ? get_ll(key) : fallback;
    }

    Vector get_vector(std::string_view key) const {
        std::vector<std::string_view> parts = split_list(get(key));
        Vector v(static_cast<Index>(parts.size()));
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (!parse_double(parts[i], v[static_cast<Index>(i)]))
                fail(key, "invalid number '" + std::string(parts[i]) + "' for key '" +
                              std::string(key) + "'");
        return v;
    }

    std::vector<std::string> get_names(std::string_view key) const {
        std::vector<std::string> out;
        for (auto p : split_list(get(key))) out.emplace_back(p);
        return out;
    }

    // Exactly two numbers: a (mean, scale) or (min, max) pair.
    std::pair<double, double> get_pair(std::string_view key) const {
        Vector v = get_vector(key);
        if (v.size() != 2)
            fail(key, "key '" + std::string(key) + "' needs exactly 2 values, got " +
                          std::to_string(v.size()));
        return {v[0], v[1]};
    }

    // Rejects keys outside the known set; catches typos early.
    void require_known(const std::vector<std::string_view>& known) const {
        for (const auto& [key, value] : values) {
            bool ok = false;
            for (auto k : known) ok = ok || key == k;
            if (!ok) fail(key, "unknown key '" + key + "'");
        }
    }
};

// Reads one keyed file whose first content line must be
// "format: <format_value>"; `what` names the file kind in errors.
inline KeyedText read_keyed_text(const std::string& path, const char* format_value,
                                 const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(std::string("cannot open ") + what + " file: " + path);

    KeyedText text;
    text.path = path;
    std::string line;
    std::size_t line_no = 0;
    bool saw_format = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        if (!saw_format) {
            if (body != std::string("format: ") + format_value)
                throw std::runtime_error(path + " line " + std::to_string(line_no) + ": not a " +
                                         what + " file (expected 'format: " + format_value + "')");
            saw_format = true;
            continue;
        }
        std::size_t colon = body.find(':');
        if (colon == std::string_view::npos)
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected 'key: value'");
        std::string key(trim(body.substr(0, colon)));
        std::string value(trim(body.substr(colon + 1)));
        if (!text.values.emplace(key, value).second)
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": duplicate key '" + key + "'");
        text.lines.emplace(key, line_no);
    }
    if (!saw_format)
        throw std::runtime_error(path + ": not a " + std::string(what) + " file (expected 'format: " +
                                 format_value + "')");
    return text;
}

inline std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (n.empty()) throw std::invalid_argument("keyed file: empty name in list");
        for (char ch : n)
            if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == ':')
                throw std::invalid_argument("keyed file: name '" + n +
                                            "' contains whitespace or ':'");
        if (!out.empty()) out += ' ';
        out += n;
    }
    return out;
}

inline std::string join_vector(const Vector& v) {
    std::string out;
    for (Index i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v[i]);
    }
    return out;
}

} // namespace detail
} // namespace cops
