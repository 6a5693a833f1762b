#include "gnde/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gnde/errors.hpp"

namespace gnde {

namespace {

std::string trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || c == ';') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    std::string last = trim(cur);
    if (!last.empty() || !out.empty()) out.push_back(last);
    return out;
}

}  // namespace

KeyValues KeyValues::parse(std::istream& in) {
    KeyValues kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key = value, got '" + body + "'", lineno);
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty()) throw ParseError("empty key", lineno);
        kv.values_[key] = trim(std::string_view(body).substr(eq + 1));
    }
    return kv;
}

KeyValues KeyValues::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
}

KeyValues KeyValues::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    return parse(in);
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_double(*v);
    } catch (const ParseError& e) {
        throw ParseError("key '" + key + "': " + e.what());
    }
}

std::int64_t KeyValues::get_int(const std::string& key, std::int64_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_int(*v);
    } catch (const ParseError& e) {
        throw ParseError("key '" + key + "': " + e.what());
    }
}

std::uint64_t KeyValues::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    errno = 0;
    char* end = nullptr;
    unsigned long long x = std::strtoull(v->c_str(), &end, 10);
    if (errno != 0 || end == v->c_str() || *end != '\0' || (*v)[0] == '-') {
        throw ParseError("key '" + key + "': not an unsigned integer: '" + *v + "'");
    }
    return static_cast<std::uint64_t>(x);
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
    if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
    throw ParseError("key '" + key + "': not a boolean: '" + *v + "'");
}

std::vector<double> KeyValues::get_doubles(const std::string& key,
                                           std::vector<double> fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    return parse_double_list(*v);
}

std::vector<std::int64_t> KeyValues::get_ints(const std::string& key,
                                              std::vector<std::int64_t> fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    return parse_int_list(*v);
}

double parse_double(std::string_view text) {
    std::string s = trim(text);
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ParseError("not a number: '" + s + "'");
    }
    return x;
}

std::int64_t parse_int(std::string_view text) {
    std::string s = trim(text);
    errno = 0;
    char* end = nullptr;
    long long x = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ParseError("not an integer: '" + s + "'");
    }
    return static_cast<std::int64_t>(x);
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(item));
    return out;
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(text)) out.push_back(parse_int(item));
    return out;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace gnde
