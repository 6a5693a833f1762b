#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gnde {

/// Flat `key = value` record. Blank lines and `#` comments are ignored; later keys win.
class KeyValues {
public:
    KeyValues() = default;

    static KeyValues parse(std::istream& in);
    static KeyValues parse(std::string_view text);
    static KeyValues load(const std::string& path);

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
    std::vector<std::int64_t> get_ints(const std::string& key,
                                       std::vector<std::int64_t> fallback) const;

    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);
std::vector<std::int64_t> parse_int_list(std::string_view text);

/// Shortest "%g" form that parses back to the same double.
std::string format_double(double value);

}  // namespace gnde
