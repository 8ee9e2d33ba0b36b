#pragma once

#include <charconv>
#include <string>

namespace ztpgini {

/// Locale-independent decimal text. precision 0 gives the shortest string
/// that round-trips; otherwise `precision` significant digits.
inline std::string format_number(double value, int precision = 0) {
    char buf[64];
    auto res = precision > 0 ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, precision)
                             : std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Fixed notation with `decimals` digits after the point.
inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

}  // namespace ztpgini

#include <optional>
#include <string_view>

namespace ztpgini {

/// Whole-string, locale-independent parse; nullopt on any leftover text.
template <typename T>
std::optional<T> parse_number(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

}  // namespace ztpgini
