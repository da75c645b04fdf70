#include "smi/sigfig.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace smi {

std::string shortest(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
    return std::string(buf, end);
}

std::string to_significant(double value, int digits) {
    if (digits < 1) digits = 1;
    if (!std::isfinite(value)) return shortest(value);
    if (value == 0.0) return digits > 1 ? "0." + std::string(static_cast<std::size_t>(digits - 1), '0') : "0";

    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
    std::string sci(buf, end);

    const bool negative = sci.front() == '-';
    if (negative) sci.erase(0, 1);
    const auto e_pos = sci.find('e');
    int exponent = std::stoi(sci.substr(e_pos + 1));
    std::string mantissa;
    for (char c : sci.substr(0, e_pos))
        if (c != '.') mantissa += c;

    // Keep `digits` digits, half away from zero on the decimal string.
    std::string kept = mantissa.substr(0, std::min<std::size_t>(mantissa.size(), static_cast<std::size_t>(digits)));
    kept.resize(static_cast<std::size_t>(digits), '0');
    if (mantissa.size() > static_cast<std::size_t>(digits) && mantissa[static_cast<std::size_t>(digits)] >= '5') {
        int i = digits - 1;
        for (; i >= 0; --i) {
            if (kept[static_cast<std::size_t>(i)] == '9') {
                kept[static_cast<std::size_t>(i)] = '0';
            } else {
                ++kept[static_cast<std::size_t>(i)];
                break;
            }
        }
        if (i < 0) {
            kept.insert(kept.begin(), '1');
            kept.pop_back();
            ++exponent;
        }
    }

    std::string out;
    const int decimals = digits - 1 - exponent;
    if (decimals <= 0) {
        out = kept + std::string(static_cast<std::size_t>(-decimals), '0');
    } else if (exponent < 0) {
        out = "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + kept;
    } else {
        const auto int_len = static_cast<std::size_t>(exponent + 1);
        out = kept.substr(0, int_len) + "." + kept.substr(int_len);
    }
    return negative ? "-" + out : out;
}

}  // namespace smi
