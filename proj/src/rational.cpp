#include "unitclust/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace unitclust {

namespace {

long long parse_int(std::string_view s) {
    long long value = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("bad ratio: '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

Ratio parse_ratio(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (text.empty()) throw std::invalid_argument("empty ratio");
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const long long num = parse_int(text.substr(0, slash));
        const long long den = parse_int(text.substr(slash + 1));
        if (den <= 0) throw std::invalid_argument("ratio denominator must be positive");
        return Ratio(num, den);
    }
    return Ratio(parse_int(text), 1);
}

}  // namespace unitclust
