#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace unitclust {

/// Exact non-negative rational, always stored reduced with den > 0.
/// Comparison is by cross-multiplication in 128 bits, so 13/8 == 26/16.
struct Ratio {
    long long num = 0;
    long long den = 1;

    constexpr Ratio() = default;

    Ratio(long long n, long long d) {
        if (d == 0) throw std::domain_error("ratio: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const long long g = std::gcd(n < 0 ? -n : n, d);
        num = n / g;
        den = d / g;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    double approx() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Ratio& a, const Ratio& b) {
        return a.num == b.num && a.den == b.den;
    }

    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
        const __int128 lhs = static_cast<__int128>(a.num) * b.den;
        const __int128 rhs = static_cast<__int128>(b.num) * a.den;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
};

/// Parses "13/8" or a bare integer "2". Throws std::invalid_argument on anything else.
Ratio parse_ratio(std::string_view text);

/// C_ON / C_OPT as an exact reduced fraction. opt_cost must be >= 1.
inline Ratio cost_ratio(long long on_cost, long long opt_cost) {
    if (opt_cost == 0) throw std::domain_error("cost ratio undefined: OPT cost is zero");
    return Ratio(on_cost, opt_cost);
}

}  // namespace unitclust
