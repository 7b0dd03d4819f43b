#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace hotstream {

/// Exact fraction num/den over 64-bit integers, always reduced with den > 0.
///
/// Thresholds such as ceil(gamma * t) and floor((phi - eps) * t) are computed
/// through `floor_mul` / `ceil_mul`, which widen to 128 bits so that stream
/// positions up to 2^63 never overflow the intermediate product.
class Rational {
public:
    constexpr Rational() noexcept = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    /// Parses "p/q", "p" or "-p/q". Throws Error(parse_error) on bad input.
    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    std::int64_t floor() const noexcept;
    std::int64_t ceil() const noexcept;

    /// floor(this * k) and ceil(this * k), exact.
    std::int64_t floor_mul(std::int64_t k) const;
    std::int64_t ceil_mul(std::int64_t k) const;

    bool is_integer() const noexcept { return den_ == 1; }
    bool positive() const noexcept { return num_ > 0; }

    std::string str() const;
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace hotstream
