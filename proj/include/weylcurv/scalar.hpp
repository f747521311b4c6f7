#pragma once

#include <gmpxx.h>

#include <cmath>
#include <ostream>
#include <string>
#include <string_view>

#include "weylcurv/errors.hpp"

namespace weylcurv {

// Exact rational scalar backed by GMP. Always kept canonical: denominator
// positive, fraction in lowest terms. All arithmetic is exact.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long value) : v_(value) {}  // NOLINT: implicit on purpose for integer literals
    Rational(long num, long den) {
        if (den == 0) throw Error("rational with zero denominator");
        v_ = mpq_class(mpz_class(num), mpz_class(den));
        v_.canonicalize();
    }

    // Parses "p" or "p/q" with an optional leading sign. U+2212 is accepted
    // as a minus sign. Throws ParseError on malformed input or q = 0.
    static Rational from_string(std::string_view text);

    std::string to_string() const { return v_.get_str(); }
    double to_double() const { return v_.get_d(); }
    int sign() const { return sgn(v_); }

    Rational& operator+=(const Rational& o) {
        v_ += o.v_;
        return *this;
    }
    Rational& operator-=(const Rational& o) {
        v_ -= o.v_;
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        v_ *= o.v_;
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.sign() == 0) throw Error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) {
        Rational r;
        r.v_ = -a.v_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    friend Rational abs(const Rational& a) {
        Rational r;
        r.v_ = ::abs(a.v_);
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x) {
        return os << x.v_.get_str();
    }

private:
    mpq_class v_;
};

inline Rational Rational::from_string(std::string_view text) {
    // Normalize: trim ASCII whitespace, fold U+2212 to '-'.
    std::string s;
    s.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x88 &&
            static_cast<unsigned char>(text[i + 2]) == 0x92) {
            s.push_back('-');
            i += 3;
        } else {
            s.push_back(text[i]);
            ++i;
        }
    }
    std::size_t lo = s.find_first_not_of(" \t");
    std::size_t hi = s.find_last_not_of(" \t");
    if (lo == std::string::npos) throw ParseError("empty rational literal");
    s = s.substr(lo, hi - lo + 1);

    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    std::size_t num_begin = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == num_begin) throw ParseError("malformed rational literal '" + s + "'");
    std::string num = s.substr(0, i);
    if (num[0] == '+') num.erase(0, 1);  // mpz_set_str rejects a leading '+'
    std::string den = "1";
    if (i < s.size()) {
        if (s[i] != '/') throw ParseError("malformed rational literal '" + s + "'");
        ++i;
        std::size_t den_begin = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        if (i == den_begin || i != s.size())
            throw ParseError("malformed rational literal '" + s + "'");
        den = s.substr(den_begin);
    }

    mpz_class d(den, 10);
    if (d == 0) throw ParseError("rational literal with zero denominator '" + s + "'");
    Rational r;
    r.v_ = mpq_class(mpz_class(num, 10), d);
    r.v_.canonicalize();
    return r;
}

// Scalar-mode traits. The exact mode (Rational) tests zero exactly; the
// floating mode (double) compares against a fixed tolerance. Every templated
// operation talks to the scalar through these, so both modes share one
// interface.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(); }
    static Rational from_fraction(long num, long den) { return Rational(num, den); }
    static bool is_zero(const Rational& x) { return x.sign() == 0; }
    static Rational abs_value(const Rational& x) { return abs(x); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr double tolerance = 1e-10;
    static double zero() { return 0.0; }
    static double from_fraction(long num, long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static bool is_zero(double x) { return std::fabs(x) <= tolerance; }
    static double abs_value(double x) { return std::fabs(x); }
};

}  // namespace weylcurv
