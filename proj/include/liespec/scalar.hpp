#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>

#include "liespec/errors.hpp"

namespace liespec {

using Rational = boost::multiprecision::cpp_rational;
using Complexd = std::complex<double>;

/// Complex number with exact Gaussian-rational coordinates.
/// Arithmetic is closed and exact; fractions stay reduced (cpp_rational invariant).
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(long num, long den) : re(Rational(num, den)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw Error("GaussianRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
    GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline GaussianRational conj(const GaussianRational& a) { return {a.re, -a.im}; }

/// |a|^2 as an exact rational.
inline Rational abs2_exact(const GaussianRational& a) { return a.re * a.re + a.im * a.im; }

inline Complexd to_complexd(const GaussianRational& a) {
    return {static_cast<double>(a.re), static_cast<double>(a.im)};
}
inline Complexd to_complexd(const Complexd& a) { return a; }

/// Exact square root of a nonnegative rational, when the result is rational.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    using boost::multiprecision::cpp_int;
    if (r < 0) return std::nullopt;
    if (r == 0) return Rational(0);
    cpp_int num = numerator(r), den = denominator(r);
    cpp_int sn = sqrt(num), sd = sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

/// Traits shared by the two scalar backends. Everything downstream (Matrix,
/// rank, homology, spectrum) is templated over the backend scalar.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Complexd> {
    static constexpr bool is_exact = false;
    static Complexd zero() { return {0.0, 0.0}; }
    static Complexd one() { return {1.0, 0.0}; }
    static Complexd from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static double abs(const Complexd& a) { return std::abs(a); }
    static Complexd conj(const Complexd& a) { return std::conj(a); }
    static bool is_zero(const Complexd& a) { return a == Complexd{0.0, 0.0}; }
    static bool is_finite(const Complexd& a) {
        return std::isfinite(a.real()) && std::isfinite(a.imag());
    }
};

template <>
struct scalar_traits<GaussianRational> {
    static constexpr bool is_exact = true;
    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return {Rational(1)}; }
    static GaussianRational from_int(long v) { return {Rational(v)}; }
    static double abs(const GaussianRational& a) {
        return std::sqrt(static_cast<double>(abs2_exact(a)));
    }
    static GaussianRational conj(const GaussianRational& a) { return liespec::conj(a); }
    static bool is_zero(const GaussianRational& a) { return a.is_zero(); }
    static bool is_finite(const GaussianRational&) { return true; }
};

template <class S>
concept ScalarBackend = std::is_same_v<S, Complexd> || std::is_same_v<S, GaussianRational>;

// ---------------------------------------------------------------------------
// Parsing and formatting
// ---------------------------------------------------------------------------

namespace detail {

inline void skip_ws(const std::string& s, size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

// Parses a signed rational "p", "p/q" starting at pos.
inline Rational parse_rational_at(const std::string& s, size_t& pos) {
    skip_ws(s, pos);
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
    if (digits == 0) throw ParseError("expected a rational number in '" + s + "'");
    std::string num = s.substr(start, pos - start);
    std::string den = "1";
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        size_t dstart = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == dstart) throw ParseError("expected a denominator in '" + s + "'");
        den = s.substr(dstart, pos - dstart);
    }
    Rational d{boost::multiprecision::cpp_int(den)};
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational{boost::multiprecision::cpp_int(num)} / d;
}

}  // namespace detail

/// Parses "p/q", "p", "p/q+r/s i", "p/q-r/s i", "r/s i" (spaces around signs
/// and before the trailing i are allowed).
inline GaussianRational parse_gaussian_rational(const std::string& s) {
    size_t pos = 0;
    Rational first = detail::parse_rational_at(s, pos);
    detail::skip_ws(s, pos);
    if (pos < s.size() && s[pos] == 'i') {
        ++pos;
        detail::skip_ws(s, pos);
        if (pos != s.size()) throw ParseError("trailing characters in '" + s + "'");
        return {Rational(0), first};
    }
    if (pos == s.size()) return {first};
    if (s[pos] != '+' && s[pos] != '-') throw ParseError("malformed complex literal '" + s + "'");
    Rational second = detail::parse_rational_at(s, pos);
    detail::skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != 'i') throw ParseError("expected 'i' in '" + s + "'");
    ++pos;
    detail::skip_ws(s, pos);
    if (pos != s.size()) throw ParseError("trailing characters in '" + s + "'");
    return {first, second};
}

inline std::string format_rational(const Rational& r) {
    std::string out = numerator(r).str();
    if (denominator(r) != 1) out += "/" + denominator(r).str();
    return out;
}

/// Canonical form: "p/q" when imaginary part is zero, else "p/q+r/s i".
inline std::string format_scalar(const GaussianRational& a) {
    if (a.im == 0) return format_rational(a.re);
    std::string head = format_rational(a.re);
    std::string tail = format_rational(a.im);
    if (!tail.empty() && tail[0] != '-') tail = "+" + tail;
    return head + tail + " i";
}

/// Best rational approximation of x with |x - p/q| <= tol and q <= max_den,
/// by continued-fraction convergents. Returns nullopt when none qualifies.
inline std::optional<Rational> rationalize(double x, double tol = 1e-8,
                                           std::uint64_t max_den = 1000000) {
    if (!std::isfinite(x)) return std::nullopt;
    using boost::multiprecision::cpp_int;
    double rem = x;
    cpp_int p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // convergents p1/q1 trail p0/q0
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(rem);
        if (fl > 9.2e18 || fl < -9.2e18) return std::nullopt;
        cpp_int a(static_cast<long long>(fl));
        cpp_int p = a * p0 + p1, q = a * q0 + q1;
        if (q > max_den) break;
        p1 = p0;
        q1 = q0;
        p0 = p;
        q0 = q;
        Rational cand(p0, q0);
        double err = std::fabs(x - static_cast<double>(cand));
        if (err <= tol * std::max(1.0, std::fabs(x))) return cand;
        double frac = rem - fl;
        if (frac < 1e-18) break;
        rem = 1.0 / frac;
    }
    return std::nullopt;
}

inline std::optional<GaussianRational> rationalize_complex(const Complexd& z, double tol = 1e-8,
                                                           std::uint64_t max_den = 1000000) {
    auto re = rationalize(z.real(), tol, max_den);
    auto im = rationalize(z.imag(), tol, max_den);
    if (!re || !im) return std::nullopt;
    return GaussianRational{*re, *im};
}

}  // namespace liespec
