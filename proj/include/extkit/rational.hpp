#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace extkit {

/// Exact rational over int64 with reduced representation, positive denominator.
/// Intermediate products go through __int128; overflow of the reduced result throws.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p/q", an integer, or a plain decimal such as "0.375" (read exactly).
    static Rational parse(const std::string& s) {
        if (s.empty()) throw parse_error("empty rational");
        auto slash = s.find('/');
        try {
            if (slash != std::string::npos) {
                std::int64_t p = std::stoll(s.substr(0, slash));
                std::int64_t q = std::stoll(s.substr(slash + 1));
                return Rational(p, q);
            }
            auto dot = s.find('.');
            if (dot == std::string::npos) return Rational(std::stoll(s));
            std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
            if (tail.empty() || tail.size() > 17) throw parse_error("bad decimal: " + s);
            for (char c : tail)
                if (c < '0' || c > '9') throw parse_error("bad decimal: " + s);
            std::int64_t scale = 1;
            for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
            bool neg = !head.empty() && head[0] == '-';
            std::int64_t ip = (head.empty() || head == "-") ? 0 : std::stoll(head);
            std::int64_t fp = std::stoll(tail);
            __int128 n = (__int128)ip * scale + (neg ? -fp : fp);
            return from128(n, scale);
        } catch (const std::invalid_argument&) {
            throw parse_error("bad rational: " + s);
        } catch (const std::out_of_range&) {
            throw parse_error("rational out of range: " + s);
        }
    }

private:
    static Rational from128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 g = gcd128(a, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = (std::int64_t)n;
        r.den_ = (std::int64_t)d;
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
    void normalize() { *this = from128(num_, den_); }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace extkit
