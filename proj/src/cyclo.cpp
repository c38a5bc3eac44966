#include "ffnt/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ffnt/error.hpp"

namespace ffnt {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

std::string int128_str(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

Rational::Rational(__int128 n, __int128 d) {
    if (d == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rational Rational::operator+(const Rational& o) const {
    __int128 g = gcd128(den, o.den);
    return Rational(num * (o.den / g) + o.num * (den / g), den / g * o.den);
}
Rational Rational::operator-(const Rational& o) const { return *this + Rational(-o.num, o.den); }
Rational Rational::operator*(const Rational& o) const {
    __int128 g1 = gcd128(num, o.den), g2 = gcd128(o.num, den);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational((num / g1) * (o.num / g2), (den / g2) * (o.den / g1));
}
Rational Rational::operator/(const Rational& o) const { return *this * Rational(o.den, o.num); }

std::string Rational::str() const { return int128_str(num) + "/" + int128_str(den); }

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
    }
}

CycloSum CycloSum::integer(uint64_t p, int64_t v) {
    CycloSum s(p);
    s.c_[0] = v;
    return s;
}

CycloSum& CycloSum::operator+=(const CycloSum& o) {
    if (p_ == 0) {
        *this = o;
        return *this;
    }
    if (o.p_ == 0) return *this;
    if (o.p_ != p_) throw Error(ErrorCode::FieldMismatch, "cyclotomic sums of different p");
    if (scale_ == o.scale_) {
        for (uint64_t j = 0; j < p_; ++j) c_[j] += o.c_[j];
        return *this;
    }
    // bring both to a common denominator with integer numerators
    Rational a = scale_, b = o.scale_;
    __int128 g = gcd128(a.den, b.den);
    __int128 L = a.den / g * b.den;
    __int128 ma = a.num * (L / a.den), mb = b.num * (L / b.den);
    for (uint64_t j = 0; j < p_; ++j) c_[j] = static_cast<int64_t>(c_[j] * ma + o.c_[j] * mb);
    scale_ = Rational(1, L);
    return *this;
}

CycloSum CycloSum::operator+(const CycloSum& o) const {
    CycloSum r = *this;
    r += o;
    return r;
}

CycloSum CycloSum::operator-(const CycloSum& o) const { return *this + o.times_int(-1); }

CycloSum CycloSum::operator*(const CycloSum& o) const {
    CycloSum r(p_);
    for (uint64_t i = 0; i < p_; ++i) {
        if (!c_[i]) continue;
        for (uint64_t j = 0; j < p_; ++j) r.c_[(i + j) % p_] += c_[i] * o.c_[j];
    }
    r.scale_ = scale_ * o.scale_;
    return r;
}

CycloSum CycloSum::times_root(uint64_t j) const {
    CycloSum r(p_);
    for (uint64_t i = 0; i < p_; ++i) r.c_[(i + j) % p_] = c_[i];
    r.scale_ = scale_;
    return r;
}

CycloSum CycloSum::times_int(int64_t m) const {
    CycloSum r = *this;
    for (auto& x : r.c_) x *= m;
    return r;
}

CycloSum CycloSum::scaled(const Rational& s) const {
    CycloSum r = *this;
    r.scale_ = scale_ * s;
    return r;
}

std::vector<int64_t> CycloSum::coeffs() const {
    std::vector<int64_t> out(p_ - 1);
    for (uint64_t j = 0; j + 1 < p_; ++j) out[j] = c_[j] - c_[p_ - 1];
    return out;
}

bool CycloSum::is_zero() const {
    for (auto x : coeffs())
        if (x) return false;
    return true;
}

bool CycloSum::is_rational() const {
    auto c = coeffs();
    for (size_t j = 1; j < c.size(); ++j)
        if (c[j]) return false;
    return true;
}

Rational CycloSum::rational_value() const { return scale_ * Rational(coeffs()[0]); }

std::complex<long double> CycloSum::value() const {
    auto c = coeffs();
    std::complex<long double> s = 0;
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    for (size_t j = 0; j < c.size(); ++j) {
        if (!c[j]) continue;
        long double ang = two_pi * static_cast<long double>(j) / static_cast<long double>(p_);
        s += static_cast<long double>(c[j]) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    return s * scale_.to_ld();
}

bool CycloSum::operator==(const CycloSum& o) const {
    if (p_ != o.p_) return false;
    auto a = coeffs(), b = o.coeffs();
    for (size_t j = 0; j < a.size(); ++j) {
        if (static_cast<__int128>(a[j]) * scale_.num * o.scale_.den !=
            static_cast<__int128>(b[j]) * o.scale_.num * scale_.den)
            return false;
    }
    return true;
}

nlohmann::json CycloSum::to_json() const {
    return nlohmann::json{{"scale", scale_.str()}, {"coeffs", coeffs()}};
}

CycloSum CycloSum::from_json(uint64_t p, const nlohmann::json& j) {
    CycloSum s(p);
    auto c = j.at("coeffs").get<std::vector<int64_t>>();
    if (c.size() != p - 1) throw Error(ErrorCode::ParseError, "coefficient vector has wrong length");
    for (size_t i = 0; i < c.size(); ++i) s.c_[i] = c[i];
    s.scale_ = Rational::parse(j.at("scale").get<std::string>());
    return s;
}

}  // namespace ffnt
