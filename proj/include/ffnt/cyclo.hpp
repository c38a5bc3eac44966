#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ffnt {

struct Rational {
    __int128 num = 0, den = 1;

    Rational() = default;
    Rational(__int128 n, __int128 d = 1);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    long double to_ld() const { return static_cast<long double>(num) / static_cast<long double>(den); }
    std::string str() const;
    static Rational parse(const std::string& s);
};

std::string int128_str(__int128 v);

// Exact element of Q(zeta_p): scale * sum_j c_j zeta^j.
class CycloSum {
public:
    CycloSum() = default;
    explicit CycloSum(uint64_t p) : p_(p), c_(p, 0) {}
    static CycloSum integer(uint64_t p, int64_t v);

    uint64_t p() const { return p_; }
    void add_root(uint64_t j, int64_t mult = 1) { c_[j % p_] += mult; }
    CycloSum& operator+=(const CycloSum& o);
    CycloSum operator+(const CycloSum& o) const;
    CycloSum operator-(const CycloSum& o) const;
    CycloSum operator*(const CycloSum& o) const;
    CycloSum times_root(uint64_t j) const;
    CycloSum times_int(int64_t m) const;
    CycloSum scaled(const Rational& s) const;
    const Rational& scale() const { return scale_; }

    // coefficients over 1, zeta, ..., zeta^{p-2}
    std::vector<int64_t> coeffs() const;
    bool is_zero() const;
    bool is_rational() const;
    Rational rational_value() const;  // requires is_rational()
    std::complex<long double> value() const;
    long double abs() const { return std::abs(value()); }

    bool operator==(const CycloSum& o) const;

    nlohmann::json to_json() const;
    static CycloSum from_json(uint64_t p, const nlohmann::json& j);

private:
    uint64_t p_ = 0;
    std::vector<int64_t> c_;
    Rational scale_{1, 1};
};

}  // namespace ffnt
