#pragma once

#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ffnt/gf.hpp"

namespace ffnt {

// deg(0); compares below every real degree
constexpr int kDegNegInf = INT_MIN / 4;

class Poly {
public:
    Poly() = default;
    explicit Poly(const Field* F) : F_(F) {}
    Poly(const Field* F, std::vector<Elem> c) : F_(F), c_(std::move(c)) { trim(); }

    static Poly constant(const Field* F, Elem c) { return Poly(F, {c}); }
    static Poly one(const Field* F) { return Poly(F, {1}); }
    static Poly x(const Field* F) { return Poly(F, {0, 1}); }
    static Poly monomial(const Field* F, Elem c, int n);
    // "c0,c1,..." little-endian codes; "" or "0" is the zero polynomial
    static Poly parse(const Field* F, const std::string& s);

    const Field* field() const { return F_; }
    int deg() const { return c_.empty() ? kDegNegInf : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const { return c_.size() <= 1; }
    Elem lead() const { return c_.empty() ? 0 : c_.back(); }
    Elem operator[](int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0; }
    const std::vector<Elem>& coeffs() const { return c_; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    Poly monic() const;
    // |f| = q^deg f, |0| = 0
    long double norm() const;
    std::string to_string() const;

    void set(int i, Elem v);
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly scaled(Elem s) const;
    Poly shifted(int n) const;  // times u^n

    Elem eval(Elem x) const;
    // evaluate at x in an extension E of the coefficient field
    Elem eval_in(const Field* E, Elem x) const;

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return c_ != o.c_; }
    // by degree, then coefficients from the top
    bool operator<(const Poly& o) const;

private:
    const Field* F_ = nullptr;
    std::vector<Elem> c_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);

// true when E is F or an extension tower above F
bool is_subfield(const Field* F, const Field* E);
// same polynomial viewed over an extension field E
Poly lift(const Poly& f, const Field* E);

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);
bool divides(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);
struct Xgcd {
    Poly g, s, t;
};
// s*a + t*b = g, g monic (or zero)
Xgcd xgcd(const Poly& a, const Poly& b);
Poly derivative(const Poly& f);
Poly pow(const Poly& f, uint64_t e);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& a, uint64_t e, const Poly& m);
// f(g) mod m
Poly compose_mod(const Poly& f, const Poly& g, const Poly& m);
Poly compose(const Poly& f, const Poly& g);
// g with g^p = f, or zero polynomial if f is not a p-th power
Poly pth_root(const Poly& f);
bool is_square(const Poly& f);
Poly poly_sqrt(const Poly& f);  // assumes is_square

struct Factorization {
    Elem unit = 1;
    std::map<Poly, int> factors;
    Poly product(const Field* F) const;
};

bool is_irreducible(const Poly& f);
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& monic_f);
std::vector<std::pair<Poly, int>> distinct_degree(const Poly& squarefree_monic);
std::vector<Poly> equal_degree_split(const Poly& f, int d, uint64_t seed);
Factorization factor(const Poly& f, uint64_t seed = 0x5eed);
Poly radical(const Poly& f);
int valuation(const Poly& f, const Poly& pi);

int moebius(const Poly& f);
int von_mangoldt(const Poly& f);
// -sum over monic divisors A of mu(A) deg(A), with mu by Pellet
int von_mangoldt_convolution(const Poly& f);
// degree-by-degree prime power test without full factorization
int von_mangoldt_fast(const Poly& f);

Elem resultant(const Poly& a, const Poly& b);
Elem resultant_sylvester(const Poly& a, const Poly& b);
Elem resultant_euclid(const Poly& a, const Poly& b);
Elem resultant_padded(const Poly& a, const Poly& b, int d, int dprime);
Elem discriminant(const Poly& f);
int pellet_moebius(const Poly& f);

struct Interval {
    Poly base;
    int dim = 0;

    static Interval make(const Poly& f, int d);
    const Field* field() const { return base.field(); }
    long double len() const;
    int degree() const;
    bool contains(const Poly& g) const;
    uint64_t size() const;
    Poly member(uint64_t index) const;
    std::vector<Elem> coordinates(const Poly& g) const;
};

// polynomial whose first n coefficients are the base-q digits of index
Poly poly_from_index(const Field* F, uint64_t index, int n);
uint64_t count_pow(uint64_t q, int n);

void for_each_monic(const Field* F, int n, const std::function<void(const Poly&)>& fn);
void for_each_in_interval(const Interval& I, const std::function<void(const Poly&)>& fn);
// all f with |f| <= X, X = q^m, including 0
void for_each_norm_le(const Field* F, int m, const std::function<void(const Poly&)>& fn);
std::vector<Poly> monic_polys(const Field* F, int n);
std::vector<Poly> monic_irreducibles(const Field* F, int n);

}  // namespace ffnt
