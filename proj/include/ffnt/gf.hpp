#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffnt/error.hpp"

namespace ffnt {

// Elements are integer codes: the little-endian digits (base |base field|)
// of the coefficients in the polynomial basis. Since every level is a power
// of p, the code is also the base-p digit string over the prime field, and
// an element of a subfield keeps its code in every extension above it.
using Elem = uint64_t;

class Field {
public:
    // Prime field F_p.
    static const Field* prime(uint64_t p);
    // F_{p^k} over F_p. Without a modulus, the first monic irreducible in
    // little-endian lexicographic order is used.
    static const Field* make(uint64_t p, int k, const std::optional<std::vector<uint64_t>>& modulus = {});
    // base[x]/(modulus); modulus is monic over base and assumed irreducible.
    static const Field* extend(const Field* base, const std::vector<Elem>& modulus);
    // "p^k/m0,m1,...,1", "p^k" or "p".
    static const Field* parse(const std::string& spec);

    uint64_t p() const { return p_; }
    uint64_t q() const { return q_; }
    int degree() const { return k_; }
    int abs_degree() const { return absk_; }
    const Field* base() const { return base_; }
    const std::vector<Elem>& modulus() const { return mod_; }
    bool is_prime_field() const { return base_ == nullptr; }
    std::string spec() const;

    Elem add(Elem a, Elem b) const {
        if (base_ == nullptr) {
            Elem s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        if (!addtab_.empty()) return addtab_[a * q_ + b];
        return add_slow(a, b);
    }
    Elem neg(Elem a) const {
        if (base_ == nullptr) return a == 0 ? 0 : p_ - a;
        if (!negtab_.empty()) return negtab_[a];
        return neg_slow(a);
    }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        if (base_ == nullptr && p_ < (1u << 31)) return a * b % p_;
        if (!exp_.empty()) {
            uint64_t e = static_cast<uint64_t>(log_[a]) + log_[b];
            if (e >= q_ - 1) e -= q_ - 1;
            return exp_[e];
        }
        return mul_generic(a, b);
    }
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, uint64_t e) const;
    Elem from_int(int64_t v) const;
    Elem half() const { return inv(2 % p_); }

    int chi2(Elem a) const;
    std::optional<Elem> sqrt(Elem a) const;
    // Tr to F_p, as a residue in [0, p).
    uint64_t trace(Elem a) const;
    // The generator used for the discrete log tables (or a primitive element).
    Elem primitive() const { return gen_; }

    // digits over the immediate base field
    std::vector<Elem> digits(Elem a) const;
    Elem from_digits(const std::vector<Elem>& d) const;

    bool contains(Elem a) const { return a < q_; }

private:
    Field() = default;
    void init_tables();
    Elem add_slow(Elem a, Elem b) const;
    Elem neg_slow(Elem a) const;
    Elem mul_generic(Elem a, Elem b) const;
    Elem pow_generic(Elem a, uint64_t e) const;

    uint64_t p_ = 0, q_ = 0;
    int k_ = 1, absk_ = 1;
    const Field* base_ = nullptr;
    std::vector<Elem> mod_;
    Elem gen_ = 0;
    std::vector<uint32_t> exp_, log_;
    std::vector<uint16_t> addtab_;
    std::vector<Elem> negtab_;
};

// Value wrapper with the field attached; raw Elem codes are used on hot paths.
struct FieldElem {
    const Field* field = nullptr;
    Elem code = 0;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator-() const { return {field, field->neg(code)}; }
    FieldElem inverse() const;
    FieldElem pow(uint64_t e) const { return {field, field->pow(code, e)}; }
    bool operator==(const FieldElem& o) const = default;
};

bool is_prime_u64(uint64_t n);
std::vector<uint64_t> prime_factors_u64(uint64_t n);

}  // namespace ffnt
