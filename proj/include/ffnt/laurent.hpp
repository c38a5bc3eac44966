#pragma once

#include <climits>
#include <optional>
#include <utility>
#include <vector>

#include "ffnt/poly.hpp"
#include "ffnt/qform.hpp"

namespace ffnt {

// Truncated element of F_q((1/u)). Coefficients of u^e are known for
// e >= lo(); an exact series is zero below lo().
class Laurent {
public:
    Laurent() = default;
    explicit Laurent(const Field* F) : F_(F), exact_(true) {}
    static Laurent from_poly(const Poly& f);
    static Laurent monomial(const Field* F, Elem c, int e);

    const Field* field() const { return F_; }
    int lo() const { return lo_; }
    bool exact() const { return exact_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    Elem coeff(int e) const;
    // kDegNegInf for exact zero; PrecisionExhausted when every known term is 0
    int deg() const;
    Elem lead() const { return coeff(deg()); }
    bool known_zero() const;

    Laurent truncated(int floor) const;
    // the same coefficients with unknown lower terms taken to be zero
    Laurent as_exact() const;
    Laurent scaled(Elem s) const;
    Laurent operator-() const { return scaled(F_->neg(1)); }

    friend Laurent add(const Laurent& a, const Laurent& b, int floor);
    friend Laurent mul(const Laurent& a, const Laurent& b, int floor);
    friend Laurent invert(const Laurent& a, int floor);

private:
    void normalize();

    const Field* F_ = nullptr;
    int lo_ = 0;
    bool exact_ = true;
    std::vector<Elem> c_;  // c_[i] is the coefficient of u^{lo_ + i}
};

Laurent add(const Laurent& a, const Laurent& b, int floor = INT_MIN / 4);
Laurent sub(const Laurent& a, const Laurent& b, int floor = INT_MIN / 4);
Laurent mul(const Laurent& a, const Laurent& b, int floor = INT_MIN / 4);
// floor is required when a is exact
Laurent invert(const Laurent& a, int floor);
// Newton iteration r <- (r + a/r)/2; absent when deg a is odd or lc(a) is a nonsquare
std::optional<Laurent> laurent_sqrt(const Laurent& a, int floor);

// Q = L1 L2 with L1 = a(X - lambda1 Y), L2 = X - lambda2 Y
struct LinearForms {
    Laurent lambda1, lambda2;
    Laurent alpha[2], beta[2];
};

// prec is the number of terms kept below the leading term of sqrt(-D)
LinearForms factor_indefinite_form(const QuadForm& Q, int prec);
int default_precision(const Poly& D, int max_probe_deg);

// max_i deg L_i(z,w) - deg L_i(x,y); retries once with doubled precision
int form_valuation(const QuadForm& Q, const Poly& x, const Poly& y, const Poly& z, const Poly& w, int prec = 0);

// v^Q_{(x,y)} is standard, decided by probing (1,0), (0,1) and
// (lambda u^{delta-gamma}, 1) for every lambda in F_q^x; returns (gamma, delta)
std::optional<std::pair<int, int>> valuation_standard_probe(const QuadForm& Q, const Poly& x, const Poly& y);
// same decision from the leading-coefficient matrix of the linear forms
std::optional<std::pair<int, int>> valuation_standard_exact(const QuadForm& Q, const Poly& x, const Poly& y);

}  // namespace ffnt
