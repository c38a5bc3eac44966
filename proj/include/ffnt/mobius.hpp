#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffnt/poly.hpp"

namespace ffnt {

// F(u,T) = sum a_i(u) T^i
class BiPoly {
public:
    BiPoly() = default;
    explicit BiPoly(const Field* F) : F_(F), zero_(F) {}
    BiPoly(const Field* F, std::vector<Poly> a);

    // rows of u-coefficients per T-power, separated by ';'
    static BiPoly parse(const Field* F, const std::string& s);
    static BiPoly from_poly_in_T(const Poly& a0) { return BiPoly(a0.field(), {a0}); }

    const Field* field() const { return F_; }
    int deg_T() const { return static_cast<int>(a_.size()) - 1; }
    bool is_zero() const { return a_.empty(); }
    const Poly& coeff(int i) const;
    const Poly& lead() const { return coeff(deg_T()); }
    const std::vector<Poly>& coeffs() const { return a_; }
    // max_i deg a_i
    int deg_u() const;
    std::string to_string() const;

    // F(u, g(u))
    Poly eval_T(const Poly& g) const;
    // F(a, T) over an extension E containing a
    Poly eval_u(const Field* E, Elem a) const;

    BiPoly d_du() const;
    BiPoly d_dT() const;
    BiPoly scaled(const Poly& c) const;

    bool operator==(const BiPoly& o) const { return a_ == o.a_; }

private:
    void trim();
    const Field* F_ = nullptr;
    std::vector<Poly> a_;
    Poly zero_;
};

BiPoly operator+(const BiPoly& a, const BiPoly& b);
BiPoly operator-(const BiPoly& a, const BiPoly& b);
BiPoly operator*(const BiPoly& a, const BiPoly& b);
// F(u, P T + c)
BiPoly substitute_linear(const BiPoly& F, const Poly& P, const Poly& c);

// Sylvester resultant in T with formal degrees m >= deg_T f, n >= deg_T g
Poly resultant_T_formal(const BiPoly& f, const BiPoly& g, int m, int n);
// with the actual degrees; zero if either is zero
Poly resultant_T(const BiPoly& f, const BiPoly& g);
Poly det_bareiss(std::vector<std::vector<Poly>> M);

bool is_separable_T(const BiPoly& F);
// gcd of f1, f2 in F_q[u,T] is constant
bool finite_intersection(const BiPoly& f1, const BiPoly& f2);

// F_v = Fu + v FT and F_[r] = Fu + r' FT
struct Deformations {
    BiPoly Fu, FT, Fr;
};
Deformations deformations(const BiPoly& F, const Poly& r);
BiPoly bracket(const BiPoly& F, const Poly& r);

// i_{(a,b)}(Z_f1, Z_f2); a, b in E
int intersection_number(const BiPoly& f1, const BiPoly& f2, const Field* E, Elem a, Elem b);

struct ZeuthenResult {
    int lhs = 0, rhs = 0;
    bool lead_unit = false;
};
ZeuthenResult zeuthen_check(const BiPoly& f1, const BiPoly& f2, const Field* E, Elem a);

// W^{(pi)} over the residue field K = F_q[u]/pi; u maps to the class of u
struct LocalW {
    Poly pi;
    const Field* K = nullptr;
    Elem root = 0;
    // irreducible factors over K of the common T-roots, with intersection numbers
    std::vector<std::pair<Poly, int>> points;
    Poly W;
};
LocalW local_W(const BiPoly& f1, const BiPoly& f2, const Poly& pi);
// residue-field element as a polynomial mod pi, and back
Poly residue_of(const LocalW& L, Elem x);
Elem field_of(const LocalW& L, const Poly& x);

// leading term of F(u,g) as g ranges over the interval over the algebraic closure
struct LeadingTerm {
    bool constant = false;
    int deg = kDegNegInf;
    Elem lead = 0;
    int max_deg = kDegNegInf;
};
LeadingTerm leading_term_on(const BiPoly& F, const Interval& I);

struct WData {
    Poly R, M;
    std::vector<LocalW> locals;
    // coefficients mod M, calibration included
    std::vector<Poly> W;
    Poly c_prime;
    int d = 0, dprime = 0;
    Elem a = 0;
    bool probe_found = false;
    Poly probe;
};
WData build_W(const BiPoly& F, const Poly& r, const Interval& I);
WData build_W(const BiPoly& F, const Poly& r, const Interval& I, const Poly& probe);
// (W(u,g) / M)
int jacobi_W(const WData& w, const Poly& g);
// chi2(R_{d,d'}(F(u,g), F_[r](u,g)))
int resultant_sign(const BiPoly& F, const BiPoly& Fr, const Poly& g, int d, int dprime);
// Jacobi symbol of c'_1 / c'_2 mod M
int calibration_ratio(const WData& w1, const WData& w2);

// (-1)^d chi2(-1)^{d(d-1)/2} chi2(a)^d
int mobius_sign(const Field* F, int d, Elem a);

struct MobiusReport {
    bool infinite = false;
    int checked = 0, passed = 0, failed = 0;
    int nonzero_mu = 0, scarcity_bound = 0;
    bool ok = false;
    std::vector<std::string> failures;
};
MobiusReport mobius_formula_verify(const BiPoly& F, const Poly& r, const Interval& I);

std::vector<Interval> partition_interval(const BiPoly& F, const Interval& I);

double e_bound(double c1, double c2, double x, int k);
struct DegreeBoundReport {
    int deg_R = kDegNegInf, deg_disc = kDegNegInf;
    double E = 0, disc_bound = 0;
    bool ok = false;
};
DegreeBoundReport degree_bound_checks(const BiPoly& F, const Poly& r, double c1, double c2);
DegreeBoundReport degree_bound_checks(const BiPoly& F, const Poly& r);

// coefficients in v of R(F, F_v)
std::vector<Poly> resultant_v(const BiPoly& F);
Poly disc_v(const BiPoly& F);
std::pair<Poly, BiPoly> find_change_of_variable(const BiPoly& F, const Poly& c);
std::pair<Poly, BiPoly> find_change_of_variable(const BiPoly& F);
std::optional<Poly> find_dirichlet_prime(const BiPoly& F, const Poly& r, const Poly& g);

}  // namespace ffnt
