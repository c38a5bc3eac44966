#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ffnt/cyclo.hpp"
#include "ffnt/poly.hpp"

namespace ffnt {

struct QuadForm {
    Poly a, b, c;

    const Field* field() const { return a.field() ? a.field() : c.field(); }
    // ac - b^2/4
    Poly disc() const;
    Poly eval(const Poly& x, const Poly& y) const;
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm& o) const;
};

struct SL2Mat {
    Poly m11, m12, m21, m22;

    static SL2Mat identity(const Field* F);
    static SL2Mat unipotent(const Poly& g);  // [[1,g],[0,1]]
    Poly det() const { return m11 * m22 - m12 * m21; }
    SL2Mat operator*(const SL2Mat& o) const;
    SL2Mat inverse() const;
    bool operator==(const SL2Mat& o) const = default;
};

struct Representation {
    QuadForm form;
    Poly x, y;

    Poly value() const { return form.eval(x, y); }
    bool is_primitive() const;
};

enum class FormClass { Degenerate, Definite, Indefinite };
const char* form_class_name(FormClass c);

FormClass classify_disc(const Poly& D);
FormClass classify(const QuadForm& Q);

// (x,y) * M = (x,y) M^{-T}
std::pair<Poly, Poly> sl2_act(const std::pair<Poly, Poly>& v, const SL2Mat& M);
// (Q * M)(X,Y) = Q(m11 X + m12 Y, m21 X + m22 Y)
QuadForm sl2_act(const QuadForm& Q, const SL2Mat& M);
Representation sl2_act(const Representation& r, const SL2Mat& M);

struct Solution {
    Poly A, f;
    bool operator<(const Solution& o) const { return A < o.A || (A == o.A && f < o.f); }
    bool operator==(const Solution& o) const = default;
};

Solution associated_solution(const Representation& rep);
Representation representation_from_solution(const Poly& A, const Poly& f, const Poly& D);

bool is_standard_definite(const QuadForm& Q);
std::vector<std::pair<Poly, Poly>> short_vectors(const QuadForm& Q);
// minimal deg Q(v) over primitive v in a degree box, for checking short_vectors
std::vector<std::pair<Poly, Poly>> short_vectors_by_scan(const QuadForm& Q, int box);
std::pair<Representation, SL2Mat> standardize_definite(const Representation& rep, const std::pair<Poly, Poly>& v);

// weight 1/(q^3 - q) at s = 0, 1/((q-1) q^{s+1}) otherwise
Rational indefinite_weight(uint64_t q, int s);
// the unique s >= 0 satisfying the six degree inequalities, if any
std::optional<int> standard_indefinite_s(const Representation& rep);
std::optional<std::pair<int, Rational>> standard_indefinite_data(const Representation& rep);

struct StandardForm {
    QuadForm form;
    int s = 0;  // indefinite only
};
std::vector<StandardForm> enumerate_standard_forms(const Poly& D, FormClass mode);

// standard representations with deg A <= maxdeg
void for_each_standard_rep(const Poly& D, FormClass mode, int maxdeg,
                           const std::function<void(const Representation&, int s)>& fn);

// checks e(h f / A) = e(h xbar / y)
bool exp_change(const Representation& rep, const Poly& h);

// all f mod A with f^2 + D = 0 mod A, by exhaustive residue scan
std::vector<Poly> solutions_mod(const Poly& A, const Poly& D);

struct FiberReport {
    Solution sol;
    int fiber_size = 0;
    int expected = 0;
    bool uniform = true;  // definite: same deg a vs deg c case; indefinite: same weight
};
struct BijectionAudit {
    std::vector<FiberReport> fibers;
    int missing = 0;      // solutions with an empty fiber
    int extraneous = 0;   // reps whose solution fails the congruence
    bool ok = false;
};
BijectionAudit bijection_audit(const Poly& D, FormClass mode, int maxdeg);

}  // namespace ffnt
