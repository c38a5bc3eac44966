#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffnt/cyclo.hpp"
#include "ffnt/mobius.hpp"
#include "ffnt/poly.hpp"

namespace ffnt {

enum class LocalKind { Dirichlet, Kloosterman, KummerW };

const char* local_kind_name(LocalKind k);

// one multiplicative piece of a local trace function t_pi
struct LocalFactor {
    LocalKind kind = LocalKind::Dirichlet;
    // Dirichlet: chi of order 1 or 2 evaluated at a x + b
    int order = 2;
    Poly a, b;
    // Kloosterman: e(h xbar / pi)
    Poly h;
    // KummerW: chi2(w(x)), w over the residue field
    Poly w;
    // optional precomposition x -> P x + c
    std::optional<std::pair<Poly, Poly>> affine;

    static LocalFactor dirichlet(const Poly& a, const Poly& b, int order = 2);
    static LocalFactor kloosterman(const Poly& h);
    static LocalFactor kummer(const Poly& w);
};

struct LocalSpec {
    Poly pi;
    const Field* K = nullptr;  // F_q[u]/pi
    std::vector<LocalFactor> factors;

    int rank() const;
    int conductor() const;
    // a nonprincipal Dirichlet trace function mod pi
    bool is_dirichlet() const;
};

struct TraceSpec {
    const Field* F = nullptr;
    Poly g;
    std::vector<LocalSpec> locals;
    // E_r precomposition x -> r + x^p
    std::optional<Poly> er;

    static TraceSpec trivial(const Field* F);
    // validates the locals and sets g to the product of their primes
    static TraceSpec make(const Field* F, std::vector<LocalSpec> locals, std::optional<Poly> er = {});

    int rank() const;
    int conductor() const;
    bool has_dirichlet() const;
    const LocalSpec* local_at(const Poly& pi) const;

    nlohmann::json to_json() const;
    static TraceSpec from_json(const Field* F, const nlohmann::json& j);
};

LocalSpec make_local(const Poly& pi, std::vector<LocalFactor> factors);
// residue-field element of x mod pi, and back
Elem to_residue(const LocalSpec& L, const Poly& x);
Poly from_residue(const LocalSpec& L, Elem x);

// t(x) = sign * zeta_p^j, or 0
struct TraceValue {
    int sign = 1;
    uint64_t j = 0;
};
TraceValue eval_value(const TraceSpec& t, const Poly& x);
CycloSum eval(const TraceSpec& t, const Poly& x);

// t_{F,r}; with an interval, the W locals carry the calibration of build_W
TraceSpec build_tFr(const BiPoly& F, const Poly& r, const TraceSpec& base);
TraceSpec build_tFr(const BiPoly& F, const Poly& r, const TraceSpec& base, const Interval& I);

// sum over deg f < n
CycloSum short_sum(const TraceSpec& t, int n);
// sum over deg f < n of t(f) e(h f / g); n defaults to deg g
CycloSum complete_sum(const TraceSpec& t, const Poly& h, int n);
CycloSum complete_sum(const TraceSpec& t, const Poly& h);

// [Z^n] prod_pi (r_pi (1+Z) + c_pi Z)^{deg pi}
__int128 short_sum_coefficient(const TraceSpec& t, int n);

enum class BoundMode { Short, Complete, PolyaVinogradov };

struct BoundReport {
    BoundMode mode = BoundMode::Short;
    int n = 0;
    CycloSum sum;
    long double abs_sum = 0, bound = 0, ratio = 0;
    bool exact = false;
    bool ok = false;
};
// Short: |sum_{deg f<n} t(f)|; Complete: twisted by e(hf/pi); PolyaVinogradov: n < deg pi
BoundReport bound_audit(const TraceSpec& t, BoundMode mode, int n, const Poly& h = Poly());

// sum of mu(A) over monic A of degree k divisible by pi
int64_t mobius_progression_sum(const Poly& pi, int k);
int64_t mobius_progression_formula(const Poly& pi, int k);

}  // namespace ffnt
