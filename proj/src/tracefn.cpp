#include "ffnt/tracefn.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ffnt/error.hpp"
#include "ffnt/residues.hpp"

namespace ffnt {

const char* local_kind_name(LocalKind k) {
    switch (k) {
        case LocalKind::Dirichlet: return "dirichlet";
        case LocalKind::Kloosterman: return "kloosterman";
        case LocalKind::KummerW: return "kummerw";
    }
    return "?";
}

LocalFactor LocalFactor::dirichlet(const Poly& a, const Poly& b, int order) {
    LocalFactor f;
    f.kind = LocalKind::Dirichlet;
    f.order = order;
    f.a = a;
    f.b = b;
    return f;
}

LocalFactor LocalFactor::kloosterman(const Poly& h) {
    LocalFactor f;
    f.kind = LocalKind::Kloosterman;
    f.h = h;
    return f;
}

LocalFactor LocalFactor::kummer(const Poly& w) {
    LocalFactor f;
    f.kind = LocalKind::KummerW;
    f.w = w;
    return f;
}

// ---------------------------------------------------------------- locals

Elem to_residue(const LocalSpec& L, const Poly& x) {
    Poly r = x % L.pi;
    if (L.pi.deg() == 1) return r[0];
    std::vector<Elem> d(L.pi.deg(), 0);
    for (int i = 0; i <= r.deg(); ++i) d[i] = r[i];
    return L.K->from_digits(d);
}

Poly from_residue(const LocalSpec& L, Elem x) {
    const Field* F = L.pi.field();
    if (L.pi.deg() == 1) return Poly::constant(F, x);
    return Poly(F, L.K->digits(x));
}

LocalSpec make_local(const Poly& pi, std::vector<LocalFactor> factors) {
    if (pi.deg() < 1 || !is_irreducible(pi)) throw Error(ErrorCode::NotPrime, "local modulus " + pi.to_string());
    LocalSpec L;
    L.pi = pi.monic();
    L.K = Field::extend(pi.field(), L.pi.coeffs());
    if (factors.empty()) throw Error(ErrorCode::UsageError, "local without factors");
    for (auto& f : factors) {
        switch (f.kind) {
            case LocalKind::Dirichlet:
                if (f.order != 1 && f.order != 2)
                    throw Error(ErrorCode::UsageError, "only characters of order 1 or 2 are supported");
                f.a = f.a % L.pi;
                f.b = f.b % L.pi;
                if (f.a.is_zero()) throw Error(ErrorCode::NotCoprime, "Dirichlet coefficient a must be a unit");
                break;
            case LocalKind::Kloosterman:
                f.h = f.h % L.pi;
                break;
            case LocalKind::KummerW:
                if (f.w.field() != L.K) throw Error(ErrorCode::FieldMismatch, "w must live over the residue field");
                if (f.w.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "w = 0");
                break;
        }
        if (f.affine) {
            f.affine->first = f.affine->first % L.pi;
            f.affine->second = f.affine->second % L.pi;
        }
    }
    L.factors = std::move(factors);
    return L;
}

namespace {

int factor_conductor(const LocalFactor& f) {
    switch (f.kind) {
        case LocalKind::Dirichlet: return 1;
        case LocalKind::Kloosterman: return f.h.is_zero() ? 1 : 2;
        case LocalKind::KummerW: {
            if (f.w.deg() < 1) return 0;
            int c = 0;
            for (auto& [rho, e] : factor(f.w).factors) c += rho.deg();
            return c;
        }
    }
    return 0;
}

}  // namespace

int LocalSpec::rank() const { return 1; }

int LocalSpec::conductor() const {
    // c(F x L) <= c(F) + c(L) r(F) with every factor of rank 1
    int c = 0;
    for (const auto& f : factors) c += factor_conductor(f);
    return c;
}

bool LocalSpec::is_dirichlet() const {
    if (factors.size() != 1) return false;
    const auto& f = factors[0];
    if (f.affine && f.affine->first.is_zero()) return false;
    if (f.kind == LocalKind::Dirichlet) return f.order == 2;
    if (f.kind == LocalKind::KummerW) {
        if (f.w.deg() < 1) return false;
        auto fac = factor(f.w).factors;
        if (fac.size() != 1) return false;
        const auto& [rho, e] = *fac.begin();
        return rho.deg() == 1 && e % 2 == 1;
    }
    return false;
}

// ---------------------------------------------------------------- specs

TraceSpec TraceSpec::trivial(const Field* F) {
    TraceSpec t;
    t.F = F;
    t.g = Poly::one(F);
    return t;
}

TraceSpec TraceSpec::make(const Field* F, std::vector<LocalSpec> locals, std::optional<Poly> er) {
    TraceSpec t = trivial(F);
    std::sort(locals.begin(), locals.end(), [](const LocalSpec& a, const LocalSpec& b) { return a.pi < b.pi; });
    for (size_t i = 0; i < locals.size(); ++i) {
        if (locals[i].pi.field() != F) throw Error(ErrorCode::FieldMismatch, "local over a different field");
        if (i > 0 && locals[i].pi == locals[i - 1].pi)
            throw Error(ErrorCode::UsageError, "repeated local " + locals[i].pi.to_string());
        t.g = t.g * locals[i].pi;
    }
    t.locals = std::move(locals);
    t.er = std::move(er);
    return t;
}

int TraceSpec::rank() const {
    int r = 0;
    for (const auto& L : locals) r = std::max(r, L.rank());
    return locals.empty() ? 1 : r;
}

int TraceSpec::conductor() const {
    int c = 0;
    for (const auto& L : locals) c = std::max(c, L.conductor());
    return c;
}

bool TraceSpec::has_dirichlet() const {
    return std::any_of(locals.begin(), locals.end(), [](const LocalSpec& L) { return L.is_dirichlet(); });
}

const LocalSpec* TraceSpec::local_at(const Poly& pi) const {
    Poly m = pi.monic();
    for (const auto& L : locals)
        if (L.pi == m) return &L;
    return nullptr;
}

nlohmann::json TraceSpec::to_json() const {
    nlohmann::json j;
    j["field"] = F->spec();
    j["g"] = g.to_string();
    j["rank"] = rank();
    j["conductor"] = conductor();
    auto& arr = j["locals"] = nlohmann::json::array();
    for (const auto& L : locals) {
        for (const auto& f : L.factors) {
            nlohmann::json e;
            e["pi"] = L.pi.to_string();
            e["kind"] = local_kind_name(f.kind);
            switch (f.kind) {
                case LocalKind::Dirichlet:
                    e["order"] = f.order;
                    e["a"] = f.a.to_string();
                    e["b"] = f.b.to_string();
                    break;
                case LocalKind::Kloosterman:
                    e["h"] = f.h.to_string();
                    break;
                case LocalKind::KummerW: {
                    auto& w = e["w"] = nlohmann::json::array();
                    for (Elem c : f.w.coeffs()) w.push_back(from_residue(L, c).to_string());
                    break;
                }
            }
            if (f.affine) {
                e["P"] = f.affine->first.to_string();
                e["c"] = f.affine->second.to_string();
            }
            arr.push_back(e);
        }
    }
    j["er"] = er ? nlohmann::json(er->to_string()) : nlohmann::json(nullptr);
    return j;
}

TraceSpec TraceSpec::from_json(const Field* F, const nlohmann::json& j) {
    try {
        std::map<Poly, std::vector<LocalFactor>> by_pi;
        for (const auto& e : j.at("locals")) {
            Poly pi = Poly::parse(F, e.at("pi").get<std::string>()).monic();
            std::string kind = e.at("kind").get<std::string>();
            LocalFactor f;
            if (kind == "dirichlet") {
                f = LocalFactor::dirichlet(Poly::parse(F, e.at("a").get<std::string>()),
                                           Poly::parse(F, e.value("b", std::string("0"))), e.value("order", 2));
            } else if (kind == "kloosterman") {
                f = LocalFactor::kloosterman(Poly::parse(F, e.at("h").get<std::string>()));
            } else if (kind == "kummerw") {
                LocalSpec tmp;
                tmp.pi = pi;
                tmp.K = Field::extend(F, pi.coeffs());
                std::vector<Elem> w;
                for (const auto& c : e.at("w")) w.push_back(to_residue(tmp, Poly::parse(F, c.get<std::string>())));
                f = LocalFactor::kummer(Poly(tmp.K, w));
            } else {
                throw Error(ErrorCode::ParseError, "unknown local kind '" + kind + "'");
            }
            if (e.contains("P"))
                f.affine = std::make_pair(Poly::parse(F, e.at("P").get<std::string>()),
                                          Poly::parse(F, e.value("c", std::string("0"))));
            by_pi[pi].push_back(std::move(f));
        }
        std::vector<LocalSpec> locals;
        for (auto& [pi, fs] : by_pi) locals.push_back(make_local(pi, std::move(fs)));
        std::optional<Poly> er;
        if (j.contains("er") && !j.at("er").is_null()) er = Poly::parse(F, j.at("er").get<std::string>());
        TraceSpec t = make(F, std::move(locals), er);
        if (j.contains("g") && Poly::parse(F, j.at("g").get<std::string>()).monic() != t.g)
            throw Error(ErrorCode::ParseError, "g does not match the product of the local primes");
        return t;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("trace spec: ") + ex.what());
    }
}

// ---------------------------------------------------------------- eval

namespace {

TraceValue eval_factor(const LocalSpec& L, const LocalFactor& f, Poly y) {
    const uint64_t p = L.pi.field()->p();
    if (f.affine) y = (f.affine->first * y + f.affine->second) % L.pi;
    switch (f.kind) {
        case LocalKind::Dirichlet: {
            Elem z = to_residue(L, f.a * y + f.b);
            if (z == 0) return {0, 0};
            return {f.order == 1 ? 1 : L.K->chi2(z), 0};
        }
        case LocalKind::Kloosterman: {
            Poly r = y % L.pi;
            if (r.is_zero()) return {0, 0};
            return {1, exp_inf(f.h * inv_mod(r, L.pi), L.pi) % p};
        }
        case LocalKind::KummerW:
            return {L.K->chi2(f.w.eval(to_residue(L, y))), 0};
    }
    return {0, 0};
}

}  // namespace

TraceValue eval_value(const TraceSpec& t, const Poly& x) {
    const uint64_t p = t.F->p();
    Poly y = t.er ? *t.er + pow(x, p) : x;
    TraceValue v;
    for (const auto& L : t.locals) {
        Poly yl = y % L.pi;
        for (const auto& f : L.factors) {
            TraceValue w = eval_factor(L, f, yl);
            if (w.sign == 0) return {0, 0};
            v.sign *= w.sign;
            v.j = (v.j + w.j) % p;
        }
    }
    return v;
}

CycloSum eval(const TraceSpec& t, const Poly& x) {
    CycloSum s(t.F->p());
    TraceValue v = eval_value(t, x);
    if (v.sign != 0) s.add_root(v.j, v.sign);
    return s;
}

// ---------------------------------------------------------------- t_{F,r}

namespace {

TraceSpec assemble_tFr(const Poly& r, const TraceSpec& base, const std::vector<LocalW>& ws, const Poly& c_prime) {
    if (base.er) throw Error(ErrorCode::UsageError, "base spec already carries an E_r precomposition");
    std::map<Poly, std::vector<LocalFactor>> by_pi;
    for (const auto& L : ws) {
        Elem c = field_of(L, c_prime);
        by_pi[L.pi].push_back(LocalFactor::kummer(L.W.scaled(c)));
    }
    for (const auto& L : base.locals)
        for (const auto& f : L.factors) by_pi[L.pi].push_back(f);
    std::vector<LocalSpec> locals;
    for (auto& [pi, fs] : by_pi) locals.push_back(make_local(pi, std::move(fs)));
    return TraceSpec::make(base.F, std::move(locals), r);
}

}  // namespace

TraceSpec build_tFr(const BiPoly& F, const Poly& r, const TraceSpec& base) {
    BiPoly Fr = bracket(F, r);
    if (!finite_intersection(F, Fr)) throw Error(ErrorCode::InfiniteIntersection, "Z_F and Z_F[r] share a component");
    Poly M = radical(resultant_T(F, Fr));
    std::vector<LocalW> ws;
    if (M.deg() >= 1)
        for (auto& [pi, e] : factor(M).factors) ws.push_back(local_W(F, Fr, pi));
    return assemble_tFr(r, base, ws, Poly::one(F.field()));
}

TraceSpec build_tFr(const BiPoly& F, const Poly& r, const TraceSpec& base, const Interval& I) {
    WData w = build_W(F, r, I);
    return assemble_tFr(r, base, w.locals, w.c_prime);
}

// ---------------------------------------------------------------- sums

namespace {

template <class Fn>
CycloSum accumulate(const TraceSpec& t, int n, Fn twist) {
    const uint64_t p = t.F->p();
    std::vector<int64_t> cnt(p, 0);
    uint64_t N = count_pow(t.F->q(), std::max(n, 0));
    for (uint64_t i = 0; i < N; ++i) {
        Poly f = poly_from_index(t.F, i, n);
        TraceValue v = eval_value(t, f);
        if (v.sign == 0) continue;
        cnt[(v.j + twist(f)) % p] += v.sign;
    }
    CycloSum s(p);
    for (uint64_t j = 0; j < p; ++j) s.add_root(j, cnt[j]);
    return s;
}

__int128 ipow(__int128 b, int e) {
    __int128 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

CycloSum short_sum(const TraceSpec& t, int n) {
    return accumulate(t, n, [](const Poly&) { return uint64_t{0}; });
}

CycloSum complete_sum(const TraceSpec& t, const Poly& h, int n) {
    if (t.g.deg() < 1) throw Error(ErrorCode::ZeroDenominator, "complete sum needs deg g >= 1");
    return accumulate(t, n, [&](const Poly& f) { return exp_inf(h * f, t.g); });
}

CycloSum complete_sum(const TraceSpec& t, const Poly& h) { return complete_sum(t, h, t.g.deg()); }

__int128 short_sum_coefficient(const TraceSpec& t, int n) {
    if (n < 0) return 0;
    std::vector<__int128> P{1};
    for (const auto& L : t.locals) {
        __int128 r = L.rank(), c = L.conductor();
        for (int k = 0; k < L.pi.deg(); ++k) {
            std::vector<__int128> Q(P.size() + 1, 0);
            for (size_t i = 0; i < P.size(); ++i) {
                Q[i] += P[i] * r;
                Q[i + 1] += P[i] * (r + c);
            }
            P = std::move(Q);
        }
    }
    return n < static_cast<int>(P.size()) ? P[n] : 0;
}

BoundReport bound_audit(const TraceSpec& t, BoundMode mode, int n, const Poly& h) {
    BoundReport rep;
    rep.mode = mode;
    rep.n = n;
    const __int128 q = static_cast<__int128>(t.F->q());
    const int dg = t.g.deg();
    Rational bound_sq;
    switch (mode) {
        case BoundMode::Short:
            if (!t.has_dirichlet())
                throw Error(ErrorCode::MissingDirichletComponent, "short-sum bound needs a Dirichlet local");
            rep.sum = short_sum(t, n);
            if (n >= dg) {
                bound_sq = Rational(0);
            } else {
                __int128 c = short_sum_coefficient(t, n);
                bound_sq = Rational(ipow(q, n + 1) * c * c);
            }
            break;
        case BoundMode::Complete:
            if (t.locals.size() != 1) throw Error(ErrorCode::NotPrime, "complete sum needs a prime modulus");
            if (n < dg) throw Error(ErrorCode::DegreeOutOfRange, "complete sum needs n >= deg pi");
            rep.sum = complete_sum(t, h.field() ? h : Poly::one(t.F), n);
            bound_sq = Rational(static_cast<__int128>(t.conductor()) * t.conductor() * ipow(q, 2 * n - dg));
            break;
        case BoundMode::PolyaVinogradov:
            if (t.locals.size() != 1) throw Error(ErrorCode::NotPrime, "Polya-Vinogradov needs a prime modulus");
            if (n >= dg) throw Error(ErrorCode::DegreeOutOfRange, "Polya-Vinogradov needs n < deg pi");
            rep.sum = short_sum(t, n);
            bound_sq = Rational(static_cast<__int128>(t.conductor()) * t.conductor() * ipow(q, dg));
            break;
    }
    rep.abs_sum = rep.sum.abs();
    rep.bound = std::sqrt(bound_sq.to_ld());
    rep.ratio = rep.bound > 0 ? rep.abs_sum / rep.bound : (rep.abs_sum < 1e-9L ? 0 : INFINITY);
    rep.exact = rep.sum.is_rational();
    if (rep.exact) {
        Rational s = rep.sum.rational_value();
        rep.ok = s * s <= bound_sq;
    } else {
        rep.ok = rep.abs_sum <= rep.bound + 1e-9L;
    }
    return rep;
}

// ---------------------------------------------------------------- progressions

int64_t mobius_progression_sum(const Poly& pi, int k) {
    const Field* F = pi.field();
    int d = pi.deg();
    if (k < d) return 0;
    Poly m = pi.monic();
    int64_t s = 0;
    for_each_monic(F, k - d, [&](const Poly& B) { s += moebius(m * B); });
    return s;
}

int64_t mobius_progression_formula(const Poly& pi, int k) {
    int d = pi.deg();
    if (k < d) throw Error(ErrorCode::DegreeOutOfRange, "need k >= deg pi");
    auto q = static_cast<int64_t>(pi.field()->q());
    if (d == 1) return k == 1 ? -1 : q - 1;
    if (k % d == 0) return -1;
    if (k % d == 1) return q;
    return 0;
}

}  // namespace ffnt
