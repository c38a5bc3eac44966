#include "ffnt/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ffnt/residues.hpp"

namespace ffnt {

// ---------------------------------------------------------------- BiPoly

BiPoly::BiPoly(const Field* F, std::vector<Poly> a) : F_(F), a_(std::move(a)), zero_(F) { trim(); }

void BiPoly::trim() {
    while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
}

const Poly& BiPoly::coeff(int i) const {
    if (i >= 0 && i < static_cast<int>(a_.size())) return a_[i];
    return zero_;
}

int BiPoly::deg_u() const {
    int d = kDegNegInf;
    for (const auto& c : a_) d = std::max(d, c.deg());
    return d;
}

BiPoly BiPoly::parse(const Field* F, const std::string& s) {
    std::vector<Poly> rows;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) rows.push_back(Poly::parse(F, item));
    return BiPoly(F, std::move(rows));
}

std::string BiPoly::to_string() const {
    if (a_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < a_.size(); ++i) {
        if (i) out += ";";
        out += a_[i].to_string();
    }
    return out;
}

Poly BiPoly::eval_T(const Poly& g) const {
    Poly acc(F_);
    for (int i = deg_T(); i >= 0; --i) acc = acc * g + a_[i];
    return acc;
}

Poly BiPoly::eval_u(const Field* E, Elem a) const {
    std::vector<Elem> c(a_.size());
    for (size_t i = 0; i < a_.size(); ++i) c[i] = a_[i].eval_in(E, a);
    return Poly(E, std::move(c));
}

BiPoly BiPoly::d_du() const {
    std::vector<Poly> c;
    for (const auto& x : a_) c.push_back(derivative(x));
    return BiPoly(F_, std::move(c));
}

BiPoly BiPoly::d_dT() const {
    std::vector<Poly> c;
    for (int i = 1; i <= deg_T(); ++i) c.push_back(a_[i].scaled(F_->from_int(i)));
    return BiPoly(F_, std::move(c));
}

BiPoly BiPoly::scaled(const Poly& c) const {
    std::vector<Poly> out;
    for (const auto& x : a_) out.push_back(x * c);
    return BiPoly(F_, std::move(out));
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    const Field* F = a.field() ? a.field() : b.field();
    int n = std::max(a.deg_T(), b.deg_T());
    std::vector<Poly> c;
    for (int i = 0; i <= n; ++i) c.push_back(a.coeff(i) + b.coeff(i));
    return BiPoly(F, std::move(c));
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) {
    const Field* F = a.field() ? a.field() : b.field();
    int n = std::max(a.deg_T(), b.deg_T());
    std::vector<Poly> c;
    for (int i = 0; i <= n; ++i) c.push_back(a.coeff(i) - b.coeff(i));
    return BiPoly(F, std::move(c));
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    const Field* F = a.field() ? a.field() : b.field();
    if (a.is_zero() || b.is_zero()) return BiPoly(F);
    std::vector<Poly> c(a.deg_T() + b.deg_T() + 1, Poly(F));
    for (int i = 0; i <= a.deg_T(); ++i)
        for (int j = 0; j <= b.deg_T(); ++j) c[i + j] += a.coeff(i) * b.coeff(j);
    return BiPoly(F, std::move(c));
}

BiPoly substitute_linear(const BiPoly& F, const Poly& P, const Poly& c) {
    BiPoly L(F.field(), {c, P});
    BiPoly acc(F.field());
    for (int i = F.deg_T(); i >= 0; --i) acc = acc * L + BiPoly(F.field(), {F.coeff(i)});
    return acc;
}

// ---------------------------------------------------------------- resultants

Poly det_bareiss(std::vector<std::vector<Poly>> M) {
    int n = static_cast<int>(M.size());
    if (n == 0) throw Error(ErrorCode::DegreeOutOfRange, "empty determinant");
    const Field* F = M[0][0].field();
    bool neg = false;
    Poly prev = Poly::one(F);
    for (int k = 0; k + 1 < n; ++k) {
        if (M[k][k].is_zero()) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (!M[i][k].is_zero()) {
                    piv = i;
                    break;
                }
            if (piv < 0) return Poly(F);
            std::swap(M[piv], M[k]);
            neg = !neg;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
            M[i][k] = Poly(F);
        }
        prev = M[k][k];
    }
    Poly d = M[n - 1][n - 1];
    return neg ? -d : d;
}

Poly resultant_T_formal(const BiPoly& f, const BiPoly& g, int m, int n) {
    const Field* F = f.field() ? f.field() : g.field();
    if (f.deg_T() > m || g.deg_T() > n || m < 0 || n < 0)
        throw Error(ErrorCode::DegreeContractViolated, "formal degree below actual degree");
    int N = m + n;
    if (N == 0) return Poly::one(F);
    std::vector<std::vector<Poly>> S(N, std::vector<Poly>(N, Poly(F)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) S[i][i + j] = f.coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) S[n + i][i + j] = g.coeff(n - j);
    return det_bareiss(std::move(S));
}

Poly resultant_T(const BiPoly& f, const BiPoly& g) {
    const Field* F = f.field() ? f.field() : g.field();
    if (f.is_zero() || g.is_zero()) return Poly(F);
    return resultant_T_formal(f, g, f.deg_T(), g.deg_T());
}

namespace {

Poly content_u(const BiPoly& f) {
    Poly g(f.field());
    for (const auto& c : f.coeffs()) g = gcd(g, c);
    return g;
}

}  // namespace

bool is_separable_T(const BiPoly& F) {
    if (F.deg_T() < 1) return false;
    BiPoly FT = F.d_dT();
    if (FT.is_zero()) return false;
    return !resultant_T(F, FT).is_zero();
}

bool finite_intersection(const BiPoly& f1, const BiPoly& f2) {
    if (f1.is_zero() || f2.is_zero()) return false;
    if (gcd(content_u(f1), content_u(f2)).deg() > 0) return false;
    return !resultant_T(f1, f2).is_zero();
}

Deformations deformations(const BiPoly& F, const Poly& r) {
    Deformations D{F.d_du(), F.d_dT(), BiPoly(F.field())};
    D.Fr = D.Fu + D.FT.scaled(derivative(r));
    return D;
}

BiPoly bracket(const BiPoly& F, const Poly& r) { return deformations(F, r).Fr; }

// ---------------------------------------------------------------- intersection numbers

namespace {

// f(x + a, y + b) over E, with x = u - a and y = T - b
BiPoly localize(const BiPoly& f, const Field* E, Elem a, Elem b) {
    Poly xa(E, {a, 1});
    std::vector<Poly> c;
    for (const auto& x : f.coeffs()) c.push_back(compose(lift(x, E), xa));
    return substitute_linear(BiPoly(E, std::move(c)), Poly::one(E), Poly::constant(E, b));
}

int ord_x(const Poly& p) {
    int i = 0;
    while (p[i] == 0) ++i;
    return i;
}

// Fulton's algorithm at the origin
int fulton(BiPoly P, BiPoly Q) {
    const Field* E = P.field();
    int acc = 0;
    while (true) {
        if (P.is_zero() || Q.is_zero()) throw Error(ErrorCode::InfiniteIntersection, "common component at the point");
        if (P.coeff(0)[0] != 0 || Q.coeff(0)[0] != 0) return acc;
        Poly p0 = P.coeff(0), q0 = Q.coeff(0);
        if (p0.is_zero() && q0.is_zero())
            throw Error(ErrorCode::InfiniteIntersection, "common component T = b");
        if (p0.is_zero()) {
            std::swap(P, Q);
            std::swap(p0, q0);
        }
        if (q0.is_zero()) {
            acc += ord_x(p0);
            std::vector<Poly> c(Q.coeffs().begin() + 1, Q.coeffs().end());
            Q = BiPoly(E, std::move(c));
            continue;
        }
        if (p0.deg() > q0.deg()) {
            std::swap(P, Q);
            std::swap(p0, q0);
        }
        Poly m = Poly::monomial(E, q0.lead(), q0.deg() - p0.deg());
        Q = Q.scaled(Poly::constant(E, p0.lead())) - P.scaled(m);
    }
}

const Field* residue_field(const Poly& pi, Elem& root) {
    const Field* F = pi.field();
    if (pi.deg() == 1) {
        root = F->neg(pi[0]);
        return F;
    }
    const Field* K = Field::extend(F, pi.coeffs());
    root = K->from_digits({0, 1});
    return K;
}

// (extension containing a root, that root) of an irreducible rho over K
std::pair<const Field*, Elem> root_field(const Poly& rho) {
    const Field* K = rho.field();
    if (rho.deg() == 1) return {K, K->neg(K->div(rho[0], rho[1]))};
    const Field* E = Field::extend(K, rho.monic().coeffs());
    return {E, E->from_digits({0, 1})};
}

// common T-roots of f1(a,T), f2(a,T) as monic irreducibles over E
std::vector<Poly> common_root_factors(const BiPoly& f1, const BiPoly& f2, const Field* E, Elem a) {
    Poly h1 = f1.eval_u(E, a), h2 = f2.eval_u(E, a);
    if (h1.is_zero() && h2.is_zero()) throw Error(ErrorCode::InfiniteIntersection, "vertical common component");
    Poly h = gcd(h1, h2);
    std::vector<Poly> out;
    if (h.deg() < 1) return out;
    for (auto& [rho, e] : factor(h).factors) out.push_back(rho);
    return out;
}

}  // namespace

int intersection_number(const BiPoly& f1, const BiPoly& f2, const Field* E, Elem a, Elem b) {
    if (!finite_intersection(f1, f2)) throw Error(ErrorCode::InfiniteIntersection, "Z_f1 and Z_f2 share a component");
    return fulton(localize(f1, E, a, b), localize(f2, E, a, b));
}

ZeuthenResult zeuthen_check(const BiPoly& f1, const BiPoly& f2, const Field* E, Elem a) {
    if (!finite_intersection(f1, f2)) throw Error(ErrorCode::InfiniteIntersection, "Z_f1 and Z_f2 share a component");
    ZeuthenResult z;
    Poly R = lift(resultant_T(f1, f2), E);
    Poly lin(E, {E->neg(a), 1});
    while (!R.is_zero()) {
        auto [qq, rr] = divrem(R, lin);
        if (!rr.is_zero()) break;
        R = qq;
        ++z.lhs;
    }
    for (const auto& rho : common_root_factors(f1, f2, E, a)) {
        auto [E2, b] = root_field(rho);
        z.rhs += rho.deg() * fulton(localize(f1, E2, a, b), localize(f2, E2, a, b));
    }
    z.lead_unit = f1.lead().eval_in(E, a) != 0 || f2.lead().eval_in(E, a) != 0;
    return z;
}

// ---------------------------------------------------------------- W

LocalW local_W(const BiPoly& f1, const BiPoly& f2, const Poly& pi) {
    LocalW L;
    L.pi = pi.monic();
    L.K = residue_field(L.pi, L.root);
    L.W = Poly::one(L.K);
    for (const auto& rho : common_root_factors(f1, f2, L.K, L.root)) {
        auto [E2, b] = root_field(rho);
        int i = fulton(localize(f1, E2, L.root, b), localize(f2, E2, L.root, b));
        L.points.emplace_back(rho, i);
        L.W = L.W * pow(rho, i);
    }
    return L;
}

Poly residue_of(const LocalW& L, Elem x) {
    const Field* F = L.pi.field();
    if (L.pi.deg() == 1) return Poly::constant(F, x);
    return Poly(F, L.K->digits(x));
}

Elem field_of(const LocalW& L, const Poly& x) {
    Poly r = x % L.pi;
    if (L.pi.deg() == 1) return r[0];
    std::vector<Elem> d(L.pi.deg(), 0);
    for (int i = 0; i <= r.deg(); ++i) d[i] = r[i];
    return L.K->from_digits(d);
}

namespace {

// polynomials in the interval coordinates theta_0..theta_{n-1}
using Mono = std::vector<uint8_t>;
struct MPoly {
    std::map<Mono, Elem> t;
};

void madd(const Field* F, MPoly& acc, const MPoly& b, Elem s = 1) {
    for (const auto& [m, c] : b.t) {
        Elem& v = acc.t[m];
        v = F->add(v, F->mul(s, c));
        if (v == 0) acc.t.erase(m);
    }
}

MPoly mmul(const Field* F, const MPoly& a, const MPoly& b) {
    MPoly out;
    for (const auto& [ma, ca] : a.t)
        for (const auto& [mb, cb] : b.t) {
            Mono m(ma.size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = static_cast<uint8_t>(ma[i] + mb[i]);
            Elem& v = out.t[m];
            v = F->add(v, F->mul(ca, cb));
            if (v == 0) out.t.erase(m);
        }
    return out;
}

using UPoly = std::vector<MPoly>;

UPoly constant_upoly(const Poly& p, int nvars) {
    UPoly out(std::max(p.deg() + 1, 0));
    for (int i = 0; i <= p.deg(); ++i)
        if (p[i] != 0) out[i].t[Mono(nvars, 0)] = p[i];
    return out;
}

UPoly umul(const Field* F, const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].t.empty()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j].t.empty()) continue;
            madd(F, out[i + j], mmul(F, a[i], b[j]));
        }
    }
    return out;
}

void uadd(const Field* F, UPoly& a, const UPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) madd(F, a[i], b[i]);
}

}  // namespace

LeadingTerm leading_term_on(const BiPoly& F, const Interval& I) {
    const Field* K = F.field();
    int n = I.dim;
    UPoly g(std::max(I.base.deg() + 1, n));
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
        if (i < n) {
            Mono m(n, 0);
            m[i] = 1;
            g[i].t[m] = 1;
        } else if (I.base[i] != 0) {
            g[i].t[Mono(n, 0)] = I.base[i];
        }
    }
    UPoly acc;
    for (int i = F.deg_T(); i >= 0; --i) {
        acc = umul(K, acc, g);
        uadd(K, acc, constant_upoly(F.coeff(i), n));
    }
    LeadingTerm lt;
    int top = static_cast<int>(acc.size()) - 1;
    while (top >= 0 && acc[top].t.empty()) --top;
    if (top < 0) {
        lt.constant = true;
        return lt;
    }
    lt.max_deg = top;
    const auto& c = acc[top].t;
    if (c.size() == 1 && c.begin()->first == Mono(n, 0)) {
        lt.constant = true;
        lt.deg = top;
        lt.lead = c.begin()->second;
    }
    return lt;
}

int resultant_sign(const BiPoly& F, const BiPoly& Fr, const Poly& g, int d, int dprime) {
    Poly f = F.eval_T(g), h = Fr.eval_T(g);
    return f.field()->chi2(resultant_padded(f, h, d, dprime));
}

int jacobi_W(const WData& w, const Poly& g) {
    if (w.M.deg() < 1) return 1;
    Poly v(w.M.field());
    Poly gm = g % w.M;
    for (int j = static_cast<int>(w.W.size()) - 1; j >= 0; --j) v = (v * gm + w.W[j]) % w.M;
    return jacobi_squarefree(v, w.M);
}

int calibration_ratio(const WData& w1, const WData& w2) {
    if (w1.M != w2.M) throw Error(ErrorCode::FieldMismatch, "different moduli");
    if (w1.M.deg() < 1) return 1;
    return jacobi_squarefree((w1.c_prime * w2.c_prime) % w1.M, w1.M);
}

namespace {

WData build_W_impl(const BiPoly& F, const Poly& r, const Interval& I, const Poly* probe) {
    const Field* K = F.field();
    if (F.deg_T() < 1) throw Error(ErrorCode::DegreeContractViolated, "deg_T F must be >= 1");
    BiPoly Fr = bracket(F, r);
    if (!finite_intersection(F, Fr)) throw Error(ErrorCode::InfiniteIntersection, "Z_F and Z_F[r] share a component");
    LeadingTerm lt = leading_term_on(F, I);
    if (!lt.constant || lt.deg < 0)
        throw Error(ErrorCode::DegreeContractViolated, "leading term of F(u,g) is not constant on the interval");
    WData w;
    w.d = lt.deg;
    w.a = lt.lead;
    int mx = leading_term_on(Fr, I).max_deg;
    w.dprime = mx <= 0 ? 0 : mx + (mx % 2);
    w.R = resultant_T(F, Fr);
    w.M = radical(w.R);
    w.c_prime = Poly::one(K);
    if (w.M.deg() >= 1) {
        for (auto& [pi, e] : factor(w.M).factors) w.locals.push_back(local_W(F, Fr, pi));
        int top = 0;
        for (const auto& L : w.locals) top = std::max(top, L.W.deg());
        for (int j = 0; j <= top; ++j) {
            std::vector<std::pair<Poly, Poly>> sys;
            for (const auto& L : w.locals) sys.emplace_back(residue_of(L, L.W[j]), L.pi);
            w.W.push_back(crt(sys));
        }
    }
    auto lhs = [&](const Poly& g) { return resultant_sign(F, Fr, g, w.d, w.dprime); };
    auto try_probe = [&](const Poly& g) {
        int a = lhs(g), b = jacobi_W(w, g);
        if (a == 0 || b == 0) return false;
        w.probe_found = true;
        w.probe = g;
        if (a != b) {
            // nonresidue at the first prime, 1 at the others
            const LocalW& L0 = w.locals.at(0);
            std::vector<std::pair<Poly, Poly>> sys;
            sys.emplace_back(residue_of(L0, L0.K->primitive()), L0.pi);
            for (size_t i = 1; i < w.locals.size(); ++i) sys.emplace_back(Poly::one(K), w.locals[i].pi);
            w.c_prime = crt(sys);
            for (auto& c : w.W) c = (c * w.c_prime) % w.M;
        }
        return true;
    };
    if (probe) {
        if (!I.contains(*probe)) throw Error(ErrorCode::DegreeContractViolated, "probe outside the interval");
        if (!try_probe(*probe)) throw Error(ErrorCode::NoProbePoint, "both sides must be nonzero at the probe");
    } else {
        for (uint64_t i = 0; i < I.size() && !try_probe(I.member(i)); ++i) {
        }
    }
    for (uint64_t i = 0; i < I.size(); ++i) {
        Poly g = I.member(i);
        if (lhs(g) != jacobi_W(w, g))
            throw Error(ErrorCode::Internal, "W calibration fails at g = " + g.to_string());
    }
    return w;
}

}  // namespace

WData build_W(const BiPoly& F, const Poly& r, const Interval& I) { return build_W_impl(F, r, I, nullptr); }

WData build_W(const BiPoly& F, const Poly& r, const Interval& I, const Poly& probe) {
    return build_W_impl(F, r, I, &probe);
}

int mobius_sign(const Field* F, int d, Elem a) {
    int s = d % 2 ? -1 : 1;
    if ((static_cast<int64_t>(d) * (d - 1) / 2) % 2) s *= F->chi2(F->neg(1));
    if (d % 2) s *= F->chi2(a);
    return s;
}

MobiusReport mobius_formula_verify(const BiPoly& F, const Poly& r, const Interval& I) {
    const Field* K = F.field();
    if (!I.contains(r)) throw Error(ErrorCode::DegreeContractViolated, "r must lie in the interval");
    uint64_t p = K->p();
    int ns = static_cast<int>((I.dim + p - 1) / p);
    uint64_t count = count_pow(K->q(), ns);
    MobiusReport rep;
    BiPoly Fr = bracket(F, r);
    if (!finite_intersection(F, Fr)) {
        rep.infinite = true;
        rep.scarcity_bound = F.deg_T() * static_cast<int>(K->q() - 1);
        for (uint64_t i = 0; i < count; ++i) {
            Poly f = F.eval_T(r + pow(poly_from_index(K, i, ns), p));
            ++rep.checked;
            if (!f.is_zero() && moebius(f) != 0) ++rep.nonzero_mu;
        }
        rep.ok = rep.nonzero_mu <= rep.scarcity_bound;
        return rep;
    }
    WData w = build_W(F, r, I);
    int sign = mobius_sign(K, w.d, w.a);
    for (uint64_t i = 0; i < count; ++i) {
        Poly s = poly_from_index(K, i, ns);
        Poly g = r + pow(s, p);
        int lhs = moebius(F.eval_T(g));
        int rhs = sign * jacobi_W(w, g);
        ++rep.checked;
        if (lhs == rhs) {
            ++rep.passed;
        } else {
            ++rep.failed;
            rep.failures.push_back("s=" + s.to_string() + " mu=" + std::to_string(lhs) + " formula=" + std::to_string(rhs));
        }
    }
    rep.ok = rep.failed == 0;
    return rep;
}

// ---------------------------------------------------------------- partition

namespace {

void split(const BiPoly& F, const Interval& J, std::vector<Interval>& out) {
    if (J.dim == 0 || leading_term_on(F, J).constant) {
        out.push_back(J);
        return;
    }
    const Field* K = F.field();
    for (Elem c = 0; c < K->q(); ++c) {
        Poly b = J.base;
        b.set(J.dim - 1, c);
        split(F, Interval::make(b, J.dim - 1), out);
    }
}

}  // namespace

std::vector<Interval> partition_interval(const BiPoly& F, const Interval& I) {
    std::vector<Interval> out;
    split(F, I, out);
    return out;
}

// ---------------------------------------------------------------- degree bounds

double e_bound(double c1, double c2, double x, int k) {
    return 2.0 * k * c1 + k * std::max(0.0, c2 + x) - k + c2 * k * k;
}

DegreeBoundReport degree_bound_checks(const BiPoly& F, const Poly& r, double c1, double c2) {
    if (c1 < 0 || c2 > 0) throw Error(ErrorCode::CoefficientBoundViolated, "need c1 >= 0 >= c2");
    int k = F.deg_T();
    if (k < 1) throw Error(ErrorCode::DegreeContractViolated, "deg_T F must be >= 1");
    for (int i = 0; i <= k; ++i)
        if (F.coeff(i).deg() > c1 + c2 * i + 1e-9)
            throw Error(ErrorCode::CoefficientBoundViolated, "deg a_" + std::to_string(i) + " exceeds c1 + c2 i");
    DegreeBoundReport rep;
    rep.deg_R = resultant_T(F, bracket(F, r)).deg();
    rep.E = e_bound(c1, c2, r.is_zero() ? -1e300 : r.deg(), k);
    rep.deg_disc = disc_v(F).deg();
    rep.disc_bound = 4.0 * k * (k - 1) * (c1 + k * std::max(c2, 0.0));
    rep.ok = rep.deg_R <= rep.E + 1e-9 && rep.deg_disc <= rep.disc_bound + 1e-9;
    return rep;
}

DegreeBoundReport degree_bound_checks(const BiPoly& F, const Poly& r) {
    return degree_bound_checks(F, r, std::max(F.deg_u(), 0), 0.0);
}

// ---------------------------------------------------------------- discriminants

std::vector<Poly> resultant_v(const BiPoly& F) {
    const Field* K = F.field();
    int k = F.deg_T();
    if (k < 1) throw Error(ErrorCode::DegreeContractViolated, "deg_T F must be >= 1");
    BiPoly Fu = F.d_du(), FT = F.d_dT();
    int e = std::max(Fu.deg_T(), FT.deg_T());
    if (e < 0) return {};
    // k + 1 interpolation nodes
    const Field* E = K;
    for (int m = 2; E->q() < static_cast<uint64_t>(k + 1); ++m) E = Field::extend(K, monic_irreducibles(K, m).at(0).coeffs());
    auto lifted = [&](const BiPoly& f) {
        std::vector<Poly> c;
        for (const auto& x : f.coeffs()) c.push_back(lift(x, E));
        return BiPoly(E, std::move(c));
    };
    BiPoly F_E = lifted(F), Fu_E = lifted(Fu), FT_E = lifted(FT);
    std::vector<Elem> nodes(k + 1);
    std::vector<Poly> vals;
    for (int j = 0; j <= k; ++j) {
        nodes[j] = static_cast<Elem>(j);
        BiPoly Fv = Fu_E + FT_E.scaled(Poly::constant(E, nodes[j]));
        vals.push_back(resultant_T_formal(F_E, Fv, k, e));
    }
    std::vector<Poly> coef(k + 1, Poly(E));
    for (int j = 0; j <= k; ++j) {
        // Lagrange basis polynomial for node j
        std::vector<Elem> L{1};
        Elem den = 1;
        for (int l = 0; l <= k; ++l) {
            if (l == j) continue;
            std::vector<Elem> nl(L.size() + 1, 0);
            for (size_t i = 0; i < L.size(); ++i) {
                nl[i + 1] = E->add(nl[i + 1], L[i]);
                nl[i] = E->sub(nl[i], E->mul(L[i], nodes[l]));
            }
            L = std::move(nl);
            den = E->mul(den, E->sub(nodes[j], nodes[l]));
        }
        Elem id = E->inv(den);
        for (int i = 0; i <= k; ++i) coef[i] += vals[j].scaled(E->mul(L[i], id));
    }
    std::vector<Poly> out;
    for (const auto& c : coef) {
        for (Elem x : c.coeffs())
            if (!K->contains(x)) throw Error(ErrorCode::Internal, "R(F, F_v) left the base field");
        out.push_back(Poly(K, c.coeffs()));
    }
    while (!out.empty() && out.back().is_zero()) out.pop_back();
    return out;
}

Poly disc_v(const BiPoly& F) {
    if (!is_separable_T(F)) throw Error(ErrorCode::Inseparable, "F is not separable in T");
    const Field* K = F.field();
    BiPoly G(K, resultant_v(F));
    int n = G.deg_T();
    if (n < 1) return Poly(K);
    if (n == 1) return Poly::one(K);
    Poly R = resultant_T_formal(G, G.d_dT(), n, n - 1);
    auto [Q, rem] = divrem(R, G.lead());
    if (!rem.is_zero()) throw Error(ErrorCode::Internal, "discriminant division is not exact");
    return (static_cast<int64_t>(n) * (n - 1) / 2) % 2 ? -Q : Q;
}

std::pair<Poly, BiPoly> find_change_of_variable(const BiPoly& F, const Poly& c) {
    if (!is_separable_T(F)) throw Error(ErrorCode::Inseparable, "F is not separable in T");
    const Field* K = F.field();
    int k = F.deg_T();
    long double bound = static_cast<long double>(K->q()) * k * (k - 1) / 2;
    if (!disc_v(F).is_zero() && c.is_zero()) return {Poly::one(K), F};
    long double size = 1;
    for (int d = 0; size <= bound || d == 0; ++d, size *= K->q()) {
        for (const auto& P : monic_polys(K, d)) {
            BiPoly G = substitute_linear(F, P, c);
            if (!disc_v(G).is_zero()) return {P, G};
        }
    }
    throw Error(ErrorCode::Internal, "no admissible change of variable within |P| <= q C(k,2)");
}

std::pair<Poly, BiPoly> find_change_of_variable(const BiPoly& F) {
    return find_change_of_variable(F, Poly(F.field()));
}

std::optional<Poly> find_dirichlet_prime(const BiPoly& F, const Poly& r, const Poly& g) {
    BiPoly Fr = bracket(F, r);
    if (!finite_intersection(F, Fr)) throw Error(ErrorCode::InfiniteIntersection, "Z_F and Z_F[r] share a component");
    Poly R = resultant_T(F, Fr);
    Poly bad = g * F.lead() * disc_v(F);
    if (bad.is_zero() || R.deg() < 1) return std::nullopt;
    for (auto& [pi, e] : factor(R).factors)
        if (e % 2 && !divides(pi, bad)) return pi;
    return std::nullopt;
}

}  // namespace ffnt
