#include "ffnt/qcong.hpp"

#include <cmath>
#include <map>

#include "ffnt/residues.hpp"

namespace ffnt {

namespace {

void require_irreducible(const Poly& D) {
    Poly m = -D;
    if (m.is_zero() || is_square(m)) throw Error(ErrorCode::ReducibleF, "T^2 + D is reducible");
}

void require_prime(const Poly& pi) {
    if (pi.deg() < 1 || !pi.is_monic() || !is_irreducible(pi)) throw Error(ErrorCode::NotPrime, pi.to_string());
}

uint64_t upow(uint64_t b, int e) {
    uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// square root of c mod pi in the residue field, or nullopt
std::optional<Poly> sqrt_mod_prime(const Poly& c, const Poly& pi) {
    const Field* F = pi.field();
    Poly r = c % pi;
    if (r.is_zero()) return Poly(F);
    if (pi.deg() == 1) {
        auto s = F->sqrt(r[0]);
        if (!s) return std::nullopt;
        return Poly::constant(F, *s);
    }
    const Field* K = Field::extend(F, pi.coeffs());
    std::vector<Elem> dig(pi.deg(), 0);
    for (int i = 0; i <= r.deg(); ++i) dig[i] = r[i];
    auto s = K->sqrt(K->from_digits(dig));
    if (!s) return std::nullopt;
    return Poly(F, K->digits(*s));
}

// roots of T^2 = c mod pi^r with pi not dividing c
std::vector<Poly> unit_roots(const Poly& c, const Poly& pi, int r) {
    const Field* F = pi.field();
    auto t0 = sqrt_mod_prime(c, pi);
    if (!t0) return {};
    Poly P = pow(pi, r);
    Poly t = *t0;
    Poly two = Poly::constant(F, F->from_int(2));
    for (int prec = 1; prec < r; prec *= 2) t = (t - (t * t - c) * inv_mod(two * t, P)) % P;
    Poly u = (-t) % P;
    std::vector<Poly> out{t, u};
    if (u < t) std::swap(out[0], out[1]);
    return out;
}

}  // namespace

QuadTarget QuadTarget::make(const Poly& D) {
    QuadTarget t;
    t.D = D;
    const Field* F = D.field();
    if (D.is_zero()) {
        t.D1 = Poly(F);
        t.D2 = Poly(F);
        return t;
    }
    Factorization fac = factor(D);
    t.D1 = Poly::constant(F, fac.unit);
    t.D2 = Poly::one(F);
    for (const auto& [pi, e] : fac.factors) {
        if (e % 2) t.D1 = t.D1 * pi;
        t.D2 = t.D2 * pow(pi, e / 2);
    }
    Poly m = -D;
    t.irreducible = !is_square(m);
    return t;
}

std::vector<Poly> roots_mod_prime_power(const Poly& D, const Poly& pi, int r) {
    require_prime(pi);
    if (r < 1) throw Error(ErrorCode::DegreeOutOfRange, "r >= 1");
    const Field* F = pi.field();
    Poly P = pow(pi, r);
    Poly Dr = D % P;
    int v = Dr.is_zero() ? r : valuation(Dr, pi);
    std::vector<Poly> out;
    if (v == 0) return unit_roots(-D, pi, r);
    if (v >= r) {
        // T^2 = 0 mod pi^r: multiples of pi^{ceil(r/2)}
        int h = (r + 1) / 2;
        Poly base = pow(pi, h);
        int free = (r - h) * pi.deg();
        uint64_t n = count_pow(F->q(), free);
        for (uint64_t i = 0; i < n; ++i) out.push_back(base * poly_from_index(F, i, free));
    } else {
        if (v % 2) return {};
        Poly Dp = -(Dr / pow(pi, v));
        Poly ph = pow(pi, v / 2);
        Poly step = pow(pi, r - v);
        int free = (v / 2) * pi.deg();
        uint64_t n = count_pow(F->q(), free);
        for (const Poly& t0 : unit_roots(Dp, pi, r - v))
            for (uint64_t i = 0; i < n; ++i) out.push_back((ph * (t0 + step * poly_from_index(F, i, free))) % P);
    }
    std::sort(out.begin(), out.end());
    return out;
}

uint64_t root_count_prime_power(const Poly& D, const Poly& pi, int r) {
    require_prime(pi);
    uint64_t Q = upow(pi.field()->q(), pi.deg());
    int v = D.is_zero() ? INT_MAX : valuation(D, pi);
    if (v == 0) return 1 + legendre(-D, pi);
    if (r <= v) return upow(Q, r / 2);
    if (v % 2) return 0;
    Poly Dp = D / pow(pi, v);
    return (1 + legendre(-Dp, pi)) * upow(Q, v / 2);
}

std::vector<Poly> roots_mod(const Poly& A, const Poly& D) {
    const Field* F = D.field();
    if (A.deg() <= 0) return {Poly(F)};
    Factorization fac = factor(A);
    std::vector<Poly> acc{Poly(F)};
    Poly mod = Poly::one(F);
    for (const auto& [pi, e] : fac.factors) {
        Poly P = pow(pi, e);
        auto local = roots_mod_prime_power(D, pi, e);
        std::vector<Poly> next;
        for (const auto& x : acc)
            for (const auto& y : local) next.push_back(crt({{x, mod}, {y, P}}));
        acc.swap(next);
        mod = mod * P;
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

uint64_t rho(const Poly& A, const Poly& D) {
    if (!A.is_monic()) throw Error(ErrorCode::NotMonic, A.to_string());
    if (A.deg() == 0) return 1;
    uint64_t r = 1;
    for (const auto& [pi, e] : factor(A).factors) r *= root_count_prime_power(D, pi, e);
    return r;
}

uint64_t rho_d(const Poly& A, const Poly& D, int d) {
    if (!A.is_monic()) throw Error(ErrorCode::NotMonic, A.to_string());
    int k = A.deg();
    if (d >= k) return upow(A.field()->q(), d - k) * rho(A, D);
    uint64_t n = 0;
    for_each_monic(A.field(), d, [&](const Poly& f) {
        if (((f * f + D) % A).is_zero()) ++n;
    });
    return n;
}

CycloSum rho_d_expansion(const Poly& A, const Poly& D, int d) {
    if (!A.is_monic()) throw Error(ErrorCode::NotMonic, A.to_string());
    const Field* F = A.field();
    int k = A.deg();
    if (d < 0 || d >= k) throw Error(ErrorCode::DegreeContractViolated, "need d < deg A");
    uint64_t p = F->p();
    auto roots = roots_mod(A, D);
    CycloSum s(p);
    s.add_root(0, static_cast<int64_t>(roots.size()));
    Poly ud = Poly::monomial(F, 1, d);
    uint64_t nh = count_pow(F->q(), k - d);
    for (uint64_t i = 1; i < nh; ++i) {
        Poly h = poly_from_index(F, i, k - d);
        uint64_t shift = (p - exp_inf(h * ud, A)) % p;
        for (const auto& f : roots) s.add_root(shift + exp_inf(h * f, A));
    }
    return s.scaled(Rational(1, static_cast<__int128>(upow(F->q(), k - d))));
}

int chi_F(const Poly& pi, const Poly& D) {
    require_prime(pi);
    return legendre(-D, pi);
}

std::vector<int64_t> L_chiF(const Poly& D, int terms) {
    require_irreducible(D);
    const Field* F = D.field();
    QuadTarget t = QuadTarget::make(D);
    std::vector<int64_t> c(std::max(terms, 0), 0);
    if (t.D1.deg() <= 0) {
        // (1 + qt)^{-1} prod_{pi | D} (1 - (-t)^{deg pi})
        std::vector<int64_t> num(terms, 0);
        if (terms > 0) num[0] = 1;
        for (const auto& [pi, e] : factor(D).factors) {
            int d = pi.deg();
            int64_t coef = (d % 2 == 0) ? -1 : 1;  // -(-1)^d
            for (int i = terms - 1; i >= d; --i) num[i] += coef * num[i - d];
        }
        int64_t q = static_cast<int64_t>(F->q());
        for (int i = 0; i < terms; ++i) c[i] = num[i] - (i > 0 ? q * c[i - 1] : 0);
        return c;
    }
    // polynomial of degree < deg D; higher coefficients vanish
    Poly mD = -D;
    for (int k = 0; k < terms && k <= D.deg(); ++k) {
        int64_t s = 0;
        for_each_monic(F, k, [&](const Poly& f) { s += jacobi(mD, f); });
        c[k] = s;
    }
    int bound = t.D1.deg() - 1;
    for (const auto& [pi, e] : factor(t.D2).factors)
        if (!divides(pi, t.D1)) bound += pi.deg();
    for (int k = bound + 1; k < terms && k <= D.deg(); ++k)
        if (c[k] != 0) throw Error(ErrorCode::Internal, "L-function has unexpected degree");
    return c;
}

long double L_value(const Poly& D, long double t) {
    QuadTarget tg = QuadTarget::make(D);
    if (tg.D1.deg() <= 0) {
        require_irreducible(D);
        long double v = 1.0L / (1.0L + static_cast<long double>(D.field()->q()) * t);
        for (const auto& [pi, e] : factor(D).factors) v *= 1.0L - std::pow(-t, static_cast<long double>(pi.deg()));
        return v;
    }
    auto c = L_chiF(D, D.deg() + 1);
    long double v = 0, tk = 1;
    for (auto x : c) {
        v += static_cast<long double>(x) * tk;
        tk *= t;
    }
    return v;
}

namespace {

int moebius_int(int n) {
    int r = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
    }
    if (n > 1) r = -r;
    return r;
}

__int128 monic_prime_count(uint64_t q, int d) {
    __int128 s = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        int m = moebius_int(d / e);
        __int128 qe = 1;
        for (int i = 0; i < e; ++i) qe *= q;
        s += m * qe;
    }
    return s / d;
}

}  // namespace

PrimeCounts prime_counts(const Poly& D, int maxdeg) {
    require_irreducible(D);
    const Field* F = D.field();
    PrimeCounts pc;
    for (auto* v : {&pc.primes, &pc.dividing, &pc.chi_sum, &pc.plus, &pc.minus}) v->assign(maxdeg + 1, 0);
    for (int d = 1; d <= maxdeg; ++d) pc.primes[d] = monic_prime_count(F->q(), d);
    for (const auto& [pi, e] : factor(D).factors)
        if (pi.deg() <= maxdeg) pc.dividing[pi.deg()] += 1;
    // t L'/L = sum_n a_n t^n, a_n = sum_{d | n} d sum_{deg pi = d} chi(pi)^{n/d}
    auto c64 = L_chiF(D, maxdeg + 1);
    std::vector<__int128> c(c64.begin(), c64.end()), a(maxdeg + 1, 0);
    for (int n = 1; n <= maxdeg; ++n) {
        __int128 s = n * c[n];
        for (int j = 1; j < n; ++j) s -= a[j] * c[n - j];
        a[n] = s;
    }
    for (int n = 1; n <= maxdeg; ++n) {
        __int128 s = a[n];
        for (int d = 1; d < n; ++d) {
            if (n % d) continue;
            __int128 term = ((n / d) % 2) ? pc.chi_sum[d] : pc.primes[d] - pc.dividing[d];
            s -= d * term;
        }
        if (s % n) throw Error(ErrorCode::Internal, "prime count not integral");
        pc.chi_sum[n] = s / n;
        __int128 unit = pc.primes[n] - pc.dividing[n];
        pc.plus[n] = (unit + pc.chi_sum[n]) / 2;
        pc.minus[n] = (unit - pc.chi_sum[n]) / 2;
    }
    return pc;
}

PrimeCounts prime_counts_direct(const Poly& D, int maxdeg) {
    const Field* F = D.field();
    PrimeCounts pc;
    for (auto* v : {&pc.primes, &pc.dividing, &pc.chi_sum, &pc.plus, &pc.minus}) v->assign(maxdeg + 1, 0);
    Poly mD = -D;
    for (int d = 1; d <= maxdeg; ++d) {
        for (const auto& pi : monic_irreducibles(F, d)) {
            int c = legendre(mD, pi);
            pc.primes[d] += 1;
            pc.chi_sum[d] += c;
            if (c == 0) pc.dividing[d] += 1;
            if (c == 1) pc.plus[d] += 1;
            if (c == -1) pc.minus[d] += 1;
        }
    }
    return pc;
}

SingularSeries singular_series(const Poly& D, int cutoff) {
    require_irreducible(D);
    if (cutoff < 1) throw Error(ErrorCode::DegreeOutOfRange, "cutoff >= 1");
    const Field* F = D.field();
    __int128 q = F->q();
    // the value uses a long tail of degrees; the L-function counts make that cheap
    int tail = std::max(cutoff, 36);
    PrimeCounts pc = prime_counts(D, tail);
    SingularSeries out;
    out.cutoff = cutoff;
    long double euler = 1, corr = 1;
    __int128 Q = 1;
    for (int d = 1; d <= tail; ++d) {
        Q *= q;
        long double x = 1.0L / static_cast<long double>(Q);
        if (d <= cutoff) {
            // exact local factors, then one conversion each
            Rational fp(Q - 2, Q - 1), f0(1), fm(Q, Q - 1);
            euler *= std::pow(fp.to_ld(), static_cast<long double>(pc.plus[d])) *
                     std::pow(fm.to_ld(), static_cast<long double>(pc.minus[d])) *
                     std::pow(f0.to_ld(), static_cast<long double>(pc.dividing[d]));
        }
        long double cp = 1.0L - x * x / ((1.0L - x) * (1.0L - x));
        long double cm = 1.0L + x * x / ((1.0L - x) * (1.0L + x));
        corr *= std::pow(cp, static_cast<long double>(pc.plus[d])) * std::pow(cm, static_cast<long double>(pc.minus[d]));
    }
    out.value = corr / L_value(D, 1.0L / static_cast<long double>(q));
    out.euler = euler;
    out.path_gap = std::fabs(out.value - out.euler);
    return out;
}

std::vector<__int128> mu_rho_sums(const Poly& D, int n) {
    require_irreducible(D);
    PrimeCounts pc = prime_counts(D, n);
    // prod over primes of (1 - (1 + chi(pi)) t^{deg pi})
    std::vector<__int128> s(n + 1, 0);
    s[0] = 1;
    // times (1 - c t^d)^N, expanded binomially up to t^n
    auto mul_factor = [&](int d, __int128 c, __int128 N) {
        if (N == 0) return;
        std::vector<__int128> f(n / d + 1, 0);
        __int128 binom = 1, cp = 1;
        for (int j = 0; j <= n / d && j <= N; ++j) {
            f[j] = ((j % 2) ? -1 : 1) * binom * cp;
            binom = binom * (N - j) / (j + 1);
            cp *= c;
        }
        std::vector<__int128> r(n + 1, 0);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j * d <= i; ++j) r[i] += s[i - j * d] * f[j];
        s.swap(r);
    };
    for (int d = 1; d <= n; ++d) {
        mul_factor(d, 2, pc.plus[d]);
        mul_factor(d, 1, pc.dividing[d]);
    }
    return s;
}

Convergence convergence_check(const Poly& D, int n) {
    require_irreducible(D);
    auto s = mu_rho_sums(D, n);
    long double q = static_cast<long double>(D.field()->q());
    Convergence c;
    long double qk = 1;
    for (int k = 1; k <= n; ++k) {
        qk *= q;
        c.partial += static_cast<long double>(k) * static_cast<long double>(s[k]) / qk;
    }
    c.target = -singular_series(D, std::max(n, 12)).value;
    c.gap = std::fabs(c.partial - c.target);
    return c;
}

}  // namespace ffnt
