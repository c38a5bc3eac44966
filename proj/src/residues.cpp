#include "ffnt/residues.hpp"

namespace ffnt {

Residue Residue::make(const Poly& x, const Poly& g) {
    if (g.is_zero()) throw Error(ErrorCode::ZeroModulus, "residue mod 0");
    return {x % g, g};
}

Poly inv_mod(const Poly& x, const Poly& g) {
    if (g.is_zero()) throw Error(ErrorCode::ZeroModulus, "inverse mod 0");
    auto [d, s, t] = xgcd(x % g, g);
    if (!d.is_one()) throw Error(ErrorCode::NotCoprime, x.to_string() + " mod " + g.to_string());
    return s % g;
}

std::pair<Poly, Poly> bezout_pair(const Poly& x, const Poly& y) {
    const Field* F = x.field() ? x.field() : y.field();
    if (y.is_zero()) {
        if (x.deg() != 0) throw Error(ErrorCode::NotCoprime, "bezout_pair with y = 0");
        return {Poly::constant(F, F->inv(x.lead())), Poly(F)};
    }
    Poly xbar = inv_mod(x, y);
    Poly yx = (xbar * x - Poly::one(F)) / y;
    return {xbar, yx};
}

Elem norm_map(const Poly& f, const Poly& M) {
    if (M.is_zero()) throw Error(ErrorCode::ZeroModulus, "norm mod 0");
    const Field* F = M.field();
    if (M.deg() == 0) return 1;
    Poly r = f % M;
    if (r.is_zero()) return 0;
    Elem R = resultant(M, r);
    return F->div(R, F->pow(M.lead(), r.deg()));
}

int legendre(const Poly& f, const Poly& pi) {
    const Field* F = pi.field();
    Poly a = f % pi;
    if (a.is_zero()) return 0;
    // a^{(Q^d-1)/2} = (a^{1+Q+...+Q^{d-1}})^{(Q-1)/2}; the inner power lies in F_q
    uint64_t Q = F->q();
    Poly t = a, acc = a;
    for (int j = 1; j < pi.deg(); ++j) {
        t = powmod(t, Q, pi);
        acc = mulmod(acc, t, pi);
    }
    if (acc.deg() != 0) throw Error(ErrorCode::NotPrime, pi.to_string());
    return F->chi2(acc.lead());
}

int jacobi(const Poly& f, const Poly& g) {
    if (g.is_zero()) throw Error(ErrorCode::ZeroModulus, "Jacobi symbol mod 0");
    int s = 1;
    for (auto& [pi, m] : factor(g).factors) {
        int l = legendre(f, pi);
        if (l == 0) return 0;
        if (m % 2) s *= l;
    }
    return s;
}

int jacobi_squarefree(const Poly& f, const Poly& g) {
    if (g.is_zero()) throw Error(ErrorCode::ZeroModulus, "Jacobi symbol mod 0");
    return g.field()->chi2(norm_map(f, g));
}

uint64_t exp_inf(const Poly& M, const Poly& N) {
    if (N.is_zero()) throw Error(ErrorCode::ZeroDenominator, "e(M/0)");
    const Field* F = N.field();
    Poly r = M % N;
    Elem a1 = F->div(r[N.deg() - 1], N.lead());
    return F->trace(a1);
}

CycloSum indicator_expand(const Poly& M, const Poly& N, int d) {
    if (N.is_zero()) throw Error(ErrorCode::ZeroDenominator, "indicator mod 0");
    int n = N.deg();
    if (d < 0 || d > n) throw Error(ErrorCode::DegreeOutOfRange, "need 0 <= d <= deg N");
    const Field* F = N.field();
    CycloSum s(F->p());
    uint64_t count = count_pow(F->q(), n - d);
    for (uint64_t i = 0; i < count; ++i) {
        Poly h = poly_from_index(F, i, n - d);
        s.add_root(exp_inf(h * M, N));
    }
    __int128 den = 1;
    for (int i = 0; i < n - d; ++i) den *= F->q();
    return s.scaled(Rational(1, den));
}

Poly crt(const std::vector<std::pair<Poly, Poly>>& residues) {
    if (residues.empty()) throw Error(ErrorCode::ZeroModulus, "empty CRT system");
    const Field* F = residues[0].second.field();
    Poly x(F), m = Poly::one(F);
    for (const auto& [v, mod] : residues) {
        if (mod.is_zero()) throw Error(ErrorCode::ZeroModulus, "CRT modulus 0");
        if (!gcd(m, mod).is_one()) throw Error(ErrorCode::NotCoprimeModuli, mod.to_string());
        // x + m * ((v - x) * m^{-1} mod mod)
        Poly t = ((v - x) * inv_mod(m, mod)) % mod;
        x = x + m * t;
        m = m * mod;
        x = x % m;
    }
    return x;
}

}  // namespace ffnt
