#include "ffnt/poly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace ffnt {

namespace {

const Field* common_field(const Poly& a, const Poly& b) {
    if (a.field() == b.field()) return a.field();
    if (a.field() == nullptr) return b.field();
    if (b.field() == nullptr) return a.field();
    throw Error(ErrorCode::FieldMismatch, "polynomials over different fields");
}

}  // namespace

Poly Poly::monomial(const Field* F, Elem c, int n) {
    if (c == 0) return Poly(F);
    std::vector<Elem> v(n + 1, 0);
    v[n] = c;
    return Poly(F, std::move(v));
}

Poly Poly::parse(const Field* F, const std::string& s) {
    std::vector<Elem> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        try {
            size_t pos = 0;
            long long x = std::stoll(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            if (x < 0) {
                v.push_back(F->from_int(x));
            } else {
                if (static_cast<uint64_t>(x) >= F->q())
                    throw Error(ErrorCode::ParseError, "coefficient code out of range: " + tok);
                v.push_back(static_cast<Elem>(x));
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad polynomial '" + s + "'");
        }
    }
    return Poly(F, std::move(v));
}

Poly Poly::monic() const {
    if (is_zero() || lead() == 1) return *this;
    return scaled(F_->inv(lead()));
}

long double Poly::norm() const {
    if (is_zero()) return 0;
    long double r = 1;
    for (int i = 0; i < deg(); ++i) r *= static_cast<long double>(F_->q());
    return r;
}

std::string Poly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    return os.str();
}

void Poly::set(int i, Elem v) {
    if (i >= static_cast<int>(c_.size())) {
        if (v == 0) return;
        c_.resize(i + 1, 0);
    }
    c_[i] = v;
    trim();
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = F_->neg(x);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    F_ = common_field(*this, o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->add(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    F_ = common_field(*this, o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly Poly::scaled(Elem s) const {
    if (s == 0) return Poly(F_);
    Poly r = *this;
    for (auto& x : r.c_) x = F_->mul(x, s);
    return r;
}

Poly Poly::shifted(int n) const {
    if (is_zero()) return *this;
    std::vector<Elem> v(n, 0);
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(F_, std::move(v));
}

Elem Poly::eval(Elem x) const {
    Elem r = 0;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) r = F_->add(F_->mul(r, x), c_[i]);
    return r;
}

Elem Poly::eval_in(const Field* E, Elem x) const {
    Elem r = 0;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) r = E->add(E->mul(r, x), c_[i]);
    return r;
}

bool Poly::operator<(const Poly& o) const {
    if (deg() != o.deg()) return deg() < o.deg();
    for (int i = deg(); i >= 0; --i)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    r += b;
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    r -= b;
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    const Field* F = common_field(a, b);
    if (a.is_zero() || b.is_zero()) return Poly(F);
    const auto& x = a.coeffs();
    const auto& y = b.coeffs();
    std::vector<Elem> r(x.size() + y.size() - 1, 0);
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < y.size(); ++j) r[i + j] = F->add(r[i + j], F->mul(x[i], y[j]));
    }
    return Poly(F, std::move(r));
}

Poly operator/(const Poly& a, const Poly& b) { return divrem(a, b).first; }
Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).second; }

bool is_subfield(const Field* F, const Field* E) {
    for (const Field* e = E; e != nullptr; e = e->base())
        if (e == F) return true;
    return false;
}

Poly lift(const Poly& f, const Field* E) {
    if (!is_subfield(f.field(), E)) throw Error(ErrorCode::FieldMismatch, "not a subfield");
    return Poly(E, f.coeffs());
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    const Field* F = common_field(a, b);
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
    if (a.deg() < b.deg()) return {Poly(F), a};
    std::vector<Elem> r = a.coeffs();
    const auto& d = b.coeffs();
    int n = b.deg();
    Elem li = F->inv(b.lead());
    std::vector<Elem> qv(a.deg() - n + 1, 0);
    for (int i = a.deg(); i >= n; --i) {
        Elem c = r[i];
        if (c == 0) continue;
        c = F->mul(c, li);
        qv[i - n] = c;
        for (int j = 0; j <= n; ++j) r[i - n + j] = F->sub(r[i - n + j], F->mul(c, d[j]));
    }
    r.resize(n);
    return {Poly(F, std::move(qv)), Poly(F, std::move(r))};
}

bool divides(const Poly& a, const Poly& b) { return (b % a).is_zero(); }

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(common_field(a, b));
    return (a.monic() / gcd(a, b)) * b.monic();
}

Xgcd xgcd(const Poly& a, const Poly& b) {
    const Field* F = common_field(a, b);
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::one(F), s1(F), t0(F), t1 = Poly::one(F);
    while (!r1.is_zero()) {
        auto [qq, rr] = divrem(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(rr);
        Poly s2 = s0 - qq * s1;
        Poly t2 = t0 - qq * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Elem li = F->inv(r0.lead());
    return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

Poly derivative(const Poly& f) {
    const Field* F = f.field();
    if (f.deg() <= 0) return Poly(F);
    std::vector<Elem> r(f.deg(), 0);
    for (int i = 1; i <= f.deg(); ++i) r[i - 1] = F->mul(F->from_int(i), f[i]);
    return Poly(F, std::move(r));
}

Poly pow(const Poly& f, uint64_t e) {
    Poly r = Poly::one(f.field()), b = f;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& a, uint64_t e, const Poly& m) {
    Poly r = Poly::one(a.field()) % m, b = a % m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        e >>= 1;
        if (e) b = mulmod(b, b, m);
    }
    return r;
}

Poly compose_mod(const Poly& f, const Poly& g, const Poly& m) {
    Poly r(f.field());
    for (int i = f.deg(); i >= 0; --i) r = (mulmod(r, g, m) + Poly::constant(f.field(), f[i])) % m;
    return r;
}

Poly compose(const Poly& f, const Poly& g) {
    Poly r(f.field());
    for (int i = f.deg(); i >= 0; --i) r = r * g + Poly::constant(f.field(), f[i]);
    return r;
}

Poly pth_root(const Poly& f) {
    const Field* F = f.field();
    uint64_t p = F->p();
    if (f.is_zero()) return f;
    std::vector<Elem> r(f.deg() / p + 1, 0);
    uint64_t e = F->q() / p;
    for (int i = 0; i <= f.deg(); ++i) {
        if (f[i] == 0) continue;
        if (i % p != 0) return Poly(F);
        r[i / p] = F->pow(f[i], e);
    }
    return Poly(F, std::move(r));
}

bool is_square(const Poly& f) {
    if (f.is_zero()) return true;
    if (f.deg() % 2 != 0) return false;
    if (f.field()->chi2(f.lead()) != 1) return false;
    Poly r = poly_sqrt(f);
    return r * r == f;
}

Poly poly_sqrt(const Poly& f) {
    // Top-down coefficient matching; exact when f is a square.
    const Field* F = f.field();
    if (f.is_zero()) return f;
    int n = f.deg() / 2;
    auto lr = F->sqrt(f.lead());
    if (!lr || f.deg() % 2) return Poly(F);
    std::vector<Elem> r(n + 1, 0);
    r[n] = *lr;
    Elem inv2r = F->inv(F->add(r[n], r[n]));
    for (int k = n - 1; k >= 0; --k) {
        // [u^{n+k}] r^2 = 2 r_n r_k + sum of r_i r_j over k < i, j < n
        Elem acc = 0;
        for (int i = k + 1; i < n; ++i) {
            int j = n + k - i;
            if (j > k && j < n) acc = F->add(acc, F->mul(r[i], r[j]));
        }
        r[k] = F->mul(F->sub(f[n + k], acc), inv2r);
    }
    return Poly(F, std::move(r));
}

Poly Factorization::product(const Field* F) const {
    Poly r = Poly::constant(F, unit);
    for (const auto& [pf, m] : factors) r = r * pow(pf, m);
    return r;
}

bool is_irreducible(const Poly& f) {
    int n = f.deg();
    if (n <= 0) return false;
    if (n == 1) return true;
    const Field* F = f.field();
    Poly g = f.monic();
    Poly x = Poly::x(F);
    uint64_t Q = F->q();
    std::vector<Poly> frob(n + 1);
    frob[0] = x % g;
    for (int i = 1; i <= n; ++i) frob[i] = powmod(frob[i - 1], Q, g);
    if (frob[n] != frob[0]) return false;
    for (auto l : prime_factors_u64(n)) {
        Poly h = frob[n / l] - x;
        if (!gcd(h, g).is_one()) return false;
    }
    return true;
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& monic_f) {
    const Field* F = monic_f.field();
    std::vector<std::pair<Poly, int>> out;
    if (monic_f.deg() <= 0) return out;
    int p = static_cast<int>(F->p());
    Poly d = derivative(monic_f);
    if (d.is_zero()) {
        for (auto& [g, m] : squarefree_decomposition(pth_root(monic_f).monic())) out.push_back({g, m * p});
        return out;
    }
    Poly c = gcd(monic_f, d);
    Poly w = monic_f / c;
    int i = 1;
    while (!w.is_one()) {
        Poly y = gcd(w, c);
        Poly fac = w / y;
        if (fac.deg() > 0) out.push_back({fac.monic(), i});
        w = y;
        c = c / y;
        ++i;
    }
    if (c.deg() > 0) {
        for (auto& [g, m] : squarefree_decomposition(pth_root(c.monic()).monic())) out.push_back({g, m * p});
    }
    return out;
}

std::vector<std::pair<Poly, int>> distinct_degree(const Poly& squarefree_monic) {
    const Field* F = squarefree_monic.field();
    std::vector<std::pair<Poly, int>> out;
    Poly f = squarefree_monic;
    Poly x = Poly::x(F);
    Poly h = x % f;
    uint64_t Q = F->q();
    int d = 0;
    while (f.deg() >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, Q, f);
        Poly g = gcd(h - x, f);
        if (!g.is_one()) {
            out.push_back({g, d});
            f = f / g;
            h = h % f;
        }
    }
    if (f.deg() > 0) out.push_back({f.monic(), f.deg()});
    return out;
}

std::vector<Poly> equal_degree_split(const Poly& f, int d, uint64_t seed) {
    const Field* F = f.field();
    std::vector<Poly> done;
    if (f.deg() == d) return {f.monic()};
    std::mt19937_64 rng(seed ^ (static_cast<uint64_t>(f.deg()) << 32) ^ f.coeffs()[0]);
    uint64_t Q = F->q();
    std::vector<Poly> stack{f.monic()};
    while (!stack.empty()) {
        Poly g = stack.back();
        stack.pop_back();
        if (g.deg() == d) {
            done.push_back(g);
            continue;
        }
        while (true) {
            std::vector<Elem> c(g.deg());
            for (auto& x : c) x = rng() % Q;
            Poly a(F, c);
            if (a.deg() <= 0) continue;
            Poly t = a, acc = a;
            for (int j = 1; j < d; ++j) {
                t = powmod(t, Q, g);
                acc = mulmod(acc, t, g);
            }
            Poly b = powmod(acc, (Q - 1) / 2, g) - Poly::one(F);
            Poly h = gcd(b, g);
            if (h.deg() > 0 && h.deg() < g.deg()) {
                stack.push_back(h);
                stack.push_back(g / h);
                break;
            }
        }
    }
    std::sort(done.begin(), done.end());
    return done;
}

Factorization factor(const Poly& f, uint64_t seed) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "factor(0)");
    Factorization out;
    out.unit = f.lead();
    Poly g = f.monic();
    for (auto& [s, m] : squarefree_decomposition(g)) {
        for (auto& [h, d] : distinct_degree(s)) {
            for (auto& pf : equal_degree_split(h, d, seed)) out.factors[pf] += m;
        }
    }
    return out;
}

Poly radical(const Poly& f) {
    Poly r = Poly::one(f.field());
    for (auto& [pf, m] : factor(f).factors) r = r * pf;
    return r;
}

int valuation(const Poly& f, const Poly& pi) {
    if (f.is_zero()) return INT_MAX;
    int v = 0;
    Poly g = f;
    while (true) {
        auto [qq, rr] = divrem(g, pi);
        if (!rr.is_zero()) return v;
        g = std::move(qq);
        ++v;
    }
}

int moebius(const Poly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "moebius(0)");
    int mu = 1;
    for (auto& [pf, m] : factor(f).factors) {
        if (m >= 2) return 0;
        mu = -mu;
    }
    return mu;
}

int von_mangoldt(const Poly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "von_mangoldt(0)");
    auto fac = factor(f);
    if (fac.factors.size() != 1) return 0;
    return fac.factors.begin()->first.deg();
}

int von_mangoldt_convolution(const Poly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "von_mangoldt(0)");
    auto fac = factor(f);
    std::vector<std::pair<Poly, int>> pf(fac.factors.begin(), fac.factors.end());
    const Field* F = f.field();
    int total = 0;
    std::vector<int> e(pf.size(), 0);
    while (true) {
        Poly A = Poly::one(F);
        for (size_t i = 0; i < pf.size(); ++i) A = A * pow(pf[i].first, e[i]);
        total -= pellet_moebius(A) * std::max(A.deg(), 0);
        size_t i = 0;
        while (i < pf.size() && ++e[i] > pf[i].second) e[i++] = 0;
        if (i == pf.size()) break;
    }
    return total;
}

int von_mangoldt_fast(const Poly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "von_mangoldt(0)");
    Poly g = f.monic();
    int n = g.deg();
    if (n <= 0) return 0;
    if (n == 1) return 1;
    const Field* F = g.field();
    Poly x = Poly::x(F);
    Poly h = x;
    uint64_t Q = F->q();
    for (int i = 1; 2 * i <= n; ++i) {
        h = powmod(h, Q, g);
        Poly G = gcd(h - x, g);
        if (!G.is_one()) {
            if (G.deg() != i || n % i != 0) return 0;
            return pow(G, n / i) == g ? i : 0;
        }
    }
    return n;
}

Elem resultant_sylvester(const Poly& a, const Poly& b) {
    const Field* F = common_field(a, b);
    if (a.is_zero() || b.is_zero()) return 0;
    int m = a.deg(), n = b.deg();
    int N = m + n;
    if (N == 0) return 1;
    std::vector<std::vector<Elem>> M(N, std::vector<Elem>(N, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) M[i][i + j] = a[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) M[n + i][i + j] = b[n - j];
    Elem det = 1;
    for (int col = 0; col < N; ++col) {
        int piv = -1;
        for (int r = col; r < N; ++r)
            if (M[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = F->neg(det);
        }
        det = F->mul(det, M[col][col]);
        Elem iv = F->inv(M[col][col]);
        for (int r = col + 1; r < N; ++r) {
            if (M[r][col] == 0) continue;
            Elem fct = F->mul(M[r][col], iv);
            for (int c = col; c < N; ++c) M[r][c] = F->sub(M[r][c], F->mul(fct, M[col][c]));
        }
    }
    return det;
}

Elem resultant_euclid(const Poly& a0, const Poly& b0) {
    const Field* F = common_field(a0, b0);
    if (a0.is_zero() || b0.is_zero()) return 0;
    Poly a = a0, b = b0;
    Elem acc = 1;
    while (true) {
        int m = a.deg(), n = b.deg();
        if (n == 0) return F->mul(acc, F->pow(b.lead(), m));
        if (m == 0) return F->mul(acc, F->pow(a.lead(), n));
        // R(a,b) = (-1)^{mn} R(b,a) = (-1)^{mn} lc(b)^{m - deg r} R(b, r)
        Poly r = a % b;
        if (r.is_zero()) return 0;
        if ((static_cast<int64_t>(m) * n) % 2) acc = F->neg(acc);
        acc = F->mul(acc, F->pow(b.lead(), m - r.deg()));
        a = std::move(b);
        b = std::move(r);
    }
}

Elem resultant(const Poly& a, const Poly& b) {
    if (std::max(a.deg(), b.deg()) <= 8) return resultant_sylvester(a, b);
    return resultant_euclid(a, b);
}

Elem resultant_padded(const Poly& a, const Poly& b, int d, int dprime) {
    if (a.deg() != d || b.deg() > dprime)
        throw Error(ErrorCode::DegreeContractViolated, "resultant_padded needs d = deg a, d' >= deg b");
    if (b.is_zero()) return 0;
    const Field* F = a.field();
    return F->mul(F->pow(a.lead(), dprime - b.deg()), resultant(a, b));
}

Elem discriminant(const Poly& f) {
    if (f.deg() < 1) throw Error(ErrorCode::ConstantPolynomial, "discriminant of a constant");
    const Field* F = f.field();
    int d = f.deg();
    Poly fd = derivative(f);
    if (fd.is_zero()) return 0;
    Elem r = resultant_padded(f, fd, d, d - 1);
    if ((static_cast<int64_t>(d) * (d - 1) / 2) % 2) r = F->neg(r);
    return F->div(r, F->pow(f.lead(), 2 * d - 1));
}

int pellet_moebius(const Poly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "pellet_moebius(0)");
    if (f.deg() == 0) return 1;
    int c = f.field()->chi2(discriminant(f));
    return (f.deg() % 2) ? -c : c;
}

Interval Interval::make(const Poly& f, int d) {
    Interval I;
    std::vector<Elem> c = f.coeffs();
    for (int i = 0; i < d && i < static_cast<int>(c.size()); ++i) c[i] = 0;
    I.base = Poly(f.field(), std::move(c));
    I.dim = d;
    return I;
}

long double Interval::len() const {
    long double r = 1;
    for (int i = 0; i < dim; ++i) r *= static_cast<long double>(field()->q());
    return r;
}

int Interval::degree() const { return std::max(dim, base.deg()); }

bool Interval::contains(const Poly& g) const {
    for (int i = dim; i <= std::max(g.deg(), base.deg()); ++i)
        if (g[i] != base[i]) return false;
    return true;
}

uint64_t Interval::size() const { return count_pow(field()->q(), dim); }

Poly Interval::member(uint64_t index) const { return base + poly_from_index(field(), index, dim); }

std::vector<Elem> Interval::coordinates(const Poly& g) const {
    std::vector<Elem> c(dim);
    for (int i = 0; i < dim; ++i) c[i] = g[i];
    return c;
}

uint64_t count_pow(uint64_t q, int n) {
    uint64_t r = 1;
    for (int i = 0; i < n; ++i) r *= q;
    return r;
}

Poly poly_from_index(const Field* F, uint64_t index, int n) {
    std::vector<Elem> c(n);
    uint64_t q = F->q();
    for (int i = 0; i < n; ++i) {
        c[i] = index % q;
        index /= q;
    }
    return Poly(F, std::move(c));
}

void for_each_monic(const Field* F, int n, const std::function<void(const Poly&)>& fn) {
    uint64_t N = count_pow(F->q(), n);
    Poly top = Poly::monomial(F, 1, n);
    for (uint64_t i = 0; i < N; ++i) fn(top + poly_from_index(F, i, n));
}

void for_each_in_interval(const Interval& I, const std::function<void(const Poly&)>& fn) {
    uint64_t N = I.size();
    for (uint64_t i = 0; i < N; ++i) fn(I.member(i));
}

void for_each_norm_le(const Field* F, int m, const std::function<void(const Poly&)>& fn) {
    uint64_t N = count_pow(F->q(), m + 1);
    for (uint64_t i = 0; i < N; ++i) fn(poly_from_index(F, i, m + 1));
}

std::vector<Poly> monic_polys(const Field* F, int n) {
    std::vector<Poly> out;
    for_each_monic(F, n, [&](const Poly& f) { out.push_back(f); });
    return out;
}

std::vector<Poly> monic_irreducibles(const Field* F, int n) {
    std::vector<Poly> out;
    for_each_monic(F, n, [&](const Poly& f) {
        if (is_irreducible(f)) out.push_back(f);
    });
    return out;
}

}  // namespace ffnt
