#include "ffnt/qform.hpp"

#include <algorithm>
#include <map>

#include "ffnt/residues.hpp"

namespace ffnt {

Poly QuadForm::disc() const {
    const Field* F = field();
    Poly b2 = b * b;
    return a * c - b2.scaled(F->inv(F->from_int(4)));
}

Poly QuadForm::eval(const Poly& x, const Poly& y) const { return a * x * x + b * x * y + c * y * y; }

bool QuadForm::operator<(const QuadForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

SL2Mat SL2Mat::identity(const Field* F) { return {Poly::one(F), Poly(F), Poly(F), Poly::one(F)}; }

SL2Mat SL2Mat::unipotent(const Poly& g) {
    const Field* F = g.field();
    return {Poly::one(F), g, Poly(F), Poly::one(F)};
}

SL2Mat SL2Mat::operator*(const SL2Mat& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22, m21 * o.m11 + m22 * o.m21,
            m21 * o.m12 + m22 * o.m22};
}

SL2Mat SL2Mat::inverse() const { return {m22, -m12, -m21, m11}; }

bool Representation::is_primitive() const {
    if (x.is_zero() && y.is_zero()) return false;
    return gcd(x, y).is_one() && classify(form) != FormClass::Degenerate;
}

const char* form_class_name(FormClass c) {
    switch (c) {
        case FormClass::Degenerate: return "degenerate";
        case FormClass::Definite: return "definite";
        case FormClass::Indefinite: return "indefinite";
    }
    return "?";
}

FormClass classify_disc(const Poly& D) {
    Poly m = -D;
    if (m.is_zero() || is_square(m)) return FormClass::Degenerate;
    if (m.deg() % 2 == 0 && m.field()->chi2(m.lead()) == 1) return FormClass::Indefinite;
    return FormClass::Definite;
}

FormClass classify(const QuadForm& Q) { return classify_disc(Q.disc()); }

namespace {

void require_unimodular(const SL2Mat& M) {
    if (!M.det().is_one()) throw Error(ErrorCode::NotUnimodular, "det M != 1");
}

void require_primitive(const Representation& r) {
    if (!r.is_primitive()) throw Error(ErrorCode::NotPrimitive, "representation is not primitive");
}

}  // namespace

std::pair<Poly, Poly> sl2_act(const std::pair<Poly, Poly>& v, const SL2Mat& M) {
    require_unimodular(M);
    const auto& [x, y] = v;
    return {M.m22 * x - M.m12 * y, M.m11 * y - M.m21 * x};
}

QuadForm sl2_act(const QuadForm& Q, const SL2Mat& M) {
    require_unimodular(M);
    const Field* F = Q.field();
    Poly two = Poly::constant(F, F->from_int(2));
    const Poly &al = M.m11, &be = M.m12, &ga = M.m21, &de = M.m22;
    return {Q.a * al * al + Q.b * al * ga + Q.c * ga * ga,
            two * Q.a * al * be + Q.b * (al * de + be * ga) + two * Q.c * ga * de,
            Q.a * be * be + Q.b * be * de + Q.c * de * de};
}

Representation sl2_act(const Representation& r, const SL2Mat& M) {
    auto [x, y] = sl2_act(std::make_pair(r.x, r.y), M);
    return {sl2_act(r.form, M), x, y};
}

Solution associated_solution(const Representation& rep) {
    require_primitive(rep);
    const QuadForm& Q = rep.form;
    const Field* F = Q.field();
    Poly A = rep.value();
    auto [xbar, yx] = bezout_pair(rep.x, rep.y);
    Poly hb = Q.b.scaled(F->half());
    Poly f = Q.a * yx * rep.x + hb * (xbar * rep.x + yx * rep.y) + Q.c * xbar * rep.y;
    return {A, f % A};
}

Representation representation_from_solution(const Poly& A, const Poly& f, const Poly& D) {
    const Field* F = D.field();
    if (A.is_zero()) throw Error(ErrorCode::NotASolution, "A = 0");
    auto [c, r] = divrem(f * f + D, A);
    if (!r.is_zero()) throw Error(ErrorCode::NotASolution, "f^2 + D != 0 mod A");
    if (classify_disc(D) == FormClass::Degenerate) throw Error(ErrorCode::NotASolution, "-D is a square");
    return {{A, f.scaled(F->from_int(2)), c}, Poly::one(F), Poly(F)};
}

bool is_standard_definite(const QuadForm& Q) {
    if (Q.a.is_zero()) return false;
    if (!(Q.b.deg() < Q.a.deg() && Q.a.deg() <= Q.c.deg())) return false;
    return classify(Q) == FormClass::Definite;
}

std::vector<std::pair<Poly, Poly>> short_vectors(const QuadForm& Q) {
    if (!is_standard_definite(Q)) throw Error(ErrorCode::NotStandardDefinite, "form is not standard definite");
    const Field* F = Q.field();
    std::vector<std::pair<Poly, Poly>> out;
    if (Q.a.deg() < Q.c.deg()) {
        for (Elem l = 1; l < F->q(); ++l) out.emplace_back(Poly::constant(F, l), Poly(F));
    } else {
        for (Elem x = 0; x < F->q(); ++x)
            for (Elem y = 0; y < F->q(); ++y)
                if (x || y) out.emplace_back(Poly::constant(F, x), Poly::constant(F, y));
    }
    return out;
}

std::vector<std::pair<Poly, Poly>> short_vectors_by_scan(const QuadForm& Q, int box) {
    const Field* F = Q.field();
    int best = INT_MAX;
    std::vector<std::pair<Poly, Poly>> out;
    uint64_t n = count_pow(F->q(), box + 1);
    for (uint64_t i = 0; i < n; ++i) {
        Poly x = poly_from_index(F, i, box + 1);
        for (uint64_t j = 0; j < n; ++j) {
            Poly y = poly_from_index(F, j, box + 1);
            if ((x.is_zero() && y.is_zero()) || !gcd(x, y).is_one()) continue;
            int d = Q.eval(x, y).deg();
            if (d < best) {
                best = d;
                out.clear();
            }
            if (d == best) out.emplace_back(x, y);
        }
    }
    return out;
}

std::pair<Representation, SL2Mat> standardize_definite(const Representation& rep,
                                                       const std::pair<Poly, Poly>& v) {
    if (classify(rep.form) != FormClass::Definite) throw Error(ErrorCode::WrongMode, "form is not definite");
    const auto& [x, y] = v;
    if ((x.is_zero() && y.is_zero()) || !gcd(x, y).is_one())
        throw Error(ErrorCode::NotShortVector, "vector is not primitive");
    auto [xbar, yx] = bezout_pair(x, y);
    SL2Mat Mv{x, yx, y, xbar};
    QuadForm Q1 = sl2_act(rep.form, Mv);
    Poly g = Q1.b / Q1.a;
    SL2Mat M = Mv * SL2Mat::unipotent(g.scaled(rep.form.field()->neg(rep.form.field()->half())));
    Representation out = sl2_act(rep, M);
    if (!is_standard_definite(out.form)) throw Error(ErrorCode::NotShortVector, "vector is not short");
    return {out, M};
}

Rational indefinite_weight(uint64_t q, int s) {
    __int128 Q = q;
    if (s == 0) return Rational(1, Q * Q * Q - Q);
    __int128 d = Q - 1;
    for (int i = 0; i <= s; ++i) d *= Q;
    return Rational(1, d);
}

namespace {

// 4 * deg, with deg 0 polynomials treated as -infinity
long deg4(const Poly& f) { return f.is_zero() ? LONG_MIN / 8 : 4L * f.deg(); }

bool indefinite_s_ok(const QuadForm& Q, const Poly& x, const Poly& y, int degD, int degA, int s) {
    long d4 = 4L * degD / 2;  // 4 * deg D / 2
    if (deg4(Q.a) > d4 - 4L * s) return false;
    if (deg4(Q.b) > d4) return false;
    if (deg4(Q.c) > d4 + 4L * s) return false;
    long base = 2L * degA - degD;  // 4 * (deg A / 2 - deg D / 4)
    if (deg4(x) > base + 2L * s) return false;
    if (deg4(y) > base - 2L * s) return false;
    return true;
}

}  // namespace

std::optional<int> standard_indefinite_s(const Representation& rep) {
    Poly D = rep.form.disc();
    if (classify_disc(D) != FormClass::Indefinite) throw Error(ErrorCode::NotIndefinite, "form is not indefinite");
    Poly A = rep.value();
    if (A.is_zero()) throw Error(ErrorCode::NotPrimitive, "Q(x,y) = 0");
    int degD = D.deg(), degA = A.deg();
    std::optional<int> found;
    for (int s = 0; s <= degD / 2; ++s) {
        if (!indefinite_s_ok(rep.form, rep.x, rep.y, degD, degA, s)) continue;
        if (found) throw Error(ErrorCode::Internal, "standard s is not unique");
        found = s;
    }
    if (found && ((degD / 2 - degA - *found) % 2 != 0))
        throw Error(ErrorCode::Internal, "parity of s violated");
    return found;
}

std::optional<std::pair<int, Rational>> standard_indefinite_data(const Representation& rep) {
    auto s = standard_indefinite_s(rep);
    if (!s) return std::nullopt;
    return std::make_pair(*s, indefinite_weight(rep.form.field()->q(), *s));
}

namespace {

// all nonzero a dividing N with deg a <= maxdeg (every unit multiple)
std::vector<Poly> divisors_upto(const Poly& N, int maxdeg) {
    const Field* F = N.field();
    Factorization fac = factor(N);
    std::vector<Poly> monic{Poly::one(F)};
    for (const auto& [pi, e] : fac.factors) {
        std::vector<Poly> next;
        for (const auto& d : monic) {
            Poly cur = d;
            for (int k = 0; k <= e && cur.deg() <= maxdeg; ++k) {
                next.push_back(cur);
                cur = cur * pi;
            }
        }
        monic.swap(next);
    }
    std::vector<Poly> out;
    for (const auto& d : monic)
        for (Elem l = 1; l < F->q(); ++l) out.push_back(d.scaled(l));
    return out;
}

void for_each_poly_deg_le(const Field* F, int d, const std::function<void(const Poly&)>& fn) {
    if (d < 0) {
        fn(Poly(F));
        return;
    }
    uint64_t n = count_pow(F->q(), d + 1);
    for (uint64_t i = 0; i < n; ++i) fn(poly_from_index(F, i, d + 1));
}

// floor(n / 4) for possibly negative n
int floor4(long n) { return static_cast<int>(n >= 0 ? n / 4 : -((-n + 3) / 4)); }

}  // namespace

std::vector<StandardForm> enumerate_standard_forms(const Poly& D, FormClass mode) {
    const Field* F = D.field();
    if (classify_disc(D) != mode || mode == FormClass::Degenerate)
        throw Error(ErrorCode::WrongMode, "discriminant class does not match mode");
    Elem quarter = F->inv(F->from_int(4));
    int degD = D.deg();
    std::vector<StandardForm> out;
    if (mode == FormClass::Definite) {
        for_each_poly_deg_le(F, degD / 2 - 1, [&](const Poly& b) {
            Poly N = D + (b * b).scaled(quarter);
            for (const Poly& a : divisors_upto(N, degD / 2)) {
                Poly c = N / a;
                if (b.deg() < a.deg() && a.deg() <= c.deg()) out.push_back({{a, b, c}, 0});
            }
        });
    } else {
        int m = degD / 2;
        for (int s = 0; s <= m; ++s) {
            for_each_poly_deg_le(F, m, [&](const Poly& b) {
                Poly N = D + (b * b).scaled(quarter);
                if (N.is_zero()) return;
                for (const Poly& a : divisors_upto(N, m - s)) {
                    Poly c = N / a;
                    if (c.deg() <= m + s) out.push_back({{a, b, c}, s});
                }
            });
        }
    }
    std::sort(out.begin(), out.end(), [](const StandardForm& x, const StandardForm& y) {
        return x.s < y.s || (x.s == y.s && x.form < y.form);
    });
    return out;
}

void for_each_standard_rep(const Poly& D, FormClass mode, int maxdeg,
                           const std::function<void(const Representation&, int s)>& fn) {
    const Field* F = D.field();
    auto forms = enumerate_standard_forms(D, mode);
    if (mode == FormClass::Definite) {
        for (const auto& sf : forms) {
            const QuadForm& Q = sf.form;
            int dx = (maxdeg - Q.a.deg()) / 2, dy = (maxdeg - Q.c.deg());
            if (maxdeg < Q.a.deg()) continue;
            dy = dy < 0 ? -1 : dy / 2;
            for_each_poly_deg_le(F, dx, [&](const Poly& x) {
                for_each_poly_deg_le(F, dy, [&](const Poly& y) {
                    if ((x.is_zero() && y.is_zero()) || !gcd(x, y).is_one()) return;
                    Representation r{Q, x, y};
                    if (r.value().deg() <= maxdeg) fn(r, 0);
                });
            });
        }
        return;
    }
    int degD = D.deg();
    for (const auto& sf : forms) {
        for (int n = 0; n <= maxdeg; ++n) {
            long base = 2L * n - degD;
            long bx = base + 2L * sf.s, by = base - 2L * sf.s;
            int dx = bx < 0 ? -1 : floor4(bx), dy = by < 0 ? -1 : floor4(by);
            for_each_poly_deg_le(F, dx, [&](const Poly& x) {
                for_each_poly_deg_le(F, dy, [&](const Poly& y) {
                    if ((x.is_zero() && y.is_zero()) || !gcd(x, y).is_one()) return;
                    Representation r{sf.form, x, y};
                    if (r.value().deg() != n) return;
                    auto s = standard_indefinite_s(r);
                    if (s && *s == sf.s) fn(r, sf.s);
                });
            });
        }
    }
}

bool exp_change(const Representation& rep, const Poly& h) {
    require_primitive(rep);
    if (rep.y.is_zero()) throw Error(ErrorCode::DegreeContractViolated, "y = 0");
    const QuadForm& Q = rep.form;
    Poly A = rep.value();
    if (!h.is_zero()) {
        if (!(h.deg() < A.deg() - Q.b.deg() - 1) ||
            !(h.deg() < A.deg() + rep.y.deg() - Q.a.deg() - rep.x.deg() - 1))
            throw Error(ErrorCode::DegreeContractViolated, "deg h too large");
    }
    Solution s = associated_solution(rep);
    auto [xbar, yx] = bezout_pair(rep.x, rep.y);
    return exp_inf(h * s.f, A) == exp_inf(h * xbar, rep.y);
}

std::vector<Poly> solutions_mod(const Poly& A, const Poly& D) {
    const Field* F = D.field();
    std::vector<Poly> out;
    int k = A.deg();
    uint64_t n = count_pow(F->q(), k);
    for (uint64_t i = 0; i < n; ++i) {
        Poly f = poly_from_index(F, i, k);
        if (((f * f + D) % A).is_zero()) out.push_back(f);
    }
    return out;
}

BijectionAudit bijection_audit(const Poly& D, FormClass mode, int maxdeg) {
    const Field* F = D.field();
    uint64_t q = F->q();
    struct Member {
        int key;  // definite: deg a < deg c ? 0 : 1; indefinite: s
    };
    std::map<Solution, std::vector<Member>> fib;
    BijectionAudit out;
    for_each_standard_rep(D, mode, maxdeg, [&](const Representation& r, int s) {
        Solution sol = associated_solution(r);
        if (!((sol.f * sol.f + D) % sol.A).is_zero()) {
            ++out.extraneous;
            return;
        }
        int key = mode == FormClass::Definite ? (r.form.a.deg() < r.form.c.deg() ? 0 : 1) : s;
        fib[sol].push_back({key});
    });
    std::map<Solution, bool> expected_set;
    for (int k = 0; k <= maxdeg; ++k) {
        for_each_monic(F, k, [&](const Poly& m) {
            for (Elem l = 1; l < q; ++l) {
                Poly A = m.scaled(l);
                for (const Poly& f : solutions_mod(A, D)) expected_set[{A, f}] = true;
            }
        });
    }
    for (const auto& [sol, _] : expected_set)
        if (!fib.count(sol)) ++out.missing;
    bool ok = out.missing == 0 && out.extraneous == 0;
    for (const auto& [sol, members] : fib) {
        FiberReport rep;
        rep.sol = sol;
        rep.fiber_size = static_cast<int>(members.size());
        int k0 = members.front().key;
        for (const auto& m : members) rep.uniform &= (m.key == k0);
        if (mode == FormClass::Definite) {
            rep.expected = static_cast<int>(k0 == 0 ? q - 1 : q * q - 1);
        } else {
            Rational w = indefinite_weight(q, k0);
            rep.expected = static_cast<int>(w.den / w.num);
        }
        if (!expected_set.count(sol)) ++out.extraneous;
        ok &= rep.uniform && rep.fiber_size == rep.expected;
        out.fibers.push_back(rep);
    }
    out.ok = ok && out.extraneous == 0;
    return out;
}

}  // namespace ffnt
