#include "ffnt/laurent.hpp"

#include <algorithm>

namespace ffnt {

Laurent Laurent::from_poly(const Poly& f) {
    Laurent r(f.field());
    r.lo_ = 0;
    r.c_ = f.coeffs();
    r.normalize();
    return r;
}

Laurent Laurent::monomial(const Field* F, Elem c, int e) {
    Laurent r(F);
    r.lo_ = e;
    r.c_ = {c};
    r.normalize();
    return r;
}

void Laurent::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    if (exact_) {
        size_t k = 0;
        while (k < c_.size() && c_[k] == 0) ++k;
        if (k) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(k));
            lo_ += static_cast<int>(k);
        }
        if (c_.empty()) lo_ = 0;
    }
}

Elem Laurent::coeff(int e) const {
    if (e < lo_) {
        if (exact_) return 0;
        throw Error(ErrorCode::PrecisionExhausted, "coefficient below known precision");
    }
    if (e > hi()) return 0;
    return c_[e - lo_];
}

int Laurent::deg() const {
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i)
        if (c_[i] != 0) return lo_ + i;
    if (exact_) return kDegNegInf;
    throw Error(ErrorCode::PrecisionExhausted, "degree not determined at this precision");
}

bool Laurent::known_zero() const {
    for (auto x : c_)
        if (x) return false;
    return true;
}

Laurent Laurent::truncated(int floor) const {
    Laurent r = *this;
    if (floor <= lo_) {
        if (!exact_) return r;
        r.c_.insert(r.c_.begin(), lo_ - floor, 0);
        r.lo_ = floor;
        r.exact_ = false;
        return r;
    }
    int drop = std::min(floor - lo_, static_cast<int>(c_.size()));
    r.c_.erase(r.c_.begin(), r.c_.begin() + drop);
    r.lo_ = floor;
    r.exact_ = false;
    r.normalize();
    return r;
}

Laurent Laurent::as_exact() const {
    Laurent r = *this;
    r.exact_ = true;
    r.normalize();
    return r;
}

Laurent Laurent::scaled(Elem s) const {
    Laurent r = *this;
    for (auto& x : r.c_) x = F_->mul(x, s);
    r.normalize();
    return r;
}

Laurent add(const Laurent& a, const Laurent& b, int floor) {
    const Field* F = a.F_ ? a.F_ : b.F_;
    Laurent r(F);
    if (a.exact_ && b.exact_) {
        r.lo_ = std::min(a.c_.empty() ? b.lo_ : a.lo_, b.c_.empty() ? a.lo_ : b.lo_);
    } else if (a.exact_) {
        r.lo_ = b.lo_;
        r.exact_ = false;
    } else if (b.exact_) {
        r.lo_ = a.lo_;
        r.exact_ = false;
    } else {
        r.lo_ = std::max(a.lo_, b.lo_);
        r.exact_ = false;
    }
    if (r.lo_ < floor) {
        r.lo_ = floor;
        r.exact_ = false;
    }
    int top = std::max(a.c_.empty() ? r.lo_ : a.hi(), b.c_.empty() ? r.lo_ : b.hi());
    if (top < r.lo_) {
        r.normalize();
        return r;
    }
    r.c_.assign(top - r.lo_ + 1, 0);
    for (int e = r.lo_; e <= top; ++e) r.c_[e - r.lo_] = F->add(a.coeff(e), b.coeff(e));
    r.normalize();
    return r;
}

Laurent sub(const Laurent& a, const Laurent& b, int floor) { return add(a, -b, floor); }

Laurent mul(const Laurent& a, const Laurent& b, int floor) {
    const Field* F = a.F_ ? a.F_ : b.F_;
    Laurent r(F);
    if ((a.exact_ && a.known_zero()) || (b.exact_ && b.known_zero())) return r;
    int da = a.deg(), db = b.deg();
    if (a.exact_ && b.exact_) {
        r.lo_ = a.lo_ + b.lo_;
    } else if (a.exact_) {
        r.lo_ = b.lo_ + da;
        r.exact_ = false;
    } else if (b.exact_) {
        r.lo_ = a.lo_ + db;
        r.exact_ = false;
    } else {
        r.lo_ = std::max(a.lo_ + db, b.lo_ + da);
        r.exact_ = false;
    }
    if (r.lo_ < floor) {
        r.lo_ = floor;
        r.exact_ = false;
    }
    int top = da + db;
    if (top < r.lo_) {
        r.c_.clear();
        r.normalize();
        return r;
    }
    r.c_.assign(top - r.lo_ + 1, 0);
    for (int e = r.lo_; e <= top; ++e) {
        Elem s = 0;
        int i0 = std::max(a.lo_, e - db), i1 = std::min(da, e - b.lo_);
        for (int i = i0; i <= i1; ++i) {
            Elem x = a.c_[i - a.lo_];
            if (x) s = F->add(s, F->mul(x, b.c_[e - i - b.lo_]));
        }
        r.c_[e - r.lo_] = s;
    }
    r.normalize();
    return r;
}

Laurent invert(const Laurent& a, int floor) {
    const Field* F = a.F_;
    if (a.exact_ && a.known_zero()) throw Error(ErrorCode::ZeroInverse, "inverse of zero series");
    int da = a.deg();
    Elem li = F->inv(a.coeff(da));
    Laurent r(F);
    bool monomial = a.exact_ && a.lo_ == da;
    if (monomial) {
        r.lo_ = -da;
        r.c_ = {li};
        return r;
    }
    int lo = a.exact_ ? floor : std::max(a.lo_ - 2 * da, floor);
    r.exact_ = false;
    r.lo_ = lo;
    int J = -da - lo;
    if (J < 0) {
        r.normalize();
        return r;
    }
    // 1/(1 + sum alpha_i u^{-i}) = sum beta_j u^{-j}
    std::vector<Elem> alpha(J + 1, 0), beta(J + 1, 0);
    for (int i = 1; i <= J; ++i) {
        int e = da - i;
        alpha[i] = (e < a.lo_) ? 0 : F->mul(a.c_[e - a.lo_], li);
    }
    beta[0] = 1;
    for (int j = 1; j <= J; ++j) {
        Elem s = 0;
        for (int i = 1; i <= j; ++i)
            if (alpha[i]) s = F->add(s, F->mul(alpha[i], beta[j - i]));
        beta[j] = F->neg(s);
    }
    r.c_.assign(J + 1, 0);
    for (int j = 0; j <= J; ++j) r.c_[J - j] = F->mul(beta[j], li);
    r.normalize();
    return r;
}

std::optional<Laurent> laurent_sqrt(const Laurent& a, int floor) {
    const Field* F = a.field();
    if (a.exact() && a.known_zero()) return Laurent(F);
    int da = a.deg();
    if (da % 2 != 0) return std::nullopt;
    auto r0 = F->sqrt(a.lead());
    if (!r0 || F->chi2(a.lead()) != 1) return std::nullopt;
    int m = da / 2;
    int L = a.exact() ? floor : std::max(a.lo() - m, floor);
    if (L > m) L = m;
    Laurent ae = a.as_exact();
    Laurent r = Laurent::monomial(F, *r0, m);
    Elem half = F->half();
    int terms = m - L + 1;
    int iters = 1;
    while ((1 << (iters - 1)) < terms) ++iters;
    for (int it = 0; it <= iters; ++it) {
        Laurent ir = invert(r, L - 2 * m - 1);
        Laurent t = mul(ae, ir, L);
        r = add(r, t, L).scaled(half).as_exact();
    }
    r = r.truncated(L);
    Laurent sq = mul(r, r);
    int check_lo = std::max(sq.lo(), a.exact() ? sq.lo() : a.lo());
    for (int e = check_lo; e <= da; ++e)
        if (sq.coeff(e) != a.coeff(e)) throw Error(ErrorCode::Internal, "Newton square root failed to converge");
    return r;
}

int default_precision(const Poly& D, int max_probe_deg) {
    return std::max(D.deg(), 0) + 2 * std::max(max_probe_deg, 0) + 8;
}

LinearForms factor_indefinite_form(const QuadForm& Q, int prec) {
    Poly D = Q.disc();
    if (classify_disc(D) != FormClass::Indefinite || Q.a.is_zero())
        throw Error(ErrorCode::NotIndefinite, "form is not indefinite");
    const Field* F = Q.field();
    int m = D.deg() / 2;
    int floor = m - prec;
    auto s = laurent_sqrt(Laurent::from_poly(-D), floor);
    if (!s) throw Error(ErrorCode::NotIndefinite, "-D is not a square at infinity");
    Laurent hb = Laurent::from_poly(Q.b.scaled(F->half()));
    Laurent ia = invert(Laurent::from_poly(Q.a), floor - 2 * Q.a.deg() - 2);
    Laurent l1 = mul(add(-hb, *s), ia);
    Laurent l2 = mul(sub(-hb, *s), ia);
    auto key = [](const Laurent& l) { return std::make_pair(l.lead(), l.deg()); };
    if (key(l2) < key(l1)) std::swap(l1, l2);
    LinearForms out;
    out.lambda1 = l1;
    out.lambda2 = l2;
    out.alpha[0] = Laurent::from_poly(Q.a);
    out.beta[0] = -mul(out.alpha[0], l1);
    out.alpha[1] = Laurent::monomial(F, 1, 0);
    out.beta[1] = -l2;
    return out;
}

namespace {

int linear_deg(const LinearForms& L, int i, const Poly& z, const Poly& w) {
    Laurent v = add(mul(L.alpha[i], Laurent::from_poly(z)), mul(L.beta[i], Laurent::from_poly(w)));
    return v.deg();
}

int probe_degree(const Poly& x, const Poly& y, const Poly& z, const Poly& w) {
    return std::max({x.deg(), y.deg(), z.deg(), w.deg(), 0});
}

}  // namespace

int form_valuation(const QuadForm& Q, const Poly& x, const Poly& y, const Poly& z, const Poly& w, int prec) {
    if (z.is_zero() && w.is_zero()) return kDegNegInf;
    if (Q.eval(x, y).is_zero()) throw Error(ErrorCode::NotPrimitive, "Q(x,y) = 0");
    if (prec <= 0) prec = default_precision(Q.disc(), probe_degree(x, y, z, w));
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            LinearForms L = factor_indefinite_form(Q, prec);
            int v = kDegNegInf;
            for (int i = 0; i < 2; ++i) v = std::max(v, linear_deg(L, i, z, w) - linear_deg(L, i, x, y));
            return v;
        } catch (const Error& e) {
            if (e.code != ErrorCode::PrecisionExhausted || attempt == 1) throw;
            prec *= 2;
        }
    }
    throw Error(ErrorCode::PrecisionExhausted, "form_valuation");
}

std::optional<std::pair<int, int>> valuation_standard_probe(const QuadForm& Q, const Poly& x, const Poly& y) {
    const Field* F = Q.field();
    Poly one = Poly::one(F), zero(F);
    int gamma = form_valuation(Q, x, y, one, zero);
    int delta = form_valuation(Q, x, y, zero, one);
    if (gamma > delta) return std::nullopt;
    for (Elem lam = 1; lam < F->q(); ++lam) {
        if (form_valuation(Q, x, y, Poly::monomial(F, lam, delta - gamma), one) != delta) return std::nullopt;
    }
    return std::make_pair(gamma, delta);
}

std::optional<std::pair<int, int>> valuation_standard_exact(const QuadForm& Q, const Poly& x, const Poly& y) {
    const Field* F = Q.field();
    int prec = default_precision(Q.disc(), std::max({x.deg(), y.deg(), 0}));
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            LinearForms L = factor_indefinite_form(Q, prec);
            int l[2];
            for (int i = 0; i < 2; ++i) l[i] = linear_deg(L, i, x, y);
            int gamma = std::max(L.alpha[0].deg() - l[0], L.alpha[1].deg() - l[1]);
            int delta = std::max(L.beta[0].deg() - l[0], L.beta[1].deg() - l[1]);
            if (gamma > delta) return std::nullopt;
            Elem A[2], B[2];
            for (int i = 0; i < 2; ++i) {
                A[i] = L.alpha[i].coeff(l[i] + gamma);
                B[i] = L.beta[i].coeff(l[i] + delta);
            }
            Elem det = F->sub(F->mul(A[0], B[1]), F->mul(A[1], B[0]));
            if (det == 0) return std::nullopt;
            return std::make_pair(gamma, delta);
        } catch (const Error& e) {
            if (e.code != ErrorCode::PrecisionExhausted || attempt == 1) throw;
            prec *= 2;
        }
    }
    return std::nullopt;
}

}  // namespace ffnt
