#include <doctest.h>

#include <random>

#include "ffnt/laurent.hpp"

using namespace ffnt;

namespace {

const Field* F3() { return Field::prime(3); }
Poly P(const char* s) { return Poly::parse(F3(), s); }

Poly random_poly(std::mt19937_64& rng, const Field* F, int maxdeg) {
    return poly_from_index(F, rng() % count_pow(F->q(), maxdeg + 1), maxdeg + 1);
}

// u^e0 * (c0 + c1 u^-1 + ...)
Laurent series(const Field* F, int e0, std::vector<Elem> c) {
    Laurent r(F);
    for (size_t i = 0; i < c.size(); ++i) r = add(r, Laurent::monomial(F, c[i], e0 - static_cast<int>(i)));
    return r;
}

bool agree_down_to(const Laurent& x, const Laurent& y, int lo) {
    for (int e = std::max(x.hi(), y.hi()); e >= lo; --e)
        if (x.coeff(e) != y.coeff(e)) return false;
    return true;
}

}  // namespace

TEST_CASE("laurent arithmetic examples") {
    const Field* F = F3();
    Laurent u = Laurent::monomial(F, 1, 1);
    Laurent ui = invert(u, -50);
    CHECK(ui.exact());
    CHECK(ui.deg() == -1);
    CHECK(ui.lead() == 1);
    CHECK(ui.known_zero() == false);

    Laurent s = series(F, 1, {1, 0, 2});  // u + 2u^-1
    Laurent sq = mul(s, s);
    Laurent want = series(F, 2, {1, 0, 1, 0, 1});
    CHECK(sq.exact());
    CHECK(agree_down_to(sq, want, -10));

    CHECK_THROWS_AS(invert(Laurent(F), -5), Error);
    Laurent t = Laurent::monomial(F, 1, 0).truncated(1);
    CHECK_THROWS_AS(t.deg(), Error);
}

TEST_CASE("laurent degree additivity and inverse") {
    std::mt19937_64 rng(11);
    const Field* F = Field::make(5, 1);
    for (int it = 0; it < 200; ++it) {
        Poly a = random_poly(rng, F, 5), b = random_poly(rng, F, 5);
        if (a.is_zero() || b.is_zero()) continue;
        Laurent la = Laurent::from_poly(a), lb = Laurent::from_poly(b);
        CHECK(mul(la, lb).deg() == a.deg() + b.deg());
        Laurent ia = invert(la, -30);
        CHECK(ia.deg() == -a.deg());
        Laurent one = mul(la, ia);
        // a * (1/a) = 1 on every exponent that is known
        for (int e = one.lo(); e <= one.hi(); ++e) CHECK(one.coeff(e) == (e == 0 ? 1u : 0u));
        CHECK(one.lo() <= -30 + a.deg());
    }
}

TEST_CASE("laurent sqrt") {
    const Field* F = F3();
    auto r = laurent_sqrt(Laurent::from_poly(P("0,0,1")), -20);
    REQUIRE(r);
    CHECK(r->deg() == 1);
    CHECK(agree_down_to(*r, Laurent::monomial(F, 1, 1), -20));

    auto r2 = laurent_sqrt(Laurent::from_poly(P("2,0,1")), -25);
    REQUIRE(r2);
    CHECK(r2->coeff(1) == 1);
    CHECK(r2->coeff(0) == 0);
    CHECK(r2->coeff(-1) == 1);
    Laurent back = mul(*r2, *r2);
    for (int e = back.lo(); e <= 2; ++e) CHECK(back.coeff(e) == P("2,0,1")[e]);
    CHECK(back.lo() <= -20);

    CHECK_FALSE(laurent_sqrt(Laurent::from_poly(P("0,1")), -10));
    CHECK_FALSE(laurent_sqrt(Laurent::from_poly(P("1,0,2")), -10));  // 2 is a nonsquare mod 3

    std::mt19937_64 rng(5);
    const Field* F9 = Field::make(3, 2);
    for (int it = 0; it < 100; ++it) {
        Poly f = random_poly(rng, F9, 6);
        if (f.is_zero()) continue;
        Poly g = f * f;
        auto s = laurent_sqrt(Laurent::from_poly(g), -15);
        REQUIRE(s);
        // the root agrees with f up to sign
        Elem sign = s->lead() == f.lead() ? 1 : F9->neg(1);
        for (int e = -15; e <= f.deg(); ++e) CHECK(s->coeff(e) == F9->mul(sign, f[e]));
    }
}

TEST_CASE("factor_indefinite_form reconstructs the form") {
    const Field* F = F3();
    QuadForm Q{P("1"), Poly(F), P("1,0,2")};
    CHECK(classify(Q) == FormClass::Indefinite);
    LinearForms L = factor_indefinite_form(Q, 20);
    auto sq = laurent_sqrt(Laurent::from_poly(P("2,0,1")), -30);
    REQUIRE(sq);
    Laurent neg = -*sq;
    bool plus_first = L.lambda1.lead() == sq->lead();
    CHECK(agree_down_to(L.lambda1, plus_first ? *sq : neg, -15));
    CHECK(agree_down_to(L.lambda2, plus_first ? neg : *sq, -15));
    CHECK(L.lambda1.lead() < L.lambda2.lead());

    std::mt19937_64 rng(3);
    const Field* F5 = Field::make(5, 1);
    int tested = 0;
    while (tested < 60) {
        QuadForm R{random_poly(rng, F5, 3), random_poly(rng, F5, 3), random_poly(rng, F5, 3)};
        if (R.a.is_zero() || classify(R) != FormClass::Indefinite) continue;
        ++tested;
        LinearForms M = factor_indefinite_form(R, 24);
        Laurent a2 = mul(M.alpha[0], M.alpha[1]);
        Laurent b2 = add(mul(M.alpha[0], M.beta[1]), mul(M.beta[0], M.alpha[1]));
        Laurent c2 = mul(M.beta[0], M.beta[1]);
        int lo = std::max({b2.lo(), c2.lo()});
        CHECK(lo < -10);
        CHECK(agree_down_to(a2, Laurent::from_poly(R.a), lo));
        CHECK(agree_down_to(b2, Laurent::from_poly(R.b), lo));
        CHECK(agree_down_to(c2, Laurent::from_poly(R.c), lo));
    }
    CHECK_THROWS_AS(factor_indefinite_form(QuadForm{P("1"), Poly(F), P("0,1")}, 10), Error);
}

TEST_CASE("form_valuation axioms") {
    std::mt19937_64 rng(9);
    const Field* F = F3();
    QuadForm Q{P("1"), Poly(F), P("1,0,2")};
    int checked = 0;
    for (int it = 0; it < 400; ++it) {
        Poly x = random_poly(rng, F, 2), y = random_poly(rng, F, 2);
        if ((x.is_zero() && y.is_zero()) || !gcd(x, y).is_one()) continue;
        Poly z1 = random_poly(rng, F, 3), w1 = random_poly(rng, F, 3);
        Poly z2 = random_poly(rng, F, 3), w2 = random_poly(rng, F, 3);
        Poly a = random_poly(rng, F, 2);
        if (z1.is_zero() && w1.is_zero()) continue;
        ++checked;
        CHECK(form_valuation(Q, x, y, x, y) == 0);
        int v1 = form_valuation(Q, x, y, z1, w1);
        if (!a.is_zero()) CHECK(form_valuation(Q, x, y, a * z1, a * w1) == a.deg() + v1);
        if (!(z2.is_zero() && w2.is_zero())) {
            int v2 = form_valuation(Q, x, y, z2, w2);
            Poly zs = z1 + z2, ws = w1 + w2;
            if (!(zs.is_zero() && ws.is_zero())) CHECK(form_valuation(Q, x, y, zs, ws) <= std::max(v1, v2));
        }
        int dz = Q.eval(z1, w1).deg(), dx = Q.eval(x, y).deg();
        CHECK(2 * v1 >= dz - dx);
    }
    CHECK(checked > 100);
    CHECK(form_valuation(Q, P("1"), Poly(F), Poly(F), Poly(F)) == kDegNegInf);
}

TEST_CASE("valuation standardness: probe and exact decisions agree with the degree test") {
    const Field* F = F3();
    Poly D = P("1,0,2");
    std::mt19937_64 rng(21);
    auto forms = enumerate_standard_forms(D, FormClass::Indefinite);
    REQUIRE(!forms.empty());
    int standard = 0, total = 0;
    for (const auto& sf : forms) {
        std::vector<QuadForm> variants{sf.form};
        for (int k = 0; k < 2; ++k) {
            SL2Mat M = SL2Mat::unipotent(random_poly(rng, F, 1)) *
                       SL2Mat{Poly(F), P("1"), P("2"), Poly(F)};
            variants.push_back(sl2_act(sf.form, M));
        }
        for (const auto& Q : variants) {
            for (uint64_t i = 0; i < 27; ++i)
                for (uint64_t j = 0; j < 27; ++j) {
                    Poly x = poly_from_index(F, i, 3), y = poly_from_index(F, j, 3);
                    if ((x.is_zero() && y.is_zero()) || !gcd(x, y).is_one()) continue;
                    Representation r{Q, x, y};
                    ++total;
                    auto s = standard_indefinite_s(r);
                    auto pv = valuation_standard_probe(Q, x, y);
                    auto ev = valuation_standard_exact(Q, x, y);
                    CHECK(pv.has_value() == ev.has_value());
                    if (pv && ev) CHECK(*pv == *ev);
                    CHECK(s.has_value() == pv.has_value());
                    if (s && pv) {
                        ++standard;
                        int degA = r.value().deg();
                        // 4 gamma = deg D - 2 deg A - 2 s
                        CHECK(4 * pv->first == D.deg() - 2 * degA - 2 * *s);
                        CHECK(pv->second - pv->first == *s);
                    }
                }
        }
    }
    CHECK(standard > 0);
    CHECK(total > standard);
}
