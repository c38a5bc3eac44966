#include <doctest.h>

#include <random>

#include "ffnt/poly.hpp"

using namespace ffnt;

namespace {

const Field* F3() { return Field::prime(3); }
Poly P(const char* s, const Field* F = nullptr) { return Poly::parse(F ? F : F3(), s); }

// Brute-force roots of f in E, with multiplicity, for root-product oracles.
std::vector<Elem> roots_in(const Poly& f, const Field* E) {
    std::vector<Elem> out;
    Poly g = lift(f, E);
    Poly x = Poly::x(E);
    for (Elem z = 0; z < E->q(); ++z) {
        Poly lin = x - Poly::constant(E, z);
        while (g.deg() > 0 && g.eval(z) == 0) {
            g = g / lin;
            out.push_back(z);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("poly_arith examples") {
    CHECK(gcd(P("2,0,1"), P("2,1")) == P("2,1"));
    CHECK(derivative(P("0,1,0,1")) == P("1"));
    auto [qq, rr] = divrem(P("1,0,1"), P("1,1"));
    CHECK(qq == P("2,1"));
    CHECK(rr == P("2"));
    CHECK(qq * P("1,1") + rr == P("1,0,1"));
    CHECK(P("").deg() == kDegNegInf);
    CHECK(P("0").is_zero());
    CHECK(P("1,0,1").norm() == 9);
    CHECK(P("0").norm() == 0);
    CHECK_THROWS_AS(divrem(P("1"), P("0")), Error);
}

TEST_CASE("xgcd identity") {
    std::mt19937_64 rng(1);
    for (int it = 0; it < 200; ++it) {
        Poly a = poly_from_index(F3(), rng() % 6561, 8);
        Poly b = poly_from_index(F3(), rng() % 729, 6);
        auto [g, s, t] = xgcd(a, b);
        CHECK(s * a + t * b == g);
        if (!g.is_zero()) CHECK(g.is_monic());
        CHECK(g == gcd(a, b));
    }
}

TEST_CASE("factor examples") {
    auto f = factor(P("1,0,1"));
    CHECK(f.factors.size() == 1);
    CHECK(f.factors.begin()->second == 1);
    auto g = factor(P("1,2,1"));
    CHECK(g.factors.size() == 1);
    CHECK(g.factors.at(P("1,1")) == 2);
    auto h = factor(P("0,1,1"));
    CHECK(h.factors.size() == 2);
    CHECK(h.factors.count(P("0,1")) == 1);
    CHECK(h.factors.count(P("1,1")) == 1);
    CHECK_THROWS_AS(factor(P("0")), Error);
}

TEST_CASE("factorization reconstructs and factors are irreducible") {
    for (auto spec : {"3", "5", "3^2"}) {
        const Field* F = Field::parse(spec);
        std::mt19937_64 rng(7);
        for (int it = 0; it < 150; ++it) {
            int n = 1 + rng() % 9;
            Poly f = poly_from_index(F, rng() % count_pow(F->q(), n), n) + Poly::monomial(F, 1 + rng() % (F->q() - 1), n);
            f = f * f * Poly::constant(F, 1 + rng() % (F->q() - 1));
            auto fac = factor(f);
            CHECK(fac.product(F) == f);
            for (auto& [pf, m] : fac.factors) {
                CHECK(pf.is_monic());
                // trial-division oracle for irreducibility
                for (int d = 1; 2 * d <= pf.deg(); ++d)
                    for (const auto& g : monic_polys(F, d)) CHECK_FALSE((pf % g).is_zero());
            }
        }
    }
}

TEST_CASE("p-th powers factor through the p-th root") {
    Poly f = pow(P("1,1,0,1"), 3) * pow(P("0,1"), 2);
    CHECK(factor(f).product(F3()) == f);
    const Field* F9 = Field::parse("3^2");
    Poly g = pow(Poly::parse(F9, "4,7,1"), 6);
    CHECK(factor(g).product(F9) == g);
}

TEST_CASE("moebius and von Mangoldt examples") {
    CHECK(moebius(P("0,0,1")) == 0);
    CHECK(moebius(P("1,1")) == -1);
    CHECK(moebius(P("0,1,1")) == 1);
    CHECK(moebius(P("2")) == 1);
    CHECK(von_mangoldt(P("1,0,1")) == 2);
    CHECK(von_mangoldt(P("1,2,1")) == 1);
    CHECK(von_mangoldt(P("0,1,1")) == 0);
}

TEST_CASE("von Mangoldt paths agree and prime polynomial theorem") {
    for (int n = 1; n <= 6; ++n) {
        for_each_monic(F3(), n, [&](const Poly& f) {
            int L = von_mangoldt(f);
            CHECK(L == von_mangoldt_convolution(f));
            CHECK(L == von_mangoldt_fast(f));
        });
    }
    for (int n = 1; n <= 8; ++n) {
        long long s = 0;
        for_each_monic(F3(), n, [&](const Poly& f) { s += von_mangoldt_fast(f); });
        CHECK(s == static_cast<long long>(count_pow(3, n)));
    }
}

TEST_CASE("resultant examples") {
    CHECK(resultant(P("1,0,1"), P("0,1")) == 1);
    CHECK(resultant(P("1,0,1"), P("2")) == 1);
    CHECK(resultant_padded(P("1,0,1"), P("0,1"), 2, 2) == 1);
    CHECK_THROWS_AS(resultant_padded(P("1,0,1"), P("0,1"), 3, 2), Error);
}

TEST_CASE("resultant equals lc^deg b times product over roots") {
    const Field* F81 = Field::make(3, 4);
    std::mt19937_64 rng(3);
    int checked = 0;
    for (int it = 0; it < 300 && checked < 60; ++it) {
        Poly a = poly_from_index(F3(), rng() % 243, 5);
        Poly b = poly_from_index(F3(), rng() % 243, 5);
        if (a.deg() < 1 || b.is_zero()) continue;
        auto rts = roots_in(a, F81);
        if (static_cast<int>(rts.size()) != a.deg()) continue;
        Elem prod = F81->pow(a.lead(), b.deg());
        for (Elem z : rts) prod = F81->mul(prod, b.eval_in(F81, z));
        CHECK(prod < 3);
        CHECK(resultant(a, b) == prod);
        CHECK(resultant_euclid(a, b) == resultant_sylvester(a, b));
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("Euclid and Sylvester backends agree") {
    std::mt19937_64 rng(11);
    for (auto spec : {"3", "5", "3^2"}) {
        const Field* F = Field::parse(spec);
        for (int it = 0; it < 300; ++it) {
            Poly a = poly_from_index(F, rng() % count_pow(F->q(), 7), 7);
            Poly b = poly_from_index(F, rng() % count_pow(F->q(), 6), 6);
            CHECK(resultant_euclid(a, b) == resultant_sylvester(a, b));
        }
    }
}

TEST_CASE("resultant vanishes exactly on a common factor") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 500; ++it) {
        Poly a = poly_from_index(F3(), rng() % 729, 6);
        Poly b = poly_from_index(F3(), rng() % 243, 5);
        if (a.deg() < 1 || b.deg() < 1) continue;
        CHECK((resultant(a, b) == 0) == (gcd(a, b).deg() > 0));
    }
}

TEST_CASE("discriminant examples") {
    CHECK(discriminant(P("1,0,1")) == 2);
    CHECK(discriminant(P("1,2,1")) == 0);
    CHECK(discriminant(P("0,1,1")) == 1);
    CHECK_THROWS_AS(discriminant(P("2")), Error);
    // root-difference oracle in a splitting field
    const Field* F81 = Field::make(3, 4);
    std::mt19937_64 rng(9);
    for (int it = 0; it < 100; ++it) {
        Poly f = poly_from_index(F3(), rng() % 243, 5);
        if (f.deg() < 2) continue;
        auto rts = roots_in(f, F81);
        if (static_cast<int>(rts.size()) != f.deg()) continue;
        Elem prod = 1;
        for (size_t i = 0; i < rts.size(); ++i)
            for (size_t j = i + 1; j < rts.size(); ++j) {
                Elem d = F81->sub(rts[i], rts[j]);
                prod = F81->mul(prod, F81->mul(d, d));
            }
        CHECK(discriminant(f) == prod);
    }
}

TEST_CASE("pellet_moebius examples") {
    CHECK(pellet_moebius(P("1,0,1")) == -1);
    CHECK(pellet_moebius(P("1,2,1")) == 0);
    CHECK(pellet_moebius(P("0,1")) == -1);
}

TEST_CASE("pellet equals moebius exhaustively, q in {3,5}, deg <= 4") {
    for (int p : {3, 5}) {
        const Field* F = Field::prime(p);
        for_each_norm_le(F, 4, [&](const Poly& f) {
            if (f.is_zero()) return;
            CHECK(pellet_moebius(f) == moebius(f));
        });
    }
}

TEST_CASE("enumeration") {
    auto m1 = monic_polys(F3(), 1);
    REQUIRE(m1.size() == 3);
    CHECK(m1[0] == P("0,1"));
    CHECK(m1[1] == P("1,1"));
    CHECK(m1[2] == P("2,1"));
    Interval I = Interval::make(P("0,0,1"), 2);
    int n = 0;
    for_each_in_interval(I, [&](const Poly& g) {
        CHECK(g.deg() == 2);
        CHECK(g.is_monic());
        CHECK(I.contains(g));
        ++n;
    });
    CHECK(n == 9);
    CHECK(I.degree() == 2);
    int m = 0;
    for_each_norm_le(F3(), 1, [&](const Poly& g) {
        CHECK(g.norm() <= 3);
        ++m;
    });
    CHECK(m == 9);
}
