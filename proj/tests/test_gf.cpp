#include <doctest.h>

#include <set>

#include "ffnt/gf.hpp"
#include "ffnt/poly.hpp"

using namespace ffnt;

TEST_CASE("make_field") {
    const Field* F3 = Field::make(3, 1);
    CHECK(F3->q() == 3);
    CHECK(F3->is_prime_field());

    const Field* F9 = Field::make(3, 2, std::vector<uint64_t>{1, 0, 1});
    CHECK(F9->q() == 9);
    CHECK(F9 == Field::make(3, 2));  // default search finds T^2+1 first
    CHECK(F9 == Field::parse("3^2/1,0,1"));

    CHECK_THROWS_AS(Field::make(2, 1), Error);
    try {
        Field::make(2, 1);
    } catch (const Error& e) {
        CHECK(e.code == ErrorCode::EvenCharacteristic);
    }
    try {
        Field::make(9, 1);
    } catch (const Error& e) {
        CHECK(e.code == ErrorCode::NotPrime);
    }
    try {
        Field::make(3, 2, std::vector<uint64_t>{2, 0, 1});  // T^2-1
    } catch (const Error& e) {
        CHECK(e.code == ErrorCode::ReducibleModulus);
    }
}

TEST_CASE("default modulus is irreducible by trial division") {
    for (int k = 2; k <= 4; ++k) {
        const Field* F = Field::make(3, k);
        Poly m(Field::prime(3), F->modulus());
        // oracle: no monic factor of degree <= k/2
        for (int d = 1; 2 * d <= k; ++d)
            for (const auto& g : monic_polys(Field::prime(3), d)) CHECK_FALSE((m % g).is_zero());
    }
}

TEST_CASE("elem_ops") {
    const Field* F3 = Field::prime(3);
    CHECK(F3->mul(2, 2) == 1);
    CHECK(F3->inv(2) == 2);
    const Field* F9 = Field::parse("3^2/1,0,1");
    CHECK(F9->mul(3, 3) == 2);  // t*t = -1
    FieldElem a{F9, 3}, b{Field::prime(5), 1};
    CHECK_THROWS_AS(a + b, Error);
    CHECK_THROWS_AS(F9->inv(0), Error);
}

TEST_CASE("field axioms exhaustive for q <= 81") {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {5, 2}, {3, 3}, {3, 4}}) {
        const Field* F = Field::make(p, k);
        uint64_t q = F->q();
        int squares = 0;
        for (Elem x = 1; x < q; ++x) {
            CHECK(F->pow(x, q - 1) == 1);
            CHECK(F->mul(x, F->inv(x)) == 1);
            if (F->sqrt(x)) ++squares;
            for (Elem y = 1; y < q; ++y) CHECK(F->chi2(F->mul(x, y)) == F->chi2(x) * F->chi2(y));
        }
        CHECK(squares == static_cast<int>((q - 1) / 2));
    }
}

TEST_CASE("chi2 and sqrt against exhaustive squaring") {
    for (auto spec : {"3", "5", "3^2", "5^2", "3^3", "7^2"}) {
        const Field* F = Field::parse(spec);
        std::set<Elem> sq;
        for (Elem x = 0; x < F->q(); ++x) sq.insert(F->mul(x, x));
        for (Elem x = 0; x < F->q(); ++x) {
            auto r = F->sqrt(x);
            CHECK(r.has_value() == (sq.count(x) > 0));
            if (r) {
                CHECK(F->mul(*r, *r) == x);
                CHECK(*r <= F->neg(*r));
            }
            int expect = x == 0 ? 0 : (sq.count(x) ? 1 : -1);
            CHECK(F->chi2(x) == expect);
        }
    }
    const Field* F3 = Field::prime(3);
    CHECK(F3->chi2(1) == 1);
    CHECK(F3->chi2(2) == -1);
    CHECK(F3->chi2(0) == 0);
    CHECK(*F3->sqrt(1) == 1);
    CHECK_FALSE(F3->sqrt(2).has_value());
    CHECK(*Field::parse("3^2/1,0,1")->sqrt(2) == 3);
}

TEST_CASE("trace_to_prime_field") {
    const Field* F9 = Field::parse("3^2/1,0,1");
    CHECK(Field::prime(3)->trace(1) == 1);
    CHECK(F9->trace(3) == 0);
    CHECK(F9->trace(1) == 2);
    // oracle: x + x^3 computed by repeated multiplication
    for (Elem x = 0; x < 9; ++x) {
        Elem x3 = F9->mul(x, F9->mul(x, x));
        CHECK(F9->trace(x) == F9->add(x, x3));
    }
}

TEST_CASE("large field without tables") {
    const Field* F = Field::make(3, 14);
    CHECK(F->q() == 4782969);
    Elem x = 123456, y = 987654;
    CHECK(F->mul(F->mul(x, y), F->inv(y)) == x);
    auto r = F->sqrt(F->mul(x, x));
    REQUIRE(r);
    CHECK(F->mul(*r, *r) == F->mul(x, x));
    CHECK(F->trace(x) < 3);
}

TEST_CASE("tower extension embeds the base") {
    const Field* F3 = Field::prime(3);
    const Field* K = Field::extend(F3, {1, 0, 1});
    Elem g = K->primitive();
    REQUIRE(K->chi2(g) == -1);
    const Field* L = Field::extend(K, {K->neg(g), 0, 1});
    CHECK(L->q() == 81);
    CHECK(L->mul(9, 9) == g);
    for (Elem a = 0; a < 9; ++a)
        for (Elem b = 0; b < 9; ++b) {
            CHECK(L->add(a, b) == K->add(a, b));
            CHECK(L->mul(a, b) == K->mul(a, b));
        }
    for (Elem x = 1; x < 81; ++x) CHECK(L->pow(x, 80) == 1);
}
