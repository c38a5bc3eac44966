#include <doctest.h>

#include <random>

#include "ffnt/error.hpp"
#include "ffnt/experiments.hpp"
#include "ffnt/residues.hpp"

using namespace ffnt;

namespace {

const Field* F3() { return Field::prime(3); }
Poly P(const char* s) { return Poly::parse(F3(), s); }

Poly random_poly(std::mt19937_64& rng, const Field* F, int maxdeg) {
    std::uniform_int_distribution<int> dd(-1, maxdeg);
    int d = dd(rng);
    std::vector<Elem> c(std::max(d + 1, 0));
    for (auto& x : c) x = rng() % F->q();
    return Poly(F, c);
}

RunOptions threads(int t) {
    RunOptions o;
    o.threads = t;
    return o;
}

}  // namespace

TEST_CASE("prime-field mu matches factorization") {
    std::mt19937_64 rng(61);
    for (uint64_t p : {3, 5, 7, 13}) {
        const Field* F = Field::prime(p);
        PrimeMu pm(p);
        for (int i = 0; i < 400; ++i) {
            Poly f = random_poly(rng, F, 14);
            if (f.is_zero()) {
                CHECK(pm.mu(f) == 0);
                continue;
            }
            CHECK(pm.mu(f) == moebius(f));
        }
        // squares and p-th powers
        Poly g = random_poly(rng, F, 4) + Poly::monomial(F, 1, 5);
        CHECK(pm.mu(g * g) == 0);
        CHECK(pm.mu(pow(g, p)) == 0);
    }
}

TEST_CASE("Chowla scan") {
    BiPoly F = BiPoly::parse(F3(), "0,1;0;1");  // T^2 + u
    Report r = chowla_scan(F, {1}, threads(1));
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0][3] == "-3");
    CHECK(r.rows[0][2] == "9");
    CHECK(r.ok);

    // direct enumeration oracle
    Report r2 = chowla_scan(F, {0, 2, 4}, threads(1));
    for (const auto& row : r2.rows) {
        int m = std::stoi(row[0]);
        int64_t s = 0;
        for_each_norm_le(F3(), m, [&](const Poly& f) { s += moebius(f * f + P("0,1")); });
        CHECK(row[3] == std::to_string(s));
    }

    // non-prime field takes the generic path
    const Field* F9 = Field::make(3, 2);
    BiPoly G = BiPoly::parse(F9, "0,1;3;1");
    Report r3 = chowla_scan(G, {2}, threads(1));
    int64_t s = 0;
    for_each_norm_le(F9, 2, [&](const Poly& f) {
        Poly v = G.eval_T(f);
        if (!v.is_zero()) s += moebius(v);
    });
    CHECK(r3.rows[0][3] == std::to_string(s));

    CHECK_THROWS_AS(chowla_scan(BiPoly::parse(F3(), "0,1;0;0;1"), {1}, threads(1)), Error);
}

TEST_CASE("Bateman-Horn scan") {
    Report r = bateman_horn_scan(P("0,1"), {1, 2, 3, 4}, threads(1));
    CHECK(r.rows[0][1] == "3");
    CHECK(r.ok);
    for (const auto& row : r.rows) {
        int d = std::stoi(row[0]);
        int64_t s = 0;
        for_each_monic(F3(), d, [&](const Poly& f) { s += von_mangoldt(f * f + P("0,1")); });
        CHECK(row[1] == std::to_string(s));
    }
    CHECK_THROWS_AS(bateman_horn_scan(P("0,0,2"), {1}, threads(1)), Error);
}

TEST_CASE("Kloosterman-twisted scan") {
    Poly a = P("1"), b = P("0"), c = P("0,1");
    // hand-checkable instance: brute force the double sum
    for (const char* hs : {"0", "1", "1,1"}) {
        Poly h = P(hs);
        Report r = kloosterman_twisted_scan(a, b, c, h, 1, 2, threads(1));
        CHECK(r.ok);
        CHECK(r.rows.size() == 8);
        long double total = 0;
        for (uint64_t iy = 1; iy < 9; ++iy) {
            Poly y = poly_from_index(F3(), iy, 2);
            CycloSum s(3);
            for (uint64_t ix = 0; ix < 9; ++ix) {
                Poly x = poly_from_index(F3(), ix, 2);
                if (!gcd(x, y).is_constant()) continue;
                Poly v = a * x * x + b * x * y + c * y * y;
                if (v.is_zero()) continue;
                int mu = moebius(v);
                uint64_t j = y.deg() >= 1 ? exp_inf(h * inv_mod(x, y), y) : 0;
                s.add_root(j, mu);
            }
            total += s.abs();
            if (h.is_zero()) CHECK(s.is_rational());
        }
        CHECK(std::abs(std::stold(r.meta["total"].get<std::string>()) - total) < 1e-9);
        CHECK(r.meta["crosschecks"].get<int>() > 0);
    }
    CHECK_THROWS_AS(kloosterman_twisted_scan(P("1"), P("2"), P("1"), P("1"), 1, 1, threads(1)), Error);
}

TEST_CASE("reports are deterministic across thread counts") {
    BiPoly F = BiPoly::parse(F3(), "0,1;0;1");
    for (const char* fmt : {"csv", "json"}) {
        CHECK(chowla_scan(F, {3, 5}, threads(1)).render(fmt) == chowla_scan(F, {3, 5}, threads(3)).render(fmt));
        CHECK(bateman_horn_scan(P("0,1"), {5}, threads(1)).render(fmt) ==
              bateman_horn_scan(P("0,1"), {5}, threads(4)).render(fmt));
        CHECK(kloosterman_twisted_scan(P("1"), P("1"), P("0,1"), P("1"), 2, 2, threads(1)).render(fmt) ==
              kloosterman_twisted_scan(P("1"), P("1"), P("0,1"), P("1"), 2, 2, threads(2)).render(fmt));
    }
}

TEST_CASE("block partition does not change sums") {
    std::vector<int64_t> vals(1000);
    std::mt19937_64 rng(67);
    for (auto& v : vals) v = static_cast<int64_t>(rng() % 7) - 3;
    int64_t want = 0;
    for (auto v : vals) want += v;
    for (uint64_t block : {1, 7, 64, 1000, 5000}) {
        std::vector<int64_t> part((1000 + block - 1) / block, 0);
        run_blocks(1000, block, 3, [&](uint64_t b, uint64_t lo, uint64_t hi) {
            for (uint64_t i = lo; i < hi; ++i) part[b] += vals[i];
        });
        int64_t got = 0;
        for (auto v : part) got += v;
        CHECK(got == want);
    }
    CHECK_THROWS_AS(run_blocks(10, 1, 2, [](uint64_t, uint64_t lo, uint64_t) {
                        if (lo == 5) throw Error(ErrorCode::Internal, "boom");
                    }),
                    Error);
}

TEST_CASE("report round trip") {
    Report r = kloosterman_twisted_scan(P("1"), P("0"), P("0,1"), P("1"), 1, 2, threads(1));
    Report a = Report::parse(r.to_csv());
    CHECK(a.to_csv() == r.to_csv());
    CHECK(a.to_json() == r.to_json());
    Report b = Report::parse(r.render("json"));
    CHECK(b.to_json() == r.to_json());
    CHECK_THROWS_AS(Report::parse("# ok: true\n"), Error);
    CHECK(fmt_float(1.0L / 3) == "0.333333333333333");
}

TEST_CASE("audit reports") {
    Report b = bijection_report(P("0,1"), FormClass::Definite, 3);
    CHECK(b.ok);
    for (const auto& row : b.rows) CHECK((row[2] == "2" || row[2] == "8"));
    Report c = convergence_audit(P("0,1"), 12, 4);
    CHECK(c.rows.size() == 9);
    CHECK(c.meta["gap_decreased"].get<bool>());
    Report s = singular_series_report(P("0,1"), 12);
    CHECK(s.rows.size() == 1);
    BiPoly F = BiPoly::parse(F3(), "1,1;0,0,1;1");
    Report m = mobius_formula_report(F, P("0,1,0,0,1"), 6);
    CHECK(m.ok);
}
