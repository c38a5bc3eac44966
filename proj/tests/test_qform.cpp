#include <doctest.h>

#include <random>
#include <set>

#include "ffnt/qform.hpp"
#include "ffnt/residues.hpp"

using namespace ffnt;

namespace {

const Field* F3() { return Field::prime(3); }
Poly P(const char* s) { return Poly::parse(F3(), s); }

Poly random_poly(std::mt19937_64& rng, const Field* F, int maxdeg) {
    return poly_from_index(F, rng() % count_pow(F->q(), maxdeg + 1), maxdeg + 1);
}

SL2Mat random_sl2(std::mt19937_64& rng, const Field* F) {
    SL2Mat M = SL2Mat::identity(F);
    SL2Mat J{Poly(F), Poly::one(F), -Poly::one(F), Poly(F)};
    for (int k = 0; k < 3; ++k) M = M * SL2Mat::unipotent(random_poly(rng, F, 1)) * J;
    return M;
}

}  // namespace

TEST_CASE("classify") {
    CHECK(classify_disc(P("0,1")) == FormClass::Definite);
    CHECK(classify_disc(P("1,0,2")) == FormClass::Indefinite);
    CHECK(classify_disc(-P("1,2,1")) == FormClass::Degenerate);
    CHECK(classify_disc(P("1,0,1")) == FormClass::Definite);  // -D has nonsquare lead 2
    // constant -D times a nonsquare stays nondegenerate
    CHECK(classify_disc(P("1")) == FormClass::Definite);
    CHECK(std::string(form_class_name(FormClass::Indefinite)) == "indefinite");
}

TEST_CASE("sl2 actions") {
    const Field* F = F3();
    QuadForm Q{P("1,1"), P("2"), P("0,1,1")};
    CHECK(sl2_act(Q, SL2Mat::identity(F)) == Q);
    Poly g = P("1,2");
    QuadForm U = sl2_act(Q, SL2Mat::unipotent(g));
    CHECK(U.a == Q.a);
    CHECK(U.b == Q.b + P("2") * Q.a * g);
    CHECK(U.c == Q.a * g * g + Q.b * g + Q.c);
    CHECK_THROWS_AS(sl2_act(Q, SL2Mat{P("2"), Poly(F), Poly(F), P("1")}), Error);

    std::mt19937_64 rng(4);
    for (int it = 0; it < 100; ++it) {
        QuadForm R{random_poly(rng, F, 3), random_poly(rng, F, 3), random_poly(rng, F, 3)};
        SL2Mat M = random_sl2(rng, F), N = random_sl2(rng, F);
        CHECK(M.det().is_one());
        CHECK(sl2_act(R, M).disc() == R.disc());
        CHECK(sl2_act(sl2_act(R, M), N) == sl2_act(R, M * N));
        Representation r{R, random_poly(rng, F, 2), random_poly(rng, F, 2)};
        Representation r2 = sl2_act(r, M);
        CHECK(r2.value() == r.value());
        auto v = sl2_act(sl2_act(std::make_pair(r.x, r.y), M), N);
        CHECK(v == sl2_act(std::make_pair(r.x, r.y), M * N));
        CHECK(M * M.inverse() == SL2Mat::identity(F));
    }
}

TEST_CASE("associated solutions") {
    const Field* F = F3();
    QuadForm Q{P("1,1"), P("2,1"), P("0,0,1")};
    Solution s = associated_solution({Q, P("1"), Poly(F)});
    CHECK(s.A == Q.a);
    CHECK(s.f == (Q.b.scaled(F->half()) % Q.a));

    QuadForm X{P("1"), Poly(F), P("0,1")};
    Solution t = associated_solution({X, P("0,1"), P("1")});
    CHECK(t.A == P("0,1,1"));
    CHECK(t.f == P("0,2"));
    CHECK(((t.f * t.f + P("0,1")) % t.A).is_zero());
    CHECK_THROWS_AS(associated_solution({X, P("0,1"), P("0,1")}), Error);

    Representation back = representation_from_solution(P("0,1,1"), P("0,2"), P("0,1"));
    CHECK(back.form.a == P("0,1,1"));
    CHECK(back.form.b == P("0,1"));  // 4u = u
    CHECK(back.form.c == P("1"));
    CHECK(back.form.disc() == P("0,1"));
    CHECK(associated_solution(back) == t);
    CHECK_THROWS_AS(representation_from_solution(P("0,1,1"), P("1"), P("0,1")), Error);

    std::mt19937_64 rng(8);
    for (int it = 0; it < 300; ++it) {
        QuadForm R{random_poly(rng, F, 2), random_poly(rng, F, 2), random_poly(rng, F, 2)};
        Representation r{R, random_poly(rng, F, 2), random_poly(rng, F, 2)};
        if (!r.is_primitive()) continue;
        Solution sol = associated_solution(r);
        CHECK(((sol.f * sol.f + R.disc()) % sol.A).is_zero());
        SL2Mat M = random_sl2(rng, F);
        CHECK(associated_solution(sl2_act(r, M)) == sol);
        Representation rr = representation_from_solution(sol.A, sol.f, R.disc());
        CHECK(associated_solution(rr) == sol);
    }
}

TEST_CASE("short vectors and definite standardization") {
    const Field* F = F3();
    QuadForm Q{P("1"), Poly(F), P("0,1")};
    auto sv = short_vectors(Q);
    CHECK(sv.size() == 2);
    CHECK(sv == short_vectors_by_scan(Q, 2));
    QuadForm E{P("1,1"), P("1"), P("2,1")};
    REQUIRE(is_standard_definite(E));
    CHECK(short_vectors(E).size() == 8);
    auto scan = short_vectors_by_scan(E, 2);
    auto sve = short_vectors(E);
    CHECK(std::set(scan.begin(), scan.end()) == std::set(sve.begin(), sve.end()));
    CHECK_THROWS_AS(short_vectors(QuadForm{P("0,1"), Poly(F), P("1")}), Error);

    auto [r0, M0] = standardize_definite({Q, P("0,1"), P("1")}, {P("1"), Poly(F)});
    CHECK(M0 == SL2Mat::identity(F));
    CHECK(r0.form == Q);

    std::mt19937_64 rng(12);
    Poly D = P("0,1");
    auto forms = enumerate_standard_forms(D, FormClass::Definite);
    for (int it = 0; it < 60; ++it) {
        const QuadForm& S = forms[rng() % forms.size()].form;
        SL2Mat M = random_sl2(rng, F);
        QuadForm R = sl2_act(S, M);
        Representation rep{R, random_poly(rng, F, 2), random_poly(rng, F, 2)};
        if (!rep.is_primitive()) continue;
        auto shorts = short_vectors_by_scan(R, 3);
        for (const auto& v : shorts) {
            auto [out, N] = standardize_definite(rep, v);
            CHECK(is_standard_definite(out.form));
            CHECK(sl2_act(v, N) == std::make_pair(P("1"), Poly(F)));
            CHECK(associated_solution(out) == associated_solution(rep));
            // uniqueness: no other unipotent keeps the form standard
            for (uint64_t g = 1; g < 9; ++g) {
                SL2Mat U = SL2Mat::unipotent(poly_from_index(F, g, 2));
                CHECK_FALSE(is_standard_definite(sl2_act(out.form, U)));
            }
        }
        CHECK(shorts.size() == short_vectors(S).size());
        // a long vector is rejected
        Poly big = P("0,0,1");
        if (Q.eval(big, P("1")).deg() > R.eval(shorts[0].first, shorts[0].second).deg())
            CHECK_THROWS_AS(standardize_definite(rep, {P("1"), P("0,0,0,1")}), Error);
    }
}

TEST_CASE("free action: no nontrivial stabilizer of a primitive vector and form") {
    const Field* F = F3();
    std::mt19937_64 rng(30);
    for (int it = 0; it < 40; ++it) {
        QuadForm R{random_poly(rng, F, 2), random_poly(rng, F, 2), random_poly(rng, F, 2)};
        Representation r{R, random_poly(rng, F, 1), random_poly(rng, F, 1)};
        if (!r.is_primitive()) continue;
        for (int k = 0; k < 200; ++k) {
            SL2Mat M{random_poly(rng, F, 1), random_poly(rng, F, 1), random_poly(rng, F, 1), random_poly(rng, F, 1)};
            if (!M.det().is_one() || M == SL2Mat::identity(F)) continue;
            Representation m = sl2_act(r, M);
            CHECK_FALSE((m.form == R && m.x == r.x && m.y == r.y));
        }
    }
}

TEST_CASE("unipotent equivalence of (Q,(1,0)) representations") {
    const Field* F = F3();
    Poly D = P("0,1");
    Poly A = P("0,1,1");
    auto sols = solutions_mod(A, D);
    REQUIRE(!sols.empty());
    std::vector<Representation> reps;
    for (const auto& f : sols)
        for (uint64_t k = 0; k < 9; ++k) reps.push_back(representation_from_solution(A, f + A * poly_from_index(F, k, 2), D));
    for (const auto& r1 : reps)
        for (const auto& r2 : reps) {
            bool congruent = ((r1.form.b - r2.form.b) % (A.scaled(2))).is_zero();
            // b' = b + 2 A g exhibits the matrix
            auto [g, rem] = divrem(r2.form.b - r1.form.b, A.scaled(2));
            bool exhibited = rem.is_zero() && sl2_act(r1.form, SL2Mat::unipotent(g)) == r2.form;
            CHECK(congruent == exhibited);
            CHECK(congruent == (associated_solution(r1) == associated_solution(r2)));
        }
}

TEST_CASE("indefinite standardness data") {
    CHECK(indefinite_weight(3, 0) == Rational(1, 24));
    CHECK(indefinite_weight(3, 1) == Rational(1, 18));
    CHECK(indefinite_weight(3, 2) == Rational(1, 54));
    const Field* F = F3();
    QuadForm Q{P("1"), Poly(F), P("1,0,2")};
    auto d = standard_indefinite_data({Q, P("1"), Poly(F)});
    REQUIRE(d);
    CHECK(d->first == 1);
    CHECK(d->second == Rational(1, 18));
    QuadForm far = sl2_act(Q, SL2Mat::unipotent(P("0,0,1")));
    CHECK_FALSE(standard_indefinite_data({far, P("1"), Poly(F)}));
    CHECK_THROWS_AS(standard_indefinite_data({QuadForm{P("1"), Poly(F), P("0,1")}, P("1"), Poly(F)}), Error);
}

TEST_CASE("enumerate standard forms") {
    const Field* F = F3();
    auto defs = enumerate_standard_forms(P("0,1"), FormClass::Definite);
    std::set<QuadForm> got;
    for (const auto& s : defs) got.insert(s.form);
    CHECK(got.count(QuadForm{P("1"), Poly(F), P("0,1")}));
    CHECK(got.count(QuadForm{P("2"), Poly(F), P("0,2")}));
    for (const auto& s : defs) {
        CHECK(s.form.disc() == P("0,1"));
        CHECK(is_standard_definite(s.form));
    }
    // brute force over a box of (a,b,c)
    std::set<QuadForm> brute;
    for (uint64_t i = 0; i < 27; ++i)
        for (uint64_t j = 0; j < 27; ++j)
            for (uint64_t k = 0; k < 81; ++k) {
                QuadForm R{poly_from_index(F, i, 3), poly_from_index(F, j, 3), poly_from_index(F, k, 4)};
                if (R.disc() == P("1,1,0,1") && is_standard_definite(R)) brute.insert(R);
            }
    std::set<QuadForm> enumerated;
    for (const auto& s : enumerate_standard_forms(P("1,1,0,1"), FormClass::Definite)) enumerated.insert(s.form);
    CHECK(brute == enumerated);
    CHECK_THROWS_AS(enumerate_standard_forms(P("0,1"), FormClass::Indefinite), Error);

    Poly D = P("1,0,2");
    for (const auto& s : enumerate_standard_forms(D, FormClass::Indefinite)) {
        CHECK(s.form.disc() == D);
        CHECK(s.form.a.deg() <= 1 - s.s);
        CHECK(s.form.c.deg() <= 1 + s.s);
    }
}

TEST_CASE("exp_change") {
    const Field* F = F3();
    QuadForm X{P("1"), Poly(F), P("0,1")};
    Representation r{X, P("0,1"), P("1")};
    CHECK(exp_change(r, Poly(F)));
    // deg A = 2, deg b = -inf, deg y = 0, deg a = 0, deg x = 1: deg h < 0 only
    CHECK_THROWS_AS(exp_change(r, P("1")), Error);
    std::mt19937_64 rng(14);
    int tested = 0;
    for (int it = 0; it < 3000 && tested < 300; ++it) {
        QuadForm R{random_poly(rng, F, 1), random_poly(rng, F, 1), random_poly(rng, F, 3)};
        Representation rep{R, random_poly(rng, F, 1), random_poly(rng, F, 3)};
        if (rep.y.is_zero() || !rep.is_primitive()) continue;
        int A = rep.value().deg();
        int bound = std::min(A - std::max(R.b.deg(), 0) - 1, A + rep.y.deg() - R.a.deg() - rep.x.deg() - 1);
        if (R.b.is_zero()) bound = std::min(A + rep.y.deg() - R.a.deg() - std::max(rep.x.deg(), 0) - 1, bound + 1);
        for (int d = 0; d < bound && d < 4; ++d) {
            Poly h = random_poly(rng, F, d);
            if (h.deg() < 0 || h.deg() >= A - R.b.deg() - 1 ||
                h.deg() >= A + rep.y.deg() - R.a.deg() - rep.x.deg() - 1)
                continue;
            CHECK(exp_change(rep, h));
            ++tested;
        }
    }
    CHECK(tested > 50);
}

TEST_CASE("bijection audits") {
    const Field* F = F3();
    for (const char* d : {"0,1", "1,1,0,1", "2,0,0,1"}) {
        Poly D = P(d);
        REQUIRE(classify_disc(D) == FormClass::Definite);
        BijectionAudit a = bijection_audit(D, FormClass::Definite, 4);
        CHECK(a.missing == 0);
        CHECK(a.extraneous == 0);
        CHECK(a.ok);
        for (const auto& f : a.fibers) {
            CHECK(f.uniform);
            CHECK(f.fiber_size == f.expected);
        }
    }
    BijectionAudit b = bijection_audit(P("1,0,2"), FormClass::Indefinite, 4);
    CHECK(b.missing == 0);
    CHECK(b.extraneous == 0);
    CHECK(b.ok);
    for (const auto& f : b.fibers) {
        CHECK(f.uniform);
        CHECK(f.fiber_size == f.expected);
    }
    (void)F;
}
