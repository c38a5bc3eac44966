#pragma once

#include <cstdint>
#include <vector>

#include "ffnt/cyclo.hpp"
#include "ffnt/poly.hpp"

namespace ffnt {

// F = T^2 + D with D = D1 * D2^2, D1 squarefree
struct QuadTarget {
    Poly D, D1, D2;
    bool irreducible = false;

    static QuadTarget make(const Poly& D);
};

// all T mod pi^r with T^2 + D = 0 mod pi^r
std::vector<Poly> roots_mod_prime_power(const Poly& D, const Poly& pi, int r);
// closed-form count of the above
uint64_t root_count_prime_power(const Poly& D, const Poly& pi, int r);
// all T mod A, by CRT over the prime powers of A
std::vector<Poly> roots_mod(const Poly& A, const Poly& D);

uint64_t rho(const Poly& A, const Poly& D);
uint64_t rho_d(const Poly& A, const Poly& D, int d);
CycloSum rho_d_expansion(const Poly& A, const Poly& D, int d);

int chi_F(const Poly& pi, const Poly& D);
// coefficients c_0..c_{terms-1} of L(t; chi_F)
std::vector<int64_t> L_chiF(const Poly& D, int terms);
long double L_value(const Poly& D, long double t);

// prime counts by degree, indices 0..maxdeg (index 0 unused)
struct PrimeCounts {
    std::vector<__int128> primes, dividing, chi_sum, plus, minus;
};
PrimeCounts prime_counts(const Poly& D, int maxdeg);
// same counts by enumerating monic irreducibles
PrimeCounts prime_counts_direct(const Poly& D, int maxdeg);

struct SingularSeries {
    long double value = 0;   // G(1/q) through L(1/q)^{-1} and the absolutely convergent product
    long double euler = 0;   // the Euler product truncated at the cutoff
    long double path_gap = 0;
    int cutoff = 0;
};
SingularSeries singular_series(const Poly& D, int cutoff = 12);

// sum_{A in M_k} mu(A) rho(A; F) for k = 0..n
std::vector<__int128> mu_rho_sums(const Poly& D, int n);

struct Convergence {
    long double partial = 0, target = 0, gap = 0;
};
Convergence convergence_check(const Poly& D, int n);

}  // namespace ffnt
