#pragma once

#include <utility>
#include <vector>

#include "ffnt/cyclo.hpp"
#include "ffnt/poly.hpp"

namespace ffnt {

struct Residue {
    Poly rep;
    Poly modulus;

    static Residue make(const Poly& x, const Poly& g);
};

Poly inv_mod(const Poly& x, const Poly& g);
// (xbar, y_x) with xbar*x - y_x*y = 1, deg xbar < deg y
std::pair<Poly, Poly> bezout_pair(const Poly& x, const Poly& y);

// prod of f(a) over the roots a of M, with multiplicity
Elem norm_map(const Poly& f, const Poly& M);

// Jacobi symbol (f/g), multiplicative over the factorization of g
int jacobi(const Poly& f, const Poly& g);
// Euler's criterion at a single prime
int legendre(const Poly& f, const Poly& pi);
// chi2 of the norm; valid for squarefree g
int jacobi_squarefree(const Poly& f, const Poly& g);

// Tr(a_1) for a = M/N, as a residue mod p
uint64_t exp_inf(const Poly& M, const Poly& N);
// q^{d-n} sum_{deg h < n-d} e(hM/N), n = deg N
CycloSum indicator_expand(const Poly& M, const Poly& N, int d);

Poly crt(const std::vector<std::pair<Poly, Poly>>& residues);

}  // namespace ffnt
