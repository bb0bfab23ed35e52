#pragma once

#include "polyeis/classfield.hpp"
#include "polyeis/field.hpp"

namespace polyeis {

Q bernoulli_number(long k);  // B_1 = -1/2
Q bernoulli_poly(long k, const Q& x);
Q binomial(long n, long k);
Q factorial(long n);

// B_k({a}); sum_{n != 0} e(n a) / n^k = -(2 pi i)^k B_k({a}) / k!
Q twisted_zeta_rank1(const Q& a, long k);

// Half-open cone {t1 v1 + t2 v2 : t1 > 0, t2 >= 0} with v2 = eps_N v1.
struct ShintaniCone {
    FieldElement v1, v2;
};
ShintaniCone standard_cone(const NumberField& F, long N);
// the same fundamental domain built from (eps_N^{-1}, 1)
ShintaniCone inverse_cone(const NumberField& F, long N);
bool in_cone(const NumberField& F, const ShintaniCone& cone, const FieldElement& x);

// sum over l in L, l >> 0, l = c mod N L, modulo the totally positive units = 1 mod N,
// of N(l)^{-s} at s = -n
Q shintani_partial_zeta(const NumberField& F, long N, const FractionalIdeal& L, const FieldElement& c, long n,
                        const ShintaniCone* cone = nullptr);
// Shintani value for the points (x1 + m1) w1 + (x2 + m2) w2, m >= 0
Q shintani_cone_value(const NumberField& F, const FieldElement& w1, const FieldElement& w2, const Q& x1,
                      const Q& x2, long n);

Q siegel_sigma1(const NumberField& F);
// zeta_F(-n), as a sum of Shintani values over narrow classes (Bernoulli numbers for the rationals)
Q dedekind_zeta_negative(const NumberField& F, long n);

}  // namespace polyeis
