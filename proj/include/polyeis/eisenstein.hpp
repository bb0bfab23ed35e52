#pragma once

#include "polyeis/complex.hpp"
#include "polyeis/schwartz.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace polyeis {

// ||t2||_f and sgn N(t2) of the torus part of g_f
struct TorusData {
    Q t2_norm = 1;
    int t2_sign = 1;
};

struct LatticeSumResult {
    Cx<Real> value;
    long B = 0;
    Real tail_estimate = 0;
    long terms = 0;
    int precision = 0;            // mantissa bits used
    int requested_precision = 0;  // bits asked for
};

struct RationalCertificate {
    bool success = false;
    Q rational;
    std::vector<std::pair<long, int>> denominator_factorization;
    Z denominator_bound;
    Real tolerance = 0;
    std::vector<Cx<Real>> runs;
    std::vector<Real> residuals;
    std::string diagnostics;
};

// Nonzero l in L with |N(l)| <= B, one per orbit of the totally positive units = 1 mod N,
// chosen in the slab 0 <= log|l_1| - log|l_2| < 2 log eps_N. Sorted by |N(l)|, then coordinates.
std::vector<FieldElement> enumerate_orbit_reps(const NumberField& F, const FractionalIdeal& L, long N, long B);

// Constant term of the Eisenstein class at g = (g_f in GL2(O^) given by `g`, torus data).
// xi = 1: direct sum over |l| <= B plus a Hurwitz tail. xi = 2: orbit sum over unimodular
// cones with Richardson-extrapolated outer sums, truncation scale sqrt(B)/8.
LatticeSumResult constant_term(const TwistedSchwartz& phi, int m, const TorusData& torus, long B, int prec_bits,
                               const Mat2* g = nullptr);

// sum over x in O \ 0 modulo E_C^+ of line[x mod C] N(x)^{-K} (ResidueRing indexing), the
// engine behind constant_term without prefactors or the S^0 condition
LatticeSumResult residue_class_sum(const NumberField& F, long C, const std::vector<Cx<Real>>& line, int K, long B,
                                   int prec_bits);

// Denominator bound prod p^e; tolerance 10^{-prec/8} with prec the requested precision.
RationalCertificate certify_rational(const LatticeSumResult& run1, const LatticeSumResult& run2,
                                     const std::vector<long>& primes, int max_exp);
// single value with explicit tolerance and plain denominator bound
RationalCertificate certify_value(const Cx<Real>& value, const Real& tolerance, const Z& denominator_bound);
// the rational with smallest denominator in [lo, hi]
Q simplest_rational(const Q& lo, const Q& hi);
// exact rational value of a binary float
Q exact_rational(const Real& x);

struct EisensteinPoint {
    std::vector<std::complex<double>> tau;  // one entry per real place, Im > 0
    Q r = 1;
};

// pref * sum over (l1, l2) modulo the units of f^(h l) prod_v (z_v / r)^{-K} |z_v / r|^{-2s},
// z_v = l1 + l2 tau_v, K = m + 2, pref = (-1)^xi sqrt(dF) Gamma(K+s)^xi / (-2 pi i)^{xi K}.
// xi = 1 sums rows l2 with the Lipschitz formula (s = 0) or a Hurwitz tail expansion (s > 0).
LatticeSumResult eisenstein_value(const TwistedSchwartz& phi, int m, double s, const EisensteinPoint& pt, long B,
                                  int prec_bits, const Mat2* g = nullptr);

// trapezoidal x-average of eisenstein_value over the period torus at height y
LatticeSumResult constant_term_quadrature(const TwistedSchwartz& phi, int m, const std::vector<double>& y,
                                          const Q& r, int Qpts, long B, int prec_bits);

// xi = 2, m = 0: eisenstein_value at s = 0.1, 0.05, 0.025 and the Richardson limit s -> 0.
struct SExtrapolation {
    std::vector<double> s;
    std::vector<Cx<Real>> values;
    Cx<Real> limit;
};
SExtrapolation eisenstein_s_extrapolation(const TwistedSchwartz& phi, const EisensteinPoint& pt, long B);

}  // namespace polyeis
