#include "polyeis/zeta.hpp"

#include <mutex>
#include <set>

namespace polyeis {

namespace {
std::mutex bern_mu;
std::vector<Q> bern_cache{Q(1)};
}  // namespace

Q binomial(long n, long k)
{
    if (k < 0 || k > n) return 0;
    Z r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Q(r);
}

Q factorial(long n)
{
    Z r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Q(r);
}

Q bernoulli_number(long k)
{
    if (k < 0) throw InvalidInput("Bernoulli index must be non-negative");
    std::lock_guard<std::mutex> lock(bern_mu);
    while (long(bern_cache.size()) <= k) {
        long m = long(bern_cache.size());
        // sum_{j<m} C(m+1, j) B_j + (m+1) B_m = 0
        Q s = 0;
        for (long j = 0; j < m; ++j) s += binomial(m + 1, j) * bern_cache[j];
        bern_cache.push_back(-s / (m + 1));
    }
    return bern_cache[k];
}

Q bernoulli_poly(long k, const Q& x)
{
    Q s = 0;
    std::vector<Q> pw(k + 1);
    pw[0] = 1;
    for (long i = 1; i <= k; ++i) pw[i] = pw[i - 1] * x;
    for (long j = 0; j <= k; ++j) s += binomial(k, j) * bernoulli_number(j) * pw[k - j];
    return s;
}

Q twisted_zeta_rank1(const Q& a, long k)
{
    if (k < 2) throw InvalidInput("k must be at least 2");
    return bernoulli_poly(k, frac(a));
}

// ---------------------------------------------------------------- Shintani

namespace {

using Series = std::vector<FieldElement>;  // coefficients of v^0..v^n

Series series_mul(const NumberField& F, const Series& a, const Series& b)
{
    const size_t n = a.size();
    Series r(n, FieldElement(0));
    for (size_t i = 0; i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; i + j < n; ++j)
            if (!b[j].is_zero()) r[i + j] = r[i + j] + mul(F, a[i], b[j]);
    }
    return r;
}

// (p + q v)^e truncated at degree n, for integer e >= -1
Series linear_power(const NumberField& F, const FieldElement& p, const FieldElement& q, long e, long n)
{
    Series r(n + 1, FieldElement(0));
    if (e >= 0) {
        for (long i = 0; i <= std::min(e, n); ++i)
            r[i] = binomial(e, i) * mul(F, power(F, p, e - i), power(F, q, i));
        return r;
    }
    if (e != -1) throw PreconditionError("unsupported exponent");
    FieldElement pi = inv(F, p), ratio = mul(F, q, pi), cur = pi;
    for (long i = 0; i <= n; ++i) {
        r[i] = (i % 2 ? Q(-1) : Q(1)) * cur;
        cur = mul(F, cur, ratio);
    }
    return r;
}

}  // namespace

Q shintani_cone_value(const NumberField& F, const FieldElement& w1, const FieldElement& w2, const Q& x1,
                      const Q& x2, long n)
{
    if (F.xi != 2) throw InvalidInput("Shintani cones need a real quadratic field");
    const FieldElement c1 = conj(F, w1), c2 = conj(F, w2);
    Q total = 0;
    for (long k1 = 0; k1 <= 2 * n + 2; ++k1) {
        long k2 = 2 * n + 2 - k1;
        Q b = bernoulli_poly(k1, x1) * bernoulli_poly(k2, x2);
        if (b == 0) continue;
        Series s = series_mul(F, linear_power(F, w1, c1, k1 - 1, n), linear_power(F, w2, c2, k2 - 1, n));
        total += b / (factorial(k1) * factorial(k2)) * trace(F, s[n]);
    }
    Q nf = factorial(n);
    return nf * nf / 2 * total;
}

ShintaniCone standard_cone(const NumberField& F, long N)
{
    auto L = unit_subgroup_generator(F, N);
    return {FieldElement(1), L.eps_N};
}

ShintaniCone inverse_cone(const NumberField& F, long N)
{
    auto L = unit_subgroup_generator(F, N);
    return {inv(F, L.eps_N), FieldElement(1)};
}

// coordinates of x in the Q-basis (v1, v2)
static std::pair<Q, Q> cone_coords(const NumberField& F, const ShintaniCone& cone, const FieldElement& x)
{
    // x = t1 v1 + t2 v2 : solve the 2x2 rational system in the omega basis
    Q a11 = cone.v1.a, a21 = cone.v1.b, a12 = cone.v2.a, a22 = cone.v2.b;
    Q d = a11 * a22 - a12 * a21;
    if (d == 0) throw PreconditionError("degenerate cone");
    (void)F;
    Q t1 = (x.a * a22 - a12 * x.b) / d;
    Q t2 = (a11 * x.b - a21 * x.a) / d;
    return {t1, t2};
}

bool in_cone(const NumberField& F, const ShintaniCone& cone, const FieldElement& x)
{
    auto [t1, t2] = cone_coords(F, cone, x);
    return t1 > 0 && t2 >= 0;
}

Q shintani_partial_zeta(const NumberField& F, long N, const FractionalIdeal& L, const FieldElement& c, long n,
                        const ShintaniCone* cone_in)
{
    if (F.xi != 2) throw InvalidInput("Shintani cones need a real quadratic field");
    if (n < 0) throw InvalidInput("n must be non-negative");
    if (!contains(F, L, c)) throw InvalidInput("shift not in the lattice");
    ShintaniCone cone = cone_in ? *cone_in : standard_cone(F, N);
    FractionalIdeal NL = ideal_mul(F, principal_ideal(F, FieldElement(Q(N))), L);
    // scale the cone generators into N L
    FractionalIdeal J = ideal_mul(F, NL, ideal_inv(F, principal_ideal(F, cone.v1)));
    // smallest positive integer k with k v1 in N L (then also k v2, as v2 / v1 is a unit);
    // the rationals in J are (a / den) Z
    Z k = Z(Q(Q(J.a) / Q(J.den)).get_num());
    FieldElement w1 = Q(k) * cone.v1, w2 = Q(k) * cone.v2;
    auto b = ideal_basis(F, L);
    // lattice L' = Z w1 + Z w2 in L-coordinates, then coset representatives of L / L'
    auto in_basis = [&](const FieldElement& x) {
        Q a11 = b[0].a, a21 = b[0].b, a12 = b[1].a, a22 = b[1].b;
        Q d = a11 * a22 - a12 * a21;
        return std::pair<Q, Q>{(x.a * a22 - a12 * x.b) / d, (a11 * x.b - a21 * x.a) / d};
    };
    auto [p1, p2] = in_basis(w1);
    auto [q1, q2] = in_basis(w2);
    if (p1.get_den() != 1 || p2.get_den() != 1 || q1.get_den() != 1 || q2.get_den() != 1)
        throw PreconditionError("cone generators not in the lattice");
    // row HNF of {(p1,p2),(q1,q2)}
    Z r1a = Z(p1.get_num()), r1b = Z(p2.get_num()), r2a = Z(q1.get_num()), r2b = Z(q2.get_num());
    while (r2a != 0) {
        Z t = r1a / r2a;
        r1a -= t * r2a;
        r1b -= t * r2b;
        std::swap(r1a, r2a);
        std::swap(r1b, r2b);
    }
    Z d1 = abs(r1a), d2 = abs(r2b);
    if (d1 == 0 || d2 == 0) throw PreconditionError("degenerate cone lattice");
    const long n1 = to_long(d1), n2 = to_long(d2);
    if (Z(n1) * Z(n2) > 50000000) throw ResourceError("cone index too large");
    ShintaniCone wc{w1, w2};
    Q total = 0;
    for (long i = 0; i < n1; ++i)
        for (long j = 0; j < n2; ++j) {
            FieldElement y = Q(i) * b[0] + Q(j) * b[1];
            auto [x1, x2] = cone_coords(F, wc, y);
            x1 = frac(x1);
            if (x1 == 0) x1 = 1;
            x2 = frac(x2);
            FieldElement yr = x1 * w1 + x2 * w2;
            if (!contains(F, NL, yr - c)) continue;
            total += shintani_cone_value(F, w1, w2, x1, x2, n);
        }
    return total;
}

Q siegel_sigma1(const NumberField& F)
{
    if (F.xi != 2) throw InvalidInput("Siegel formula needs a real quadratic field");
    auto sigma1 = [](long m) {
        long s = 0;
        for (long d = 1; d <= m; ++d)
            if (m % d == 0) s += d;
        return s;
    };
    long total = 0;
    for (long t = -F.dF; t <= F.dF; ++t) {
        if (t * t >= F.dF || mod_pos(t * t - F.dF, 4) != 0) continue;
        total += sigma1((F.dF - t * t) / 4);
    }
    return make_q(total, 60);
}

Q dedekind_zeta_negative(const NumberField& F, long n)
{
    if (n < 0) throw InvalidInput("n must be non-negative");
    if (F.is_rational()) return n == 0 ? Q(-1, 2) : -bernoulli_number(n + 1) / (n + 1);
    auto C = narrow_class_group(F);
    Q total = 0;
    for (auto& cl : C.reps) {
        FractionalIdeal Li = ideal_inv(F, cl);
        Q nc = ideal_norm(F, cl), f = 1;
        for (long i = 0; i < n; ++i) f *= nc;
        total += f * shintani_partial_zeta(F, 1, Li, FieldElement(0), n);
    }
    return total;
}

}  // namespace polyeis
