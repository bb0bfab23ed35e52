#include "polyeis/field.hpp"

#include <algorithm>
#include <cmath>

namespace polyeis {

bool is_squarefree(long n)
{
    for (long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

NumberField construct_field(long D)
{
    NumberField F;
    if (D == 1) return F;
    if (D < 1 || !is_squarefree(D)) throw InvalidInput("D must be squarefree and >= 2, got " + std::to_string(D));
    F.D = D;
    F.xi = 2;
    F.one_mod_4 = (D % 4 == 1);
    if (F.one_mod_4) {
        F.dF = D;
        F.w_tr = 1;
        F.w_c = (D - 1) / 4;
    } else {
        F.dF = 4 * D;
        F.w_tr = 0;
        F.w_c = D;
    }
    return F;
}

FieldElement omega(const NumberField& F)
{
    if (F.is_rational()) throw InvalidInput("omega undefined for the rationals");
    return {0, 1};
}

FieldElement delta(const NumberField& F)
{
    if (F.is_rational()) return {1, 0};
    return F.one_mod_4 ? FieldElement(-1, 2) : FieldElement(0, 2);
}

FieldElement mul(const NumberField& F, const FieldElement& x, const FieldElement& y)
{
    if (F.is_rational()) return {x.a * y.a, 0};
    Q bd = x.b * y.b;
    return {x.a * y.a + bd * F.w_c, x.a * y.b + x.b * y.a + bd * F.w_tr};
}

FieldElement conj(const NumberField& F, const FieldElement& x)
{
    if (F.is_rational()) return x;
    return {x.a + x.b * F.w_tr, -x.b};
}

Q trace(const NumberField& F, const FieldElement& x)
{
    if (F.is_rational()) return x.a;
    return 2 * x.a + x.b * F.w_tr;
}

Q norm(const NumberField& F, const FieldElement& x)
{
    if (F.is_rational()) return x.a;
    return x.a * x.a + x.a * x.b * F.w_tr - x.b * x.b * F.w_c;
}

FieldElement inv(const NumberField& F, const FieldElement& x)
{
    Q n = norm(F, x);
    if (n == 0) throw InvalidInput("inverse of zero");
    if (F.is_rational()) return {1 / x.a, 0};
    FieldElement c = conj(F, x);
    return {c.a / n, c.b / n};
}

FieldElement divide(const NumberField& F, const FieldElement& x, const FieldElement& y)
{
    return mul(F, x, inv(F, y));
}

FieldElement power(const NumberField& F, const FieldElement& x, long k)
{
    if (k < 0) return power(F, inv(F, x), -k);
    FieldElement r(1), b = x;
    while (k) {
        if (k & 1) r = mul(F, r, b);
        b = mul(F, b, b);
        k >>= 1;
    }
    return r;
}

bool is_integral(const FieldElement& x) { return x.a.get_den() == 1 && x.b.get_den() == 1; }

Z denominator(const FieldElement& x)
{
    Z d;
    mpz_lcm(d.get_mpz_t(), x.a.get_den_mpz_t(), x.b.get_den_mpz_t());
    return d;
}

std::string to_string(const FieldElement& x)
{
    return "(" + to_string(x.a) + ", " + to_string(x.b) + ")";
}

std::pair<Q, Q> sqrt_coords(const NumberField& F, const FieldElement& x)
{
    if (F.is_rational() || !F.one_mod_4) return {x.a, x.b};
    return {x.a + x.b / 2, x.b / 2};
}

FieldElement from_sqrt_coords(const NumberField& F, const Q& p, const Q& q)
{
    if (F.is_rational()) return {p, 0};
    if (!F.one_mod_4) return {p, q};
    return {p - q, 2 * q};
}

static int sgn(const Q& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

int sign_at(const NumberField& F, const FieldElement& x, int place)
{
    if (F.is_rational()) return sgn(x.a);
    auto [p, q] = sqrt_coords(F, x);
    if (place == 1) q = -q;
    int sp = sgn(p), sq = sgn(q);
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    Q d = p * p - q * q * F.D;
    return sp * sgn(d);
}

bool totally_positive(const NumberField& F, const FieldElement& x)
{
    if (F.is_rational()) return x.a > 0;
    return sign_at(F, x, 0) > 0 && sign_at(F, x, 1) > 0;
}

Z floor_at(const NumberField& F, const FieldElement& x, int place)
{
    long double approx = embed<long double>(F, x, place);
    Z k(static_cast<double>(std::floor(approx)));
    // exact correction
    while (sign_at(F, x - FieldElement(Q(k)), place) < 0) k -= 1;
    while (sign_at(F, x - FieldElement(Q(k + 1)), place) >= 0) k += 1;
    return k;
}

double embedding_error_bound(const NumberField& F, const FieldElement& x, int bits)
{
    auto [p, q] = sqrt_coords(F, x);
    double mag = std::fabs(p.get_d()) + std::fabs(q.get_d()) * std::sqrt(double(F.D));
    return 4.0 * mag * std::ldexp(1.0, -bits) + 1e-300;
}

// ---------------------------------------------------------------- ideals

bool FractionalIdeal::operator<(const FractionalIdeal& o) const
{
    if (den != o.den) return den < o.den;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

// HNF of the Z-span of integer vectors (x0, x1): rows (a,0), (b,c)
static void hnf2(std::vector<std::pair<Z, Z>> v, Z& a, Z& b, Z& c)
{
    // eliminate second coordinates
    while (true) {
        long piv = -1;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i].second != 0 && (piv < 0 || abs(v[i].second) < abs(v[piv].second))) piv = long(i);
        if (piv < 0) throw InvalidInput("degenerate lattice");
        bool done = true;
        for (size_t i = 0; i < v.size(); ++i) {
            if (long(i) == piv || v[i].second == 0) continue;
            Z qt;
            mpz_fdiv_q(qt.get_mpz_t(), v[i].second.get_mpz_t(), v[piv].second.get_mpz_t());
            v[i].first -= qt * v[piv].first;
            v[i].second -= qt * v[piv].second;
            if (v[i].second != 0) done = false;
        }
        if (done) {
            std::swap(v[0], v[piv]);
            break;
        }
    }
    if (v[0].second < 0) {
        v[0].first = -v[0].first;
        v[0].second = -v[0].second;
    }
    c = v[0].second;
    a = 0;
    for (size_t i = 1; i < v.size(); ++i) mpz_gcd(a.get_mpz_t(), a.get_mpz_t(), v[i].first.get_mpz_t());
    if (a == 0) throw InvalidInput("degenerate lattice");
    mpz_fdiv_r(b.get_mpz_t(), v[0].first.get_mpz_t(), a.get_mpz_t());
}

static Z lcm_den(const std::vector<FieldElement>& xs)
{
    Z L = 1;
    for (auto& x : xs) {
        Z d = denominator(x);
        mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), d.get_mpz_t());
    }
    return L;
}

static FractionalIdeal canonical(Z a, Z b, Z c, Z den)
{
    Z g = den;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    FractionalIdeal I;
    I.a = a / g;
    I.b = b / g;
    I.c = c / g;
    I.den = den / g;
    return I;
}

FractionalIdeal ideal_from_generators(const NumberField& F, const std::vector<FieldElement>& gens)
{
    std::vector<FieldElement> all;
    for (auto& g : gens)
        if (!g.is_zero()) all.push_back(g);
    if (all.empty()) throw InvalidInput("zero ideal");
    if (F.is_rational()) {
        Z L = lcm_den(all), a = 0;
        for (auto& g : all) {
            Z n = Z(g.a * L);
            mpz_gcd(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
        }
        FractionalIdeal I;
        Z g = a;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), L.get_mpz_t());
        I.a = a / g;
        I.den = L / g;
        I.b = 0;
        I.c = 1;
        return I;
    }
    const FieldElement w = omega(F);
    std::vector<FieldElement> span;
    for (auto& g : all) {
        span.push_back(g);
        span.push_back(mul(F, g, w));
    }
    Z L = lcm_den(span);
    std::vector<std::pair<Z, Z>> v;
    for (auto& g : span) v.emplace_back(Z(g.a * L), Z(g.b * L));
    Z a, b, c;
    hnf2(v, a, b, c);
    return canonical(a, b, c, L);
}

FractionalIdeal principal_ideal(const NumberField& F, const FieldElement& x) { return ideal_from_generators(F, {x}); }

FractionalIdeal unit_ideal() { return FractionalIdeal{}; }

std::array<FieldElement, 2> ideal_basis(const NumberField& F, const FractionalIdeal& I)
{
    Q d(I.den);
    if (F.is_rational()) return {FieldElement(Q(I.a) / d), FieldElement(Q(I.a) / d)};
    return {FieldElement(Q(I.a) / d, 0), FieldElement(Q(I.b) / d, Q(I.c) / d)};
}

FractionalIdeal ideal_mul(const NumberField& F, const FractionalIdeal& I, const FractionalIdeal& J)
{
    auto bi = ideal_basis(F, I), bj = ideal_basis(F, J);
    std::vector<FieldElement> g;
    for (auto& x : bi)
        for (auto& y : bj) g.push_back(mul(F, x, y));
    return ideal_from_generators(F, g);
}

FractionalIdeal ideal_conj(const NumberField& F, const FractionalIdeal& I)
{
    auto b = ideal_basis(F, I);
    return ideal_from_generators(F, {conj(F, b[0]), conj(F, b[1])});
}

Q ideal_norm(const NumberField& F, const FractionalIdeal& I)
{
    if (F.is_rational()) return Q(I.a) / Q(I.den);
    return Q(I.a * I.c) / Q(I.den * I.den);
}

FractionalIdeal ideal_inv(const NumberField& F, const FractionalIdeal& I)
{
    Q n = ideal_norm(F, I);
    auto b = ideal_basis(F, ideal_conj(F, I));
    Q s = 1 / n;
    return ideal_from_generators(F, {s * b[0], s * b[1]});
}

FractionalIdeal ideal_pow(const NumberField& F, const FractionalIdeal& I, long k)
{
    if (k < 0) return ideal_pow(F, ideal_inv(F, I), -k);
    FractionalIdeal r = unit_ideal(), b = I;
    while (k) {
        if (k & 1) r = ideal_mul(F, r, b);
        b = ideal_mul(F, b, b);
        k >>= 1;
    }
    return r;
}

bool contains(const NumberField& F, const FractionalIdeal& I, const FieldElement& x)
{
    FieldElement y = Q(I.den) * x;
    if (!is_integral(y)) return false;
    Z y0(y.a), y1(y.b);
    if (F.is_rational()) return y0 % I.a == 0;
    if (y1 % I.c != 0) return false;
    Z k = y1 / I.c;
    return (y0 - k * I.b) % I.a == 0;
}

bool is_integral(const FractionalIdeal& I) { return I.den == 1; }

bool coprime_to(const NumberField& F, const FractionalIdeal& I, long n)
{
    Z g;
    mpz_gcd_ui(g.get_mpz_t(), I.den.get_mpz_t(), n);
    if (g != 1) return false;
    Z nm = F.is_rational() ? I.a : I.a * I.c;
    mpz_gcd_ui(g.get_mpz_t(), nm.get_mpz_t(), n);
    return g == 1;
}

std::string to_string(const FractionalIdeal& I)
{
    return "[" + I.a.get_str() + "," + I.b.get_str() + "," + I.c.get_str() + "]/" + I.den.get_str();
}

// ---------------------------------------------------------------- units

std::pair<FieldElement, int> fundamental_unit(const NumberField& F)
{
    if (F.is_rational()) throw InvalidInput("degenerate field: unit group of the rationals is finite");
    const FieldElement w = omega(F);
    FieldElement x = w;
    Z p1 = 1, p2 = 0, q1 = 0, q2 = 1;
    for (int it = 0; it < 100000; ++it) {
        Z a = floor_at(F, x, 0);
        Z p = a * p1 + p2, q = a * q1 + q2;
        p2 = p1;
        p1 = p;
        q2 = q1;
        q1 = q;
        FieldElement cand = FieldElement(Q(p)) - Q(q) * w;
        Q n = norm(F, cand);
        if (q >= 1 && (n == 1 || n == -1)) {
            FieldElement u = conj(F, cand);
            if (sign_at(F, u, 0) < 0) u = -u;
            if (sign_at(F, u - FieldElement(1), 0) < 0) u = inv(F, u);
            return {u, n == 1 ? 1 : -1};
        }
        x = inv(F, x - FieldElement(Q(a)));
    }
    throw ResourceError("continued fraction did not produce a unit");
}

UnitGroupData unit_data(const NumberField& F)
{
    UnitGroupData U;
    if (F.is_rational()) {
        U.eps = FieldElement(1);
        U.norm_sign = 1;
        U.eps_plus = FieldElement(1);
        return U;
    }
    auto [e, s] = fundamental_unit(F);
    U.eps = e;
    U.norm_sign = s;
    U.eps_plus = s == 1 ? e : mul(F, e, e);
    return U;
}

LevelUnit unit_subgroup_generator(const NumberField& F, long N)
{
    if (N < 1) throw InvalidInput("level must be positive");
    LevelUnit L;
    if (F.is_rational()) {
        L.eps_N = FieldElement(1);
        L.k = 0;
        return L;
    }
    FieldElement ep = unit_data(F).eps_plus;
    FieldElement cur = ep;
    for (long k = 1; k < 1000000; ++k) {
        FieldElement d = cur - FieldElement(1);
        if (Z(d.a) % N == 0 && Z(d.b) % N == 0) {
            L.eps_N = cur;
            L.k = k;
            return L;
        }
        cur = mul(F, cur, ep);
    }
    throw ResourceError("unit order modulo N not found");
}

// ---------------------------------------------------------------- primes

static long pow_mod(long b, long e, long m)
{
    __int128 r = 1, x = mod_pos(b, m);
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return long(r);
}

int kronecker(long d, long p)
{
    if (d % p == 0) return 0;
    if (p == 2) {
        long r = mod_pos(d, 8);
        return (r == 1 || r == 7) ? 1 : -1;
    }
    return pow_mod(d, (p - 1) / 2, p) == 1 ? 1 : -1;
}

static long sqrt_mod(long n, long p)
{
    n = mod_pos(n, p);
    if (n == 0) return 0;
    if (p == 2) return n;
    if (p % 4 == 3) return pow_mod(n, (p + 1) / 4, p);
    long q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    long z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    long M = s, c = pow_mod(z, q, p), t = pow_mod(n, q, p), R = pow_mod(n, (q + 1) / 2, p);
    while (t != 1) {
        long i = 0, tt = t;
        while (tt != 1) {
            tt = long(__int128(tt) * tt % p);
            ++i;
        }
        long b = c;
        for (long j = 0; j < M - i - 1; ++j) b = long(__int128(b) * b % p);
        M = i;
        c = long(__int128(b) * b % p);
        t = long(__int128(t) * c % p);
        R = long(__int128(R) * b % p);
    }
    return R;
}

std::string to_string(SplitType t)
{
    switch (t) {
    case SplitType::split: return "split";
    case SplitType::inert: return "inert";
    case SplitType::ramified: return "ramified";
    case SplitType::rational: return "rational";
    }
    return "?";
}

SplitRecord split_prime(const NumberField& F, long p)
{
    if (!is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    SplitRecord R;
    if (F.is_rational()) {
        R.type = SplitType::rational;
        R.primes.push_back(principal_ideal(F, FieldElement(p)));
        R.norms.push_back(p);
        return R;
    }
    int k = kronecker(F.dF, p);
    auto roots = [&]() {
        std::vector<long> rs;
        if (p == 2) {
            for (long r = 0; r < 2; ++r)
                if (mod_pos(r * r - F.w_tr * r - F.w_c, 2) == 0) rs.push_back(r);
        } else {
            long s = sqrt_mod(F.dF, p), h = inv_mod(2, p);
            for (long sg : {1L, -1L}) {
                long r = long(__int128(mod_pos(F.w_tr + sg * s, p)) * h % p);
                if (std::find(rs.begin(), rs.end(), r) == rs.end()) rs.push_back(r);
            }
        }
        return rs;
    };
    if (k == -1) {
        R.type = SplitType::inert;
        R.primes.push_back(principal_ideal(F, FieldElement(p)));
        R.norms.push_back(p * p);
        return R;
    }
    R.type = k == 0 ? SplitType::ramified : SplitType::split;
    for (long r : roots()) {
        R.primes.push_back(ideal_from_generators(F, {FieldElement(p), FieldElement(-r, 1)}));
        R.norms.push_back(p);
    }
    return R;
}

// ---------------------------------------------------------------- O/N

ResidueRing::ResidueRing(const NumberField& F_, long N_) : F(F_), N(N_)
{
    if (N < 1) throw InvalidInput("modulus must be positive");
    size = F.xi == 2 ? N * N : N;
}

long ResidueRing::mul(long i, long j) const
{
    long a = coord_a(i), b = coord_b(i), c = coord_a(j), d = coord_b(j);
    if (F.xi == 1) return mod_pos(a * c, N);
    long bd = (b * d) % N;
    return index(a * c + bd * mod_pos(F.w_c, N), a * d + b * c + bd * F.w_tr);
}

long ResidueRing::norm_mod(long i) const
{
    long a = coord_a(i), b = coord_b(i);
    if (F.xi == 1) return a;
    return mod_pos(a * a + a * b % N * F.w_tr - b * b % N * mod_pos(F.w_c, N), N);
}

long ResidueRing::inverse(long i) const
{
    long n = norm_mod(i);
    long ni = inv_mod(n, N);
    if (F.xi == 1) return mod_pos(ni, N);
    long a = coord_a(i), b = coord_b(i);
    long ca = mod_pos(a + b * F.w_tr, N), cb = mod_pos(-b, N);
    return index(ca * ni % N, cb * ni % N);
}

long ResidueRing::reduce(const FieldElement& x) const
{
    auto red = [&](const Q& q) {
        Z num(q.get_num()), den(q.get_den());
        long n = mod_pos(to_long(num % N), N);
        long d = mod_pos(to_long(den % N), N);
        return long(__int128(n) * inv_mod(d, N) % N);
    };
    if (N == 1) return 0;
    return index(red(x.a), F.xi == 2 ? red(x.b) : 0);
}

std::vector<long> ResidueRing::units() const
{
    std::vector<long> u;
    for (long i = 0; i < size; ++i)
        if (is_unit(i)) u.push_back(i);
    return u;
}

}  // namespace polyeis
