#pragma once

#include "polyeis/rational.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace polyeis {

// Q(sqrt D) with integral basis {1, omega}; D == 1 encodes the rationals.
struct NumberField {
    long D = 1;
    int xi = 1;
    long dF = 1;
    bool one_mod_4 = false;
    // omega^2 = w_tr * omega + w_c
    long w_tr = 0;
    long w_c = 0;

    bool is_rational() const { return xi == 1; }
    bool operator==(const NumberField& o) const { return D == o.D; }
};

NumberField construct_field(long D);
inline NumberField rationals() { return construct_field(1); }
bool is_squarefree(long n);

// a + b*omega
struct FieldElement {
    Q a, b;

    FieldElement() = default;
    FieldElement(Q a_, Q b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}
    FieldElement(long a_) : a(a_), b(0) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const FieldElement& o) const { return a == o.a && b == o.b; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    bool operator<(const FieldElement& o) const { return a != o.a ? a < o.a : b < o.b; }
};

inline FieldElement operator+(const FieldElement& x, const FieldElement& y) { return {x.a + y.a, x.b + y.b}; }
inline FieldElement operator-(const FieldElement& x, const FieldElement& y) { return {x.a - y.a, x.b - y.b}; }
inline FieldElement operator-(const FieldElement& x) { return {-x.a, -x.b}; }
inline FieldElement operator*(const Q& q, const FieldElement& x) { return {q * x.a, q * x.b}; }

FieldElement omega(const NumberField& F);
FieldElement delta(const NumberField& F);
FieldElement mul(const NumberField& F, const FieldElement& x, const FieldElement& y);
FieldElement conj(const NumberField& F, const FieldElement& x);
FieldElement inv(const NumberField& F, const FieldElement& x);
FieldElement divide(const NumberField& F, const FieldElement& x, const FieldElement& y);
FieldElement power(const NumberField& F, const FieldElement& x, long k);
Q trace(const NumberField& F, const FieldElement& x);
Q norm(const NumberField& F, const FieldElement& x);
bool is_integral(const FieldElement& x);
// smallest positive integer d with d*x integral
Z denominator(const FieldElement& x);
std::string to_string(const FieldElement& x);

// x = p + q sqrt(D)
std::pair<Q, Q> sqrt_coords(const NumberField& F, const FieldElement& x);
FieldElement from_sqrt_coords(const NumberField& F, const Q& p, const Q& q);
// exact sign of the real embedding at place 0 or 1
int sign_at(const NumberField& F, const FieldElement& x, int place);
bool totally_positive(const NumberField& F, const FieldElement& x);
Z floor_at(const NumberField& F, const FieldElement& x, int place);

template <class T>
T embed(const NumberField& F, const FieldElement& x, int place)
{
    if (F.is_rational()) return to_scalar<T>(x.a);
    auto [p, q] = sqrt_coords(F, x);
    using std::sqrt;
    T r = sqrt(T(F.D));
    T qv = to_scalar<T>(q) * r;
    return place == 0 ? to_scalar<T>(p) + qv : to_scalar<T>(p) - qv;
}

// absolute error bound for embed<T> with a mantissa of `bits` bits
double embedding_error_bound(const NumberField& F, const FieldElement& x, int bits);

// (1/den) * (a Z + (b + c omega) Z), HNF with 0 <= b < a, a, c > 0.
// For the rationals only a and den are meaningful (b = 0, c = 1).
struct FractionalIdeal {
    Z a = 1, b = 0, c = 1, den = 1;
    bool operator==(const FractionalIdeal& o) const
    {
        return a == o.a && b == o.b && c == o.c && den == o.den;
    }
    bool operator<(const FractionalIdeal& o) const;
};

FractionalIdeal ideal_from_generators(const NumberField& F, const std::vector<FieldElement>& gens);
FractionalIdeal principal_ideal(const NumberField& F, const FieldElement& x);
FractionalIdeal unit_ideal();
FractionalIdeal ideal_mul(const NumberField& F, const FractionalIdeal& I, const FractionalIdeal& J);
FractionalIdeal ideal_conj(const NumberField& F, const FractionalIdeal& I);
FractionalIdeal ideal_inv(const NumberField& F, const FractionalIdeal& I);
FractionalIdeal ideal_pow(const NumberField& F, const FractionalIdeal& I, long k);
Q ideal_norm(const NumberField& F, const FractionalIdeal& I);
bool contains(const NumberField& F, const FractionalIdeal& I, const FieldElement& x);
bool is_integral(const FractionalIdeal& I);
// Z-basis as field elements
std::array<FieldElement, 2> ideal_basis(const NumberField& F, const FractionalIdeal& I);
// integral ideal coprime to n
bool coprime_to(const NumberField& F, const FractionalIdeal& I, long n);
std::string to_string(const FractionalIdeal& I);

struct UnitGroupData {
    FieldElement eps;
    int norm_sign = 1;
    FieldElement eps_plus;
};

std::pair<FieldElement, int> fundamental_unit(const NumberField& F);
UnitGroupData unit_data(const NumberField& F);

struct LevelUnit {
    FieldElement eps_N;  // 1 for the rationals
    long k = 0;          // eps_N = eps_plus^k; 0 marks the trivial group
    bool trivial() const { return k == 0; }
};
LevelUnit unit_subgroup_generator(const NumberField& F, long N);

enum class SplitType { split, inert, ramified, rational };
struct SplitRecord {
    SplitType type;
    std::vector<FractionalIdeal> primes;
    std::vector<long> norms;
};
SplitRecord split_prime(const NumberField& F, long p);
int kronecker(long d, long p);
std::string to_string(SplitType t);

// O / N O, elements indexed a + N*b (a alone for the rationals)
struct ResidueRing {
    NumberField F;
    long N = 1;
    long size = 1;  // N^xi

    ResidueRing() = default;
    ResidueRing(const NumberField& F_, long N_);

    long index(long a, long b) const { return mod_pos(a, N) + (F.xi == 2 ? N * mod_pos(b, N) : 0); }
    long coord_a(long i) const { return F.xi == 2 ? i % N : i; }
    long coord_b(long i) const { return F.xi == 2 ? i / N : 0; }
    long add(long i, long j) const { return index(coord_a(i) + coord_a(j), coord_b(i) + coord_b(j)); }
    long sub(long i, long j) const { return index(coord_a(i) - coord_a(j), coord_b(i) - coord_b(j)); }
    long neg(long i) const { return index(-coord_a(i), -coord_b(i)); }
    long mul(long i, long j) const;
    long one() const { return index(1, 0); }
    long norm_mod(long i) const;
    bool is_unit(long i) const { return N == 1 || gcd_l(norm_mod(i), N) == 1; }
    long inverse(long i) const;
    // reduction of an element whose denominators are coprime to N
    long reduce(const FieldElement& x) const;
    FieldElement lift(long i) const { return FieldElement(Q(coord_a(i)), Q(coord_b(i))); }
    std::vector<long> units() const;
};

}  // namespace polyeis
