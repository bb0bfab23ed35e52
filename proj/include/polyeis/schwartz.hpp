#pragma once

#include "polyeis/classfield.hpp"
#include "polyeis/cyclotomic.hpp"
#include "polyeis/field.hpp"

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace polyeis {

using Vec2 = std::array<FieldElement, 2>;

// 2x2 matrix acting on column vectors
struct Mat2 {
    FieldElement a, b, c, d;
    Vec2 apply(const NumberField& F, const Vec2& v) const;
};
FieldElement det(const NumberField& F, const Mat2& g);
Mat2 mat_mul(const NumberField& F, const Mat2& x, const Mat2& y);
Mat2 mat_inverse(const NumberField& F, const Mat2& g);
Mat2 mat_scale(const NumberField& F, const FieldElement& s, const Mat2& g);
// det(g) g^{-1}
Mat2 mat_hat(const Mat2& g);
Mat2 mat_identity();

struct PairingValue {
    Q value;
    Q class_mod_1;
};
// Tr(x1 y2 - x2 y1)
PairingValue trace_pairing(const NumberField& F, const Vec2& x, const Vec2& y);

// f(v) = table(v / s mod C) for v in s V(O^), 0 otherwise. Table index i1 + S * i2 where
// S = C^xi and i1, i2 are ResidueRing indices of the two coordinates.
struct FractionalSchwartz {
    NumberField F;
    FieldElement s{1};
    long C = 1;
    std::vector<CyclotomicValue> table;

    long side() const { return F.xi == 2 ? C * C : C; }
    long size() const { return side() * side(); }
    long index(long i1, long i2) const { return i1 + side() * i2; }
    long coord_index(long a1, long b1, long a2, long b2) const;
    CyclotomicValue operator()(const Vec2& v) const;
    bool rational_valued() const;
};

FractionalSchwartz zero_schwartz(const NumberField& F, const FieldElement& s, long C);
// characteristic function of s V(O^)
FractionalSchwartz lattice_indicator(const NumberField& F, const FieldElement& s);
// characteristic function of u + s C V(O^), u in s V(O^)
FractionalSchwartz coset_indicator(const NumberField& F, const FieldElement& s, long C, long i1, long i2);

FractionalSchwartz fourier_transform(const FractionalSchwartz& f);
// (f.g)(v) = f(g v)
FractionalSchwartz act_group(const Mat2& g, const FractionalSchwartz& f);
// same function on the finer model (s0, C0); throws if (s0, C0) does not refine (s, C)
FractionalSchwartz refine(const FractionalSchwartz& f, const FieldElement& s0, long C0);
// a common model for both functions, bounded by max_size table entries
std::pair<FractionalSchwartz, FractionalSchwartz> common_refinement(const FractionalSchwartz& f,
                                                                    const FractionalSchwartz& g,
                                                                    long max_size = 1L << 22);
bool schwartz_equal(const FractionalSchwartz& f, const FractionalSchwartz& g);
FractionalSchwartz schwartz_add(const FractionalSchwartz& f, const FractionalSchwartz& g);
FractionalSchwartz schwartz_scale(const Q& q, FractionalSchwartz f);
// v -> f(v - u) for u in s V(O^), given by ring indices
FractionalSchwartz translate(const FractionalSchwartz& f, long u1, long u2);

// phi(v, g) = f(v) eta(det g) (||det g||_f sgn N(det g))^n, times a numeric scalar
struct TwistedSchwartz {
    FractionalSchwartz base;
    std::shared_ptr<const RayClassGroup> group;  // may be null when eta is trivial
    GroupCharacter eta;
    int n = 0;
    std::complex<double> scalar = 1.0;

    std::complex<double> value(const Vec2& v, const IdeleTriple& det_g) const;
};

TwistedSchwartz untwisted(const FractionalSchwartz& f);
bool is_S0(const TwistedSchwartz& phi);
bool is_S0(const FractionalSchwartz& f);

std::string serialize(const FractionalSchwartz& f);
FractionalSchwartz deserialize_schwartz(const std::string& text);

}  // namespace polyeis
