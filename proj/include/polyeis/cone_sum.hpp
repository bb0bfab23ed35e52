#pragma once

#include "polyeis/field.hpp"

#include <array>
#include <vector>

namespace polyeis {

using IVec2 = std::array<long, 2>;

// Primitive vectors v0, ..., vk = w inside the cone spanned by v0 and w with
// |det(v_i, v_{i+1})| = 1, all determinants carrying the sign of det(v0, w).
std::vector<IVec2> unimodular_chain(IVec2 v0, IVec2 w);

// Sums over x in O \ {0} with x = r mod C O, taken modulo the totally positive units
// congruent to 1 mod C, of N(x)^{-K}; indexed by ResidueRing(F, C) index. Each orbit sum
// is split over unimodular cones in all four sign quadrants; inner sums are
// Euler-Maclaurin, outer sums are truncated at Y0 2^j, j <= levels, and Richardson
// extrapolated.
struct ConeClassSums {
    long C = 1;
    int K = 2;
    long Y0 = 0;
    int levels = 0;
    int bits = 0;
    std::vector<Real> sums;
    Real error = 0;  // sum of the last Richardson corrections
    long terms = 0;
};

ConeClassSums cone_class_sums(const NumberField& F, long C, int K, long Y0, int prec_bits, int levels = -1);

}  // namespace polyeis
