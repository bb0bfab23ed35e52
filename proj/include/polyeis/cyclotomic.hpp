#pragma once

#include "polyeis/complex.hpp"
#include "polyeis/rational.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace polyeis {

// Sum of c_k * zeta_M^k with rational c_k, stored densely modulo x^M - 1.
class CyclotomicValue {
public:
    CyclotomicValue() : M_(1), c_(1) {}
    CyclotomicValue(const Q& q) : M_(1), c_{q} {}
    CyclotomicValue(long q) : M_(1), c_{Q(q)} {}
    // coeff * exp(2 pi i * exponent)
    static CyclotomicValue root(const Q& exponent, const Q& coeff = 1);
    static CyclotomicValue from_dense(long M, std::vector<Q> c);

    long order() const { return M_; }
    const std::vector<Q>& dense() const { return c_; }
    CyclotomicValue lifted(long M) const;

    CyclotomicValue& operator+=(const CyclotomicValue& o);
    CyclotomicValue& operator-=(const CyclotomicValue& o);
    CyclotomicValue& operator*=(const Q& q);
    friend CyclotomicValue operator+(CyclotomicValue a, const CyclotomicValue& b) { return a += b; }
    friend CyclotomicValue operator-(CyclotomicValue a, const CyclotomicValue& b) { return a -= b; }
    friend CyclotomicValue operator*(const CyclotomicValue& a, const CyclotomicValue& b);
    friend CyclotomicValue operator*(const Q& q, CyclotomicValue a) { return a *= q; }
    CyclotomicValue operator-() const;
    CyclotomicValue conj() const;
    // multiply by exp(2 pi i * exponent)
    CyclotomicValue rotated(const Q& exponent) const;

    // canonical form: reduced modulo the M-th cyclotomic polynomial, then at the
    // smallest order where the value lives
    CyclotomicValue canonical() const;
    bool is_zero() const;
    bool is_rational() const;
    Q rational_value() const;  // throws if not rational
    bool operator==(const CyclotomicValue& o) const { return (*this - o).is_zero(); }
    bool operator!=(const CyclotomicValue& o) const { return !(*this == o); }

    // (exponent in [0,1), coefficient) pairs of the canonical form
    std::vector<std::pair<Q, Q>> terms() const;
    Q abs_sum() const;

    template <class T>
    Cx<T> evaluate() const;
    std::complex<double> to_complex() const { return evaluate<double>().to_std(); }

private:
    long M_;
    std::vector<Q> c_;
};

// integer coefficients of the n-th cyclotomic polynomial, constant term first
const std::vector<long>& cyclotomic_polynomial(long n);

std::string to_string(const CyclotomicValue& v);

template <class T>
Cx<T> CyclotomicValue::evaluate() const
{
    using std::acos;
    Cx<T> s;
    const T two_pi = T(2) * acos(T(-1));
    for (long k = 0; k < M_; ++k) {
        if (c_[k] == 0) continue;
        s += to_scalar<T>(c_[k]) * cis(two_pi * T(k) / T(M_));
    }
    return s;
}

}  // namespace polyeis
