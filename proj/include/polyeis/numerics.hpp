#pragma once

#include "polyeis/rational.hpp"
#include "polyeis/zeta.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

namespace polyeis {

// Mantissa bits actually used for a requested precision: double, long double or float128.
int effective_bits(int prec_bits);

template <class T>
T pi_v()
{
    using std::acos;
    return acos(T(-1));
}

// Neumaier compensated sum
template <class T>
struct CompensatedSum {
    T s{0}, c{0};
    void add(const T& x)
    {
        using std::abs;
        T t = s + x;
        if (abs(s) >= abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    T value() const { return s + c; }
};

template <class T>
T ipow(T x, long k)
{
    bool neg = k < 0;
    unsigned long e = neg ? -k : k;
    T r(1);
    while (e) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return neg ? T(1) / r : r;
}

// B_{2k} / (2k)! for k = 0..n-1
template <class T>
const std::vector<T>& bernoulli_over_factorial(int n)
{
    static std::mutex mu;
    static std::vector<T> tab;
    std::lock_guard<std::mutex> lock(mu);
    while ((int)tab.size() < n) {
        long k = tab.size();
        tab.push_back(to_scalar<T>(Q(bernoulli_number(2 * k) / factorial(2 * k))));
    }
    return tab;
}

// Hurwitz zeta sum_{n >= 0} (n + a)^{-s}, s > 1, a > 0.
template <class T>
T hurwitz_zeta(const T& s, const T& a)
{
    using std::abs;
    using std::ceil;
    using std::log;
    using std::pow;
    const T eps = std::numeric_limits<T>::epsilon();
    const int digits = std::numeric_limits<T>::digits;
    const T z0 = T(8 + digits / 4);
    CompensatedSum<T> acc;
    T x = a;
    while (x < z0) {
        acc.add(pow(x, -s));
        x += 1;
    }
    const auto& bf = bernoulli_over_factorial<T>(40);
    T head = pow(x, T(1) - s) / (s - T(1)) + pow(x, -s) / T(2);
    T tail = 0;
    // B_{2k}/(2k)! * s (s+1) ... (s+2k-2) x^{-s-2k+1}
    T rising = s, xp = pow(x, -s - T(1));
    for (int k = 1; k < 40; ++k) {
        T term = bf[k] * rising * xp;
        tail += term;
        if (abs(term) < eps * abs(head)) break;
        rising *= (s + T(2 * k - 1)) * (s + T(2 * k));
        xp /= x * x;
    }
    acc.add(head + tail);
    return acc.value();
}

// sum_{p >= 0} ((p + A)(p + B))^{-K} for A, B > 0, K >= 1.
template <class T>
T pair_hurwitz(const T& A, const T& B, int K);

// integral_0^inf ((x + A)(x + B))^{-K} dx
template <class T>
T pair_integral(const T& A, const T& B, int K);

// Richardson extrapolation of values v[j] ~ S + sum_i c_i (Y0 2^j)^{-(e0 + i)}.
// Returns the extrapolated value and the difference to the previous diagonal entry.
template <class T>
std::pair<T, T> richardson(const std::vector<T>& v, int e0);

}  // namespace polyeis
