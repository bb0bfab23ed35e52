#include "polyeis/numerics.hpp"

#include <algorithm>

namespace polyeis {

int effective_bits(int prec_bits)
{
    if (prec_bits <= std::numeric_limits<double>::digits) return std::numeric_limits<double>::digits;
    if (prec_bits <= std::numeric_limits<long double>::digits) return std::numeric_limits<long double>::digits;
    return std::numeric_limits<Real>::digits;
}

namespace {

// log of the relative Euler-Maclaurin remainder after P correction terms at distance m
double em_log_error(int P, int K, double m)
{
    return std::log(2.0) - 2 * P * std::log(2 * M_PI) + std::lgamma(2.0 * P + 2 * K) - std::lgamma(2.0 * K) -
           2 * P * std::log(m);
}

template <class T>
const std::vector<T>& bernoulli_over_index(int n)
{
    // B_{2k} / (2k)
    static std::mutex mu;
    static std::vector<T> tab;
    std::lock_guard<std::mutex> lock(mu);
    while ((int)tab.size() < n) {
        long k = tab.size();
        tab.push_back(k == 0 ? T(0) : to_scalar<T>(Q(bernoulli_number(2 * k) / (2 * k))));
    }
    return tab;
}

}  // namespace

template <class T>
T pair_integral(const T& A, const T& B, int K)
{
    using std::abs;
    using std::log;
    const T eps = std::numeric_limits<T>::epsilon();
    T c = (A + B) / 2, d = (B - A) / 2;
    if (abs(d) * 2 <= c) {
        // (y^2 - d^2)^{-K} expanded in d^2 / y^2, integrated from c
        T r = d * d / (c * c);
        T coef = 1, cp = ipow(c, 1 - 2 * K), sum = 0, rp = 1;
        for (int j = 0; j < 400; ++j) {
            T term = coef * rp * cp / T(2 * K + 2 * j - 1);
            sum += term;
            if (term <= eps * sum) break;
            coef *= T(K + j) / T(j + 1);
            rp *= r;
        }
        return sum;
    }
    // partial fractions
    T sum = 0;
    T dba = B - A;
    for (int j = 1; j <= K; ++j) {
        T bin = to_scalar<T>(Q(binomial(2 * K - j - 1, K - 1)));
        T sgn = ((K - j) % 2) ? T(-1) : T(1);
        T alpha = sgn * bin / ipow(dba, 2 * K - j);
        T beta = sgn * bin / ipow(-dba, 2 * K - j);
        if (j == 1)
            sum += alpha * log(B / A);
        else
            sum += (alpha * ipow(A, 1 - j) + beta * ipow(B, 1 - j)) / T(j - 1);
    }
    return sum;
}

template <class T>
T pair_hurwitz(const T& A0, const T& B0, int K)
{
    const int Pmax = 24;
    const double leps = std::log(double(std::numeric_limits<T>::epsilon()) / 4);
    // smallest distance at which Pmax terms suffice
    double z0 = std::exp((em_log_error(Pmax, K, 1.0) - leps) / (2 * Pmax));
    T A = A0, B = B0;
    CompensatedSum<T> acc;
    double m = double(std::min(A, B));
    if (m < z0) {
        long shift = long(std::ceil(z0 - m));
        for (long p = 0; p < shift; ++p) acc.add(ipow((A + T(p)) * (B + T(p)), -K));
        A += T(shift);
        B += T(shift);
        m += shift;
    }
    int P = 1;
    while (P < Pmax && em_log_error(P, K, m) > leps) ++P;

    // Taylor coefficients of (x + A)^{-K} (x + B)^{-K} at 0
    int n = 2 * P;
    std::vector<T> a(n), b(n);
    a[0] = ipow(A, -K);
    b[0] = ipow(B, -K);
    for (int i = 1; i < n; ++i) {
        T f = -T(K + i - 1) / T(i);
        a[i] = a[i - 1] * f / A;
        b[i] = b[i - 1] * f / B;
    }
    const auto& bk = bernoulli_over_index<T>(Pmax + 1);
    T corr = 0;
    for (int k = P; k >= 1; --k) {
        int j = 2 * k - 1;
        T h = 0;
        for (int i = 0; i <= j; ++i) h += a[i] * b[j - i];
        corr += bk[k] * h;
    }
    acc.add(pair_integral(A, B, K));
    acc.add(a[0] * b[0] / 2);
    acc.add(-corr);
    return acc.value();
}

template <class T>
std::pair<T, T> richardson(const std::vector<T>& v, int e0)
{
    using std::abs;
    size_t L = v.size();
    std::vector<std::vector<T>> R(L);
    for (size_t j = 0; j < L; ++j) {
        R[j].resize(j + 1);
        R[j][0] = v[j];
        for (size_t i = 1; i <= j; ++i) {
            T f = ipow(T(2), e0 + long(i) - 1) - T(1);
            R[j][i] = R[j][i - 1] + (R[j][i - 1] - R[j - 1][i - 1]) / f;
        }
    }
    T best = R[L - 1][L - 1];
    T err = L >= 2 ? abs(best - R[L - 2][L - 2]) : abs(best);
    return {best, err};
}

#define POLYEIS_INSTANTIATE(T)                                        \
    template T pair_integral<T>(const T&, const T&, int);             \
    template T pair_hurwitz<T>(const T&, const T&, int);              \
    template std::pair<T, T> richardson<T>(const std::vector<T>&, int);

POLYEIS_INSTANTIATE(double)
POLYEIS_INSTANTIATE(long double)
POLYEIS_INSTANTIATE(Real)

}  // namespace polyeis
