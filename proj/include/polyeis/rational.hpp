#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/float128.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyeis {

using Z = mpz_class;
using Q = mpq_class;
using Real = boost::multiprecision::float128;

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Q make_q(long num, long den = 1)
{
    Q q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Q& q);
Q parse_rational(const std::string& s);

// Fractional part in [0,1).
Q frac(const Q& q);
Z floor_q(const Q& q);
Z ceil_q(const Q& q);

long to_long(const Z& z);
long mod_pos(long a, long m);
long inv_mod(long a, long m);
long gcd_l(long a, long b);
long lcm_l(long a, long b);

bool is_prime(long n);
std::vector<long> primes_up_to(long n);
std::vector<std::pair<long, int>> factor(long n);

template <class T>
T to_scalar(const Z& z)
{
    if constexpr (std::is_same_v<T, double>) {
        return z.get_d();
    } else {
        // 32-bit limbs so every chunk is exact in T
        Z a = abs(z);
        T r = 0, base = 1;
        const T two32 = T(4294967296.0);
        while (a != 0) {
            Z lo = a % 4294967296UL;
            r += base * T(lo.get_ui());
            base *= two32;
            a /= 4294967296UL;
        }
        return z < 0 ? -r : r;
    }
}

template <class T>
T to_scalar(const Q& q)
{
    return to_scalar<T>(Z(q.get_num())) / to_scalar<T>(Z(q.get_den()));
}

// Decimal rendering with a fixed number of significant digits.
std::string decimal(const Real& x, int digits = 34);
std::string decimal(double x, int digits = 17);

}  // namespace polyeis
