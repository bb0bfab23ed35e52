#include "polyeis/rational.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace polyeis {

std::string to_string(const Q& q)
{
    Q c(q);
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Q parse_rational(const std::string& s)
{
    Q q;
    if (q.set_str(s, 10) != 0) throw InvalidInput("not a rational: " + s);
    if (q.get_den() == 0) throw InvalidInput("zero denominator: " + s);
    q.canonicalize();
    return q;
}

Z floor_q(const Q& q)
{
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Z ceil_q(const Q& q)
{
    Z r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Q frac(const Q& q) { return q - Q(floor_q(q)); }

long to_long(const Z& z)
{
    if (!z.fits_slong_p()) throw ResourceError("integer does not fit in 64 bits");
    return z.get_si();
}

long mod_pos(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

long gcd_l(long a, long b) { return std::gcd(a, b); }
long lcm_l(long a, long b) { return std::lcm(a, b); }

long inv_mod(long a, long m)
{
    if (m == 1) return 0;
    long old_r = mod_pos(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        long qt = old_r / r;
        long t = old_r - qt * r;
        old_r = r;
        r = t;
        t = old_s - qt * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw InvalidInput("not invertible modulo " + std::to_string(m));
    return mod_pos(old_s, m);
}

bool is_prime(long n)
{
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> primes_up_to(long n)
{
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<char> sieve(n + 1, 1);
    sieve[0] = sieve[1] = 0;
    for (long i = 2; i * i <= n; ++i)
        if (sieve[i])
            for (long j = i * i; j <= n; j += i) sieve[j] = 0;
    for (long i = 2; i <= n; ++i)
        if (sieve[i]) out.push_back(i);
    return out;
}

std::vector<std::pair<long, int>> factor(long n)
{
    std::vector<std::pair<long, int>> out;
    n = std::labs(n);
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::string decimal(const Real& x, int digits)
{
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << x;
    return os.str();
}

std::string decimal(double x, int digits)
{
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << x;
    return os.str();
}

}  // namespace polyeis
