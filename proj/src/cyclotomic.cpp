#include "polyeis/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace polyeis {

namespace {

std::mutex phi_mu;
std::map<long, std::vector<long>> phi_cache;

const std::vector<long>& phi_locked(long n)
{
    auto it = phi_cache.find(n);
    if (it != phi_cache.end()) return it->second;
    // x^n - 1 divided by Phi_d for the proper divisors d
    std::vector<long> p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d) continue;
        const std::vector<long> q = phi_locked(d);
        const long dq = long(q.size()) - 1;
        std::vector<long> r(p.size() - dq, 0);
        for (long k = long(p.size()) - 1; k >= dq; --k) {
            long c = p[k];
            r[k - dq] = c;
            for (long j = 0; j <= dq; ++j) p[k - dq + j] -= c * q[j];
        }
        p = r;
    }
    return phi_cache.emplace(n, p).first->second;
}

}  // namespace

const std::vector<long>& cyclotomic_polynomial(long n)
{
    if (n < 1) throw InvalidInput("cyclotomic index must be positive");
    std::lock_guard<std::mutex> lock(phi_mu);
    return phi_locked(n);
}

CyclotomicValue CyclotomicValue::root(const Q& exponent, const Q& coeff)
{
    Q e = frac(exponent);
    long M = to_long(Z(e.get_den()));
    CyclotomicValue v;
    v.M_ = M;
    v.c_.assign(M, Q(0));
    v.c_[to_long(Z(e.get_num()))] = coeff;
    return v;
}

CyclotomicValue CyclotomicValue::from_dense(long M, std::vector<Q> c)
{
    if (M < 1 || long(c.size()) != M) throw InvalidInput("bad dense cyclotomic data");
    CyclotomicValue v;
    v.M_ = M;
    v.c_ = std::move(c);
    return v;
}

CyclotomicValue CyclotomicValue::lifted(long M) const
{
    if (M % M_) throw InvalidInput("cyclotomic lift to a non-multiple order");
    if (M == M_) return *this;
    CyclotomicValue v;
    v.M_ = M;
    v.c_.assign(M, Q(0));
    long r = M / M_;
    for (long k = 0; k < M_; ++k) v.c_[k * r] = c_[k];
    return v;
}

CyclotomicValue& CyclotomicValue::operator+=(const CyclotomicValue& o)
{
    long M = std::lcm(M_, o.M_);
    if (M != M_) *this = lifted(M);
    long r = M / o.M_;
    for (long k = 0; k < o.M_; ++k)
        if (o.c_[k] != 0) c_[k * r] += o.c_[k];
    return *this;
}

CyclotomicValue& CyclotomicValue::operator-=(const CyclotomicValue& o) { return *this += -o; }

CyclotomicValue& CyclotomicValue::operator*=(const Q& q)
{
    for (auto& x : c_) x *= q;
    return *this;
}

CyclotomicValue operator*(const CyclotomicValue& a, const CyclotomicValue& b)
{
    long M = std::lcm(a.M_, b.M_);
    long ra = M / a.M_, rb = M / b.M_;
    CyclotomicValue v;
    v.M_ = M;
    v.c_.assign(M, Q(0));
    for (long i = 0; i < a.M_; ++i) {
        if (a.c_[i] == 0) continue;
        for (long j = 0; j < b.M_; ++j) {
            if (b.c_[j] == 0) continue;
            v.c_[(i * ra + j * rb) % M] += a.c_[i] * b.c_[j];
        }
    }
    return v;
}

CyclotomicValue CyclotomicValue::operator-() const
{
    CyclotomicValue v = *this;
    for (auto& x : v.c_) x = -x;
    return v;
}

CyclotomicValue CyclotomicValue::conj() const
{
    CyclotomicValue v = *this;
    for (long k = 1; k < M_; ++k) v.c_[k] = c_[M_ - k];
    return v;
}

CyclotomicValue CyclotomicValue::rotated(const Q& exponent) const
{
    return *this * root(exponent);
}

CyclotomicValue CyclotomicValue::canonical() const
{
    const auto& phi = cyclotomic_polynomial(M_);
    const long deg = long(phi.size()) - 1;
    std::vector<Q> r = c_;
    for (long k = M_ - 1; k >= deg; --k) {
        if (r[k] == 0) continue;
        Q c = r[k];
        for (long j = 0; j <= deg; ++j) r[k - deg + j] -= c * phi[j];
    }
    long g = M_;
    for (long k = 1; k < M_; ++k)
        if (r[k] != 0) g = std::gcd(g, k);
    CyclotomicValue v;
    v.M_ = M_ / g;
    v.c_.assign(v.M_, Q(0));
    for (long k = 0; k < M_; k += g) v.c_[k / g] = r[k];
    if (g == 1 || v.M_ == M_) return v;
    return v.canonical();
}

bool CyclotomicValue::is_zero() const
{
    auto v = canonical();
    for (auto& x : v.c_)
        if (x != 0) return false;
    return true;
}

bool CyclotomicValue::is_rational() const { return canonical().M_ == 1; }

Q CyclotomicValue::rational_value() const
{
    auto v = canonical();
    if (v.M_ != 1) throw PreconditionError("cyclotomic value is not rational");
    return v.c_[0];
}

std::vector<std::pair<Q, Q>> CyclotomicValue::terms() const
{
    auto v = canonical();
    std::vector<std::pair<Q, Q>> out;
    for (long k = 0; k < v.M_; ++k)
        if (v.c_[k] != 0) out.emplace_back(make_q(k, v.M_), v.c_[k]);
    return out;
}

Q CyclotomicValue::abs_sum() const
{
    Q s = 0;
    for (auto& x : c_) s += abs(x);
    return s;
}

std::string to_string(const CyclotomicValue& v)
{
    auto t = v.terms();
    if (t.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : t) {
        if (!first) os << " + ";
        first = false;
        if (e == 0)
            os << to_string(c);
        else
            os << to_string(c) << "*e(" << to_string(e) << ")";
    }
    return os.str();
}

}  // namespace polyeis
