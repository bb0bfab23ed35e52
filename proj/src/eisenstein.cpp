#include "polyeis/eisenstein.hpp"

#include "polyeis/cone_sum.hpp"
#include "polyeis/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polyeis {

// ---------------------------------------------------------------- orbit representatives

std::vector<FieldElement> enumerate_orbit_reps(const NumberField& F, const FractionalIdeal& L, long N, long B)
{
    if (B < 0 || N < 1) throw InvalidInput("enumerate_orbit_reps: B >= 0 and N >= 1 required");
    auto basis = ideal_basis(F, L);
    std::vector<FieldElement> out;
    if (F.is_rational()) {
        lattice_points_in_box(F, basis, (long double)B, (long double)B, [&](const FieldElement& x) {
            if (!x.is_zero() && abs(x.a) <= B) out.push_back(x);
        });
    } else {
        FieldElement eps = unit_subgroup_generator(F, N).eps_N;
        FieldElement eps_inv = conj(F, eps);
        long double e1 = embed<long double>(F, eps, 0);
        long double sb = std::sqrt((long double)B) * (1 + 1e-12L) + 1e-12L;
        lattice_points_in_box(F, basis, e1 * sb, sb, [&](const FieldElement& x) {
            if (x.is_zero()) return;
            if (abs(norm(F, x)) > B) return;
            auto [p, q] = sqrt_coords(F, x);
            if (sgn(p) * sgn(q) < 0) return;  // |x_1| < |x_2|
            auto [p2, q2] = sqrt_coords(F, mul(F, x, eps_inv));
            if (sgn(p2) * sgn(q2) >= 0) return;  // |x_1| >= eps^2 |x_2|
            out.push_back(x);
        });
    }
    std::sort(out.begin(), out.end(), [&](const FieldElement& x, const FieldElement& y) {
        Q nx = abs(norm(F, x)), ny = abs(norm(F, y));
        if (nx != ny) return nx < ny;
        return x < y;
    });
    return out;
}

// ---------------------------------------------------------------- shared pieces

namespace {

struct Prepared {
    FractionalSchwartz fh;
    long orbit_index = 1;  // [E_{C_phi}^+ : E_{C''}^+]
};

Prepared prepare(const TwistedSchwartz& phi, const Mat2* g)
{
    const NumberField& F = phi.base.F;
    Prepared p{fourier_transform(phi.base)};
    if (g) {
        FieldElement dg = det(F, *g);
        if (dg.is_zero()) throw InvalidInput("g must be invertible");
        p.fh = act_group(mat_scale(F, inv(F, dg), *g), p.fh);
    }
    if (F.xi == 2) {
        long C3 = lcm_l(p.fh.C, phi.base.C);
        if (C3 != p.fh.C) p.fh = refine(p.fh, p.fh.s, C3);
        p.orbit_index = unit_subgroup_generator(F, C3).k / unit_subgroup_generator(F, phi.base.C).k;
    }
    return p;
}

template <class T>
Cx<T> scalar_of(const TwistedSchwartz& phi)
{
    return Cx<T>(T(phi.scalar.real()), T(phi.scalar.imag()));
}

// (-1)^xi sqrt(dF) Gamma(K+s)^xi / (-2 pi i)^{xi K}
template <class T>
Cx<T> eis_prefactor(const NumberField& F, int K, double s)
{
    using std::sqrt;
    T gam = s == 0 ? to_scalar<T>(factorial(K - 1)) : T(std::tgamma(K + s));
    Cx<T> base(T(0), -2 * pi_v<T>());
    Cx<T> den = cx_pow(base, long(F.xi) * K);
    T num = (F.xi == 1 ? T(-1) : T(1)) * sqrt(T(F.dF)) * ipow(gam, F.xi);
    return Cx<T>(num) / den;
}

template <class T>
std::vector<Cx<T>> line_values(const FractionalSchwartz& fh, long i2)
{
    std::vector<Cx<T>> c(fh.side());
    for (long r = 0; r < fh.side(); ++r) c[r] = fh.table[fh.index(r, i2)].evaluate<T>();
    return c;
}

template <class T>
Cx<T> to_T(const Cx<Real>& z)
{
    return Cx<T>(T(z.re), T(z.im));
}

template <class T>
Cx<Real> to_real(const Cx<T>& z)
{
    return Cx<Real>(Real(z.re), Real(z.im));
}

// sum_{x >= 1, x = r mod C} x^{-K}: direct up to X, Hurwitz beyond; returns sums and tails
template <class T>
void rank1_class_sums(long C, int K, long X, std::vector<T>& sums, std::vector<T>& tails)
{
    std::vector<CompensatedSum<T>> acc(C);
    for (long x = 1; x <= X; ++x) acc[x % C].add(ipow(T(x), -K));
    sums.assign(C, T(0));
    tails.assign(C, T(0));
    for (long r = 0; r < C; ++r) {
        long first = X + 1 + mod_pos(r - (X + 1), C);
        tails[r] = ipow(T(C), -K) * hurwitz_zeta(T(K), T(first) / T(C));
        sums[r] = acc[r].value();
    }
}

template <class T>
LatticeSumResult constant_term_rank1(const TwistedSchwartz& phi, const Prepared& P, int K, const TorusData& torus,
                                     long B)
{
    using std::abs;
    const FractionalSchwartz& fh = P.fh;
    long C = fh.C;
    Q s2 = fh.s.a;
    long X = to_long(floor_q(Q(B) / abs(s2)));
    std::vector<T> sums, tails;
    rank1_class_sums<T>(C, K, X, sums, tails);
    auto c = line_values<T>(fh, 0);
    T sgnK = (K % 2) ? T(-1) : T(1);
    Cx<T> acc, tail_c;
    T tail_mag = 0;
    for (long r = 0; r < C; ++r) {
        Cx<T> w = c[r] + c[mod_pos(-r, C)] * sgnK;
        acc += w * (sums[r] + tails[r]);
        tail_mag += w.abs() * tails[r];
    }
    Cx<T> pref = eis_prefactor<T>(fh.F, K, 0) * scalar_of<T>(phi);
    T tor = ipow(to_scalar<T>(torus.t2_norm), -K) * ((torus.t2_sign < 0 && K % 2) ? T(-1) : T(1));
    T sc = ipow(to_scalar<T>(s2), -K) * tor;
    LatticeSumResult res;
    res.value = to_real(pref * acc * sc);
    res.tail_estimate = Real(pref.abs() * tail_mag * abs(sc));
    res.terms = 2 * X;
    res.B = B;
    return res;
}

LatticeSumResult constant_term_rank2(const TwistedSchwartz& phi, const Prepared& P, int K, const TorusData& torus,
                                     long B, int prec_bits)
{
    const FractionalSchwartz& fh = P.fh;
    const NumberField& F = fh.F;
    long Y0 = std::max(2L, long(std::ceil(std::sqrt(double(B)) / 8)));
    ConeClassSums cs = cone_class_sums(F, fh.C, K, Y0, prec_bits);
    auto c = line_values<Real>(fh, 0);
    CompensatedSum<Real> re, im;
    Real cmax = 0;
    for (size_t r = 0; r < c.size(); ++r) {
        re.add(c[r].re * cs.sums[r]);
        im.add(c[r].im * cs.sums[r]);
        cmax = std::max(cmax, c[r].abs());
    }
    Cx<Real> acc(re.value(), im.value());
    Cx<Real> pref = eis_prefactor<Real>(F, K, 0) * scalar_of<Real>(phi);
    Real tor = ipow(to_scalar<Real>(torus.t2_norm), -K) * ((torus.t2_sign < 0 && K % 2) ? Real(-1) : Real(1));
    Real sc = ipow(to_scalar<Real>(norm(F, fh.s)), -K) * tor / Real(P.orbit_index);
    LatticeSumResult res;
    res.value = pref * acc * sc;
    res.tail_estimate = pref.abs() * cmax * cs.error * abs(sc) * 10;
    res.terms = cs.terms;
    res.B = B;
    return res;
}

}  // namespace

namespace {

template <class T>
LatticeSumResult residue_class_sum_rank1(long C, const std::vector<Cx<Real>>& line, int K, long B)
{
    std::vector<T> sums, tails;
    rank1_class_sums<T>(C, K, B, sums, tails);
    T sgnK = (K % 2) ? T(-1) : T(1);
    Cx<T> acc;
    T tail_mag = 0;
    for (long r = 0; r < C; ++r) {
        Cx<T> w = to_T<T>(line[r]) + to_T<T>(line[mod_pos(-r, C)]) * sgnK;
        acc += w * (sums[r] + tails[r]);
        tail_mag += w.abs() * tails[r];
    }
    LatticeSumResult res;
    res.value = to_real(acc);
    res.tail_estimate = Real(tail_mag);
    res.terms = 2 * B;
    res.B = B;
    return res;
}

}  // namespace

LatticeSumResult residue_class_sum(const NumberField& F, long C, const std::vector<Cx<Real>>& line, int K, long B,
                                   int prec_bits)
{
    ResidueRing R(F, C);
    if ((long)line.size() != R.size) throw InvalidInput("residue_class_sum: line has the wrong size");
    if (K < 2) throw InvalidInput("residue_class_sum: K must be at least 2");
    int bits = effective_bits(prec_bits);
    LatticeSumResult res;
    if (F.xi == 1) {
        if (bits <= 53)
            res = residue_class_sum_rank1<double>(C, line, K, B);
        else if (bits <= 64)
            res = residue_class_sum_rank1<long double>(C, line, K, B);
        else
            res = residue_class_sum_rank1<Real>(C, line, K, B);
    } else {
        long Y0 = std::max(2L, long(std::ceil(std::sqrt(double(B)) / 8)));
        ConeClassSums cs = cone_class_sums(F, C, K, Y0, prec_bits);
        CompensatedSum<Real> re, im;
        Real cmax = 0;
        for (size_t r = 0; r < line.size(); ++r) {
            re.add(line[r].re * cs.sums[r]);
            im.add(line[r].im * cs.sums[r]);
            cmax = std::max(cmax, line[r].abs());
        }
        res.value = Cx<Real>(re.value(), im.value());
        res.tail_estimate = cmax * cs.error * 10;
        res.terms = cs.terms;
        res.B = B;
    }
    res.precision = bits;
    res.requested_precision = prec_bits;
    return res;
}

LatticeSumResult constant_term(const TwistedSchwartz& phi, int m, const TorusData& torus, long B, int prec_bits,
                               const Mat2* g)
{
    if (m < 0) throw InvalidInput("constant_term: m must be non-negative");
    if (B < 1) throw InvalidInput("constant_term: B must be positive");
    if (torus.t2_norm <= 0) throw InvalidInput("constant_term: ||t2|| must be positive");
    if (!is_S0(phi)) throw PreconditionError("constant_term: phi is not in S^0");
    int K = m + 2;
    Prepared P = prepare(phi, g);
    int bits = effective_bits(prec_bits);
    LatticeSumResult res;
    if (phi.base.F.xi == 1) {
        if (bits <= 53)
            res = constant_term_rank1<double>(phi, P, K, torus, B);
        else if (bits <= 64)
            res = constant_term_rank1<long double>(phi, P, K, torus, B);
        else
            res = constant_term_rank1<Real>(phi, P, K, torus, B);
    } else {
        res = constant_term_rank2(phi, P, K, torus, B, prec_bits);
    }
    res.precision = bits;
    res.requested_precision = prec_bits;
    return res;
}

// ---------------------------------------------------------------- certification

Q exact_rational(const Real& x)
{
    using boost::multiprecision::frexp;
    using boost::multiprecision::ldexp;
    using boost::multiprecision::fmod;
    if (x == 0) return Q(0);
    int e = 0;
    Real m = frexp(abs(x), &e);  // x = m 2^e, 1/2 <= m < 1
    const int D = std::numeric_limits<Real>::digits;
    Real mm = ldexp(m, D);  // integer
    Z num = 0, base = 1;
    const Real two32 = Real(4294967296.0);
    while (mm > 0) {
        Real lo = fmod(mm, two32);
        num += base * Z((unsigned long)(lo.convert_to<double>()));
        base <<= 32;
        mm = (mm - lo) / two32;
    }
    Q q(num);
    int sh = e - D;
    if (sh >= 0) {
        Z p = 1;
        p <<= sh;
        q *= p;
    } else {
        Z p = 1;
        p <<= -sh;
        q /= p;
    }
    q.canonicalize();
    return x < 0 ? Q(-q) : q;
}

Q simplest_rational(const Q& lo, const Q& hi)
{
    if (lo > hi) throw InvalidInput("simplest_rational: empty interval");
    if (lo <= 0 && hi >= 0) return Q(0);
    if (hi < 0) return -simplest_rational(-hi, -lo);
    Z fl = floor_q(lo);
    if (Q(fl) == lo) return lo;
    if (floor_q(hi) > fl) return Q(fl + 1);
    Q a = lo - Q(fl), b = hi - Q(fl);
    Q inner = simplest_rational(1 / b, 1 / a);
    Q r = Q(fl) + 1 / inner;
    r.canonicalize();
    return r;
}

RationalCertificate certify_value(const Cx<Real>& value, const Real& tolerance, const Z& denominator_bound)
{
    RationalCertificate cert;
    cert.tolerance = tolerance;
    cert.denominator_bound = denominator_bound;
    cert.runs = {value};
    if (abs(value.im) > tolerance) {
        std::ostringstream os;
        os << "imaginary part " << decimal(value.im, 6) << " exceeds tolerance";
        cert.diagnostics = os.str();
        return cert;
    }
    Q x = exact_rational(value.re), t = exact_rational(tolerance);
    Q p = simplest_rational(x - t, x + t);
    if (Z(p.get_den()) > denominator_bound) {
        cert.diagnostics = "no rational with denominator within the bound lies within tolerance";
        return cert;
    }
    cert.rational = p;
    Q res = abs(x - p);
    cert.residuals = {to_scalar<Real>(res)};
    cert.denominator_factorization = factor(to_long(Z(p.get_den())));
    cert.success = true;
    return cert;
}

RationalCertificate certify_rational(const LatticeSumResult& run1, const LatticeSumResult& run2,
                                     const std::vector<long>& primes, int max_exp)
{
    Z bound = 1;
    for (long p : primes) {
        Z pe;
        mpz_pow_ui(pe.get_mpz_t(), Z(p).get_mpz_t(), max_exp);
        bound *= pe;
    }
    auto tol_of = [](const LatticeSumResult& r) {
        using boost::multiprecision::pow;
        return pow(Real(10), -Real(r.requested_precision) / 8);
    };
    RationalCertificate c1 = certify_value(run1.value, tol_of(run1), bound);
    RationalCertificate c2 = certify_value(run2.value, tol_of(run2), bound);
    RationalCertificate cert = c1;
    cert.runs = {run1.value, run2.value};
    cert.tolerance = std::max(tol_of(run1), tol_of(run2));
    cert.residuals.clear();
    if (!c1.success || !c2.success) {
        cert.success = false;
        cert.diagnostics = "run 1: " + (c1.success ? std::string("ok") : c1.diagnostics) +
                           "; run 2: " + (c2.success ? std::string("ok") : c2.diagnostics);
        return cert;
    }
    if (c1.rational != c2.rational) {
        cert.success = false;
        cert.diagnostics = "runs disagree: " + to_string(c1.rational) + " vs " + to_string(c2.rational);
        return cert;
    }
    for (auto [p, e] : c1.denominator_factorization) {
        if (std::find(primes.begin(), primes.end(), p) == primes.end() || e > max_exp) {
            cert.success = false;
            cert.diagnostics = "denominator has a prime outside the allowed set";
            return cert;
        }
    }
    cert.residuals = {c1.residuals[0], c2.residuals[0]};
    cert.success = true;
    return cert;
}

// ---------------------------------------------------------------- Eisenstein values

namespace {

// sum_{j in Z} (j + z)^{-K}, Im z != 0
template <class T>
Cx<T> lipschitz(Cx<T> z, int K)
{
    using std::exp;
    Cx<T> sign(T(1));
    if (z.im < 0) {
        z = -z;
        if (K % 2) sign = Cx<T>(T(-1));
    }
    const T eps = std::numeric_limits<T>::epsilon();
    const T two_pi = 2 * pi_v<T>();
    // q = exp(2 pi i z)
    Cx<T> q = cis(two_pi * z.re) * exp(-two_pi * z.im);
    T qa = q.abs();
    Cx<T> sum, qd = q;
    for (long d = 1; d < 100000; ++d) {
        T dk = ipow(T(d), K - 1);
        sum += qd * dk;
        if (dk * ipow(qa, d) < eps * T(1e-3) * (sum.abs() + eps)) break;
        qd *= q;
    }
    Cx<T> c = cx_pow(Cx<T>(T(0), -two_pi), K) / to_scalar<T>(factorial(K - 1));
    return sign * c * sum;
}

// sum_{j in Z} (j + z)^{-K} |j + z|^{-2s}, s > 0
template <class T>
Cx<T> shifted_row(const Cx<T>& z, int K, T s)
{
    using std::ceil;
    using std::pow;
    const T eps = std::numeric_limits<T>::epsilon();
    long J = std::max(20L, long(ceil(double(4 * z.abs()))) + 1);
    CompensatedSum<T> re, im;
    auto term = [&](const Cx<T>& w) { return cx_pow(w, -K) * pow(w.norm(), -s); };
    for (long j = -J; j <= J; ++j) {
        Cx<T> t = term(z + Cx<T>(T(j)));
        re.add(t.re);
        im.add(t.im);
    }
    // tails via (j + w)^{-K-s} (j + conj w)^{-s} = sum_k a_k j^{-K-2s-k}
    auto tail = [&](const Cx<T>& w) {
        Cx<T> sum;
        std::vector<Cx<T>> A{Cx<T>(T(1))}, Bc{Cx<T>(T(1))};
        T alpha = -T(K) - s, beta = -s;
        Cx<T> wc = w.conj();
        for (int k = 0; k < 400; ++k) {
            if (k > 0) {
                A.push_back(A.back() * w * ((alpha - T(k - 1)) / T(k)));
                Bc.push_back(Bc.back() * wc * ((beta - T(k - 1)) / T(k)));
            }
            Cx<T> ak;
            for (int i = 0; i <= k; ++i) ak += A[i] * Bc[k - i];
            Cx<T> t = ak * hurwitz_zeta(T(K) + 2 * s + T(k), T(J + 1));
            sum += t;
            if (t.abs() < eps * (sum.abs() + eps) && k > 4) break;
        }
        return sum;
    };
    Cx<T> tp = tail(z), tn = tail(-z);
    if (K % 2) tn = -tn;
    return Cx<T>(re.value(), im.value()) + tp + tn;
}

template <class T>
LatticeSumResult eisenstein_rank1(const TwistedSchwartz& phi, const Prepared& P, int K, double s_d,
                                  const EisensteinPoint& pt, long B)
{
    using std::abs;
    using std::ceil;
    using std::log;
    using std::pow;
    const FractionalSchwartz& fh = P.fh;
    long C = fh.C;
    T s = T(s_d);
    T s2 = to_scalar<T>(fh.s.a), rr = to_scalar<T>(pt.r);
    Cx<T> tau(T(pt.tau[0].real()), T(pt.tau[0].imag()));
    T y = tau.im;
    const T eps = std::numeric_limits<T>::epsilon();
    // (z / r)^{-K} |z / r|^{-2s} with z = s2 (x + n tau)
    T scale = ipow(rr / s2, K) * pow(abs(rr / s2), 2 * s);
    LatticeSumResult res;
    res.B = B;
    CompensatedSum<T> re, im;
    auto add = [&](const Cx<T>& v) {
        re.add(v.re);
        im.add(v.im);
    };
    // row n = 0
    {
        auto c = line_values<T>(fh, 0);
        T sgnK = (K % 2) ? T(-1) : T(1);
        for (long r = 0; r < C; ++r) {
            Cx<T> w = c[r] + c[mod_pos(-r, C)] * sgnK;
            if (w.abs() == 0) continue;
            T h = hurwitz_zeta(T(K) + 2 * s, r == 0 ? T(1) : T(r) / T(C)) * pow(T(C), -T(K) - 2 * s);
            add(w * h);
        }
    }
    long nmax;
    if (s_d == 0)
        nmax = long(ceil(double(-log(eps * T(1e-3)) * T(C) / (2 * pi_v<T>() * y)))) + 1;
    else
        nmax = std::max(4L, long(std::ceil(std::sqrt(double(B)))));
    Cx<T> last;
    long terms = 0;
    for (long n = 1; n <= nmax; ++n) {
        for (long sg : {1L, -1L}) {
            long nn = sg * n;
            auto c = line_values<T>(fh, mod_pos(nn, C));
            Cx<T> row;
            for (long rho = 0; rho < C; ++rho) {
                if (c[rho].abs() == 0) continue;
                Cx<T> z = (Cx<T>(T(rho)) + tau * T(nn)) / T(C);
                Cx<T> v = s_d == 0 ? lipschitz(z, K) : shifted_row(z, K, s);
                row += c[rho] * v;
                ++terms;
            }
            row *= pow(T(C), -T(K) - 2 * s);
            add(row);
            if (n == nmax) last += row;
        }
    }
    Cx<T> pref = eis_prefactor<T>(fh.F, K, s_d) * scalar_of<T>(phi);
    Cx<T> total = Cx<T>(re.value(), im.value()) * pref * scale;
    res.value = to_real(total);
    T tail = s_d == 0 ? eps * total.abs() : last.abs() * T(nmax) / std::max(T(K) + 2 * s - 2, T(1e-3));
    res.tail_estimate = Real(tail * (s_d == 0 ? T(1) : pref.abs() * scale));
    res.terms = terms;
    return res;
}

// xi = 2 direct sums in double precision
LatticeSumResult eisenstein_rank2(const TwistedSchwartz& phi, const Prepared& P, int K, double s,
                                  const EisensteinPoint& pt, long B)
{
    using cd = std::complex<double>;
    const FractionalSchwartz& fh = P.fh;
    const NumberField& F = fh.F;
    long C = fh.C;
    ResidueRing R(F, C);
    double om[2] = {embed<double>(F, omega(F), 0), embed<double>(F, omega(F), 1)};
    double sv[2] = {embed<double>(F, fh.s, 0), embed<double>(F, fh.s, 1)};
    double rr = to_scalar<double>(pt.r);
    LatticeSumResult res;
    res.B = B;
    CompensatedSum<double> re, im;
    long terms = 0;
    auto kernel = [&](cd z0, cd z1) {
        cd w0 = z0 * sv[0] / rr, w1 = z1 * sv[1] / rr;
        cd v = std::pow(w0, -K) * std::pow(w1, -K);
        if (s != 0) v *= std::pow(std::norm(w0) * std::norm(w1), -s);
        return v;
    };
    // row l2 = 0
    {
        auto c = line_values<double>(fh, 0);
        if (s == 0) {
            long Y0 = std::max(2L, long(std::ceil(std::sqrt(double(B)) / 8)));
            ConeClassSums cs = cone_class_sums(F, C, K, Y0, 53);
            double nsk = std::pow(double(to_scalar<double>(norm(F, fh.s))) / (rr * rr), -K);
            for (long r = 0; r < R.size; ++r) {
                double v = double(cs.sums[r]) * nsk / P.orbit_index;
                re.add(c[r].re * v);
                im.add(c[r].im * v);
            }
            terms += cs.terms;
        } else {
            for (const FieldElement& x : enumerate_orbit_reps(F, unit_ideal(), C, B)) {
                long r = R.reduce(x);
                if (c[r].abs() == 0) continue;
                cd v = kernel(cd(embed<double>(F, x, 0)), cd(embed<double>(F, x, 1))) / double(P.orbit_index);
                re.add((cd(c[r].re, c[r].im) * v).real());
                im.add((cd(c[r].re, c[r].im) * v).imag());
                ++terms;
            }
        }
    }
    // rows l2 != 0: orbit representatives of l2, all l1 in a box around -Re(l2 tau)
    long Brow = std::max(4L, long(std::ceil(std::sqrt(double(B)))));
    double Rad = std::max(8.0, std::pow(double(B), 0.25) * 4);
    double wdiff = om[0] - om[1];
    for (const FieldElement& y2 : enumerate_orbit_reps(F, unit_ideal(), C, Brow)) {
        long i2 = R.reduce(y2);
        auto c = line_values<double>(fh, i2);
        cd w[2];
        for (int k = 0; k < 2; ++k) w[k] = embed<double>(F, y2, k) * pt.tau[k];
        double c0 = -w[0].real(), c1 = -w[1].real();
        long blo = long(std::floor((c0 - c1 - 2 * Rad) / wdiff)), bhi = long(std::ceil((c0 - c1 + 2 * Rad) / wdiff));
        if (blo > bhi) std::swap(blo, bhi);
        for (long b = blo; b <= bhi; ++b) {
            double lo = std::max(c0 - b * om[0], c1 - b * om[1]) - Rad;
            double hi = std::min(c0 - b * om[0], c1 - b * om[1]) + Rad;
            for (long a = long(std::floor(lo)); a <= long(std::ceil(hi)); ++a) {
                long r = R.index(a, b);
                if (c[r].abs() == 0) continue;
                cd v = kernel(double(a) + b * om[0] + w[0], double(a) + b * om[1] + w[1]) / double(P.orbit_index);
                cd t = cd(c[r].re, c[r].im) * v;
                re.add(t.real());
                im.add(t.imag());
                ++terms;
            }
        }
    }
    Cx<double> pref = eis_prefactor<double>(F, K, s) * scalar_of<double>(phi);
    Cx<double> total = Cx<double>(re.value(), im.value()) * pref;
    res.value = to_real(total);
    // crude: box tails decay like Rad^{-(K + 2s - 1)} relative to the sum
    res.tail_estimate = Real(total.abs() * std::pow(Rad, -(K + 2 * s - 1)) + 1e-12);
    res.terms = terms;
    return res;
}

}  // namespace

LatticeSumResult eisenstein_value(const TwistedSchwartz& phi, int m, double s, const EisensteinPoint& pt, long B,
                                  int prec_bits, const Mat2* g)
{
    const NumberField& F = phi.base.F;
    if (m < 0 || s < 0) throw InvalidInput("eisenstein_value: m and s must be non-negative");
    if (2.0 * (m + 2 + s) <= 2.0 * F.xi) throw PreconditionError("eisenstein_value: 2(m+2+s) > 2 xi required");
    if ((int)pt.tau.size() != F.xi) throw InvalidInput("eisenstein_value: one tau per real place required");
    for (auto& t : pt.tau)
        if (!(t.imag() > 0)) throw InvalidInput("eisenstein_value: tau must lie in the upper half-plane");
    if (pt.r <= 0) throw InvalidInput("eisenstein_value: r must be positive");
    int K = m + 2;
    Prepared P = prepare(phi, g);
    int bits = effective_bits(prec_bits);
    LatticeSumResult res;
    if (F.xi == 1) {
        if (bits <= 53)
            res = eisenstein_rank1<double>(phi, P, K, s, pt, B);
        else if (bits <= 64)
            res = eisenstein_rank1<long double>(phi, P, K, s, pt, B);
        else
            res = eisenstein_rank1<Real>(phi, P, K, s, pt, B);
        res.precision = bits;
    } else {
        res = eisenstein_rank2(phi, P, K, s, pt, B);
        res.precision = 53;
    }
    res.requested_precision = prec_bits;
    return res;
}

LatticeSumResult constant_term_quadrature(const TwistedSchwartz& phi, int m, const std::vector<double>& y,
                                          const Q& r, int Qpts, long B, int prec_bits)
{
    const NumberField& F = phi.base.F;
    if (Qpts < 1) throw InvalidInput("constant_term_quadrature: Q must be positive");
    if ((int)y.size() != F.xi) throw InvalidInput("constant_term_quadrature: one height per real place required");
    long period = prepare(phi, nullptr).fh.C;
    CompensatedSum<Real> re, im;
    Real tail = 0;
    long terms = 0;
    int bits = 0;
    double om[2] = {0, 0};
    if (F.xi == 2) {
        om[0] = embed<double>(F, omega(F), 0);
        om[1] = embed<double>(F, omega(F), 1);
    }
    long n2 = F.xi == 2 ? Qpts : 1;
    for (long i = 0; i < Qpts; ++i)
        for (long j = 0; j < n2; ++j) {
            EisensteinPoint pt;
            pt.r = r;
            double u = double(i) / Qpts, v = double(j) / Qpts;
            if (F.xi == 1) {
                pt.tau = {{period * u, y[0]}};
            } else {
                pt.tau = {{period * (u + v * om[0]), y[0]}, {period * (u + v * om[1]), y[1]}};
            }
            LatticeSumResult e = eisenstein_value(phi, m, 0.0, pt, B, prec_bits);
            re.add(e.value.re);
            im.add(e.value.im);
            tail = std::max(tail, e.tail_estimate);
            terms += e.terms;
            bits = e.precision;
        }
    Real n = Real(Qpts * n2);
    LatticeSumResult res;
    res.value = Cx<Real>(re.value() / n, im.value() / n);
    res.tail_estimate = tail;
    res.terms = terms;
    res.B = B;
    res.precision = bits;
    res.requested_precision = prec_bits;
    return res;
}

SExtrapolation eisenstein_s_extrapolation(const TwistedSchwartz& phi, const EisensteinPoint& pt, long B)
{
    SExtrapolation out;
    out.s = {0.1, 0.05, 0.025};
    for (double s : out.s) out.values.push_back(eisenstein_value(phi, 0, s, pt, B, 53).value);
    // values ~ E0 + a s + b s^2
    auto r1 = [&](int i) { return out.values[i + 1] * Real(2) - out.values[i]; };
    out.limit = (r1(1) * Real(4) - r1(0)) / Real(3);
    return out;
}

}  // namespace polyeis
