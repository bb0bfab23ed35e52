#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyeis/schwartz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace polyeis;

namespace {

FractionalSchwartz random_table(const NumberField& F, const FieldElement& s, long C, std::mt19937& rng)
{
    std::uniform_int_distribution<int> d(-6, 6), dd(1, 4);
    auto f = zero_schwartz(F, s, C);
    for (auto& v : f.table) v = CyclotomicValue(make_q(d(rng), dd(rng)));
    return f;
}

FieldElement random_unit_scale(const NumberField& F, std::mt19937& rng)
{
    std::uniform_int_distribution<int> d(-3, 3), dd(1, 3);
    FieldElement s;
    do s = FieldElement(make_q(d(rng), dd(rng)), F.xi == 2 ? make_q(d(rng), dd(rng)) : Q(0));
    while (s.is_zero());
    return s;
}

double l2(const FractionalSchwartz& f)
{
    double t = 0;
    for (auto& v : f.table) t += std::norm(v.to_complex());
    return t;
}

// random element of GL2(O) as a product of elementary matrices and a unit diagonal
Mat2 random_gl2(const NumberField& F, std::mt19937& rng)
{
    std::uniform_int_distribution<int> d(-2, 2);
    Mat2 g = mat_identity();
    for (int k = 0; k < 3; ++k) {
        FieldElement x(Q(d(rng)), F.xi == 2 ? Q(d(rng)) : Q(0));
        Mat2 e = k % 2 ? Mat2{1, x, 0, 1} : Mat2{1, 0, x, 1};
        g = mat_mul(F, g, e);
    }
    FieldElement u = F.xi == 2 ? unit_data(F).eps : FieldElement(-1);
    if (d(rng) > 0) g = mat_mul(F, g, Mat2{u, 0, 0, 1});
    return g;
}

}  // namespace

TEST_CASE("cyclotomic arithmetic")
{
    for (long n = 1; n <= 40; ++n) {
        const auto& p = cyclotomic_polynomial(n);
        long phi = 0;
        for (long k = 1; k <= n; ++k) phi += gcd_l(k, n) == 1;
        CHECK(long(p.size()) - 1 == phi);
        std::complex<double> z = std::polar(1.0, 2 * M_PI / n), s = 0, zp = 1;
        for (long c : p) {
            s += double(c) * zp;
            zp *= z;
        }
        CHECK(std::abs(s) < 1e-8);
    }
    CyclotomicValue sum5;
    for (int k = 0; k < 5; ++k) sum5 += CyclotomicValue::root(make_q(k, 5));
    CHECK(sum5.is_zero());
    auto w = CyclotomicValue::root(make_q(1, 3)) + CyclotomicValue::root(make_q(2, 3));
    CHECK(w.is_rational());
    CHECK(w.rational_value() == -1);
    auto i4 = CyclotomicValue::root(make_q(1, 4));
    CHECK((i4 * i4).rational_value() == -1);
    CHECK(i4.conj() == CyclotomicValue::root(make_q(3, 4)));
    CHECK(!i4.is_rational());
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-5, 5), e(0, 11);
    for (int t = 0; t < 100; ++t) {
        CyclotomicValue a, b;
        for (int k = 0; k < 3; ++k) {
            a += CyclotomicValue::root(make_q(e(rng), 12), Q(d(rng)));
            b += CyclotomicValue::root(make_q(e(rng), 10), Q(d(rng)));
        }
        CHECK(std::abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-9);
        CHECK(std::abs((a + b).to_complex() - a.to_complex() - b.to_complex()) < 1e-9);
        CHECK(std::abs(a.conj().to_complex() - std::conj(a.to_complex())) < 1e-9);
        CHECK(std::abs(a.canonical().to_complex() - a.to_complex()) < 1e-9);
        auto ev = a.evaluate<Real>();
        CHECK(std::abs(double(ev.re) - a.to_complex().real()) < 1e-12);
    }
}

TEST_CASE("trace pairing")
{
    auto F = construct_field(5);
    Vec2 e1{FieldElement(1), FieldElement(0)}, e2{FieldElement(0), FieldElement(1)};
    CHECK(trace_pairing(F, e1, e2).value == 2);
    CHECK(trace_pairing(F, e1, e1).value == 0);
    CHECK(trace_pairing(F, {omega(F), FieldElement(0)}, e2).value == 1);
    Vec2 x{FieldElement(make_q(1, 3), 2), FieldElement(5, make_q(-1, 7))};
    Vec2 y{FieldElement(make_q(2, 5), 1), FieldElement(-1, 3)};
    CHECK(trace_pairing(F, x, y).value == -trace_pairing(F, y, x).value);
    CHECK(trace_pairing(F, x, y).class_mod_1 == frac(trace_pairing(F, x, y).value));
}

TEST_CASE("fourier inversion")
{
    std::mt19937 rng(17);
    for (long D : {1L, 5L, 2L}) {
        auto F = construct_field(D);
        for (long C = 2; C <= 5; ++C) {
            int reps = (D == 1 ? 10 : 4);
            for (int r = 0; r < reps; ++r) {
                auto f = random_table(F, random_unit_scale(F, rng), C, rng);
                auto g = fourier_transform(f);
                auto h = fourier_transform(g);
                CHECK(h.s == f.s);
                CHECK(h.C == f.C);
                bool same = true;
                for (long i = 0; i < f.size(); ++i) same = same && h.table[i] == f.table[i];
                CHECK(same);
                // measure normalization: the L2 norm is preserved
                double c = std::pow(Q(abs(norm(F, f.s))).get_d() * std::pow(C, F.xi), 2);
                double cg = std::pow(Q(abs(norm(F, g.s))).get_d() * std::pow(C, F.xi), 2);
                CHECK(std::fabs(l2(f) / c - l2(g) / cg) <= 1e-10 * (l2(f) / c));
            }
        }
    }
}

TEST_CASE("fourier transform of a lattice indicator")
{
    auto Qf = rationals();
    for (long N = 1; N <= 6; ++N) {
        auto f = lattice_indicator(Qf, FieldElement(N));
        auto g = fourier_transform(f);
        auto expect = schwartz_scale(make_q(1, N * N), lattice_indicator(Qf, FieldElement(make_q(1, N))));
        CHECK(schwartz_equal(g, expect));
    }
    auto F = construct_field(5);
    auto g = fourier_transform(lattice_indicator(F, FieldElement(1)));
    // dual lattice of V(O) is delta^{-1} V(O), volume factor 1/d_F
    CHECK(schwartz_equal(g, schwartz_scale(make_q(1, 5), lattice_indicator(F, inv(F, delta(F))))));
}

TEST_CASE("translation picks up a character")
{
    std::mt19937 rng(23);
    for (long D : {1L, 5L}) {
        auto F = construct_field(D);
        const long C = 3;
        auto f = random_table(F, FieldElement(1), C, rng);
        ResidueRing R(F, C);
        long u1 = R.index(1, 2), u2 = R.index(2, 0);
        auto lhs = fourier_transform(translate(f, u1, u2));
        auto fh = fourier_transform(f);
        Vec2 u{R.lift(u1), R.lift(u2)};
        const long S = fh.side();
        bool ok = true;
        for (long i1 = 0; i1 < S; ++i1)
            for (long i2 = 0; i2 < S; ++i2) {
                Vec2 x{mul(F, fh.s, R.lift(i1)), mul(F, fh.s, R.lift(i2))};
                Q p = trace_pairing(F, x, {mul(F, f.s, u[0]), mul(F, f.s, u[1])}).value;
                auto expect = fh.table[fh.index(i1, i2)] * CyclotomicValue::root(-p);
                ok = ok && lhs.table[lhs.index(i1, i2)] == expect;
            }
        CHECK(ok);
    }
}

TEST_CASE("group action and equivariance")
{
    std::mt19937 rng(29);
    auto Qf = rationals();
    // identity and SL2(Z) permutation
    auto f = random_table(Qf, FieldElement(1), 4, rng);
    CHECK(schwartz_equal(act_group(mat_identity(), f), f));
    auto g = act_group(Mat2{2, 1, 1, 1}, f);
    CHECK(g.C == f.C);
    auto key = [](const FractionalSchwartz& h) {
        std::vector<Q> v;
        for (auto& x : h.table) v.push_back(x.rational_value());
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(key(g) == key(f));
    CHECK(g.table[g.coord_index(1, 0, 0, 0)] == f.table[f.coord_index(2, 0, 1, 0)]);

    int cases = 0;
    for (long D : {1L, 5L, 2L}) {
        auto F = construct_field(D);
        std::uniform_int_distribution<int> d(-3, 3), dd(1, 2);
        int reps = D == 1 ? 30 : 10;
        for (int r = 0; r < reps; ++r) {
            long C = 2 + r % 2;
            auto h = random_table(F, FieldElement(1), C, rng);
            Mat2 m;
            if (D == 1) {
                do m = Mat2{make_q(d(rng), dd(rng)), Q(d(rng)), Q(d(rng)), make_q(d(rng), dd(rng))};
                while (det(F, m).is_zero() || abs(det(F, m).a) > 3 || abs(det(F, m).a) < make_q(1, 3));
            } else {
                m = random_gl2(F, rng);
            }
            auto lhs = fourier_transform(act_group(m, h));
            FieldElement dm = det(F, m);
            auto rhs = schwartz_scale(abs(norm(F, dm)), act_group(mat_scale(F, inv(F, dm), m), fourier_transform(h)));
            CHECK(schwartz_equal(lhs, rhs));
            ++cases;
        }
    }
    CHECK(cases == 50);
    // Weyl element at level 3 over Q(sqrt 5)
    auto F = construct_field(5);
    auto h = random_table(F, FieldElement(1), 3, rng);
    Mat2 w{0, -1, 1, 0};
    CHECK(schwartz_equal(fourier_transform(act_group(w, h)), act_group(w, fourier_transform(h))));
}

TEST_CASE("S0 membership")
{
    auto F = construct_field(5);
    auto a = coset_indicator(F, FieldElement(1), 3, 1, 0);
    auto b = coset_indicator(F, FieldElement(1), 3, 0, 4);
    auto phi = schwartz_add(a, schwartz_scale(-1, b));
    CHECK(is_S0(phi));
    CHECK(!is_S0(coset_indicator(F, FieldElement(1), 3, 0, 0)));
    CHECK(!is_S0(lattice_indicator(F, FieldElement(3))));
    std::mt19937 rng(31);
    for (int r = 0; r < 10; ++r) CHECK(is_S0(act_group(random_gl2(F, rng), phi)));
    CHECK(is_S0(act_group(Mat2{1, 0, 0, 2}, phi)));
}

TEST_CASE("refinement and serialization")
{
    std::mt19937 rng(37);
    auto F = construct_field(5);
    auto f = random_table(F, FieldElement(1), 2, rng);
    f.table[3] = CyclotomicValue::root(make_q(1, 3), make_q(2, 7));
    auto g = refine(f, FieldElement(make_q(1, 2)), 4);
    CHECK(schwartz_equal(f, g));
    CHECK_THROWS_AS(refine(f, FieldElement(2), 2), InvalidInput);
    auto h = deserialize_schwartz(serialize(f));
    CHECK(h.s == f.s);
    CHECK(h.C == f.C);
    for (long i = 0; i < f.size(); ++i) CHECK(h.table[i] == f.table[i]);
    CHECK_THROWS_AS(deserialize_schwartz("nonsense"), InvalidInput);
}
