#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyeis/classfield.hpp"

#include <cmath>
#include <random>
#include <set>
#include <tuple>

using namespace polyeis;

namespace {

// number of cycles of reduced indefinite forms of discriminant d
long form_cycles(long d)
{
    double r = std::sqrt(double(d));
    std::set<std::tuple<long, long, long>> reduced;
    for (long b = 1; b < r; ++b) {
        if ((d - b * b) % 4) continue;
        long ac = (b * b - d) / 4;
        for (long a = -long(r) - 1; a <= long(r) + 1; ++a) {
            if (a == 0 || ac % a) continue;
            long c = ac / a;
            if (r - b < 2 * std::labs(a) && 2 * std::labs(a) < r + b) reduced.insert({a, b, c});
        }
    }
    auto step = [&](std::tuple<long, long, long> f) {
        auto [a, b, c] = f;
        long two_c = 2 * std::labs(c);
        // b' = -b mod 2|c| with sqrt(d) - 2|c| < b' < sqrt(d)
        long bp = -b;
        while (bp <= r - two_c) bp += two_c;
        while (bp >= r) bp -= two_c;
        return std::tuple<long, long, long>{c, bp, (bp * bp - d) / (4 * c)};
    };
    std::set<std::tuple<long, long, long>> seen;
    long cycles = 0;
    for (auto f : reduced) {
        if (seen.count(f)) continue;
        ++cycles;
        auto g = f;
        do {
            seen.insert(g);
            g = step(g);
            REQUIRE(reduced.count(g));
        } while (g != f);
    }
    return cycles;
}

long euler_phi(long n)
{
    long r = n;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

// I ~ J in the narrow ray class group mod N, decided by direct search for a generator
bool ray_equivalent(const NumberField& F, long N, const FractionalIdeal& I, const FractionalIdeal& J)
{
    FractionalIdeal P = ideal_mul(F, I, ideal_conj(F, J));
    Q nJ = ideal_norm(F, J), nm = ideal_norm(F, P);
    auto U = unit_data(F);
    double e0 = embed<double>(F, U.eps, 0);
    double R = std::sqrt(nm.get_d() * e0) + 1e-9;
    double rq = R / std::sqrt(double(F.D));
    std::optional<FieldElement> beta;
    const long den = 2;
    for (long pp = -long(R * den) - 1; pp <= long(R * den) + 1 && !beta; ++pp)
        for (long qq = -long(rq * den) - 1; qq <= long(rq * den) + 1; ++qq) {
            FieldElement x = from_sqrt_coords(F, make_q(pp, den), make_q(qq, den));
            if (!is_integral(x) || x.is_zero()) continue;
            Q n = norm(F, x);
            if ((n == nm || n == -nm) && contains(F, P, x)) {
                beta = x;
                break;
            }
        }
    if (!beta) return false;
    FieldElement alpha = Q(1) / nJ * *beta;  // generator of I / J
    ResidueRing R_(F, N);
    FieldElement u = FieldElement(1);
    for (int k = 0; k < 4000; ++k) {
        for (int s : {1, -1}) {
            FieldElement a = Q(s) * mul(F, u, alpha);
            if (totally_positive(F, a) && R_.reduce(a) == R_.one()) return true;
        }
        u = mul(F, u, U.eps);
    }
    return false;
}

}  // namespace

TEST_CASE("smith normal form")
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int t = 0; t < 200; ++t) {
        int n = 1 + t % 4;
        IntMatrix R(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) R(i, j) = d(rng);
        long long det = llround(R.cast<double>().determinant());
        if (det == 0) continue;
        std::vector<std::vector<long>> rels(n, std::vector<long>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rels[i][j] = R(i, j);
        FiniteAbelianGroup G(n, rels);
        CHECK(G.order() == std::llabs(det));
        for (size_t i = 1; i < G.invariants().size(); ++i) CHECK(G.invariants()[i] % G.invariants()[i - 1] == 0);
        for (auto& r : rels) CHECK(G.reduce(r) == G.identity());
        // images of the raw generators generate everything
        std::set<std::vector<long>> img{G.identity()};
        std::vector<std::vector<long>> frontier{G.identity()};
        while (!frontier.empty()) {
            auto x = frontier.back();
            frontier.pop_back();
            for (int i = 0; i < n; ++i) {
                std::vector<long> e(n, 0);
                e[i] = 1;
                auto y = G.add(x, G.reduce(e));
                if (img.insert(y).second) frontier.push_back(y);
            }
        }
        CHECK(long(img.size()) == G.order());
    }
}

TEST_CASE("unit groups of Z/N")
{
    for (long N : {2L, 3L, 8L, 15L, 16L, 21L, 24L}) {
        std::vector<long> units;
        for (long a = 1; a < N; ++a)
            if (gcd_l(a, N) == 1) units.push_back(a);
        std::vector<long> pos(N, -1);
        for (size_t i = 0; i < units.size(); ++i) pos[units[i]] = long(i);
        auto E = enumerate_group(long(units.size()), pos[1 % N == 0 ? 0 : 1],
                                 [&](long i, long j) { return pos[units[i] * units[j] % N]; });
        CHECK(E.group.order() == euler_phi(N));
        for (size_t i = 0; i < units.size(); ++i)
            for (size_t j = 0; j < units.size(); ++j)
                CHECK(E.dlog[pos[units[i] * units[j] % N]] == E.group.add(E.dlog[i], E.dlog[j]));
    }
}

TEST_CASE("narrow class numbers against reduced form cycles")
{
    for (long D = 2; D <= 70; ++D) {
        if (!is_squarefree(D)) continue;
        auto F = construct_field(D);
        auto C = narrow_class_group(F);
        CHECK_MESSAGE(C.order() == form_cycles(F.dF), "D = ", D);
    }
    CHECK(narrow_class_group(construct_field(2)).order() == 1);
    CHECK(narrow_class_group(construct_field(5)).order() == 1);
    CHECK(narrow_class_group(construct_field(3)).order() == 2);
    for (long D = 2; D <= 70; ++D) {
        if (!is_squarefree(D)) continue;
        auto F = construct_field(D);
        long hp = form_cycles(F.dF);
        CHECK(class_group(F).order() == (unit_data(F).norm_sign == -1 ? hp : hp / 2));
    }
}

TEST_CASE("ray class group orders")
{
    auto Qf = rationals();
    for (long N = 1; N <= 30; ++N) {
        RayClassGroup G(Qf, N);
        CHECK(G.order() == (N <= 2 ? 1 : euler_phi(N)));
    }
    CHECK(RayClassGroup(construct_field(5), 3).order() == 2);
    CHECK(RayClassGroup(construct_field(5), 1).order() == 1);
    CHECK(RayClassGroup(construct_field(3), 1).order() == 2);
    // ideals coprime to N reach every class
    for (auto [D, N] : {std::pair{3L, 1L}, {3L, 2L}, {10L, 1L}, {10L, 3L}, {15L, 2L}, {5L, 4L}, {2L, 7L}}) {
        auto F = construct_field(D);
        RayClassGroup G(F, N);
        std::set<std::vector<long>> hit;
        for (auto& I : integral_ideals_up_to(F, 150))
            if (coprime_to(F, I, N)) hit.insert(G.ideal_coords(I));
        CHECK_MESSAGE(long(hit.size()) == G.order(), "D=", D, " N=", N);
    }
}

TEST_CASE("principal ideles are trivial and coords are a homomorphism")
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-30, 30);
    for (long D : {1L, 2L, 3L, 5L, 10L, 15L}) {
        auto F = construct_field(D);
        for (long N : {1L, 2L, 3L, 4L, 5L, 6L}) {
            RayClassGroup G(F, N);
            const auto& R = G.ring();
            int done = 0;
            std::vector<IdeleTriple> ts;
            while (done < 25) {
                FieldElement a(Q(d(rng)), F.is_rational() ? Q(0) : Q(d(rng)));
                if (a.is_zero() || gcd_l(to_long(Z(norm(F, a).get_num()) % N), N) != 1) continue;
                ++done;
                IdeleTriple t{principal_ideal(F, a), R.reduce(a), {}};
                for (int s = 0; s < F.xi; ++s) t.signs.push_back(sign_at(F, a, s));
                CHECK(G.coords(t) == G.group().identity());
                // finite part of a principal idele is the inverse of its infinite part
                CHECK(G.principal_idele_coords(a, R.reduce(a)) == G.sign_coords(t.signs));
                IdeleTriple u{principal_ideal(F, a), R.one(), std::vector<int>(F.xi, 1)};
                ts.push_back(u);
            }
            for (size_t i = 0; i + 1 < ts.size(); ++i) {
                auto p = idele_product(G, ts[i], ts[i + 1]);
                CHECK(G.coords(p) == G.group().add(G.coords(ts[i]), G.coords(ts[i + 1])));
            }
            auto reps = G.finite_representatives();
            CHECK(long(reps.size()) == G.order());
            for (long k = 0; k < G.order(); ++k) {
                CHECK(G.group().index_of(G.coords(reps[k])) == k);
                CHECK(is_integral(reps[k].ideal));
                CHECK(coprime_to(F, reps[k].ideal, N));
            }
            auto gens = G.generator_triples();
            for (int i = 0; i < G.group().rank(); ++i) {
                auto y = G.coords(gens[i]);
                for (int k = 0; k < G.group().rank(); ++k) CHECK(y[k] == (k == i ? 1 : 0));
            }
        }
    }
}

TEST_CASE("ray classes of ideals against brute-force equivalence")
{
    for (auto [D, N] : {std::pair{2L, 3L}, {3L, 2L}, {5L, 3L}, {5L, 4L}, {3L, 5L}, {10L, 3L}}) {
        auto F = construct_field(D);
        RayClassGroup G(F, N);
        std::vector<FractionalIdeal> ideals;
        for (auto& I : integral_ideals_up_to(F, 24))
            if (coprime_to(F, I, N)) ideals.push_back(I);
        for (size_t i = 0; i < ideals.size(); ++i)
            for (size_t j = i; j < ideals.size() && j < i + 6; ++j) {
                bool same = G.ideal_coords(ideals[i]) == G.ideal_coords(ideals[j]);
                CHECK_MESSAGE(same == ray_equivalent(F, N, ideals[i], ideals[j]), "D=", D, " N=", N, " ",
                              to_string(ideals[i]), " ", to_string(ideals[j]));
            }
    }
}

TEST_CASE("characters")
{
    auto F = construct_field(5);
    RayClassGroup G(F, 4);
    auto chars = all_characters(G.group());
    CHECK(long(chars.size()) == G.order());
    for (auto& c : chars) {
        std::complex<double> s = 0;
        for (auto& y : G.group().elements()) s += c.value(y);
        CHECK(std::abs(s - (c.trivial() ? double(G.order()) : 0.0)) < 1e-9);
        CHECK((c * c.conj()).trivial());
    }
    for (int m : {0, 1}) {
        auto cm = characters_with_sign(G, m);
        CHECK(!cm.empty());
        for (auto& c : cm) {
            CHECK(c.angle(G.sign_coords({-1, 1})) == (m ? Q(1, 2) : Q(0)));
            CHECK(c.angle(G.sign_coords({1, -1})) == (m ? Q(1, 2) : Q(0)));
        }
    }
    auto Gq = std::make_shared<RayClassGroup>(rationals(), 5);
    HeckeCharacterData h{Gq, trivial_character(Gq->group()), trivial_character(Gq->group()), 0, 0};
    IdeleTriple one{unit_ideal(), Gq->ring().one(), {1}};
    IdeleTriple half{FractionalIdeal{1, 0, 1, 2}, Gq->ring().one(), {1}};
    CHECK(std::abs(h.phi_tilde(one, half) - 4.0) < 1e-12);
}
