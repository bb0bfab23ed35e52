#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyeis/horospherical.hpp"
#include "polyeis/numerics.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace polyeis;
using cd = std::complex<double>;

namespace {

FractionalSchwartz random_S0(const NumberField& F, long N, std::mt19937& rng)
{
    FractionalSchwartz f = zero_schwartz(F, FieldElement(1), N);
    std::uniform_int_distribution<int> val(-3, 3);
    std::uniform_int_distribution<long> idx(1, f.size() - 1);
    long total = 0;
    for (int k = 0; k < 6; ++k) {
        long v = val(rng);
        f.table[idx(rng)] += CyclotomicValue(v);
        total += v;
    }
    f.table[idx(rng)] -= CyclotomicValue(total);
    return f;
}

long totient(long n)
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

// spherical psi with zero SL2 average
IndFunction spherical_kernel(const HeckeCharacterData& phi, std::shared_ptr<const LevelGroup> L, std::mt19937& rng)
{
    std::uniform_int_distribution<int> val(-4, 4);
    std::vector<CyclotomicValue> lines;
    for (size_t i = 0; i < L->line_reps().size(); ++i) lines.emplace_back(val(rng));
    return kernel_part(induce_from_lines(phi, L, lines));
}

std::vector<long> sample_points(const LevelGroup& L, int count, std::mt19937& rng)
{
    std::uniform_int_distribution<size_t> pick(0, L.gl().size() - 1);
    std::vector<long> out;
    for (int i = 0; i < count; ++i) out.push_back(L.gl()[pick(rng)]);
    return out;
}

}  // namespace

TEST_CASE("level group orders")
{
    LevelGroup q3(rationals(), 3);
    CHECK(q3.sl().size() == 24);
    CHECK(q3.gl().size() == 48);
    CHECK(q3.line_reps().size() == 4);
    LevelGroup q4(rationals(), 4);
    CHECK(q4.sl().size() == 48);
    CHECK(q4.line_reps().size() == 6);
    LevelGroup f5(construct_field(5), 3);
    CHECK(f5.sl().size() == 720);
    CHECK(f5.line_reps().size() == 10);
    for (long i : f5.gl()) {
        auto x = f5.matrix(i);
        auto [p, b] = f5.iwasawa(x);
        CHECK(b.c == 0);
        CHECK(f5.mul(f5.line_reps()[p], b) == x);
    }
}

TEST_CASE("sl2 budget")
{
    CHECK_NOTHROW(check_sl2_budget(rationals(), 12));
    CHECK_THROWS_AS(check_sl2_budget(rationals(), 13), ResourceError);
    CHECK_THROWS_AS(check_sl2_budget(construct_field(5), 5), ResourceError);
    try {
        check_sl2_budget(construct_field(5), 5);
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("15000") != std::string::npos);
    }
}

TEST_CASE("hecke L partial")
{
    auto G1 = RayClassGroup(rationals(), 1);
    auto one = trivial_character(G1.group());
    auto r = hecke_L_partial(G1, one, 2, 100000);
    CHECK(std::abs(r.value - M_PI * M_PI / 6) <= r.tail_estimate);
    CHECK(r.tail_estimate < 1e-4);
    CHECK_THROWS_AS(hecke_L_partial(G1, one, 1, 1000), PreconditionError);

    // mod 3, odd character: sum chi_3(n) n^-3 against the Euler product
    RayClassGroup G3(rationals(), 3);
    for (auto& chi : all_characters(G3.group())) {
        cd direct = 0;
        for (long n = 1; n < 200000; ++n) {
            if (n % 3 == 0) continue;
            direct += chi.value(G3.ideal_coords(principal_ideal(rationals(), FieldElement(Q(n))))) / std::pow(double(n), 3);
        }
        auto e = hecke_L_partial(G3, chi, 3, 20000);
        CHECK(std::abs(e.value - direct) <= e.tail_estimate + 1e-9);
    }

    // D = 5, level 1: ideal enumeration oracle for zeta_F(2)
    NumberField F = construct_field(5);
    RayClassGroup GF(F, 1);
    auto eF = hecke_L_partial(GF, trivial_character(GF.group()), 2, 20000);
    // zeta_F(2) = 2 pi^4 / (75 sqrt 5)
    double zf2 = 2 * std::pow(M_PI, 4) / (75 * std::sqrt(5.0));
    CHECK(std::abs(eF.value * std::sqrt(5.0) - zf2) <= eF.tail_estimate * std::sqrt(5.0));

    auto a = hecke_L_partial(GF, trivial_character(GF.group()), 3, 2000);
    auto b = hecke_L_partial(GF, trivial_character(GF.group()), 3, 4000);
    CHECK(std::abs(a.value - b.value) <= a.tail_estimate);
}

TEST_CASE("lattice L against the Euler product")
{
    for (long D : {1L, 5L}) {
        NumberField F = construct_field(D);
        for (long N : {1L, 3L, 4L}) {
            RayClassGroup G(F, N);
            for (int m : {0, 1}) {
                for (auto& chi : characters_with_sign(G, m)) {
                    auto e = hecke_L_partial(G, chi, m + 2, 20000);
                    auto l = hecke_L_lattice(G, chi, m + 2, 10000, 128);
                    CHECK(std::abs(l.value.to_std() - e.value) <= e.tail_estimate + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("lambda")
{
    RayClassGroup G1(rationals(), 1);
    auto lam = lambda_N(G1, trivial_character(G1.group()), 0);
    CHECK(std::abs(lam.value - cd(-1.0 / 24)) < 1e-12);
    auto eul = lambda_N(G1, trivial_character(G1.group()), 0, LambdaMethod::euler, 100000);
    CHECK(std::abs(eul.value - cd(-1.0 / 24)) <= eul.tail_estimate);
    CHECK(std::abs(lam.value - lam.prefactor * lam.L) < 1e-15);

    RayClassGroup G(construct_field(5), 3);
    for (int m : {0, 1, 2})
        for (auto& chi : characters_with_sign(G, m)) CHECK(std::abs(lambda_N(G, chi, m).value) > 1e-6);
    // odd chi' has the wrong type for m = 0
    RayClassGroup Gq(rationals(), 3);
    for (auto& chi : all_characters(Gq.group()))
        if (!chi.trivial()) CHECK_THROWS_AS(lambda_N(Gq, chi, 0), InvalidInput);
}

TEST_CASE("spherical S")
{
    NumberField Q0 = rationals();
    auto G = std::make_shared<const RayClassGroup>(Q0, 5);
    LevelGroup L(Q0, 5);
    auto fam = spherical_families(G);
    HeckeCharacterData phi = fam[0];
    REQUIRE(phi.eta.trivial());
    IdeleTriple one = unit_idele(Q0, 1);
    CHECK(std::abs(spherical_S(phi, L, L.scalar(1), one, one) - 1.0) < 1e-15);
    IdeleTriple two{principal_ideal(Q0, FieldElement(Q(2))), 1, {1}};
    // ||t2||^2 with ||2|| = 1/2 on the finite ideles, i.e. the factor 4 of t2 = 1/2
    IdeleTriple half{principal_ideal(Q0, FieldElement(Q(1, 2))), 1, {1}};
    CHECK(std::abs(spherical_S(phi, L, L.scalar(1), one, half) - 4.0) < 1e-12);
    CHECK_THROWS_AS(spherical_S(phi, L, L.scalar(2), one, one), InvalidInput);
    for (auto& p : fam) {
        cd a = spherical_S(p, L, L.scalar(1), one, two);
        cd b = spherical_S(p, L, {1, 1, 0, 1}, one, two);
        CHECK(std::abs(a - b) < 1e-15);
        cd c = spherical_S(p, L, L.scalar(1), two, two);
        CHECK(std::abs(c - spherical_S(p, L, L.scalar(1), two, one) * spherical_S(p, L, L.scalar(1), one, two)) <
              1e-12);
    }
}

TEST_CASE("spherical families")
{
    for (long N = 3; N <= 12; ++N) {
        auto G = std::make_shared<const RayClassGroup>(rationals(), N);
        auto fam = spherical_families(G);
        CHECK(long(fam.size()) == G->order());
        // Cl^(N) of Q is (Z/N)^x / {+-1} times the sign, of order phi(N)
        CHECK(long(fam.size()) == totient(N));
        for (auto& p : fam) CHECK(is_spherical(p));
    }
}

TEST_CASE("psi projection")
{
    std::mt19937 rng(11);
    for (long N : {3L, 4L, 5L}) {
        auto G = std::make_shared<const RayClassGroup>(rationals(), N);
        auto L = std::make_shared<const LevelGroup>(rationals(), N);
        for (auto& phi : spherical_families(G)) {
            auto S = spherical_table(phi, L);
            auto r = psi_project(S);
            CHECK(std::abs(r.coefficient - 1.0) < 1e-12);
            REQUIRE(r.exact);
            CHECK(r.exact->is_rational());
            CHECK(r.exact->rational_value() == 1);
            CHECK(b_law_defect(S) < 1e-12);
            auto k = spherical_kernel(phi, L, rng);
            CHECK(std::abs(psi_project(k).coefficient) < 1e-12);
            CHECK(b_law_defect(k) < 1e-12);
        }
    }
    // Psi is zero on a non-spherical component
    auto G = std::make_shared<const RayClassGroup>(rationals(), 4);
    auto L = std::make_shared<const LevelGroup>(rationals(), 4);
    for (auto& chi : characters_with_sign(*G, 1)) {
        HeckeCharacterData phi{G, trivial_character(G->group()), chi, 1, 0};
        std::vector<CyclotomicValue> lines(L->line_reps().size(), CyclotomicValue(1));
        auto psi = induce_from_lines(phi, L, lines);
        CHECK(b_law_defect(psi) < 1e-12);
        CHECK(psi_project(psi).coefficient == cd(0));
    }
}

TEST_CASE("rho0 lands in the kernel of Psi")
{
    std::mt19937 rng(5);
    struct Case {
        long D, N;
    };
    for (auto c : {Case{1, 3}, Case{1, 4}, Case{1, 5}, Case{5, 3}}) {
        NumberField F = construct_field(c.D);
        int count = c.D == 1 ? 6 : 3;
        for (int t = 0; t < count; ++t) {
            auto phi = untwisted(random_S0(F, c.N, rng));
            REQUIRE(is_S0(phi));
            for (int m : {0, 1}) {
                auto img = rho0(phi, m, c.N, 2000, 113);
                for (auto& comp : img.components) {
                    CHECK(b_law_defect(comp) < 1e-10);
                    CHECK(std::abs(psi_project(comp).coefficient) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("horospherical map off S0")
{
    // the indicator of O^2 maps to the constant Lambda_1 = -1/24 at every level
    auto phi = untwisted(coset_indicator(rationals(), FieldElement(1), 1, 0, 0));
    CHECK_THROWS_AS(rho0(phi, 0, 3), PreconditionError);
    auto img = horospherical_map(phi, 0, 3);
    REQUIRE(img.components.size() == 1);
    CHECK(std::abs(psi_project(img.components[0]).coefficient + 1.0 / 24) < 1e-12);
}

TEST_CASE("horospherical map is linear and level independent")
{
    std::mt19937 rng(17);
    NumberField F = rationals();
    auto f = random_S0(F, 3, rng), g = random_S0(F, 3, rng);
    auto h = schwartz_add(f, schwartz_scale(2, g));
    auto rf = rho0(untwisted(f), 0, 3, 2000, 113), rg = rho0(untwisted(g), 0, 3, 2000, 113),
         rh = rho0(untwisted(h), 0, 3, 2000, 113);
    const LevelGroup& L = *rf.components[0].group;
    for (long i : L.gl()) {
        auto x = L.matrix(i);
        CHECK(std::abs(rh(x) - rf(x) - 2.0 * rg(x)) < 1e-10);
    }
    // the same phi seen at level 6
    auto r6 = rho0(untwisted(f), 0, 6, 2000, 113);
    const LevelGroup& L6 = *r6.components[0].group;
    ResidueRing R3(F, 3);
    for (long i : L6.gl()) {
        auto x = L6.matrix(i);
        LevelMatrix y{x.a % 3, x.b % 3, x.c % 3, x.d % 3};
        // components at level 6 split by characters of Cl^(6) = Cl^(3) here
        CHECK(std::abs(r6(x) - rf(y)) < 1e-8);
    }
}

TEST_CASE("preimage round trip")
{
    std::mt19937 rng(23);
    for (long N : {3L, 4L}) {
        auto G = std::make_shared<const RayClassGroup>(rationals(), N);
        auto L = std::make_shared<const LevelGroup>(rationals(), N);
        for (auto& phi : spherical_families(G)) {
            auto psi = spherical_kernel(phi, L, rng);
            auto pre = preimage(psi, 10000, 128);
            CHECK(is_S0(pre));
            auto img = rho0(pre, 0, N, 10000, 128);
            for (long i : sample_points(*L, 10, rng)) {
                auto x = L->matrix(i);
                CHECK(std::abs(img(x) - psi(x)) < 1e-6);
            }
        }
    }
    // a non-spherical component and the D = 5 field
    {
        auto G = std::make_shared<const RayClassGroup>(rationals(), 5);
        auto L = std::make_shared<const LevelGroup>(rationals(), 5);
        for (auto& chi : characters_with_sign(*G, 1)) {
            HeckeCharacterData phi{G, trivial_character(G->group()), chi, 1, 0};
            std::vector<CyclotomicValue> lines;
            for (size_t i = 0; i < L->line_reps().size(); ++i) lines.emplace_back(long(i % 3) - 1);
            auto psi = induce_from_lines(phi, L, lines);
            auto img = horospherical_map(preimage(psi), 1, 5);
            for (long i : sample_points(*L, 10, rng)) {
                auto x = L->matrix(i);
                CHECK(std::abs(img(x) - psi(x)) < 1e-6);
            }
        }
    }
    {
        NumberField F = construct_field(5);
        auto G = std::make_shared<const RayClassGroup>(F, 3);
        auto L = std::make_shared<const LevelGroup>(F, 3);
        auto phi = spherical_families(G)[0];
        auto psi = spherical_kernel(phi, L, rng);
        auto img = rho0(preimage(psi), 0, 3);
        for (long i : sample_points(*L, 10, rng)) {
            auto x = L->matrix(i);
            CHECK(std::abs(img(x) - psi(x)) < 1e-6);
        }
    }
    // narrow class number 2: not every ray class holds a unit residue
    {
        NumberField F = construct_field(3);
        auto G = std::make_shared<const RayClassGroup>(F, 1);
        auto L = std::make_shared<const LevelGroup>(F, 1);
        bool thrown = false;
        for (auto& phi : spherical_families(G)) {
            auto psi = spherical_table(phi, L);
            try {
                preimage(psi);
            } catch (const PreconditionError&) {
                thrown = true;
            }
        }
        CHECK(thrown);
    }
}

TEST_CASE("preimage inverts the Fourier step")
{
    auto G = std::make_shared<const RayClassGroup>(rationals(), 4);
    auto L = std::make_shared<const LevelGroup>(rationals(), 4);
    std::mt19937 rng(3);
    auto psi = spherical_kernel(spherical_families(G)[0], L, rng);
    auto pre = preimage(psi);
    auto fh = fourier_transform(pre.base);
    // f^ is supported on primitive vectors mod 4
    ResidueRing R(rationals(), 4);
    for (long i1 = 0; i1 < 4; ++i1)
        for (long i2 = 0; i2 < 4; ++i2)
            if (std::gcd(std::gcd(i1, i2), 4L) != 1) CHECK(fh.table[fh.index(i1, i2)].is_zero());
}
