#pragma once

#include "polyeis/classfield.hpp"
#include "polyeis/cyclotomic.hpp"
#include "polyeis/eisenstein.hpp"
#include "polyeis/schwartz.hpp"

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace polyeis {

// 2x2 matrix over O/N with ResidueRing entries [[a, b], [c, d]]
struct LevelMatrix {
    long a = 0, b = 0, c = 0, d = 0;
    bool operator==(const LevelMatrix& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

// M2(O/N) with its invertible and determinant-one elements enumerated.
class LevelGroup {
public:
    LevelGroup(const NumberField& F, long N);

    const NumberField& field() const { return R_.F; }
    const ResidueRing& ring() const { return R_; }
    long level() const { return R_.N; }
    long table_size() const { return S_ * S_ * S_ * S_; }

    long index(const LevelMatrix& x) const { return ((x.a * S_ + x.b) * S_ + x.c) * S_ + x.d; }
    LevelMatrix matrix(long idx) const;
    long det(const LevelMatrix& x) const;
    LevelMatrix mul(const LevelMatrix& x, const LevelMatrix& y) const;
    LevelMatrix inverse(const LevelMatrix& x) const;
    LevelMatrix scalar(long z) const { return {z, 0, 0, z}; }
    LevelMatrix torus(long t1, long t2) const { return {t1, 0, 0, t2}; }
    bool invertible(const LevelMatrix& x) const { return R_.is_unit(det(x)); }

    const std::vector<long>& gl() const { return gl_; }
    const std::vector<long>& sl() const { return sl_; }
    const std::vector<long>& units() const { return units_; }
    // primitive vectors (first columns of GL2), as index a + S*c
    const std::vector<long>& primitive() const { return prim_; }
    // one matrix per point of P^1(O/N)
    const std::vector<LevelMatrix>& line_reps() const { return lines_; }
    // x = line_reps()[p] * b with b upper triangular; returns p and b
    std::pair<long, LevelMatrix> iwasawa(const LevelMatrix& x) const;
    // an element of GL2(O/N) with first column the primitive vector `vec`
    LevelMatrix completion(long vec) const;

private:
    ResidueRing R_;
    long S_;
    std::vector<long> gl_, sl_, units_, prim_;
    std::vector<LevelMatrix> lines_;
    std::vector<long> line_of_vec_;  // primitive vector -> line index
    std::vector<long> unit_of_vec_;  // vec = unit * first column of its line rep
};

IdeleTriple unit_idele(const NumberField& F, long residue);

// Function on G(O/N) (left K_N-invariant) with the right law psi(x b) = psi(x) phi~(b).
struct IndFunction {
    HeckeCharacterData phi;
    std::shared_ptr<const LevelGroup> group;
    std::vector<std::complex<double>> values;  // by LevelGroup::index; non-invertible entries unused
    std::vector<CyclotomicValue> exact;        // same indexing; empty when only values are known

    long level() const { return group->level(); }
    std::complex<double> operator()(const LevelMatrix& x) const { return values[group->index(x)]; }
    // value at x * diag-part(t1, t2) of a Borel element
    std::complex<double> at(const LevelMatrix& x, const IdeleTriple& t1, const IdeleTriple& t2) const;
};

// phi~ on unit torus elements (t1, t2) in (O/N)^x, exactly
CyclotomicValue phi_tilde_unit(const HeckeCharacterData& phi, long t1, long t2);

// Extends values on line_reps() by the Borel law.
IndFunction induce_from_lines(const HeckeCharacterData& phi, std::shared_ptr<const LevelGroup> group,
                              const std::vector<CyclotomicValue>& line_values);
double b_law_defect(const IndFunction& psi);

struct SphericalData {
    HeckeCharacterData phi;
    bool unit_on_sl2 = true;
};

bool is_spherical(const HeckeCharacterData& phi);
// phi~_f(t1, t2); k must lie in SL2(O/N)
std::complex<double> spherical_S(const HeckeCharacterData& phi, const LevelGroup& L, const LevelMatrix& k,
                                 const IdeleTriple& t1, const IdeleTriple& t2);
IndFunction spherical_table(const HeckeCharacterData& phi, std::shared_ptr<const LevelGroup> group);
// eta (t1 t2) ||t2 / t1|| for every character eta of Cl^(N)
std::vector<HeckeCharacterData> spherical_families(std::shared_ptr<const RayClassGroup> G);

// Enumeration budget of SL2(O/N): N <= 12 over Q, N <= 4 otherwise.
void check_sl2_budget(const NumberField& F, long N);

struct PsiResult {
    std::complex<double> coefficient;       // Psi_phi coefficient, 0 unless phi is spherical
    std::complex<double> average;           // |SL2|^{-1} sum over SL2(O/N)
    std::optional<CyclotomicValue> exact;   // exact average when the table is exact
    long group_order = 0;
    bool spherical = false;
    SphericalData data;
};
PsiResult psi_project(const IndFunction& psi);
// psi - Psi(psi) S(phi) for an exact table; psi itself off the spherical components
IndFunction kernel_part(const IndFunction& psi);

// Truncated Euler product for the partial Hecke L-function.
struct TateFactorization {
    CyclotomicValue ramified = 1;  // integrand on the places above N is 1 on the units
    double inv_sqrt_dF = 1;
    double s = 0;
    long prime_bound = 0;
    std::vector<std::pair<long, std::complex<double>>> unramified;  // (N p, chi'(p)) for N p <= P
    std::complex<double> value() const;
};
struct HeckeLResult {
    std::complex<double> value;
    double tail_estimate = 0;
    TateFactorization factors;
};
HeckeLResult hecke_L_partial(const RayClassGroup& G, const GroupCharacter& chi, double s, long P);
// the same product as a Dirichlet series over principal ideals, through residue_class_sum (h = 1)
LatticeSumResult hecke_L_lattice(const RayClassGroup& G, const GroupCharacter& chi, int K, long B, int prec_bits);

enum class LambdaMethod { euler, lattice };
struct LambdaResult {
    std::complex<double> value;
    std::complex<double> prefactor;  // |Cl^(N)| Gamma(K)^xi / (-2 pi i)^{xi K}
    std::complex<double> L;          // hecke L value used
    double tail_estimate = 0;
    long group_order = 0;
};
LambdaResult lambda_N(const RayClassGroup& G, const GroupCharacter& chi, int m,
                      LambdaMethod method = LambdaMethod::lattice, long P = 10000, long B = 10000,
                      int prec_bits = 128);

// Components of rho_m(phi) on G(O/N), one per chi' in Cl^(N)(m).
struct HorosphericalImage {
    std::vector<IndFunction> components;
    std::complex<double> operator()(const LevelMatrix& x) const;
    std::complex<double> at(const LevelMatrix& x, const IdeleTriple& t1, const IdeleTriple& t2) const;
};
// rho_m on any Schwartz function of level dividing N (h = 1)
HorosphericalImage horospherical_map(const TwistedSchwartz& phi, int m, long N, long B = 10000,
                                     int prec_bits = 128);
// rho^0_{m,n}: the same on S^0
HorosphericalImage rho0(const TwistedSchwartz& phi, int m, long N, long B = 10000, int prec_bits = 128);

// phi with rho_m(phi) = psi; needs an exact table and every ray class represented by a unit residue
TwistedSchwartz preimage(const IndFunction& psi, long B = 10000, int prec_bits = 128);

}  // namespace polyeis
