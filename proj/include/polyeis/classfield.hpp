#pragma once

#include "polyeis/abelian_group.hpp"
#include "polyeis/field.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>

namespace polyeis {

// Calls f(x) for every lattice point x = i*b0 + j*b1 with |sigma_0(x)| <= R0 and
// |sigma_1(x)| <= R1 (only R0 is used over the rationals). Candidates are generated
// with a small slack; callers filter exactly.
void lattice_points_in_box(const NumberField& F, const std::array<FieldElement, 2>& basis, long double R0,
                           long double R1, const std::function<void(const FieldElement&)>& f);

// integral ideals of norm <= bound
std::vector<FractionalIdeal> integral_ideals_up_to(const NumberField& F, long bound);

// some generator of I if I is principal
std::optional<FieldElement> principal_generator(const NumberField& F, const UnitGroupData& U,
                                                const FractionalIdeal& I);
// totally positive generator of I if I is principal in the narrow sense
std::optional<FieldElement> narrow_generator(const NumberField& F, const UnitGroupData& U,
                                             const FractionalIdeal& I);

struct ClassGroup {
    NumberField F;
    UnitGroupData U;
    bool narrow = true;
    std::vector<FractionalIdeal> reps;  // integral, reps[0] = O
    EnumeratedGroup E;                  // element ids are indices into reps

    long order() const { return long(reps.size()); }
    // class index k and a generator gamma (totally positive when narrow) with I = reps[k] * gamma
    long classify(const FractionalIdeal& I, FieldElement* gamma = nullptr) const;
};

ClassGroup narrow_class_group(const NumberField& F);
ClassGroup class_group(const NumberField& F);

// A class of the idele group: ideal (finite part away from N), residue mod N, signs.
struct IdeleTriple {
    FractionalIdeal ideal;
    long residue = 0;                // ResidueRing index, must be a unit
    std::vector<int> signs;          // one +-1 per real place
};

// Ray class group mod N times the infinite places.
class RayClassGroup {
public:
    RayClassGroup(const NumberField& F, long N);

    const NumberField& field() const { return F_; }
    long level() const { return N_; }
    const ResidueRing& ring() const { return R_; }
    const FiniteAbelianGroup& group() const { return G_; }
    const ClassGroup& class_group() const { return cl_; }
    long order() const { return G_.order(); }

    std::vector<long> residue_coords(long ring_idx) const;
    std::vector<long> sign_coords(const std::vector<int>& signs) const;
    // ideal coprime to N, viewed as a finite idele with residue 1
    std::vector<long> ideal_coords(const FractionalIdeal& I) const;
    // finite idele with ideal (c) away from N and residue rho: class of (rho / c, sgn c)
    std::vector<long> principal_idele_coords(const FieldElement& c, long rho) const;
    std::vector<long> coords(const IdeleTriple& t) const;

    // one triple per generator of the invariant-factor decomposition
    std::vector<IdeleTriple> generator_triples() const;
    // for every group element (by index), a finite idele (integral ideal coprime to N, residue)
    // with trivial signs lying in that class
    const std::vector<IdeleTriple>& finite_representatives() const;

private:
    std::vector<long> raw_residue(long ring_idx) const;
    std::vector<long> raw_signs(const std::vector<int>& signs) const;
    std::vector<long> raw_ideal(const FractionalIdeal& I) const;

    NumberField F_;
    long N_;
    ResidueRing R_;
    UnitGroupData U_;
    ClassGroup cl_;
    EnumeratedGroup residues_;
    std::vector<long> unit_pos_;  // ring index -> position in residues_, or -1
    std::vector<long> ring_of_pos_;
    std::vector<FractionalIdeal> cl_gen_ideals_;
    int n_res_ = 0, n_sign_ = 0, n_cl_ = 0;
    FiniteAbelianGroup G_;
    mutable std::vector<IdeleTriple> finite_reps_;
};

// chi(y) = sum a_i y_i / d_i mod 1
struct GroupCharacter {
    std::vector<long> invariants;
    std::vector<long> exps;

    Q angle(const std::vector<long>& y) const;
    std::complex<double> value(const std::vector<long>& y) const;
    bool trivial() const;
    GroupCharacter operator*(const GroupCharacter& o) const;
    GroupCharacter conj() const;
    bool operator==(const GroupCharacter& o) const { return exps == o.exps; }
};

GroupCharacter trivial_character(const FiniteAbelianGroup& G);
std::vector<GroupCharacter> all_characters(const FiniteAbelianGroup& G);
// characters with chi(sign at each real place) = m/2 mod 1
std::vector<GroupCharacter> characters_with_sign(const RayClassGroup& G, int m);

// The character data (eta, chi', m, n) of a principal-series type.
struct HeckeCharacterData {
    std::shared_ptr<const RayClassGroup> G;
    GroupCharacter eta, chi;
    int m = 0, n = 0;

    // phi~(t1, t2) on finite-level idele classes
    std::complex<double> phi_tilde(const IdeleTriple& t1, const IdeleTriple& t2) const;
};

IdeleTriple idele_product(const RayClassGroup& G, const IdeleTriple& x, const IdeleTriple& y);
Q idele_abs(const RayClassGroup& G, const IdeleTriple& t);  // ||t||_f = N(ideal)^{-1}

}  // namespace polyeis
