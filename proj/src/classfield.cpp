#include "polyeis/classfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace polyeis {

void lattice_points_in_box(const NumberField& F, const std::array<FieldElement, 2>& basis, long double R0,
                           long double R1, const std::function<void(const FieldElement&)>& f)
{
    using LD = long double;
    if (F.is_rational()) {
        LD b = std::fabs(embed<LD>(F, basis[0], 0));
        long lim = long(std::floor(R0 / b)) + 1;
        for (long i = -lim; i <= lim; ++i) f(Q(i) * basis[0]);
        return;
    }
    LD m00 = embed<LD>(F, basis[0], 0), m01 = embed<LD>(F, basis[1], 0);
    LD m10 = embed<LD>(F, basis[0], 1), m11 = embed<LD>(F, basis[1], 1);
    LD det = m00 * m11 - m01 * m10;
    LD i_lim = (std::fabs(m11) * R0 + std::fabs(m01) * R1) / std::fabs(det);
    long ilim = long(std::floor(i_lim)) + 1;
    for (long i = -ilim; i <= ilim; ++i) {
        LD lo = -1e300L, hi = 1e300L;
        auto clamp = [&](LD c0, LD c1, LD R) {
            // |c0 * i + c1 * j| <= R
            LD u = (-R - c0 * i) / c1, v = (R - c0 * i) / c1;
            if (u > v) std::swap(u, v);
            lo = std::max(lo, u);
            hi = std::min(hi, v);
        };
        clamp(m00, m01, R0);
        clamp(m10, m11, R1);
        if (lo > hi + 1) continue;
        long jlo = long(std::floor(lo)) - 1, jhi = long(std::ceil(hi)) + 1;
        for (long j = jlo; j <= jhi; ++j) f(Q(i) * basis[0] + Q(j) * basis[1]);
    }
}

std::vector<FractionalIdeal> integral_ideals_up_to(const NumberField& F, long bound)
{
    std::vector<FractionalIdeal> out;
    if (F.is_rational()) {
        for (long a = 1; a <= bound; ++a) out.push_back(FractionalIdeal{a, 0, 1, 1});
        return out;
    }
    for (long c = 1; c <= bound; ++c)
        for (long a = c; a * c <= bound; a += c)
            for (long b = 0; b < a; b += c) {
                long k = (b + c * F.w_tr) / c;
                if (mod_pos(c * F.w_c - k * b, a) != 0) continue;
                out.push_back(ideal_from_generators(F, {FieldElement(Q(a)), FieldElement(Q(b), Q(c))}));
            }
    std::stable_sort(out.begin(), out.end(), [&](const FractionalIdeal& x, const FractionalIdeal& y) {
        return ideal_norm(F, x) < ideal_norm(F, y);
    });
    return out;
}

std::optional<FieldElement> principal_generator(const NumberField& F, const UnitGroupData& U,
                                                const FractionalIdeal& I)
{
    const Q nm = ideal_norm(F, I);
    if (F.is_rational()) return FieldElement(Q(I.a) / Q(I.den));
    long double e0 = std::fabs(embed<long double>(F, U.eps, 0));
    e0 = std::max(e0, 1.0L / e0);
    long double R = std::sqrt(to_scalar<long double>(nm) * e0) * (1 + 1e-12L);
    std::optional<FieldElement> found;
    lattice_points_in_box(F, ideal_basis(F, I), R, R, [&](const FieldElement& x) {
        if (found || x.is_zero()) return;
        Q n = norm(F, x);
        if (n == nm || n == -nm) found = x;
    });
    return found;
}

std::optional<FieldElement> narrow_generator(const NumberField& F, const UnitGroupData& U,
                                             const FractionalIdeal& I)
{
    auto found = principal_generator(F, U, I);
    if (!found) return std::nullopt;
    FieldElement g = *found;
    if (norm(F, g) < 0) {
        if (U.norm_sign != -1) return std::nullopt;
        g = mul(F, g, U.eps);
    }
    if (sign_at(F, g, 0) < 0) g = -g;
    return g;
}

long ClassGroup::classify(const FractionalIdeal& I, FieldElement* gamma) const
{
    for (size_t k = 0; k < reps.size(); ++k) {
        FractionalIdeal J = ideal_mul(F, I, ideal_inv(F, reps[k]));
        auto g = narrow ? narrow_generator(F, U, J) : principal_generator(F, U, J);
        if (g) {
            if (gamma) *gamma = *g;
            return long(k);
        }
    }
    throw PreconditionError("ideal not classified: " + to_string(I));
}

static ClassGroup build_class_group(const NumberField& F, bool narrow)
{
    ClassGroup C;
    C.F = F;
    C.U = unit_data(F);
    C.narrow = narrow;
    C.reps.push_back(unit_ideal());
    if (!F.is_rational()) {
        // every class has an integral ideal below the Minkowski bound; in the narrow case
        // possibly after multiplying by an element of negative norm
        long mink = long(std::floor(std::sqrt(double(F.dF)) / 2)) + 1;
        auto small = integral_ideals_up_to(F, mink);
        std::vector<FractionalIdeal> cand = small;
        if (narrow) {
            FieldElement sq = from_sqrt_coords(F, 0, 1);
            if (!is_integral(sq)) sq = Q(2) * sq;
            for (auto& I : small) cand.push_back(ideal_mul(F, I, principal_ideal(F, sq)));
        }
        for (auto& I : cand) {
            bool seen = false;
            for (auto& r : C.reps) {
                FractionalIdeal J = ideal_mul(F, I, ideal_inv(F, r));
                if (narrow ? narrow_generator(F, C.U, J).has_value() : principal_generator(F, C.U, J).has_value()) {
                    seen = true;
                    break;
                }
            }
            if (!seen) C.reps.push_back(I);
        }
    }
    const long h = long(C.reps.size());
    std::vector<long> table(h * h);
    for (long i = 0; i < h; ++i)
        for (long j = 0; j < h; ++j) table[i * h + j] = C.classify(ideal_mul(F, C.reps[i], C.reps[j]));
    C.E = enumerate_group(h, 0, [&](long i, long j) { return table[i * h + j]; });
    return C;
}

ClassGroup narrow_class_group(const NumberField& F) { return build_class_group(F, true); }
ClassGroup class_group(const NumberField& F) { return build_class_group(F, false); }

// ---------------------------------------------------------------- ray class group

RayClassGroup::RayClassGroup(const NumberField& F, long N) : F_(F), N_(N), R_(F, N), U_(unit_data(F))
{
    if (N < 1) throw InvalidInput("level must be positive");
    cl_ = polyeis::class_group(F);

    auto units = R_.units();
    unit_pos_.assign(R_.size, -1);
    for (size_t i = 0; i < units.size(); ++i) unit_pos_[units[i]] = long(i);
    ring_of_pos_ = units;
    residues_ = enumerate_group(long(units.size()), unit_pos_[R_.one()], [&](long i, long j) {
        return unit_pos_[R_.mul(units[i], units[j])];
    });

    const auto& cl = cl_.E;
    n_res_ = residues_.group.rank();
    n_sign_ = F.xi;
    n_cl_ = cl.group.rank();

    // ideals coprime to N representing the invariant-factor generators of Cl
    cl_gen_ideals_.assign(n_cl_, unit_ideal());
    std::vector<char> have(n_cl_, 0);
    int missing = n_cl_;
    for (long bound = 4; missing > 0; bound *= 2) {
        if (bound > 1000000) throw ResourceError("no ideal coprime to N found in some class");
        for (auto& I : integral_ideals_up_to(F, bound)) {
            if (missing == 0) break;
            if (!coprime_to(F, I, N)) continue;
            const auto& y = cl.dlog[cl_.classify(I)];
            for (int i = 0; i < n_cl_; ++i) {
                if (have[i]) continue;
                bool unit_vec = true;
                for (int k = 0; k < n_cl_; ++k)
                    if (y[k] != (k == i ? 1 : 0)) unit_vec = false;
                if (unit_vec) {
                    cl_gen_ideals_[i] = I;
                    have[i] = 1;
                    --missing;
                }
            }
        }
    }

    const int n = n_res_ + n_sign_ + n_cl_;
    std::vector<std::vector<long>> rels;
    for (int i = 0; i < n_res_; ++i) {
        std::vector<long> r(n, 0);
        r[i] = residues_.group.invariants()[i];
        rels.push_back(r);
    }
    for (int s = 0; s < n_sign_; ++s) {
        std::vector<long> r(n, 0);
        r[n_res_ + s] = 2;
        rels.push_back(r);
    }
    std::vector<FieldElement> unit_gens{FieldElement(-1)};
    if (!F.is_rational()) unit_gens.push_back(U_.eps);
    for (auto& u : unit_gens) {
        std::vector<long> r = raw_residue(R_.reduce(u));
        std::vector<int> sg(n_sign_);
        for (int s = 0; s < n_sign_; ++s) sg[s] = sign_at(F, u, s);
        auto rs = raw_signs(sg);
        for (int i = 0; i < n; ++i) r[i] += rs[i];
        rels.push_back(r);
    }
    for (int j = 0; j < n_cl_; ++j) {
        long d = cl.group.invariants()[j];
        auto gam = principal_generator(F, U_, ideal_pow(F, cl_gen_ideals_[j], d));
        if (!gam) throw PreconditionError("class generator power is not principal");
        // G^d = (gamma): the idele class of G^d is that of (gamma^{-1} at N, sgn gamma)
        std::vector<long> r = raw_residue(R_.reduce(inv(F, *gam)));
        std::vector<int> sg(n_sign_);
        for (int s = 0; s < n_sign_; ++s) sg[s] = sign_at(F, *gam, s);
        auto rs = raw_signs(sg);
        for (int i = 0; i < n; ++i) r[i] = -r[i] - rs[i];
        r[n_res_ + n_sign_ + j] += d;
        rels.push_back(r);
    }
    std::vector<std::string> labels;
    for (int i = 0; i < n_res_; ++i) labels.push_back("res" + std::to_string(i));
    for (int s = 0; s < n_sign_; ++s) labels.push_back("sign" + std::to_string(s));
    for (int j = 0; j < n_cl_; ++j) labels.push_back("cl" + std::to_string(j));
    G_ = FiniteAbelianGroup(n, rels, labels);
}

std::vector<long> RayClassGroup::raw_residue(long ring_idx) const
{
    const int n = n_res_ + n_sign_ + n_cl_;
    std::vector<long> r(n, 0);
    long p = unit_pos_.at(ring_idx);
    if (p < 0) throw InvalidInput("residue is not a unit modulo N");
    const auto& y = residues_.dlog[p];
    for (int i = 0; i < n_res_; ++i) r[i] = y[i];
    return r;
}

std::vector<long> RayClassGroup::raw_signs(const std::vector<int>& signs) const
{
    const int n = n_res_ + n_sign_ + n_cl_;
    std::vector<long> r(n, 0);
    if (int(signs.size()) != n_sign_) throw InvalidInput("wrong number of signs");
    for (int s = 0; s < n_sign_; ++s) r[n_res_ + s] = signs[s] < 0 ? 1 : 0;
    return r;
}

std::vector<long> RayClassGroup::raw_ideal(const FractionalIdeal& I) const
{
    const auto& cl = cl_.E;
    long k = cl_.classify(I);
    const auto& y = cl.dlog[k];
    FractionalIdeal L = unit_ideal();
    for (int j = 0; j < n_cl_; ++j) L = ideal_mul(F_, L, ideal_pow(F_, cl_gen_ideals_[j], y[j]));
    auto gam = principal_generator(F_, U_, ideal_mul(F_, I, ideal_inv(F_, L)));
    if (!gam) throw PreconditionError("class lift mismatch");
    std::vector<long> r = raw_residue(R_.reduce(inv(F_, *gam)));
    for (int s = 0; s < n_sign_; ++s)
        if (sign_at(F_, *gam, s) < 0) r[n_res_ + s] += 1;
    for (int j = 0; j < n_cl_; ++j) r[n_res_ + n_sign_ + j] = y[j];
    return r;
}

std::vector<long> RayClassGroup::residue_coords(long ring_idx) const { return G_.reduce(raw_residue(ring_idx)); }
std::vector<long> RayClassGroup::sign_coords(const std::vector<int>& signs) const { return G_.reduce(raw_signs(signs)); }

std::vector<long> RayClassGroup::ideal_coords(const FractionalIdeal& I) const
{
    if (!coprime_to(F_, ideal_mul(F_, I, principal_ideal(F_, FieldElement(Q(I.den)))), N_) ||
        gcd_l(to_long(I.den % N_), N_) != 1)
        throw InvalidInput("ideal not coprime to the level");
    return G_.reduce(raw_ideal(I));
}

std::vector<long> RayClassGroup::principal_idele_coords(const FieldElement& c, long rho) const
{
    long r = R_.mul(rho, R_.reduce(inv(F_, c)));
    auto raw = raw_residue(r);
    std::vector<int> sg(n_sign_);
    for (int s = 0; s < n_sign_; ++s) sg[s] = sign_at(F_, c, s);
    auto rs = raw_signs(sg);
    for (size_t i = 0; i < raw.size(); ++i) raw[i] += rs[i];
    return G_.reduce(raw);
}

std::vector<long> RayClassGroup::coords(const IdeleTriple& t) const
{
    auto r = raw_ideal(t.ideal);
    auto a = raw_residue(t.residue);
    auto b = raw_signs(t.signs);
    for (size_t i = 0; i < r.size(); ++i) r[i] += a[i] + b[i];
    return G_.reduce(r);
}

std::vector<IdeleTriple> RayClassGroup::generator_triples() const
{
    const int r = G_.rank();
    std::vector<IdeleTriple> out(r);
    std::vector<char> have(r, 0);
    int missing = r;
    const auto& cl = cl_.E;
    for (long k = 0; k < cl_.order() && missing; ++k) {
        FractionalIdeal L = unit_ideal();
        for (int j = 0; j < n_cl_; ++j) L = ideal_mul(F_, L, ideal_pow(F_, cl_gen_ideals_[j], cl.dlog[k][j]));
        for (long u : ring_of_pos_) {
            for (int mask = 0; mask < (1 << n_sign_); ++mask) {
                IdeleTriple t{L, u, std::vector<int>(n_sign_)};
                for (int s = 0; s < n_sign_; ++s) t.signs[s] = (mask >> s & 1) ? -1 : 1;
                auto y = coords(t);
                for (int i = 0; i < r; ++i) {
                    if (have[i]) continue;
                    bool ok = true;
                    for (int q = 0; q < r; ++q)
                        if (y[q] != (q == i ? 1 : 0)) ok = false;
                    if (ok) {
                        out[i] = t;
                        have[i] = 1;
                        --missing;
                    }
                }
            }
        }
    }
    if (missing) throw PreconditionError("generator representatives not found");
    return out;
}

const std::vector<IdeleTriple>& RayClassGroup::finite_representatives() const
{
    if (!finite_reps_.empty()) return finite_reps_;
    const long o = G_.order();
    std::vector<IdeleTriple> reps(o);
    std::vector<char> have(o, 0);
    long missing = o;
    long done_bound = 0;
    for (long bound = 4; missing > 0; bound *= 2) {
        if (bound > 1000000) throw ResourceError("finite representatives not found");
        for (auto& I : integral_ideals_up_to(F_, bound)) {
            if (missing == 0) break;
            Q nm = ideal_norm(F_, I);
            if (nm <= done_bound || !coprime_to(F_, I, N_)) continue;
            for (long u : ring_of_pos_) {
                IdeleTriple t{I, u, std::vector<int>(n_sign_, 1)};
                long idx = G_.index_of(coords(t));
                if (!have[idx]) {
                    have[idx] = 1;
                    reps[idx] = t;
                    --missing;
                }
            }
        }
        done_bound = bound;
    }
    finite_reps_ = reps;
    return finite_reps_;
}

// ---------------------------------------------------------------- characters

Q GroupCharacter::angle(const std::vector<long>& y) const
{
    Q s = 0;
    for (size_t i = 0; i < exps.size(); ++i) s += Q(exps[i] * y[i]) / Q(invariants[i]);
    return frac(s);
}

std::complex<double> GroupCharacter::value(const std::vector<long>& y) const
{
    Q a = angle(y);
    if (a == 0) return 1.0;
    if (a == Q(1, 2)) return -1.0;
    double t = 2 * std::numbers::pi * a.get_d();
    return {std::cos(t), std::sin(t)};
}

bool GroupCharacter::trivial() const
{
    return std::all_of(exps.begin(), exps.end(), [](long e) { return e == 0; });
}

GroupCharacter GroupCharacter::operator*(const GroupCharacter& o) const
{
    GroupCharacter r = *this;
    for (size_t i = 0; i < exps.size(); ++i) r.exps[i] = mod_pos(exps[i] + o.exps[i], invariants[i]);
    return r;
}

GroupCharacter GroupCharacter::conj() const
{
    GroupCharacter r = *this;
    for (size_t i = 0; i < exps.size(); ++i) r.exps[i] = mod_pos(-exps[i], invariants[i]);
    return r;
}

GroupCharacter trivial_character(const FiniteAbelianGroup& G)
{
    return GroupCharacter{G.invariants(), std::vector<long>(G.rank(), 0)};
}

std::vector<GroupCharacter> all_characters(const FiniteAbelianGroup& G)
{
    std::vector<GroupCharacter> out;
    for (auto& e : G.elements()) out.push_back(GroupCharacter{G.invariants(), e});
    return out;
}

std::vector<GroupCharacter> characters_with_sign(const RayClassGroup& G, int m)
{
    const int xi = G.field().xi;
    Q target = mod_pos(m, 2) == 0 ? Q(0) : Q(1, 2);
    std::vector<std::vector<long>> sgn;
    for (int s = 0; s < xi; ++s) {
        std::vector<int> v(xi, 1);
        v[s] = -1;
        sgn.push_back(G.sign_coords(v));
    }
    std::vector<GroupCharacter> out;
    for (auto& c : all_characters(G.group())) {
        bool ok = true;
        for (auto& y : sgn)
            if (c.angle(y) != target) ok = false;
        if (ok) out.push_back(c);
    }
    return out;
}

IdeleTriple idele_product(const RayClassGroup& G, const IdeleTriple& x, const IdeleTriple& y)
{
    IdeleTriple r;
    r.ideal = ideal_mul(G.field(), x.ideal, y.ideal);
    r.residue = G.ring().mul(x.residue, y.residue);
    r.signs.resize(x.signs.size());
    for (size_t s = 0; s < x.signs.size(); ++s) r.signs[s] = x.signs[s] * y.signs[s];
    return r;
}

Q idele_abs(const RayClassGroup& G, const IdeleTriple& t) { return 1 / ideal_norm(G.field(), t.ideal); }

std::complex<double> HeckeCharacterData::phi_tilde(const IdeleTriple& t1, const IdeleTriple& t2) const
{
    const int K = m + 2;
    IdeleTriple t12 = idele_product(*G, t1, t2);
    auto sgn = [](const IdeleTriple& t) {
        int s = 1;
        for (int v : t.signs) s *= v;
        return s;
    };
    std::complex<double> v = eta.value(G->coords(t12)) * chi.value(G->coords(t2));
    double a2 = idele_abs(*G, t2).get_d() * sgn(t2);
    double a12 = idele_abs(*G, t12).get_d() * sgn(t12);
    return v * std::pow(a2, K) * std::pow(a12, n);
}

}  // namespace polyeis
