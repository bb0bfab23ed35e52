#include "polyeis/horospherical.hpp"

#include "polyeis/numerics.hpp"

#include <cmath>
#include <set>

namespace polyeis {

using cd = std::complex<double>;

// ---------------------------------------------------------------- M2(O/N)

LevelGroup::LevelGroup(const NumberField& F, long N) : R_(F, N), S_(R_.size)
{
    if (S_ > 40) throw ResourceError("M2(O/N) too large to tabulate: |O/N| = " + std::to_string(S_));
    const long one = R_.one();
    for (long i = 0; i < table_size(); ++i) {
        LevelMatrix x = matrix(i);
        long d = det(x);
        if (!R_.is_unit(d)) continue;
        gl_.push_back(i);
        if (d == one) sl_.push_back(i);
    }
    units_ = R_.units();
    line_of_vec_.assign(S_ * S_, -1);
    std::vector<long> first_gl(S_ * S_, -1);
    for (long i : gl_) {
        LevelMatrix x = matrix(i);
        long v = x.a + S_ * x.c;
        if (first_gl[v] < 0) first_gl[v] = i;
    }
    for (long v = 0; v < S_ * S_; ++v)
        if (first_gl[v] >= 0) prim_.push_back(v);
    unit_of_vec_.assign(S_ * S_, -1);
    for (long v : prim_) {
        if (line_of_vec_[v] >= 0) continue;
        long p = lines_.size();
        lines_.push_back(matrix(first_gl[v]));
        for (long u : units_) {
            long w = R_.mul(u, v % S_) + S_ * R_.mul(u, v / S_);
            if (line_of_vec_[w] < 0) {
                line_of_vec_[w] = p;
                unit_of_vec_[w] = u;
            }
        }
    }
}

LevelMatrix LevelGroup::matrix(long idx) const
{
    LevelMatrix x;
    x.d = idx % S_;
    idx /= S_;
    x.c = idx % S_;
    idx /= S_;
    x.b = idx % S_;
    x.a = idx / S_;
    return x;
}

long LevelGroup::det(const LevelMatrix& x) const { return R_.sub(R_.mul(x.a, x.d), R_.mul(x.b, x.c)); }

LevelMatrix LevelGroup::mul(const LevelMatrix& x, const LevelMatrix& y) const
{
    auto& R = R_;
    return {R.add(R.mul(x.a, y.a), R.mul(x.b, y.c)), R.add(R.mul(x.a, y.b), R.mul(x.b, y.d)),
            R.add(R.mul(x.c, y.a), R.mul(x.d, y.c)), R.add(R.mul(x.c, y.b), R.mul(x.d, y.d))};
}

LevelMatrix LevelGroup::inverse(const LevelMatrix& x) const
{
    long di = R_.inverse(det(x));
    return {R_.mul(di, x.d), R_.mul(di, R_.neg(x.b)), R_.mul(di, R_.neg(x.c)), R_.mul(di, x.a)};
}

std::pair<long, LevelMatrix> LevelGroup::iwasawa(const LevelMatrix& x) const
{
    long v = x.a + S_ * x.c;
    long p = line_of_vec_[v];
    if (p < 0) throw InvalidInput("iwasawa: matrix is not invertible");
    LevelMatrix b = mul(inverse(lines_[p]), x);
    return {p, b};
}

LevelMatrix LevelGroup::completion(long vec) const
{
    long p = line_of_vec_[vec];
    if (p < 0) throw InvalidInput("completion: vector is not primitive");
    return mul(lines_[p], torus(unit_of_vec_[vec], R_.one()));
}

IdeleTriple unit_idele(const NumberField& F, long residue)
{
    return IdeleTriple{unit_ideal(), residue, std::vector<int>(F.xi, 1)};
}

// ---------------------------------------------------------------- induced functions

cd IndFunction::at(const LevelMatrix& x, const IdeleTriple& t1, const IdeleTriple& t2) const
{
    return (*this)(x) * phi.phi_tilde(t1, t2);
}

namespace {

Q char_angle(const HeckeCharacterData& phi, const GroupCharacter& c, long residue)
{
    return c.angle(phi.G->coords(unit_idele(phi.G->field(), residue)));
}

}  // namespace

CyclotomicValue phi_tilde_unit(const HeckeCharacterData& phi, long t1, long t2)
{
    const ResidueRing& R = phi.G->ring();
    Q a = char_angle(phi, phi.eta, R.mul(t1, t2)) + char_angle(phi, phi.chi, t2);
    return CyclotomicValue::root(frac(a));
}

IndFunction induce_from_lines(const HeckeCharacterData& phi, std::shared_ptr<const LevelGroup> group,
                              const std::vector<CyclotomicValue>& line_values)
{
    if (line_values.size() != group->line_reps().size()) throw InvalidInput("induce_from_lines: one value per line");
    if (phi.G->level() != group->level()) throw InvalidInput("induce_from_lines: level mismatch");
    IndFunction psi{phi, group, {}, {}};
    psi.values.assign(group->table_size(), 0.0);
    psi.exact.assign(group->table_size(), CyclotomicValue(0));
    std::map<std::pair<long, long>, CyclotomicValue> tor;
    for (long i : group->gl()) {
        auto [p, b] = group->iwasawa(group->matrix(i));
        auto key = std::make_pair(b.a, b.d);
        auto it = tor.find(key);
        if (it == tor.end()) it = tor.emplace(key, phi_tilde_unit(phi, b.a, b.d)).first;
        psi.exact[i] = line_values[p] * it->second;
        psi.values[i] = psi.exact[i].to_complex();
    }
    return psi;
}

double b_law_defect(const IndFunction& psi)
{
    const LevelGroup& L = *psi.group;
    const ResidueRing& R = L.ring();
    std::vector<LevelMatrix> borel;
    std::vector<cd> factor;
    for (long t : L.units()) {
        borel.push_back(L.torus(t, R.one()));
        factor.push_back(phi_tilde_unit(psi.phi, t, R.one()).to_complex());
        borel.push_back(L.torus(R.one(), t));
        factor.push_back(phi_tilde_unit(psi.phi, R.one(), t).to_complex());
    }
    for (long e = 1; e < R.size; e *= (R.F.xi == 2 ? R.N : R.size)) {
        borel.push_back({R.one(), e, 0, R.one()});
        factor.push_back(1.0);
    }
    double worst = 0;
    for (long i : L.gl()) {
        LevelMatrix x = L.matrix(i);
        for (size_t j = 0; j < borel.size(); ++j)
            worst = std::max(worst, std::abs(psi(L.mul(x, borel[j])) - psi.values[i] * factor[j]));
    }
    return worst;
}

// ---------------------------------------------------------------- spherical functions

bool is_spherical(const HeckeCharacterData& phi) { return phi.m == 0 && phi.chi.trivial(); }

cd spherical_S(const HeckeCharacterData& phi, const LevelGroup& L, const LevelMatrix& k, const IdeleTriple& t1,
               const IdeleTriple& t2)
{
    if (L.det(k) != L.ring().one()) throw InvalidInput("spherical_S: k must lie in SL2(O/N)");
    return phi.phi_tilde(t1, t2);
}

IndFunction spherical_table(const HeckeCharacterData& phi, std::shared_ptr<const LevelGroup> group)
{
    if (!is_spherical(phi)) throw PreconditionError("spherical_table: phi must have m = 0 and chi' = 1");
    IndFunction psi{phi, group, {}, {}};
    psi.values.assign(group->table_size(), 0.0);
    psi.exact.assign(group->table_size(), CyclotomicValue(0));
    long one = group->ring().one();
    std::map<long, CyclotomicValue> by_det;
    for (long i : group->gl()) {
        long d = group->det(group->matrix(i));
        auto it = by_det.find(d);
        if (it == by_det.end()) it = by_det.emplace(d, phi_tilde_unit(phi, one, d)).first;
        psi.exact[i] = it->second;
        psi.values[i] = it->second.to_complex();
    }
    return psi;
}

std::vector<HeckeCharacterData> spherical_families(std::shared_ptr<const RayClassGroup> G)
{
    std::vector<HeckeCharacterData> out;
    GroupCharacter one = trivial_character(G->group());
    for (auto& eta : all_characters(G->group())) out.push_back(HeckeCharacterData{G, eta, one, 0, 0});
    return out;
}

namespace {

long sl2_order(const NumberField& F, long N)
{
    Q order = 1;
    for (int i = 0; i < 3 * F.xi; ++i) order *= N;
    for (auto [p, e] : factor(N)) {
        (void)e;
        for (long q : split_prime(F, p).norms) order *= Q(q * q - 1, q * q);
    }
    return to_long(Z(order.get_num()));
}

}  // namespace

void check_sl2_budget(const NumberField& F, long N)
{
    long cap = F.xi == 1 ? 12 : 4;
    if (N > cap)
        throw ResourceError("SL2(O/N) enumeration budget exceeded: N = " + std::to_string(N) +
                            ", |SL2(O/N)| = " + std::to_string(sl2_order(F, N)));
}

PsiResult psi_project(const IndFunction& psi)
{
    const LevelGroup& L = *psi.group;
    check_sl2_budget(L.field(), L.level());
    PsiResult r;
    r.group_order = L.sl().size();
    CompensatedSum<double> re, im;
    for (long i : L.sl()) {
        re.add(psi.values[i].real());
        im.add(psi.values[i].imag());
    }
    r.average = cd(re.value(), im.value()) / double(r.group_order);
    if (!psi.exact.empty()) {
        CyclotomicValue s(0);
        for (long i : L.sl()) s += psi.exact[i];
        s *= Q(1, r.group_order);
        r.exact = s.canonical();
    }
    r.spherical = is_spherical(psi.phi);
    r.coefficient = r.spherical ? r.average : cd(0);
    r.data = SphericalData{psi.phi, true};
    return r;
}

IndFunction kernel_part(const IndFunction& psi)
{
    if (!is_spherical(psi.phi)) return psi;
    if (psi.exact.empty()) throw InvalidInput("kernel_part: psi needs an exact table");
    CyclotomicValue c = *psi_project(psi).exact;
    IndFunction S = spherical_table(psi.phi, psi.group);
    IndFunction out = psi;
    for (long i : psi.group->gl()) {
        out.exact[i] = (psi.exact[i] - c * S.exact[i]).canonical();
        out.values[i] = out.exact[i].to_complex();
    }
    return out;
}

// ---------------------------------------------------------------- Hecke L-values

cd TateFactorization::value() const
{
    std::complex<long double> p = 1;
    for (auto& [q, c] : unramified)
        p /= 1.0L - std::complex<long double>(c) * std::pow((long double)q, -(long double)s);
    return cd(p) * inv_sqrt_dF * ramified.to_complex();
}

HeckeLResult hecke_L_partial(const RayClassGroup& G, const GroupCharacter& chi, double s, long P)
{
    if (!(s > 1)) throw PreconditionError("hecke_L_partial: s must exceed 1");
    if (P < 2) throw InvalidInput("hecke_L_partial: prime bound must be at least 2");
    const NumberField& F = G.field();
    HeckeLResult r;
    r.factors.s = s;
    r.factors.prime_bound = P;
    r.factors.inv_sqrt_dF = 1 / std::sqrt(double(F.dF));
    for (long p : primes_up_to(P)) {
        if (G.level() % p == 0) continue;
        auto sp = split_prime(F, p);
        for (size_t i = 0; i < sp.primes.size(); ++i) {
            if (sp.norms[i] > P) continue;
            r.factors.unramified.emplace_back(sp.norms[i], chi.value(G.ideal_coords(sp.primes[i])));
        }
    }
    r.value = r.factors.value();
    // sum over N p > P of N p^{-s} is at most xi P^{1-s} / (s - 1)
    double tail = 2 * F.xi * std::pow(double(P), 1 - s) / (s - 1);
    r.tail_estimate = std::abs(r.value) * std::expm1(tail);
    return r;
}

namespace {

void require_class_number_one(const NumberField& F, const char* who)
{
    if (class_group(F).order() != 1) throw PreconditionError(std::string(who) + ": needs class number 1");
}

// [O^x : E_C^+]
long unit_index(const NumberField& F, long C)
{
    if (F.xi == 1) return 2;
    long k = std::max(1L, unit_subgroup_generator(F, C).k);
    return (unit_data(F).norm_sign < 0 ? 4 : 2) * k;
}

cd gamma_over_2pi_i(const NumberField& F, int K)
{
    // Gamma(K)^xi / (-2 pi i)^{xi K}
    cd base(0, -2 * M_PI);
    return std::pow(std::tgamma(double(K)), F.xi) / std::pow(base, F.xi * K);
}

bool has_type(const RayClassGroup& G, const GroupCharacter& chi, int m)
{
    for (auto& c : characters_with_sign(G, m))
        if (c == chi) return true;
    return false;
}

}  // namespace

LatticeSumResult hecke_L_lattice(const RayClassGroup& G, const GroupCharacter& chi, int K, long B, int prec_bits)
{
    const NumberField& F = G.field();
    require_class_number_one(F, "hecke_L_lattice");
    const ResidueRing& R = G.ring();
    // chi'((x)) sgn(N x)^K depends only on x mod N
    std::vector<Cx<Real>> line(R.size, Cx<Real>(Real(0)));
    for (long r : R.units()) {
        FieldElement x = R.lift(r);
        if (x.is_zero()) x = FieldElement(Q(R.N));
        cd c = chi.value(G.ideal_coords(principal_ideal(F, x)));
        if (norm(F, x) < 0 && K % 2) c = -c;
        line[r] = Cx<Real>(Real(c.real()), Real(c.imag()));
    }
    LatticeSumResult res = residue_class_sum(F, R.N, line, K, B, prec_bits);
    Real sc = 1 / (Real(unit_index(F, R.N)) * sqrt(Real(F.dF)));
    res.value = res.value * Cx<Real>(sc);
    res.tail_estimate *= sc;
    return res;
}

LambdaResult lambda_N(const RayClassGroup& G, const GroupCharacter& chi, int m, LambdaMethod method, long P, long B,
                      int prec_bits)
{
    if (m < 0) throw InvalidInput("lambda_N: m must be non-negative");
    if (!has_type(G, chi, m)) throw InvalidInput("lambda_N: chi' is not of type m on the real places");
    const NumberField& F = G.field();
    int K = m + 2;
    LambdaResult r;
    r.group_order = G.order();
    r.prefactor = double(r.group_order) * gamma_over_2pi_i(F, K);
    if (method == LambdaMethod::euler) {
        auto h = hecke_L_partial(G, chi, K, P);
        r.L = h.value;
        r.tail_estimate = h.tail_estimate * std::abs(r.prefactor);
    } else {
        auto h = hecke_L_lattice(G, chi, K, B, prec_bits);
        r.L = h.value.to_std();
        r.tail_estimate = double(h.tail_estimate) * std::abs(r.prefactor);
    }
    r.value = r.prefactor * r.L;
    return r;
}

// ---------------------------------------------------------------- horospherical map

cd HorosphericalImage::operator()(const LevelMatrix& x) const
{
    cd s = 0;
    for (auto& c : components) s += c(x);
    return s;
}

cd HorosphericalImage::at(const LevelMatrix& x, const IdeleTriple& t1, const IdeleTriple& t2) const
{
    cd s = 0;
    for (auto& c : components) s += c.at(x, t1, t2);
    return s;
}

HorosphericalImage horospherical_map(const TwistedSchwartz& phi, int m, long N, long B, int prec_bits)
{
    const NumberField& F = phi.base.F;
    if (m < 0) throw InvalidInput("horospherical_map: m must be non-negative");
    require_class_number_one(F, "horospherical_map");
    if (N % phi.base.C) throw PreconditionError("horospherical_map: the level of phi must divide N");
    FractionalSchwartz fh = fourier_transform(phi.base);
    if (N % fh.C) throw PreconditionError("horospherical_map: the level of phi^ must divide N");

    std::shared_ptr<const RayClassGroup> G;
    GroupCharacter eta;
    if (phi.group && phi.group->level() == N) {
        G = phi.group;
        eta = phi.eta;
    } else {
        if (phi.group && !phi.eta.trivial()) throw PreconditionError("horospherical_map: eta must have level N");
        G = std::make_shared<RayClassGroup>(F, N);
        eta = trivial_character(G->group());
    }
    auto L = std::make_shared<const LevelGroup>(F, N);
    const ResidueRing& R = L->ring();
    ResidueRing RC(F, fh.C);
    const long S = R.size;
    const int K = m + 2;

    std::vector<long> red(S);
    for (long i = 0; i < S; ++i) red[i] = RC.reduce(R.lift(i));

    // T(v) = sum over l in F^x / E_C^+ of f^(l v) N(l)^{-K}, by v mod C
    Real ns = ipow(to_scalar<Real>(norm(F, fh.s)), -K);
    std::map<std::pair<long, long>, cd> T;
    auto Tval = [&](long v1, long v2) {
        auto key = std::make_pair(v1, v2);
        auto it = T.find(key);
        if (it != T.end()) return it->second;
        std::vector<Cx<Real>> line(RC.size);
        bool any = false;
        for (long r = 0; r < RC.size; ++r) {
            const auto& c = fh.table[fh.index(RC.mul(r, v1), RC.mul(r, v2))];
            if (c.is_zero()) continue;
            line[r] = c.evaluate<Real>();
            any = true;
        }
        cd v = 0;
        if (any) v = (residue_class_sum(F, RC.N, line, K, B, prec_bits).value * Cx<Real>(ns)).to_std();
        T.emplace(key, v);
        return v;
    };

    const cd pref = gamma_over_2pi_i(F, K) * phi.scalar;
    const double volU = 1 / (std::sqrt(double(F.dF)) * double(L->units().size()));
    const double idx = double(unit_index(F, fh.C));

    HorosphericalImage out;
    for (auto& chi : characters_with_sign(*G, m)) {
        HeckeCharacterData hd{G, eta, chi, m, phi.n};
        std::vector<cd> chi_u(S, 0.0), twist(S, 0.0);
        for (long u : L->units()) {
            chi_u[u] = chi.value(G->coords(unit_idele(F, u)));
            twist[u] = chi_u[u] * eta.value(G->coords(unit_idele(F, u)));
        }
        std::vector<cd> I(S * S, 0.0);
        for (long v : L->primitive()) {
            cd acc = 0;
            long a = v % S, c = v / S;
            for (long u : L->units()) acc += chi_u[u] * Tval(red[R.mul(u, a)], red[R.mul(u, c)]);
            I[v] = acc * volU / idx;
        }
        IndFunction comp{hd, L, {}, {}};
        comp.values.assign(L->table_size(), 0.0);
        for (long i : L->gl()) {
            LevelMatrix x = L->matrix(i);
            comp.values[i] = pref * twist[L->det(x)] * I[x.a + S * x.c];
        }
        out.components.push_back(std::move(comp));
    }
    return out;
}

HorosphericalImage rho0(const TwistedSchwartz& phi, int m, long N, long B, int prec_bits)
{
    if (!is_S0(phi)) throw PreconditionError("rho0: phi is not in S^0");
    return horospherical_map(phi, m, N, B, prec_bits);
}

// ---------------------------------------------------------------- preimage

TwistedSchwartz preimage(const IndFunction& psi, long B, int prec_bits)
{
    if (psi.exact.empty()) throw InvalidInput("preimage: psi needs an exact table");
    const HeckeCharacterData& phi = psi.phi;
    const LevelGroup& L = *psi.group;
    const NumberField& F = L.field();
    const ResidueRing& R = L.ring();
    const long N = L.level(), S = R.size;

    // ray class representatives among the unit residues
    std::map<std::vector<long>, long> reps;
    for (long u : L.units()) reps.emplace(phi.G->coords(unit_idele(F, u)), u);
    if ((long)reps.size() != phi.G->order())
        throw PreconditionError("preimage: some ray classes contain no unit residue (narrow class number > 1)");

    auto lam = lambda_N(*phi.G, phi.chi, phi.m, LambdaMethod::lattice, 10000, B, prec_bits);
    if (!(std::abs(lam.value) > 1e-300)) throw std::logic_error("internal error: Lambda_N vanished");

    // s psi-bar on the primitive vectors mod N
    FractionalSchwartz sb = zero_schwartz(F, FieldElement(1), N);
    for (long v : L.primitive()) {
        LevelMatrix x = L.completion(v);
        long d = L.det(x);
        CyclotomicValue e = CyclotomicValue::root(frac(char_angle(phi, phi.eta, d)));
        sb.table[sb.index(v % S, v / S)] = e * psi.exact[L.index(L.mul(L.scalar(R.inverse(d)), x))];
    }
    FractionalSchwartz fh = zero_schwartz(F, FieldElement(1), N);
    for (auto& [coords, r] : reps) {
        (void)coords;
        CyclotomicValue c = CyclotomicValue::root(frac(char_angle(phi, phi.chi, r)));
        for (long i1 = 0; i1 < S; ++i1)
            for (long i2 = 0; i2 < S; ++i2) {
                const auto& w = sb.table[sb.index(R.mul(r, i1), R.mul(r, i2))];
                if (!w.is_zero()) fh.table[fh.index(i1, i2)] += c * w;
            }
    }
    for (auto& v : fh.table) v = v.canonical();

    TwistedSchwartz out;
    // the symplectic transform is an involution
    out.base = fourier_transform(fh);
    out.group = phi.G;
    out.eta = phi.eta;
    out.n = phi.n;
    out.scalar = 1.0 / lam.value;
    return out;
}

}  // namespace polyeis
