#include "polyeis/schwartz.hpp"

#include <numeric>
#include <sstream>

namespace polyeis {

// ---------------------------------------------------------------- matrices

Vec2 Mat2::apply(const NumberField& F, const Vec2& v) const
{
    return {mul(F, a, v[0]) + mul(F, b, v[1]), mul(F, c, v[0]) + mul(F, d, v[1])};
}

FieldElement det(const NumberField& F, const Mat2& g) { return mul(F, g.a, g.d) - mul(F, g.b, g.c); }

Mat2 mat_mul(const NumberField& F, const Mat2& x, const Mat2& y)
{
    return {mul(F, x.a, y.a) + mul(F, x.b, y.c), mul(F, x.a, y.b) + mul(F, x.b, y.d),
            mul(F, x.c, y.a) + mul(F, x.d, y.c), mul(F, x.c, y.b) + mul(F, x.d, y.d)};
}

Mat2 mat_hat(const Mat2& g) { return {g.d, -g.b, -g.c, g.a}; }

Mat2 mat_scale(const NumberField& F, const FieldElement& s, const Mat2& g)
{
    return {mul(F, s, g.a), mul(F, s, g.b), mul(F, s, g.c), mul(F, s, g.d)};
}

Mat2 mat_inverse(const NumberField& F, const Mat2& g)
{
    FieldElement dt = det(F, g);
    if (dt.is_zero()) throw InvalidInput("singular matrix");
    return mat_scale(F, inv(F, dt), mat_hat(g));
}

Mat2 mat_identity() { return {FieldElement(1), FieldElement(0), FieldElement(0), FieldElement(1)}; }

PairingValue trace_pairing(const NumberField& F, const Vec2& x, const Vec2& y)
{
    Q t = trace(F, mul(F, x[0], y[1]) - mul(F, x[1], y[0]));
    return {t, frac(t)};
}

// ---------------------------------------------------------------- schwartz functions

namespace {

// integral element -> ring index mod C
long ring_index(const NumberField& F, long C, const FieldElement& x)
{
    long a = mod_pos(to_long(Z(x.a.get_num()) % C), C);
    long b = F.xi == 2 ? mod_pos(to_long(Z(x.b.get_num()) % C), C) : 0;
    return a + (F.xi == 2 ? C * b : 0);
}

FieldElement ring_lift(const NumberField& F, long C, long i)
{
    return F.xi == 2 ? FieldElement(Q(i % C), Q(i / C)) : FieldElement(Q(i));
}

void check_size(long side, long limit)
{
    if (side > 0 && side > limit / side) throw ResourceError("Schwartz table too large");
}

}  // namespace

long FractionalSchwartz::coord_index(long a1, long b1, long a2, long b2) const
{
    if (F.xi == 1) return mod_pos(a1, C) + C * mod_pos(a2, C);
    long i1 = mod_pos(a1, C) + C * mod_pos(b1, C);
    long i2 = mod_pos(a2, C) + C * mod_pos(b2, C);
    return index(i1, i2);
}

CyclotomicValue FractionalSchwartz::operator()(const Vec2& v) const
{
    FieldElement si = inv(F, s);
    FieldElement u1 = mul(F, v[0], si), u2 = mul(F, v[1], si);
    if (!is_integral(u1) || !is_integral(u2)) return CyclotomicValue();
    return table[index(ring_index(F, C, u1), ring_index(F, C, u2))];
}

bool FractionalSchwartz::rational_valued() const
{
    for (auto& v : table)
        if (!v.is_rational()) return false;
    return true;
}

FractionalSchwartz zero_schwartz(const NumberField& F, const FieldElement& s, long C)
{
    if (C < 1) throw InvalidInput("modulus must be positive");
    if (s.is_zero()) throw InvalidInput("scale must be nonzero");
    FractionalSchwartz f;
    f.F = F;
    f.s = s;
    f.C = C;
    check_size(f.side(), 1L << 26);
    f.table.assign(f.size(), CyclotomicValue());
    return f;
}

FractionalSchwartz lattice_indicator(const NumberField& F, const FieldElement& s)
{
    auto f = zero_schwartz(F, s, 1);
    f.table[0] = CyclotomicValue(1);
    return f;
}

FractionalSchwartz coset_indicator(const NumberField& F, const FieldElement& s, long C, long i1, long i2)
{
    auto f = zero_schwartz(F, s, C);
    f.table[f.index(i1, i2)] = CyclotomicValue(1);
    return f;
}

FractionalSchwartz fourier_transform(const FractionalSchwartz& f)
{
    const NumberField& F = f.F;
    const long C = f.C, S = f.side(), xi = F.xi;
    FractionalSchwartz g = zero_schwartz(F, inv(F, mul(F, f.s, Q(C) * delta(F))), C);

    // tau(x y) = Tr(x y / delta) on the basis {1, omega}
    long Bm[2][2] = {{0, 0}, {0, 0}};
    std::vector<FieldElement> e{FieldElement(1), xi == 2 ? omega(F) : FieldElement(0)};
    for (int i = 0; i < xi; ++i)
        for (int j = 0; j < xi; ++j) {
            Q t = trace(F, divide(F, mul(F, e[i], e[j]), delta(F)));
            if (t.get_den() != 1) throw PreconditionError("inverse different mismatch");
            Bm[i][j] = mod_pos(to_long(Z(t.get_num()) % C), C);
        }

    // common order and denominator of the input values
    long M = C;
    Z L = 1;
    for (auto& v : f.table) {
        M = std::lcm(M, v.order());
        for (auto& c : v.dense())
            if (c != 0) L = lcm(L, Z(c.get_den()));
    }
    struct Entry {
        long c[4];
        std::vector<std::pair<long, Z>> terms;
    };
    std::vector<Entry> entries;
    for (long t = 0; t < f.size(); ++t) {
        const auto& v = f.table[t];
        Entry E;
        long t1 = t % S, t2 = t / S;
        E.c[0] = xi == 2 ? t1 % C : t1;
        E.c[1] = xi == 2 ? t1 / C : 0;
        E.c[2] = xi == 2 ? t2 % C : t2;
        E.c[3] = xi == 2 ? t2 / C : 0;
        long r = M / v.order();
        for (long k = 0; k < v.order(); ++k)
            if (v.dense()[k] != 0) E.terms.emplace_back(k * r, Z(v.dense()[k] * L));
        if (!E.terms.empty()) entries.push_back(std::move(E));
    }
    const long step = M / C;
    Q factor = 1 / (L * norm(F, f.s) * norm(F, f.s) * Q(F.dF));
    for (int k = 0; k < 2 * xi; ++k) factor /= C;

    std::vector<Z> acc(M);
    for (long w = 0; w < f.size(); ++w) {
        long w1 = w % S, w2 = w / S;
        long wc[4] = {xi == 2 ? w1 % C : w1, xi == 2 ? w1 / C : 0, xi == 2 ? w2 % C : w2, xi == 2 ? w2 / C : 0};
        // tau(det(w, t)) = B(w1, t2) - B(w2, t1), linear in t
        long lam[4] = {0, 0, 0, 0};
        for (int i = 0; i < xi; ++i)
            for (int j = 0; j < xi; ++j) {
                lam[2 + j] += wc[i] * Bm[i][j];
                lam[j] -= wc[2 + i] * Bm[i][j];
            }
        for (auto& a : acc) a = 0;
        for (auto& E : entries) {
            long tau = lam[0] * E.c[0] + lam[1] * E.c[1] + lam[2] * E.c[2] + lam[3] * E.c[3];
            long sh = mod_pos(-tau, C) * step;
            for (auto& [k, z] : E.terms) acc[(k + sh) % M] += z;
        }
        std::vector<Q> out(M);
        bool nz = false;
        for (long k = 0; k < M; ++k)
            if (acc[k] != 0) {
                out[k] = Q(acc[k]) * factor;
                nz = true;
            }
        if (nz) g.table[w] = CyclotomicValue::from_dense(M, std::move(out)).canonical();
    }
    return g;
}

FractionalSchwartz refine(const FractionalSchwartz& f, const FieldElement& s0, long C0)
{
    const NumberField& F = f.F;
    FieldElement r = divide(F, s0, f.s);  // u = r w
    // supports nest when s / s0 is integral, periods when s0 C0 / (s C) is
    if (!is_integral(divide(F, f.s, s0)) || !is_integral(make_q(C0, f.C) * r))
        throw InvalidInput("model does not refine the function");
    auto g = zero_schwartz(F, s0, C0);
    const long S0 = g.side();
    for (long i1 = 0; i1 < S0; ++i1) {
        FieldElement u1 = mul(F, r, ring_lift(F, C0, i1));
        if (!is_integral(u1)) continue;
        long j1 = ring_index(F, f.C, u1);
        for (long i2 = 0; i2 < S0; ++i2) {
            FieldElement u2 = mul(F, r, ring_lift(F, C0, i2));
            if (!is_integral(u2)) continue;
            g.table[g.index(i1, i2)] = f.table[f.index(j1, ring_index(F, f.C, u2))];
        }
    }
    return g;
}

std::pair<FractionalSchwartz, FractionalSchwartz> common_refinement(const FractionalSchwartz& f,
                                                                    const FractionalSchwartz& g, long max_size)
{
    if (!(f.F == g.F)) throw InvalidInput("functions live on different fields");
    const NumberField& F = f.F;
    if (f.s == g.s && f.C == g.C) return {f, g};
    Z M = lcm(denominator(f.s), denominator(g.s));
    FieldElement s0(Q(1) / Q(M), 0);
    auto least_int = [&](const FractionalSchwartz& h) {
        // smallest positive integer in the ideal (M s C)
        FractionalIdeal I = principal_ideal(F, Q(M * h.C) * h.s);
        return Z(I.a / I.den);
    };
    Z C0 = lcm(least_int(f), least_int(g));
    if (C0 > max_size) throw ResourceError("common refinement too large");
    long c0 = to_long(C0);
    long side = F.xi == 2 ? c0 * c0 : c0;
    check_size(side, max_size);
    return {refine(f, s0, c0), refine(g, s0, c0)};
}

bool schwartz_equal(const FractionalSchwartz& f, const FractionalSchwartz& g)
{
    auto [a, b] = common_refinement(f, g);
    for (long i = 0; i < a.size(); ++i)
        if (a.table[i] != b.table[i]) return false;
    return true;
}

FractionalSchwartz schwartz_add(const FractionalSchwartz& f, const FractionalSchwartz& g)
{
    auto [a, b] = common_refinement(f, g);
    for (long i = 0; i < a.size(); ++i) a.table[i] += b.table[i];
    return a;
}

FractionalSchwartz schwartz_scale(const Q& q, FractionalSchwartz f)
{
    for (auto& v : f.table) v *= q;
    return f;
}

FractionalSchwartz translate(const FractionalSchwartz& f, long u1, long u2)
{
    FractionalSchwartz g = f;
    const long S = f.side();
    ResidueRing R(f.F, f.C);
    for (long i1 = 0; i1 < S; ++i1)
        for (long i2 = 0; i2 < S; ++i2) g.table[g.index(i1, i2)] = f.table[f.index(R.sub(i1, u1), R.sub(i2, u2))];
    return g;
}

FractionalSchwartz act_group(const Mat2& g, const FractionalSchwartz& f)
{
    const NumberField& F = f.F;
    FieldElement dg = det(F, g);
    if (dg.is_zero()) throw InvalidInput("singular matrix");
    Z lam = 1;
    for (auto* x : {&g.a, &g.b, &g.c, &g.d}) lam = lcm(lam, denominator(*x));
    Mat2 h = mat_scale(F, FieldElement(Q(lam)), g);
    FieldElement s1 = Q(lam) * f.s;
    FieldElement D = det(F, h);
    Q nd = abs(norm(F, D));
    if (nd.get_den() != 1) throw PreconditionError("integral matrix with non-integral determinant");
    long Cn = to_long(Z(nd.get_num()) * f.C);
    auto out = zero_schwartz(F, divide(F, s1, D), Cn);
    FieldElement Di = inv(F, D);
    const long S = out.side();
    for (long i1 = 0; i1 < S; ++i1) {
        FieldElement w1 = ring_lift(F, Cn, i1);
        for (long i2 = 0; i2 < S; ++i2) {
            FieldElement w2 = ring_lift(F, Cn, i2);
            Vec2 u = h.apply(F, {w1, w2});
            FieldElement u1 = mul(F, u[0], Di), u2 = mul(F, u[1], Di);
            if (!is_integral(u1) || !is_integral(u2)) continue;
            out.table[out.index(i1, i2)] = f.table[f.index(ring_index(F, f.C, u1), ring_index(F, f.C, u2))];
        }
    }
    return out;
}

// ---------------------------------------------------------------- twisted functions

std::complex<double> TwistedSchwartz::value(const Vec2& v, const IdeleTriple& det_g) const
{
    std::complex<double> r = base(v).to_complex() * scalar;
    if (r == 0.0) return r;
    if (group) r *= eta.value(group->coords(det_g));
    if (n != 0) {
        double a = 1 / ideal_norm(base.F, det_g.ideal).get_d();
        for (int sg : det_g.signs) a *= sg;
        r *= std::pow(a, n);
    }
    return r;
}

TwistedSchwartz untwisted(const FractionalSchwartz& f)
{
    TwistedSchwartz t;
    t.base = f;
    return t;
}

bool is_S0(const FractionalSchwartz& f)
{
    if (!f.table[0].is_zero()) return false;
    CyclotomicValue s;
    for (auto& v : f.table) s += v;
    return s.is_zero();
}

bool is_S0(const TwistedSchwartz& phi) { return is_S0(phi.base); }

// ---------------------------------------------------------------- text form

std::string serialize(const FractionalSchwartz& f)
{
    std::ostringstream os;
    os << "polyeis-schwartz 1\n";
    os << "D " << f.F.D << "\n";
    os << "scale " << to_string(f.s.a) << " " << to_string(f.s.b) << "\n";
    os << "modulus " << f.C << "\n";
    long count = 0;
    for (auto& v : f.table)
        if (!v.is_zero()) ++count;
    os << "entries " << count << "\n";
    for (long i = 0; i < f.size(); ++i) {
        if (f.table[i].is_zero()) continue;
        auto t = f.table[i].terms();
        os << i << " " << t.size();
        for (auto& [e, c] : t) os << " " << to_string(e) << " " << to_string(c);
        os << "\n";
    }
    return os.str();
}

FractionalSchwartz deserialize_schwartz(const std::string& text)
{
    std::istringstream is(text);
    std::string tag, a, b;
    long version = 0, D = 0, C = 0, count = 0;
    auto expect = [&](const std::string& want) {
        if (!(is >> tag) || tag != want) throw InvalidInput("malformed Schwartz text: expected " + want);
    };
    expect("polyeis-schwartz");
    is >> version;
    if (version != 1) throw InvalidInput("unsupported Schwartz text version");
    expect("D");
    is >> D;
    expect("scale");
    is >> a >> b;
    expect("modulus");
    is >> C;
    expect("entries");
    is >> count;
    if (!is) throw InvalidInput("malformed Schwartz header");
    auto F = construct_field(D);
    auto f = zero_schwartz(F, FieldElement(parse_rational(a), parse_rational(b)), C);
    for (long k = 0; k < count; ++k) {
        long idx = 0, nt = 0;
        if (!(is >> idx >> nt) || idx < 0 || idx >= f.size()) throw InvalidInput("malformed Schwartz entry");
        CyclotomicValue v;
        for (long j = 0; j < nt; ++j) {
            std::string e, c;
            if (!(is >> e >> c)) throw InvalidInput("malformed Schwartz term");
            v += CyclotomicValue::root(parse_rational(e), parse_rational(c));
        }
        f.table[idx] = v;
    }
    return f;
}

}  // namespace polyeis
