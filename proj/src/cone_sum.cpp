#include "polyeis/cone_sum.hpp"

#include "polyeis/numerics.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace polyeis {

namespace {

using i128 = __int128;

i128 det2(const IVec2& u, const IVec2& v) { return i128(u[0]) * v[1] - i128(u[1]) * v[0]; }

// x, y with a y - b x = 1 for coprime (a, b)
IVec2 complement(const IVec2& v)
{
    long a = v[0], b = v[1];
    long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        long q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    // a old_s + b old_t = old_r = +-1
    if (old_r < 0) {
        old_s = -old_s;
        old_t = -old_t;
    }
    if (old_r != 1 && old_r != -1) throw InvalidInput("unimodular_chain: vector is not primitive");
    return {-old_t, old_s};
}

}  // namespace

std::vector<IVec2> unimodular_chain(IVec2 v0, IVec2 w)
{
    i128 d = det2(v0, w);
    if (d == 0) throw InvalidInput("unimodular_chain: degenerate cone");
    int o = d > 0 ? 1 : -1;
    std::vector<IVec2> chain{v0};
    IVec2 v = v0;
    i128 dv = d * o;
    while (dv > 0) {
        IVec2 s = complement(v);
        if (o < 0) s = {-s[0], -s[1]};
        i128 ds = det2(s, w) * o;
        i128 r = ds % dv;
        if (r < 0) r += dv;
        i128 t = (r - ds) / dv;
        IVec2 nv{long(s[0] + t * v[0]), long(s[1] + t * v[1])};
        chain.push_back(nv);
        v = nv;
        dv = r;
    }
    if (chain.back() != w) throw std::logic_error("unimodular_chain: did not reach the end ray");
    return chain;
}

namespace {

template <class T>
ConeClassSums run_cones(const NumberField& F, long C, int K, long Y0, int levels)
{
    ResidueRing R(F, C);
    FieldElement eps = unit_subgroup_generator(F, C).eps_N;
    FieldElement w = omega(F);
    T om1 = embed<T>(F, w, 0), om2 = embed<T>(F, w, 1);
    IVec2 sqrtD = F.one_mod_4 ? IVec2{-1, 2} : IVec2{0, 1};

    auto times_eps = [&](const IVec2& g) {
        FieldElement x = mul(F, eps, FieldElement(Q(g[0]), Q(g[1])));
        return IVec2{to_long(Z(x.a)), to_long(Z(x.b))};
    };

    ConeClassSums out;
    out.C = C;
    out.K = K;
    out.Y0 = Y0;
    out.levels = levels;
    std::vector<CompensatedSum<T>> acc(R.size);
    CompensatedSum<T> err;
    long terms = 0;
    std::vector<long> checkpoints;
    for (int j = 0; j <= levels; ++j) checkpoints.push_back(Y0 << j);

    for (const IVec2& g : {IVec2{1, 0}, sqrtD}) {
        auto chain = unimodular_chain(g, times_eps(g));
        int o = det2(g, times_eps(g)) > 0 ? 1 : -1;
        for (size_t c = 0; c + 1 < chain.size(); ++c) {
            const IVec2 &vi = chain[c], &vj = chain[c + 1];
            T s1i = T(C) * (T(vi[0]) + T(vi[1]) * om1), s2i = T(C) * (T(vi[0]) + T(vi[1]) * om2);
            T s1j = T(C) * (T(vj[0]) + T(vj[1]) * om1), s2j = T(C) * (T(vj[0]) + T(vj[1]) * om2);
            T al1 = s1j / s1i, al2 = s2j / s2i;
            Q nv = Q(C * C) * norm(F, FieldElement(Q(vi[0]), Q(vi[1])));
            T pref = T(1) / ipow(to_scalar<T>(nv), K);
            for (long r = 0; r < R.size; ++r) {
                long ra = R.coord_a(r), rb = R.coord_b(r);
                long n1 = mod_pos(o * (vj[1] * ra - vj[0] * rb), C);
                long n2 = mod_pos(o * (-vi[1] * ra + vi[0] * rb), C);
                T a = n1 == 0 ? T(1) : T(n1) / T(C);
                T b = T(n2) / T(C);
                CompensatedSum<T> part;
                std::vector<T> stages;
                long q = 0;
                for (long Y : checkpoints) {
                    for (; q < Y; ++q) {
                        T t = b + T(q);
                        part.add(pair_hurwitz(a + t * al1, a + t * al2, K));
                    }
                    stages.push_back(part.value());
                }
                terms += q;
                auto [v, e] = richardson(stages, 2 * K - 2);
                // the quadrant and its negative
                acc[r].add(pref * v);
                acc[R.neg(r)].add(pref * v);
                err.add(abs(2 * pref * e));
            }
        }
    }
    for (auto& a : acc) out.sums.push_back(Real(a.value()));
    out.error = Real(err.value());
    out.terms = terms;
    out.bits = std::numeric_limits<T>::digits;
    return out;
}

}  // namespace

ConeClassSums cone_class_sums(const NumberField& F, long C, int K, long Y0, int prec_bits, int levels)
{
    if (F.xi != 2) throw InvalidInput("cone_class_sums: real quadratic field required");
    if (K < 2) throw PreconditionError("cone_class_sums: K >= 2 required");
    if (C < 1 || Y0 < 1) throw InvalidInput("cone_class_sums: C, Y0 must be positive");
    int bits = effective_bits(prec_bits);
    if (levels < 0) levels = bits <= 53 ? 4 : (bits <= 64 ? 5 : 6);

    static std::mutex mu;
    static std::map<std::tuple<long, long, int, long, int, int>, ConeClassSums> cache;
    auto key = std::make_tuple(F.D, C, K, Y0, bits, levels);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    ConeClassSums res;
    if (bits <= 53)
        res = run_cones<double>(F, C, K, Y0, levels);
    else if (bits <= 64)
        res = run_cones<long double>(F, C, K, Y0, levels);
    else
        res = run_cones<Real>(F, C, K, Y0, levels);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, res);
    return res;
}

}  // namespace polyeis
