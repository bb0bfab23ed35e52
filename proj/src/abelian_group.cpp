#include "polyeis/abelian_group.hpp"

#include <cstdlib>
#include <numeric>

namespace polyeis {

namespace {

long long floordiv(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

SmithForm smith_normal_form(IntMatrix A)
{
    const long m = A.rows(), n = A.cols();
    IntMatrix U = IntMatrix::Identity(n, n);
    const long steps = std::min(m, n);
    for (long t = 0; t < steps; ++t) {
        while (true) {
            long pi = -1, pj = -1;
            for (long i = t; i < m; ++i)
                for (long j = t; j < n; ++j)
                    if (A(i, j) != 0 && (pi < 0 || std::llabs(A(i, j)) < std::llabs(A(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) goto finished;
            A.row(t).swap(A.row(pi));
            A.col(t).swap(A.col(pj));
            U.col(t).swap(U.col(pj));
            const long long p = A(t, t);
            bool clean = true;
            for (long i = t + 1; i < m; ++i) {
                long long q = floordiv(A(i, t), p);
                if (q) A.row(i) -= q * A.row(t);
                if (A(i, t)) clean = false;
            }
            for (long j = t + 1; j < n; ++j) {
                long long q = floordiv(A(t, j), p);
                if (q) {
                    A.col(j) -= q * A.col(t);
                    U.col(j) -= q * U.col(t);
                }
                if (A(t, j)) clean = false;
            }
            if (!clean) continue;
            long bad = -1;
            for (long i = t + 1; i < m && bad < 0; ++i)
                for (long j = t + 1; j < n; ++j)
                    if (A(i, j) % p != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            A.row(t) += A.row(bad);
        }
        if (A(t, t) < 0) A.row(t) *= -1;
    }
finished:
    SmithForm S;
    S.diagonal.assign(n, 0);
    for (long t = 0; t < steps; ++t) S.diagonal[t] = A(t, t);
    S.U = U;
    return S;
}

FiniteAbelianGroup::FiniteAbelianGroup(int raw_rank, const std::vector<std::vector<long>>& relations,
                                       std::vector<std::string> labels)
    : raw_rank_(raw_rank), labels_(std::move(labels))
{
    if (raw_rank == 0) return;
    IntMatrix R(long(relations.size()), raw_rank);
    for (size_t i = 0; i < relations.size(); ++i)
        for (int j = 0; j < raw_rank; ++j) R(long(i), j) = relations[i][j];
    SmithForm S = smith_normal_form(R);
    for (int j = 0; j < raw_rank; ++j) {
        if (S.diagonal[j] == 0) throw InvalidInput("relations do not define a finite group");
        if (S.diagonal[j] > 1) {
            keep_.push_back(j);
            inv_.push_back(long(S.diagonal[j]));
        }
    }
    U_.resize(raw_rank, long(keep_.size()));
    for (size_t k = 0; k < keep_.size(); ++k) {
        for (int i = 0; i < raw_rank; ++i) {
            long long v = S.U(i, keep_[k]) % inv_[k];
            U_(i, long(k)) = v < 0 ? v + inv_[k] : v;
        }
    }
}

long FiniteAbelianGroup::order() const
{
    long o = 1;
    for (long d : inv_) o *= d;
    return o;
}

std::vector<long> FiniteAbelianGroup::reduce(const std::vector<long>& raw) const
{
    if (int(raw.size()) != raw_rank_) throw InvalidInput("raw coordinate length mismatch");
    std::vector<long> y(inv_.size(), 0);
    for (size_t k = 0; k < inv_.size(); ++k) {
        __int128 s = 0;
        for (int i = 0; i < raw_rank_; ++i) s += __int128(raw[i]) * U_(i, long(k));
        long r = long(s % inv_[k]);
        y[k] = r < 0 ? r + inv_[k] : r;
    }
    return y;
}

std::vector<long> FiniteAbelianGroup::normalize(std::vector<long> c) const
{
    for (size_t k = 0; k < inv_.size(); ++k) c[k] = mod_pos(c[k], inv_[k]);
    return c;
}

std::vector<long> FiniteAbelianGroup::add(const std::vector<long>& x, const std::vector<long>& y) const
{
    std::vector<long> r(inv_.size());
    for (size_t k = 0; k < inv_.size(); ++k) r[k] = mod_pos(x[k] + y[k], inv_[k]);
    return r;
}

std::vector<long> FiniteAbelianGroup::neg(const std::vector<long>& x) const
{
    std::vector<long> r(inv_.size());
    for (size_t k = 0; k < inv_.size(); ++k) r[k] = mod_pos(-x[k], inv_[k]);
    return r;
}

long FiniteAbelianGroup::index_of(const std::vector<long>& c) const
{
    long idx = 0;
    for (size_t k = inv_.size(); k-- > 0;) idx = idx * inv_[k] + c[k];
    return idx;
}

std::vector<long> FiniteAbelianGroup::element_at(long idx) const
{
    std::vector<long> c(inv_.size());
    for (size_t k = 0; k < inv_.size(); ++k) {
        c[k] = idx % inv_[k];
        idx /= inv_[k];
    }
    return c;
}

std::vector<std::vector<long>> FiniteAbelianGroup::elements() const
{
    std::vector<std::vector<long>> out;
    long o = order();
    out.reserve(o);
    for (long i = 0; i < o; ++i) out.push_back(element_at(i));
    return out;
}

long FiniteAbelianGroup::element_order(const std::vector<long>& c) const
{
    long o = 1;
    for (size_t k = 0; k < inv_.size(); ++k) {
        long g = std::gcd(c[k], inv_[k]);
        o = std::lcm(o, inv_[k] / g);
    }
    return o;
}

EnumeratedGroup enumerate_group(long n, long identity, const std::function<long(long, long)>& mul)
{
    // grow a subgroup one generator at a time, recording each relative order as a relation
    std::vector<std::vector<long>> raw(n);
    std::vector<char> in(n, 0);
    std::vector<long> members{identity};
    in[identity] = 1;
    raw[identity] = {};
    std::vector<long> gens;
    std::vector<std::vector<long>> rels;
    for (long g = 0; g < n && long(members.size()) < n; ++g) {
        if (in[g]) continue;
        const long j = long(gens.size());
        gens.push_back(g);
        for (long h : members) raw[h].push_back(0);
        for (auto& r : rels) r.push_back(0);
        long k = 1, x = g;
        while (!in[x]) {
            x = mul(x, g);
            ++k;
        }
        std::vector<long> rel = raw[x];
        for (auto& v : rel) v = -v;
        rel[j] += k;
        rels.push_back(rel);
        std::vector<long> grown = members;
        for (long h : members) {
            long y = h;
            for (long i = 1; i < k; ++i) {
                y = mul(y, g);
                in[y] = 1;
                raw[y] = raw[h];
                raw[y][j] = i;
                grown.push_back(y);
            }
        }
        members.swap(grown);
    }
    if (long(members.size()) != n) throw InvalidInput("multiplication does not close on the element set");
    EnumeratedGroup E;
    const int r = int(gens.size());
    for (auto& v : raw) v.resize(r, 0);
    E.group = FiniteAbelianGroup(r, rels);
    E.generators = gens;
    E.dlog.resize(n);
    for (long i = 0; i < n; ++i) E.dlog[i] = E.group.reduce(raw[i]);
    return E;
}

}  // namespace polyeis
