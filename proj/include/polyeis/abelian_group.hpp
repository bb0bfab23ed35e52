#pragma once

#include "polyeis/rational.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace polyeis {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

struct SmithForm {
    std::vector<long long> diagonal;  // length = columns
    IntMatrix U;                      // column transform: R * U = P^{-1} * diag
};

// Smith normal form of an integer relation matrix (rows are relations).
SmithForm smith_normal_form(IntMatrix R);

// Z^n / (row span of relations) in invariant-factor coordinates.
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;
    FiniteAbelianGroup(int raw_rank, const std::vector<std::vector<long>>& relations,
                       std::vector<std::string> labels = {});

    const std::vector<long>& invariants() const { return inv_; }
    long order() const;
    int rank() const { return int(inv_.size()); }
    int raw_rank() const { return raw_rank_; }
    const std::vector<std::string>& labels() const { return labels_; }

    // raw generator coordinates -> reduced invariant-factor coordinates
    std::vector<long> reduce(const std::vector<long>& raw) const;
    std::vector<long> normalize(std::vector<long> c) const;
    std::vector<long> add(const std::vector<long>& x, const std::vector<long>& y) const;
    std::vector<long> neg(const std::vector<long>& x) const;
    std::vector<long> identity() const { return std::vector<long>(inv_.size(), 0); }
    std::vector<std::vector<long>> elements() const;
    long index_of(const std::vector<long>& c) const;
    std::vector<long> element_at(long idx) const;
    long element_order(const std::vector<long>& c) const;

private:
    int raw_rank_ = 0;
    std::vector<long> inv_;
    std::vector<std::string> labels_;
    IntMatrix U_;           // raw_rank x (kept columns)
    std::vector<int> keep_; // columns of the SNF kept (invariant > 1)
};

// A finite abelian group given by elements 0..n-1 with a multiplication.
struct EnumeratedGroup {
    FiniteAbelianGroup group;
    std::vector<long> generators;          // element ids of the raw generators
    std::vector<std::vector<long>> dlog;   // element id -> invariant coordinates
};
EnumeratedGroup enumerate_group(long n, long identity, const std::function<long(long, long)>& mul);

}  // namespace polyeis
