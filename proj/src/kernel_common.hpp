#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "uspec/affinity.hpp"
#include "uspec/core.hpp"

namespace uspec::detail {

inline bool closer(double da, std::uint32_t ia, double db, std::uint32_t ib) {
    return da < db || (da == db && ia < ib);
}

/// Bounded sorted buffer of the best (distance, index) pairs seen so far.
class TopK {
public:
    explicit TopK(std::size_t k) : k_(k) { items_.reserve(k + 1); }

    void clear() { items_.clear(); }

    void push(std::uint32_t index, double sq_dist) {
        if (items_.size() == k_) {
            const Neighbor& worst = items_.back();
            if (!closer(sq_dist, index, worst.sq_dist, worst.index)) return;
            items_.pop_back();
        }
        auto pos = items_.end();
        while (pos != items_.begin()) {
            const Neighbor& prev = *(pos - 1);
            if (!closer(sq_dist, index, prev.sq_dist, prev.index)) break;
            --pos;
        }
        items_.insert(pos, Neighbor{index, sq_dist});
    }

    const std::vector<Neighbor>& items() const { return items_; }

private:
    std::size_t k_;
    std::vector<Neighbor> items_;
};

/// Index of the nearest row of `centers` to x; ties go to the lowest index.
inline std::size_t nearest_row(const double* x, const Matrix& centers, double* best_out = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.rows; ++c) {
        const double d = sq_euclidean_unchecked(x, centers.values.data() + c * centers.cols, centers.cols);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (best_out) *best_out = best_d;
    return best;
}

/// Steps 2 and 3 of the approximate search, given the winning rep-cluster.
inline void approx_query(const double* x, const Matrix& reps, const RepClusterIndex& index, std::size_t cluster,
                         TopK& top) {
    const std::size_t d = reps.cols;
    std::uint32_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t r : index.members[cluster]) {
        const double dist = sq_euclidean_unchecked(x, reps.values.data() + std::size_t{r} * d, d);
        if (dist < nearest_d) {
            nearest_d = dist;
            nearest = r;
        }
    }
    top.clear();
    top.push(nearest, nearest_d);
    for (std::uint32_t r : index.neighbors(nearest))
        top.push(r, sq_euclidean_unchecked(x, reps.values.data() + std::size_t{r} * d, d));
}

inline void store_row(NeighborLists& out, std::size_t i, const TopK& top) {
    const auto& items = top.items();
    for (std::size_t j = 0; j < out.k; ++j) {
        out.index[i * out.k + j] = items[j].index;
        out.sq_dist[i * out.k + j] = items[j].sq_dist;
    }
}

}  // namespace uspec::detail
