#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uspec/core.hpp"
#include "uspec/represent.hpp"
#include "uspec/rng.hpp"

namespace uspec {

/// Coarse-to-fine search structure over the representatives.
///
/// The representatives are grouped into z1 rep-clusters whose centers are the
/// member means; each representative also stores its K' nearest other
/// representatives, nearest first.
struct RepClusterIndex {
    std::size_t z1 = 0;
    Matrix centers;                                   // z1 x d
    std::vector<std::vector<std::uint32_t>> members;  // ascending representative ids
    std::vector<std::uint32_t> rep_to_cluster;        // length p
    std::size_t K_prime = 0;
    std::vector<std::uint32_t> knn_table;             // p x K', row-major

    std::size_t p() const { return rep_to_cluster.size(); }
    std::span<const std::uint32_t> neighbors(std::size_t r) const { return {knn_table.data() + r * K_prime, K_prime}; }
};

struct Neighbor {
    std::uint32_t index;
    double sq_dist;
    bool operator==(const Neighbor&) const = default;
};

/// Per-object neighbor lists, each sorted by (distance, index).
struct NeighborLists {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::uint32_t> index;  // n x k
    std::vector<double> sq_dist;       // n x k

    NeighborLists() = default;
    NeighborLists(std::size_t rows, std::size_t per_row) : n(rows), k(per_row), index(rows * per_row), sq_dist(rows * per_row) {}

    std::span<const std::uint32_t> indices(std::size_t i) const { return {index.data() + i * k, k}; }
    std::span<const double> distances(std::size_t i) const { return {sq_dist.data() + i * k, k}; }
    bool operator==(const NeighborLists&) const = default;
};

/// Row-compressed N x cols matrix with exactly nnz_per_row entries in every
/// row, column ids ascending within a row.
struct SparseAffinity {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t nnz_per_row = 0;
    std::vector<std::uint32_t> col_index;
    std::vector<double> values;
    double sigma = 0.0;
    bool degenerate_kernel = false;

    std::size_t nnz() const { return values.size(); }
    std::span<const std::uint32_t> row_cols(std::size_t i) const { return {col_index.data() + i * nnz_per_row, nnz_per_row}; }
    std::span<const double> row_values(std::size_t i) const { return {values.data() + i * nnz_per_row, nnz_per_row}; }

    /// Checks the fixed-nnz layout, column order and range.
    void validate() const;
};

/// z1 = floor(sqrt(p)) unless `z1` is given. Rep-clusters come from k-means
/// over the representatives; any cluster left empty is dropped.
RepClusterIndex build_rep_index(const RepresentativeSet& reps, std::size_t K_prime, Rng& rng, std::size_t z1 = 0,
                                const KMeansOptions& options = {});

/// Approximate K nearest representatives of one object:
/// nearest rep-cluster center, then nearest member r_l of that rep-cluster,
/// then the best K among r_l and its K' table neighbors.
std::vector<Neighbor> approx_knn(std::span<const double> x, const RepresentativeSet& reps, const RepClusterIndex& index,
                                 std::size_t K);

/// approx_knn for every object, processed in row blocks.
NeighborLists approx_knn_all(const Dataset& data, const RepresentativeSet& reps, const RepClusterIndex& index,
                             std::size_t K);

/// True K nearest representatives by full N x p scan.
NeighborLists exact_knn(const Dataset& data, const RepresentativeSet& reps, std::size_t K);

/// Gaussian cross-affinity over the retained neighbor pairs:
/// b_ij = exp(-|x_i - r_j|^2 / (2 sigma^2)), sigma = mean retained Euclidean
/// distance. A zero sigma sets every entry to 1 and flags degenerate_kernel.
SparseAffinity build_affinity(const Dataset& data, const RepresentativeSet& reps, const NeighborLists& neighbors);

/// Kernel width rule on its own.
double kernel_sigma(const NeighborLists& neighbors);

}  // namespace uspec
