#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the plain
// reference kept for testing, `parallel` is the OpenMP version the library
// calls. For identical inputs both produce bit-identical outputs, for any
// thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "uspec/affinity.hpp"
#include "uspec/core.hpp"

namespace uspec::kernels {

struct CenterSums {
    Matrix sums;                      // k x d
    std::vector<std::size_t> counts;  // k
};

namespace serial {

/// labels[i] = nearest center (lowest index on ties), sq_dist[i] = its squared distance.
void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels, std::span<double> sq_dist);
/// min_sq_dist[i] = min(min_sq_dist[i], |x_i - center|^2)
void update_min_distance(const Matrix& points, std::span<const double> center, std::span<double> min_sq_dist);
/// Per-cluster coordinate sums, each accumulated in ascending point order.
CenterSums center_sums(const Matrix& points, std::span<const int> labels, std::size_t k);
NeighborLists approx_knn(const Matrix& data, const Matrix& reps, const RepClusterIndex& index, std::size_t K);
NeighborLists exact_knn(const Matrix& data, const Matrix& reps, std::size_t K);
/// B^T diag(row_weight) B as a dense cols x cols matrix.
Matrix cross_gram(const SparseAffinity& B, std::span<const double> row_weight);
/// H(i,c) = col_scale[c] * row_weight[i] * sum_j B(i,j) V(j,c)
Matrix lift(const SparseAffinity& B, std::span<const double> row_weight, const Matrix& V,
            std::span<const double> col_scale);

}  // namespace serial

namespace parallel {

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels, std::span<double> sq_dist);
void update_min_distance(const Matrix& points, std::span<const double> center, std::span<double> min_sq_dist);
CenterSums center_sums(const Matrix& points, std::span<const int> labels, std::size_t k);
/// Step 1 runs against the rep-cluster centers in fixed row blocks.
NeighborLists approx_knn(const Matrix& data, const Matrix& reps, const RepClusterIndex& index, std::size_t K);
NeighborLists exact_knn(const Matrix& data, const Matrix& reps, std::size_t K);
/// Each output row is owned by one thread; no partial accumulators.
Matrix cross_gram(const SparseAffinity& B, std::span<const double> row_weight);
Matrix lift(const SparseAffinity& B, std::span<const double> row_weight, const Matrix& V,
            std::span<const double> col_scale);

}  // namespace parallel

/// Rows per block in the batched nearest-rep-cluster step.
inline constexpr std::size_t kQueryBlock = 256;

int thread_count();
void set_thread_count(int threads);

}  // namespace uspec::kernels
