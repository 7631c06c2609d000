#include <omp.h>

#include <algorithm>

#include "kernel_common.hpp"
#include "uspec/kernels.hpp"

namespace uspec::kernels {

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int threads) {
    if (threads >= 1) omp_set_num_threads(threads);
}

namespace parallel {

namespace {

// Stable bucket sort of row ids by key: ids of bucket b are
// order[start[b]..start[b+1]), ascending.
template <class KeyFn>
void bucket_rows(std::size_t rows, std::size_t buckets, KeyFn key, std::vector<std::size_t>& start,
                 std::vector<std::size_t>& order) {
    start.assign(buckets + 1, 0);
    for (std::size_t i = 0; i < rows; ++i) ++start[key(i) + 1];
    for (std::size_t b = 0; b < buckets; ++b) start[b + 1] += start[b];
    order.resize(rows);
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < rows; ++i) order[fill[key(i)]++] = i;
}

}  // namespace

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels, std::span<double> sq_dist) {
    const auto n = static_cast<std::ptrdiff_t>(points.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double d = 0.0;
        labels[i] = static_cast<int>(detail::nearest_row(points.values.data() + i * points.cols, centers, &d));
        sq_dist[i] = d;
    }
}

void update_min_distance(const Matrix& points, std::span<const double> center, std::span<double> min_sq_dist) {
    const auto n = static_cast<std::ptrdiff_t>(points.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double d = sq_euclidean_unchecked(points.values.data() + i * points.cols, center.data(), points.cols);
        if (d < min_sq_dist[i]) min_sq_dist[i] = d;
    }
}

CenterSums center_sums(const Matrix& points, std::span<const int> labels, std::size_t k) {
    CenterSums out{Matrix(k, points.cols), std::vector<std::size_t>(k, 0)};
    std::vector<std::size_t> start, order;
    bucket_rows(points.rows, k, [&](std::size_t i) { return static_cast<std::size_t>(labels[i]); }, start, order);
    const auto kk = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t c = 0; c < kk; ++c) {
        auto dst = out.sums.row(c);
        for (std::size_t t = start[c]; t < start[c + 1]; ++t) {
            const auto src = points.row(order[t]);
            for (std::size_t j = 0; j < points.cols; ++j) dst[j] += src[j];
        }
        out.counts[c] = start[c + 1] - start[c];
    }
    return out;
}

NeighborLists approx_knn(const Matrix& data, const Matrix& reps, const RepClusterIndex& index, std::size_t K) {
    NeighborLists out(data.rows, K);
    const std::size_t z1 = index.centers.rows;
    const std::size_t d = data.cols;
    const auto blocks = static_cast<std::ptrdiff_t>((data.rows + kQueryBlock - 1) / kQueryBlock);
#pragma omp parallel
    {
        // Per-thread block x z1 distance buffer: O(threads * block * sqrt(p)).
        std::vector<double> block_dist(kQueryBlock * z1);
        detail::TopK top(K);
#pragma omp for schedule(dynamic, 4)
        for (std::ptrdiff_t b = 0; b < blocks; ++b) {
            const std::size_t begin = static_cast<std::size_t>(b) * kQueryBlock;
            const std::size_t end = std::min(data.rows, begin + kQueryBlock);
            for (std::size_t i = begin; i < end; ++i) {
                const double* x = data.values.data() + i * d;
                double* row = block_dist.data() + (i - begin) * z1;
                for (std::size_t c = 0; c < z1; ++c)
                    row[c] = sq_euclidean_unchecked(x, index.centers.values.data() + c * d, d);
            }
            for (std::size_t i = begin; i < end; ++i) {
                const double* row = block_dist.data() + (i - begin) * z1;
                std::size_t best = 0;
                for (std::size_t c = 1; c < z1; ++c)
                    if (row[c] < row[best]) best = c;
                detail::approx_query(data.values.data() + i * d, reps, index, best, top);
                detail::store_row(out, i, top);
            }
        }
    }
    return out;
}

NeighborLists exact_knn(const Matrix& data, const Matrix& reps, std::size_t K) {
    NeighborLists out(data.rows, K);
    const auto n = static_cast<std::ptrdiff_t>(data.rows);
#pragma omp parallel
    {
        detail::TopK top(K);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double* x = data.values.data() + i * data.cols;
            top.clear();
            for (std::size_t r = 0; r < reps.rows; ++r)
                top.push(static_cast<std::uint32_t>(r),
                         sq_euclidean_unchecked(x, reps.values.data() + r * reps.cols, reps.cols));
            detail::store_row(out, static_cast<std::size_t>(i), top);
        }
    }
    return out;
}

Matrix cross_gram(const SparseAffinity& B, std::span<const double> row_weight) {
    // Transpose the sparsity pattern: for column a, the entries (row, slot)
    // holding it, rows ascending. Output row a is then owned by one thread and
    // every E(a, b) is accumulated in ascending row order, as in the serial loop.
    const std::size_t nnz = B.nnz_per_row;
    std::vector<std::size_t> start, order;
    bucket_rows(B.nnz(), B.cols, [&](std::size_t e) { return static_cast<std::size_t>(B.col_index[e]); }, start, order);

    Matrix E(B.cols, B.cols);
    const auto cols = static_cast<std::ptrdiff_t>(B.cols);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t a = 0; a < cols; ++a) {
        double* dst = E.values.data() + static_cast<std::size_t>(a) * B.cols;
        for (std::size_t t = start[a]; t < start[a + 1]; ++t) {
            const std::size_t entry = order[t];
            const std::size_t i = entry / nnz;
            const double wa = B.values[entry] * row_weight[i];
            const auto rc = B.row_cols(i);
            const auto rv = B.row_values(i);
            for (std::size_t b = 0; b < nnz; ++b) dst[rc[b]] += wa * rv[b];
        }
    }
    return E;
}

Matrix lift(const SparseAffinity& B, std::span<const double> row_weight, const Matrix& V,
            std::span<const double> col_scale) {
    Matrix H(B.rows, V.cols);
    const auto n = static_cast<std::ptrdiff_t>(B.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto cols = B.row_cols(i);
        const auto vals = B.row_values(i);
        for (std::size_t c = 0; c < V.cols; ++c) {
            double acc = 0.0;
            for (std::size_t a = 0; a < cols.size(); ++a) acc += vals[a] * V(cols[a], c);
            H(i, c) = col_scale[c] * (row_weight[i] * acc);
        }
    }
    return H;
}

}  // namespace parallel
}  // namespace uspec::kernels
