#include "kernel_common.hpp"
#include "uspec/kernels.hpp"

namespace uspec::kernels::serial {

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels, std::span<double> sq_dist) {
    for (std::size_t i = 0; i < points.rows; ++i) {
        double d = 0.0;
        labels[i] = static_cast<int>(detail::nearest_row(points.values.data() + i * points.cols, centers, &d));
        sq_dist[i] = d;
    }
}

void update_min_distance(const Matrix& points, std::span<const double> center, std::span<double> min_sq_dist) {
    for (std::size_t i = 0; i < points.rows; ++i) {
        const double d = sq_euclidean_unchecked(points.values.data() + i * points.cols, center.data(), points.cols);
        if (d < min_sq_dist[i]) min_sq_dist[i] = d;
    }
}

CenterSums center_sums(const Matrix& points, std::span<const int> labels, std::size_t k) {
    CenterSums out{Matrix(k, points.cols), std::vector<std::size_t>(k, 0)};
    for (std::size_t i = 0; i < points.rows; ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        auto dst = out.sums.row(c);
        const auto src = points.row(i);
        for (std::size_t j = 0; j < points.cols; ++j) dst[j] += src[j];
        ++out.counts[c];
    }
    return out;
}

NeighborLists approx_knn(const Matrix& data, const Matrix& reps, const RepClusterIndex& index, std::size_t K) {
    NeighborLists out(data.rows, K);
    detail::TopK top(K);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const double* x = data.values.data() + i * data.cols;
        detail::approx_query(x, reps, index, detail::nearest_row(x, index.centers), top);
        detail::store_row(out, i, top);
    }
    return out;
}

NeighborLists exact_knn(const Matrix& data, const Matrix& reps, std::size_t K) {
    NeighborLists out(data.rows, K);
    detail::TopK top(K);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const double* x = data.values.data() + i * data.cols;
        top.clear();
        for (std::size_t r = 0; r < reps.rows; ++r)
            top.push(static_cast<std::uint32_t>(r), sq_euclidean_unchecked(x, reps.values.data() + r * reps.cols, reps.cols));
        detail::store_row(out, i, top);
    }
    return out;
}

Matrix cross_gram(const SparseAffinity& B, std::span<const double> row_weight) {
    Matrix E(B.cols, B.cols);
    for (std::size_t i = 0; i < B.rows; ++i) {
        const auto cols = B.row_cols(i);
        const auto vals = B.row_values(i);
        for (std::size_t a = 0; a < cols.size(); ++a) {
            const double wa = vals[a] * row_weight[i];
            for (std::size_t b = 0; b < cols.size(); ++b) E(cols[a], cols[b]) += wa * vals[b];
        }
    }
    return E;
}

Matrix lift(const SparseAffinity& B, std::span<const double> row_weight, const Matrix& V,
            std::span<const double> col_scale) {
    Matrix H(B.rows, V.cols);
    for (std::size_t i = 0; i < B.rows; ++i) {
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

}  // namespace uspec::kernels::serial
