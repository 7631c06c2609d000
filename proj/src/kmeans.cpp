#include "uspec/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "uspec/kernels.hpp"

namespace uspec {

namespace {

double ordered_sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Gives every empty cluster the point currently farthest from its center,
// taken from a cluster that keeps at least one member.
void repair_empty_clusters(const Matrix& points, std::vector<int>& labels, std::vector<double>& sq_dist,
                           Matrix& centers) {
    const std::size_t k = centers.rows;
    std::vector<std::size_t> counts(k, 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] != 0) continue;
        std::size_t far = points.rows;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.rows; ++i) {
            if (counts[static_cast<std::size_t>(labels[i])] > 1 && sq_dist[i] > far_d) {
                far_d = sq_dist[i];
                far = i;
            }
        }
        if (far == points.rows) throw ValueError("k-means: cannot repair empty cluster (k > n)");
        --counts[static_cast<std::size_t>(labels[far])];
        labels[far] = static_cast<int>(j);
        ++counts[j];
        sq_dist[far] = 0.0;
        std::copy_n(points.row(far).begin(), points.cols, centers.row(j).begin());
    }
}

}  // namespace

std::vector<std::size_t> kmeanspp_seed_indices(const Dataset& data, std::size_t k, Rng& rng) {
    const std::size_t n = data.n();
    if (k == 0 || k > n) throw ValueError("k-means++: need 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    const Matrix& X = data.values();

    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    std::vector<char> taken(n, 0);
    std::vector<double> min_d(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t i) {
        chosen.push_back(i);
        taken[i] = 1;
        kernels::parallel::update_min_distance(X, X.row(i), min_d);
    };

    take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    while (chosen.size() < k) {
        const double total = ordered_sum(min_d);
        std::size_t pick = n;
        if (total > 0.0) {
            const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
            double cum = 0.0;
            std::size_t last_positive = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (min_d[i] <= 0.0) continue;
                last_positive = i;
                cum += min_d[i];
                if (cum > r) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = last_positive;
        } else {
            // Only duplicates of chosen points remain: uniform over unchosen rows.
            const std::size_t remaining = n - chosen.size();
            std::size_t nth = std::uniform_int_distribution<std::size_t>(0, remaining - 1)(rng);
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i]) continue;
                if (nth-- == 0) {
                    pick = i;
                    break;
                }
            }
        }
        take(pick);
    }
    return chosen;
}

Matrix kmeanspp_init(const Dataset& data, std::size_t k, Rng& rng) {
    const auto idx = kmeanspp_seed_indices(data, k, rng);
    Matrix centers(k, data.dim());
    for (std::size_t c = 0; c < k; ++c) std::copy_n(data.row(idx[c]).begin(), data.dim(), centers.row(c).begin());
    return centers;
}

KMeansResult kmeans_from(const Dataset& data, Matrix centers, const KMeansOptions& options) {
    const std::size_t n = data.n();
    const std::size_t k = centers.rows;
    if (k == 0 || k > n) throw ValueError("k-means: need 1 <= k <= n");
    if (centers.cols != data.dim()) throw DimensionMismatch("k-means: center dimension differs from data");
    if (options.t_max < 1) throw ValueError("k-means: t_max must be >= 1");
    if (!(options.tol >= 0.0)) throw ValueError("k-means: tol must be >= 0");

    const Matrix& X = data.values();
    std::vector<int> labels(n);
    std::vector<double> sq_dist(n);
    KMeansResult result;

    for (std::size_t it = 1; it <= options.t_max; ++it) {
        kernels::parallel::assign_nearest(X, centers, labels, sq_dist);
        repair_empty_clusters(X, labels, sq_dist, centers);
        result.inertia_trace.push_back(ordered_sum(sq_dist));

        const auto acc = kernels::parallel::center_sums(X, labels, k);
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            auto dst = centers.row(c);
            const auto sum = acc.sums.row(c);
            const double inv = 1.0 / static_cast<double>(acc.counts[c]);
            double moved = 0.0;
            for (std::size_t j = 0; j < X.cols; ++j) {
                const double next = sum[j] * inv;
                const double diff = next - dst[j];
                moved += diff * diff;
                dst[j] = next;
            }
            shift = std::max(shift, moved);
        }
        result.iterations = it;
        if (shift <= options.tol) break;
    }

    kernels::parallel::assign_nearest(X, centers, labels, sq_dist);
    result.inertia = ordered_sum(sq_dist);
    result.inertia_trace.push_back(result.inertia);
    result.centers = std::move(centers);
    result.labels = Labeling(std::move(labels), static_cast<int>(k));
    return result;
}

KMeansResult kmeans(const Dataset& data, std::size_t k, Rng& rng, const KMeansOptions& options) {
    if (k == 0 || k > data.n()) throw ValueError("k-means: need 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(data.n()) + ")");
    return kmeans_from(data, kmeanspp_init(data, k, rng), options);
}

}  // namespace uspec
