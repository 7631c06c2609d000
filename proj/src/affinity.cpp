#include "uspec/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kernel_common.hpp"
#include "uspec/kernels.hpp"

namespace uspec {

void SparseAffinity::validate() const {
    if (col_index.size() != rows * nnz_per_row || values.size() != rows * nnz_per_row)
        throw ValueError("sparse affinity storage does not match rows * nnz_per_row");
    for (std::size_t i = 0; i < rows; ++i) {
        const auto c = row_cols(i);
        for (std::size_t a = 0; a < c.size(); ++a) {
            if (c[a] >= cols) throw ValueError("sparse affinity column out of range");
            if (a > 0 && c[a] <= c[a - 1]) throw ValueError("sparse affinity columns not strictly ascending");
        }
    }
}

RepClusterIndex build_rep_index(const RepresentativeSet& reps, std::size_t K_prime, Rng& rng, std::size_t z1,
                                const KMeansOptions& options) {
    const std::size_t p = reps.p();
    if (p < 2) throw ValueError("build_rep_index: need at least 2 representatives");
    if (K_prime < 1 || K_prime >= p) throw ValueError("build_rep_index: need 1 <= K' < p");
    if (z1 == 0) {
        z1 = static_cast<std::size_t>(std::sqrt(static_cast<double>(p)));
        while (z1 * z1 > p) --z1;
        while ((z1 + 1) * (z1 + 1) <= p) ++z1;
    }
    if (z1 > p) throw ValueError("build_rep_index: z1 exceeds p");

    const Dataset rep_data(reps.reps);
    const auto km = kmeans(rep_data, z1, rng, options);

    RepClusterIndex index;
    index.K_prime = K_prime;
    std::vector<std::vector<std::uint32_t>> groups(z1);
    for (std::size_t r = 0; r < p; ++r) groups[static_cast<std::size_t>(km.labels.labels[r])].push_back(static_cast<std::uint32_t>(r));
    index.rep_to_cluster.resize(p);
    for (auto& g : groups) {
        if (g.empty()) continue;
        for (std::uint32_t r : g) index.rep_to_cluster[r] = static_cast<std::uint32_t>(index.members.size());
        index.members.push_back(std::move(g));
    }
    index.z1 = index.members.size();

    // Rep-cluster centers are the member means.
    index.centers = Matrix(index.z1, reps.dim());
    for (std::size_t c = 0; c < index.z1; ++c) {
        auto dst = index.centers.row(c);
        for (std::uint32_t r : index.members[c]) {
            const auto src = reps.row(r);
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
        }
        const double inv = 1.0 / static_cast<double>(index.members[c].size());
        for (double& v : dst) v *= inv;
    }

    // K' nearest other representatives; take K'+1 and drop the representative itself.
    const auto table = kernels::parallel::exact_knn(reps.reps, reps.reps, K_prime + 1);
    index.knn_table.resize(p * K_prime);
    for (std::size_t r = 0; r < p; ++r) {
        std::size_t out = 0;
        for (std::uint32_t j : table.indices(r)) {
            if (j == r || out == K_prime) continue;
            index.knn_table[r * K_prime + out++] = j;
        }
    }
    return index;
}

std::vector<Neighbor> approx_knn(std::span<const double> x, const RepresentativeSet& reps, const RepClusterIndex& index,
                                 std::size_t K) {
    if (x.size() != reps.dim()) throw DimensionMismatch("approx_knn: query dimension differs from representatives");
    if (index.p() != reps.p()) throw ValueError("approx_knn: index was built for a different representative set");
    if (K < 1 || K > index.K_prime + 1 || K > reps.p()) throw ValueError("approx_knn: need 1 <= K <= K'+1 and K <= p");
    detail::TopK top(K);
    detail::approx_query(x.data(), reps.reps, index, detail::nearest_row(x.data(), index.centers), top);
    return top.items();
}

NeighborLists approx_knn_all(const Dataset& data, const RepresentativeSet& reps, const RepClusterIndex& index,
                             std::size_t K) {
    if (data.dim() != reps.dim()) throw DimensionMismatch("approx_knn: data dimension differs from representatives");
    if (index.p() != reps.p()) throw ValueError("approx_knn: index was built for a different representative set");
    if (K < 1 || K > index.K_prime + 1 || K > reps.p()) throw ValueError("approx_knn: need 1 <= K <= K'+1 and K <= p");
    return kernels::parallel::approx_knn(data.values(), reps.reps, index, K);
}

NeighborLists exact_knn(const Dataset& data, const RepresentativeSet& reps, std::size_t K) {
    if (data.dim() != reps.dim()) throw DimensionMismatch("exact_knn: data dimension differs from representatives");
    if (K < 1 || K > reps.p()) throw ValueError("exact_knn: need 1 <= K <= p");
    return kernels::parallel::exact_knn(data.values(), reps.reps, K);
}

double kernel_sigma(const NeighborLists& neighbors) {
    if (neighbors.n == 0 || neighbors.k == 0) throw ValueError("kernel_sigma: empty neighbor lists");
    std::vector<double> row_sum(neighbors.n);
    const auto n = static_cast<std::ptrdiff_t>(neighbors.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double d2 : neighbors.distances(static_cast<std::size_t>(i))) s += std::sqrt(d2);
        row_sum[i] = s;
    }
    double total = 0.0;
    for (double s : row_sum) total += s;
    return total / static_cast<double>(neighbors.n * neighbors.k);
}

SparseAffinity build_affinity(const Dataset& data, const RepresentativeSet& reps, const NeighborLists& neighbors) {
    if (neighbors.n != data.n()) throw LengthMismatch("build_affinity: neighbor lists do not cover the dataset");
    if (neighbors.k < 1 || neighbors.k > reps.p()) throw ValueError("build_affinity: need 1 <= K <= p neighbors per object");

    SparseAffinity B;
    B.rows = data.n();
    B.cols = reps.p();
    B.nnz_per_row = neighbors.k;
    B.col_index.resize(B.rows * B.nnz_per_row);
    B.values.resize(B.rows * B.nnz_per_row);
    B.sigma = kernel_sigma(neighbors);
    B.degenerate_kernel = !(B.sigma > 0.0);
    if (B.degenerate_kernel) warn("all retained neighbor distances are zero; kernel width is 0, using unit affinities");
    const double inv_two_sigma_sq = B.degenerate_kernel ? 0.0 : 1.0 / (2.0 * B.sigma * B.sigma);
    constexpr double kFloor = std::numeric_limits<double>::min();

    const std::size_t K = neighbors.k;
    const auto n = static_cast<std::ptrdiff_t>(B.rows);
    bool bad_index = false;
#pragma omp parallel
    {
        std::vector<std::size_t> order(K);
#pragma omp for schedule(static) reduction(|| : bad_index)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto idx = neighbors.indices(static_cast<std::size_t>(i));
            const auto d2 = neighbors.distances(static_cast<std::size_t>(i));
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return idx[a] < idx[b]; });
            for (std::size_t t = 0; t < K; ++t) {
                const std::size_t src = order[t];
                if (idx[src] >= B.cols || (t > 0 && idx[src] == idx[order[t - 1]])) bad_index = true;
                B.col_index[static_cast<std::size_t>(i) * K + t] = idx[src];
                B.values[static_cast<std::size_t>(i) * K + t] =
                    B.degenerate_kernel ? 1.0 : std::max(kFloor, std::exp(-d2[src] * inv_two_sigma_sq));
            }
        }
    }
    if (bad_index) throw ValueError("build_affinity: neighbor indices out of range or repeated");
    return B;
}

}  // namespace uspec
