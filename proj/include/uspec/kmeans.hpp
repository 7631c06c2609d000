#pragma once

#include <vector>

#include "uspec/core.hpp"
#include "uspec/rng.hpp"

namespace uspec {

struct KMeansOptions {
    std::size_t t_max = 100;
    /// Convergence threshold on the largest squared center displacement.
    double tol = 1e-8;
};

struct KMeansResult {
    Matrix centers;  // k x d
    Labeling labels;
    double inertia = 0.0;
    std::size_t iterations = 0;
    /// Inertia after each assignment step; the final entry equals `inertia`.
    std::vector<double> inertia_trace;
};

/// k-means++ seeding (D^2 weighting). Returns the chosen row indices, all
/// distinct; when every remaining point has zero weight the next seed is drawn
/// uniformly from the unchosen rows.
std::vector<std::size_t> kmeanspp_seed_indices(const Dataset& data, std::size_t k, Rng& rng);
Matrix kmeanspp_init(const Dataset& data, std::size_t k, Rng& rng);

/// Lloyd's algorithm from k-means++ seeds.
///
/// Each iteration assigns every point to its nearest center (lowest index on
/// ties), repairs empty clusters by moving in the point farthest from its
/// center, then recomputes centers as member means. Stops once the largest
/// squared center displacement is <= tol or after t_max iterations. A final
/// assignment pass makes labels consistent with the returned centers.
///
/// Results are bit-identical for any OpenMP thread count.
KMeansResult kmeans(const Dataset& data, std::size_t k, Rng& rng, const KMeansOptions& options = {});

/// Lloyd iterations from caller-provided centers.
KMeansResult kmeans_from(const Dataset& data, Matrix centers, const KMeansOptions& options = {});

}  // namespace uspec
