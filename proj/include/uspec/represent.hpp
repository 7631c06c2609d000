#pragma once

#include <cstdint>

#include "uspec/core.hpp"
#include "uspec/kmeans.hpp"

namespace uspec {

/// The p representatives (landmarks) of a dataset.
struct RepresentativeSet {
    Matrix reps;  // p x d
    SelectStrategy strategy = SelectStrategy::random;
    std::uint64_t seed = 0;

    std::size_t p() const { return reps.rows; }
    std::size_t dim() const { return reps.cols; }
    std::span<const double> row(std::size_t j) const { return reps.row(j); }
};

/// `count` distinct indices from [0, n), uniformly without replacement,
/// returned in ascending order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng);

RepresentativeSet select_random(const Dataset& data, std::size_t p, std::uint64_t seed);

/// Centers of a k-means run with k = p over the whole dataset.
RepresentativeSet select_kmeans(const Dataset& data, std::size_t p, std::uint64_t seed,
                                const KMeansOptions& options = {});

/// Samples p' candidate objects, then returns the p centers of k-means over
/// the candidates. The k-means stage costs O(p' p d t), independent of N.
/// p_prime = 0 means 10p; values above N are clamped with a warning.
RepresentativeSet select_hybrid(const Dataset& data, std::size_t p, std::size_t p_prime, std::uint64_t seed,
                                const KMeansOptions& options = {});

RepresentativeSet select_representatives(const Dataset& data, SelectStrategy strategy, std::size_t p,
                                         std::size_t p_prime, std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace uspec
