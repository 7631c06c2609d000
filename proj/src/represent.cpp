#include "uspec/represent.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

namespace uspec {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng) {
    if (count > n) throw ValueError("cannot sample " + std::to_string(count) + " of " + std::to_string(n) + " items");
    std::vector<std::size_t> population(n);
    std::iota(population.begin(), population.end(), std::size_t{0});
    if (count == n) return population;
    std::vector<std::size_t> out;
    out.reserve(count);
    std::sample(population.begin(), population.end(), std::back_inserter(out), count, rng);
    return out;
}

RepresentativeSet select_random(const Dataset& data, std::size_t p, std::uint64_t seed) {
    if (p < 1 || p > data.n()) throw ValueError("select_random: need 1 <= p <= n");
    Rng rng(seed);
    const auto idx = sample_without_replacement(data.n(), p, rng);
    return {data.subset(idx).values(), SelectStrategy::random, seed};
}

RepresentativeSet select_kmeans(const Dataset& data, std::size_t p, std::uint64_t seed, const KMeansOptions& options) {
    if (p < 1 || p > data.n()) throw ValueError("select_kmeans: need 1 <= p <= n");
    Rng rng(seed);
    auto result = kmeans(data, p, rng, options);
    return {std::move(result.centers), SelectStrategy::kmeans, seed};
}

RepresentativeSet select_hybrid(const Dataset& data, std::size_t p, std::size_t p_prime, std::uint64_t seed,
                                const KMeansOptions& options) {
    if (p < 1 || p > data.n()) throw ValueError("select_hybrid: need 1 <= p <= n");
    if (p_prime == 0) p_prime = 10 * p;
    if (p_prime > data.n()) {
        warn("select_hybrid: p' = " + std::to_string(p_prime) + " exceeds N = " + std::to_string(data.n()) +
             "; clamping to N");
        p_prime = data.n();
    }
    if (p_prime < p) throw ValueError("select_hybrid: need p <= p'");

    if (p_prime == data.n()) {
        auto reps = select_kmeans(data, p, seed, options);
        reps.strategy = SelectStrategy::hybrid;
        return reps;
    }
    Rng rng(seed);
    const auto idx = sample_without_replacement(data.n(), p_prime, rng);
    const Dataset candidates = data.subset(idx);
    auto result = kmeans(candidates, p, rng, options);
    return {std::move(result.centers), SelectStrategy::hybrid, seed};
}

RepresentativeSet select_representatives(const Dataset& data, SelectStrategy strategy, std::size_t p,
                                         std::size_t p_prime, std::uint64_t seed, const KMeansOptions& options) {
    switch (strategy) {
        case SelectStrategy::random: return select_random(data, p, seed);
        case SelectStrategy::kmeans: return select_kmeans(data, p, seed, options);
        case SelectStrategy::hybrid: return select_hybrid(data, p, p_prime, seed, options);
    }
    throw ValueError("unknown selection strategy");
}

}  // namespace uspec
