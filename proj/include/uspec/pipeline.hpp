#pragma once

#include <vector>

#include "uspec/affinity.hpp"
#include "uspec/core.hpp"
#include "uspec/rng.hpp"
#include "uspec/tcut.hpp"

namespace uspec {

/// Wall-clock seconds per phase. For U-SENC the first five fields are summed
/// over ensemble members and `consensus` covers the final partition.
struct PhaseTimings {
    double selection = 0.0;
    double index = 0.0;
    double affinity = 0.0;
    double eigen = 0.0;
    double discretize = 0.0;
    double consensus = 0.0;

    double total() const { return selection + index + affinity + eigen + discretize + consensus; }
    PhaseTimings& operator+=(const PhaseTimings& o);
};

struct ClusteringResult {
    Labeling labeling;
    PhaseTimings timings;
    RunConfig config;  // resolved parameters actually used
    double sigma = 0.0;
};

/// U-SPEC: representative selection -> rep-cluster index -> K-nearest
/// representative affinity -> transfer cut -> k-means discretization.
/// Deterministic given (data, k, config.seed).
ClusteringResult run_uspec(const Dataset& data, std::size_t k, const RunConfig& config);

// ---- U-SENC ----------------------------------------------------------------

struct Ensemble {
    std::vector<Labeling> members;
    std::vector<std::size_t> member_k;
    /// Global cluster id of (member i, local c) is offsets[i] + c.
    std::vector<std::size_t> offsets;
    std::size_t k_c = 0;
};

/// Object-by-cluster incidence graph: exactly m unit entries per row. Global
/// clusters with no members are dropped, so B.cols may be below k_c.
struct ConsensusGraph {
    SparseAffinity B;
    /// Column of each global cluster id, or -1 when it was dropped.
    std::vector<long> column_of;
};

/// floor(tau (k_max - k_min)) + k_min for tau in [0, 1].
std::size_t member_k_from_tau(double tau, std::size_t k_min, std::size_t k_max);
/// tau drawn uniformly from the closed interval [0, 1].
std::size_t draw_member_k(std::size_t k_min, std::size_t k_max, Rng& rng);

/// Seed of ensemble member i; independent of execution order.
std::uint64_t member_seed(std::uint64_t master, std::size_t i);

/// m U-SPEC runs, each with its own hybrid-selected representatives and a
/// random cluster count in [k_min, k_max] (clamped to p and N). Members run in
/// parallel; the result does not depend on scheduling.
Ensemble generate_ensemble(const Dataset& data, std::size_t m, const RunConfig& config,
                           PhaseTimings* timings = nullptr);

ConsensusGraph build_consensus_graph(const Ensemble& ensemble);

/// U-SENC: generate_ensemble -> build_consensus_graph -> transfer cut with k
/// clusters on the consensus graph.
ClusteringResult run_usenc(const Dataset& data, std::size_t k, const RunConfig& config);

}  // namespace uspec
