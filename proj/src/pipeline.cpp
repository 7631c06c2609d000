#include "uspec/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

#include "uspec/represent.hpp"

namespace uspec {

namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

KMeansOptions kmeans_options(const RunConfig& c) { return {c.t_max, c.tol}; }

Labeling partition_graph(const SparseAffinity& B, std::size_t k, Rng& rng, const RunConfig& c,
                         double& eigen_seconds, double& discretize_seconds) {
    auto r = tcut(B, k, rng, TcutOptions{c.drop_trivial, c.row_normalize, kmeans_options(c)});
    eigen_seconds += r.eigen_seconds;
    discretize_seconds += r.discretize_seconds;
    return std::move(r.labels);
}

// `c` is already resolved against data.n().
ClusteringResult uspec_resolved(const Dataset& data, std::size_t k, const RunConfig& c) {
    ClusteringResult result;
    result.config = c;
    result.config.k = k;
    const auto kopts = kmeans_options(c);
    Stopwatch sw;

    const auto reps = select_representatives(data, c.select, c.p, c.p_prime, derive_seed(c.seed, static_cast<std::uint64_t>(Stream::selection)), kopts);
    result.timings.selection = sw.lap();

    NeighborLists neighbors;
    if (c.knn == KnnMode::approx) {
        Rng index_rng = make_rng(c.seed, Stream::index);
        const auto index = build_rep_index(reps, c.K_prime, index_rng, 0, kopts);
        result.timings.index = sw.lap();
        neighbors = approx_knn_all(data, reps, index, c.K);
    } else {
        neighbors = exact_knn(data, reps, c.K);
    }
    const auto B = build_affinity(data, reps, neighbors);
    result.sigma = B.sigma;
    result.timings.affinity = sw.lap();

    Rng rng = make_rng(c.seed, Stream::discretize);
    result.labeling = partition_graph(B, k, rng, c, result.timings.eigen, result.timings.discretize);
    return result;
}

}  // namespace

PhaseTimings& PhaseTimings::operator+=(const PhaseTimings& o) {
    selection += o.selection;
    index += o.index;
    affinity += o.affinity;
    eigen += o.eigen;
    discretize += o.discretize;
    consensus += o.consensus;
    return *this;
}

ClusteringResult run_uspec(const Dataset& data, std::size_t k, const RunConfig& config) {
    RunConfig c = config;
    c.k = k;
    return uspec_resolved(data, k, c.resolved(data.n()));
}

std::size_t member_k_from_tau(double tau, std::size_t k_min, std::size_t k_max) {
    if (k_min < 2 || k_min > k_max) throw ValueError("member k: need 2 <= k_min <= k_max");
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValueError("member k: tau must lie in [0, 1]");
    const auto span = static_cast<double>(k_max - k_min);
    return std::min(k_max, static_cast<std::size_t>(std::floor(tau * span)) + k_min);
}

std::size_t draw_member_k(std::size_t k_min, std::size_t k_max, Rng& rng) {
    std::uniform_real_distribution<double> tau(0.0, std::nextafter(1.0, 2.0));
    return member_k_from_tau(std::min(1.0, tau(rng)), k_min, k_max);
}

std::uint64_t member_seed(std::uint64_t master, std::size_t i) {
    return derive_seed(derive_seed(master, static_cast<std::uint64_t>(Stream::ensemble)), i);
}

namespace {

Ensemble ensemble_resolved(const Dataset& data, std::size_t m, const RunConfig& c, PhaseTimings* timings) {
    if (m < 1) throw ValueError("ensemble size m must be >= 1");
    Ensemble ens;
    ens.members.resize(m);
    ens.member_k.resize(m);
    std::vector<PhaseTimings> member_times(m);
    std::vector<std::exception_ptr> errors(m);

    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < mm; ++i) {
        try {
            RunConfig mc = c;
            mc.seed = member_seed(c.seed, static_cast<std::size_t>(i));
            Rng krng = make_rng(mc.seed, Stream::member_k);
            const std::size_t ki = std::min({draw_member_k(c.k_min, c.k_max, krng), c.p, data.n()});
            mc.k = ki;
            auto r = uspec_resolved(data, ki, mc);
            ens.member_k[i] = ki;
            ens.members[i] = std::move(r.labeling);
            member_times[i] = r.timings;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    ens.offsets.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        ens.offsets[i] = ens.k_c;
        ens.k_c += ens.member_k[i];
    }
    if (timings)
        for (const auto& t : member_times) *timings += t;
    return ens;
}

}  // namespace

Ensemble generate_ensemble(const Dataset& data, std::size_t m, const RunConfig& config, PhaseTimings* timings) {
    RunConfig c = config;
    c.m = m;
    c.k = 2;  // the consensus k is irrelevant here
    return ensemble_resolved(data, m, c.resolved(data.n()), timings);
}

ConsensusGraph build_consensus_graph(const Ensemble& ensemble) {
    const std::size_t m = ensemble.members.size();
    if (m == 0) throw ValueError("consensus graph of an empty ensemble");
    const std::size_t n = ensemble.members.front().size();
    std::vector<std::size_t> used(ensemble.k_c, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& member = ensemble.members[i];
        if (member.size() != n) throw LengthMismatch("ensemble members label different object counts");
        for (int l : member.labels) {
            if (l < 0 || static_cast<std::size_t>(l) >= ensemble.member_k[i]) throw ValueError("member label outside its k");
            ++used[ensemble.offsets[i] + static_cast<std::size_t>(l)];
        }
    }

    ConsensusGraph g;
    g.column_of.assign(ensemble.k_c, -1);
    long cols = 0;
    for (std::size_t j = 0; j < ensemble.k_c; ++j)
        if (used[j] > 0) g.column_of[j] = cols++;

    g.B.rows = n;
    g.B.cols = static_cast<std::size_t>(cols);
    g.B.nnz_per_row = m;
    g.B.col_index.resize(n * m);
    g.B.values.assign(n * m, 1.0);
    // Offsets increase with the member index, so each row comes out sorted.
    for (std::size_t obj = 0; obj < n; ++obj)
        for (std::size_t i = 0; i < m; ++i)
            g.B.col_index[obj * m + i] = static_cast<std::uint32_t>(
                g.column_of[ensemble.offsets[i] + static_cast<std::size_t>(ensemble.members[i].labels[obj])]);
    return g;
}

ClusteringResult run_usenc(const Dataset& data, std::size_t k, const RunConfig& config) {
    RunConfig c = config;
    c.k = k;
    c = c.resolved(data.n());

    ClusteringResult result;
    result.config = c;
    const auto ens = ensemble_resolved(data, c.m, c, &result.timings);

    Stopwatch sw;
    const auto graph = build_consensus_graph(ens);
    if (k > graph.B.cols)
        throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(graph.B.cols) +
                          " clusters in the ensemble");
    Rng rng = make_rng(c.seed, Stream::consensus);
    double eigen = 0.0, disc = 0.0;
    result.labeling = partition_graph(graph.B, k, rng, c, eigen, disc);
    result.timings.consensus = sw.lap();
    return result;
}

}  // namespace uspec
