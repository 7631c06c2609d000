// Acceptance suite. Usage: uspec_acceptance [criterion ...]
// Prints one PASS/FAIL line per criterion; exit status 1 if any failed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "support.hpp"
#include "uspec/affinity.hpp"
#include "uspec/datagen.hpp"
#include "uspec/eval.hpp"
#include "uspec/io.hpp"
#include "uspec/kmeans.hpp"
#include "uspec/pipeline.hpp"
#include "uspec/represent.hpp"
#include "uspec/tcut.hpp"

using namespace uspec;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

// Random points, random representatives and exact K-NN affinity.
SparseAffinity random_instance(std::size_t n, std::size_t p, std::size_t K, std::uint64_t seed) {
    const Dataset data = test::gaussian_mixture(n, 2, 3, 3.0, seed);
    const auto reps = select_random(data, p, seed + 1);
    return build_affinity(data, reps, exact_knn(data, reps, K));
}

// ---- 1 ----------------------------------------------------------------------
Verdict transfer_cut_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    double worst_lambda = 0.0, worst_sine = 0.0;
    std::size_t subspaces = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(50, 200)(rng);
        const std::size_t p = std::uniform_int_distribution<std::size_t>(5, 20)(rng);
        const std::size_t K = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
        const auto B = random_instance(n, p, K, 1000 + static_cast<std::uint64_t>(t));
        const auto prob = reduce(B);
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < p; ++j)
            if (prob.d_r[j] > 0.0) active.push_back(j);
        const auto full = oracle::laplacian_eigen(oracle::bipartite_affinity(B, active));

        const std::size_t q = active.size();
        const auto eig = solve_reduced(prob, q);
        for (std::size_t i = 0; i < q; ++i) {
            const double g = full.values(static_cast<Eigen::Index>(i));
            worst_lambda = std::max(worst_lambda, std::abs(g * (2.0 - g) - eig.lambda[i]));
        }

        // Subspaces are compared at the widest spectral gap among k = 2..5.
        std::size_t k = 0;
        double gap = 0.0;
        for (std::size_t c = 2; c <= std::min<std::size_t>(5, q - 1); ++c) {
            const double g = full.values(static_cast<Eigen::Index>(c)) - full.values(static_cast<Eigen::Index>(c - 1));
            if (g > gap) {
                gap = g;
                k = c;
            }
        }
        if (k == 0 || gap < 1e-3) continue;
        Matrix V(p, k);
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t c = 0; c < k; ++c) V(j, c) = eig.V(j, c);
        const auto emb = lift(B, prob.d_x, V, std::vector<double>(eig.lambda.begin(), eig.lambda.begin() + static_cast<long>(k)));
        const auto ni = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd stacked(ni + static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k));
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) stacked(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = emb.H(i, c);
            for (std::size_t a = 0; a < q; ++a)
                stacked(ni + static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = emb.V(active[a], c);
        }
        worst_sine = std::max(worst_sine, oracle::subspace_sine(stacked, full.vectors.leftCols(static_cast<Eigen::Index>(k))));
        ++subspaces;
    }
    const double secs = seconds_since(t0);
    const bool pass = worst_lambda < 1e-8 && worst_sine < 1e-6 && subspaces >= 25 && secs < 30.0;
    return {pass, "max |lambda - gamma(2-gamma)| " + num(worst_lambda) + " (< 1e-8), max subspace sine " +
                      num(worst_sine) + " (< 1e-6) over " + std::to_string(subspaces) + " gapped instances, " +
                      num(secs, 3) + " s (< 30)"};
}

// ---- 2 ----------------------------------------------------------------------
Verdict knn_recall() {
    const Dataset data = test::gaussian_mixture(10000, 2, 10, 1.0, 2);
    const auto t0 = Clock::now();
    const auto reps = select_hybrid(data, 1000, 0, 3);
    Rng rng(4);
    const auto index = build_rep_index(reps, 50, rng);
    const auto approx = approx_knn_all(data, reps, index, 5);
    const double secs = seconds_since(t0);
    const auto exact = exact_knn(data, reps, 5);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto a = approx.indices(i);
        const std::set<std::uint32_t> truth(exact.indices(i).begin(), exact.indices(i).end());
        for (auto r : a) hits += truth.count(r);
    }
    const double recall = static_cast<double>(hits) / static_cast<double>(data.n() * 5);
    return {recall >= 0.95 && secs < 10.0,
            "mean recall " + num(recall) + " (>= 0.95), " + num(secs, 3) + " s (< 10)"};
}

// ---- 3 ----------------------------------------------------------------------
Verdict exact_degeneration() {
    std::mt19937_64 rng(3);
    std::size_t mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t p = std::uniform_int_distribution<std::size_t>(5, 60)(rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(p, 600)(rng);
        const std::size_t K = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(p - 1, 8))(rng);
        const Dataset data = test::uniform_points(n, 1 + static_cast<std::size_t>(t % 4), 500 + static_cast<std::uint64_t>(t));
        const auto reps = select_random(data, p, static_cast<std::uint64_t>(t));
        Rng irng(static_cast<std::uint64_t>(t));
        const auto index = build_rep_index(reps, p - 1, irng, 1);
        const auto a = approx_knn_all(data, reps, index, K);
        const auto e = exact_knn(data, reps, K);
        for (std::size_t i = 0; i < n; ++i)
            mismatches += !std::equal(a.indices(i).begin(), a.indices(i).end(), e.indices(i).begin());
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatching objects over 100 instances (== 0)"};
}

// ---- 4 ----------------------------------------------------------------------
Verdict scaled_tb() {
    std::vector<double> nmis, cas, times;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto [data, truth] = generate({Family::two_bananas, 20000, -1.0, s});
        RunConfig c;
        c.seed = s;
        const auto t0 = Clock::now();
        const auto r = run_uspec(data, 2, c);
        times.push_back(seconds_since(t0));
        nmis.push_back(nmi(r.labeling, truth));
        cas.push_back(clustering_accuracy(r.labeling, truth));
    }
    const double slowest = *std::max_element(times.begin(), times.end());
    return {mean(nmis) >= 0.90 && mean(cas) >= 0.97 && slowest < 10.0,
            "mean NMI " + num(mean(nmis)) + " (>= 0.90), mean CA " + num(mean(cas)) + " (>= 0.97), slowest run " +
                num(slowest, 3) + " s (< 10)"};
}

// ---- 5 ----------------------------------------------------------------------
Verdict scaled_cc() {
    std::vector<double> cas, km;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto [data, truth] = generate({Family::concentric_circles, 20000, -1.0, s});
        RunConfig c;
        c.seed = s;
        cas.push_back(clustering_accuracy(run_uspec(data, 3, c).labeling, truth));
        Rng rng(s);
        km.push_back(clustering_accuracy(kmeans(data, 3, rng).labels, truth));
    }
    return {mean(cas) >= 0.99 && mean(km) <= 0.70,
            "U-SPEC mean CA " + num(mean(cas)) + " (>= 0.99), k-means mean CA " + num(mean(km)) + " (<= 0.70)"};
}

// ---- 6 ----------------------------------------------------------------------
Verdict ensemble_gain() {
    bool pass = true;
    std::string detail;
    for (auto [family, k] : {std::pair{Family::two_bananas, std::size_t{2}}, std::pair{Family::circles_gaussians, std::size_t{11}}}) {
        std::vector<double> single, ensemble;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto [data, truth] = generate({family, 20000, -1.0, s});
            RunConfig c;
            c.seed = s;
            c.m = 20;
            single.push_back(nmi(run_uspec(data, k, c).labeling, truth));
            ensemble.push_back(nmi(run_usenc(data, k, c).labeling, truth));
        }
        pass = pass && mean(ensemble) >= mean(single);
        if (!detail.empty()) detail += "; ";
        detail += to_string(family) + " U-SENC " + num(mean(ensemble)) + " vs U-SPEC " + num(mean(single));
    }
    return {pass, "mean NMI " + detail + " (U-SENC >= U-SPEC)"};
}

// ---- 7 ----------------------------------------------------------------------
Verdict sparsity() {
    std::size_t graphs = 0, bad = 0;
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(500, 5000)(rng);
        const std::size_t p = std::uniform_int_distribution<std::size_t>(20, 200)(rng);
        const std::size_t K = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
        const Dataset data = test::gaussian_mixture(n, 1 + static_cast<std::size_t>(t % 3), 5, 1.0, static_cast<std::uint64_t>(t));
        const auto reps = select_hybrid(data, p, std::min(n, 10 * p), static_cast<std::uint64_t>(t));
        Rng irng(static_cast<std::uint64_t>(t));
        const auto index = build_rep_index(reps, std::min(10 * K, p - 1), irng);
        for (const auto& lists : {approx_knn_all(data, reps, index, K), exact_knn(data, reps, K)}) {
            const auto B = build_affinity(data, reps, lists);
            ++graphs;
            bad += B.nnz() != n * K;
            for (double v : B.values) bad += !(v > 0.0);
        }
    }
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset data = test::gaussian_mixture(2000, 2, 6, 1.0, 70 + s);
        RunConfig c;
        c.p = 100;
        c.seed = s;
        c.k_min = 5;
        c.k_max = 30;
        const std::size_t m = 1 + s * 3;
        const auto g = build_consensus_graph(generate_ensemble(data, m, c));
        ++graphs;
        for (std::size_t i = 0; i < g.B.rows; ++i) {
            double sum = 0.0;
            for (double v : g.B.row_values(i)) sum += v;
            bad += sum != static_cast<double>(m);
        }
    }
    return {bad == 0, std::to_string(graphs) + " graphs checked, " + std::to_string(bad) + " violations (== 0)"};
}

// ---- 8 ----------------------------------------------------------------------
Verdict metric_oracles() {
    std::mt19937_64 rng(8);
    auto labels = [&](std::size_t n, int k) {
        std::vector<int> v(n);
        std::uniform_int_distribution<int> u(0, k - 1);
        for (auto& x : v) x = u(rng);
        return v;
    };
    auto permute = [&](std::vector<int> v) {
        std::vector<int> perm(static_cast<std::size_t>(*std::max_element(v.begin(), v.end()) + 1));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (auto& x : v) x = perm[static_cast<std::size_t>(x)];
        return v;
    };
    std::size_t ca_bad = 0, nmi_bad = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(10, 300)(rng);
        const int kp = std::uniform_int_distribution<int>(1, 6)(rng);
        const int kt = std::uniform_int_distribution<int>(1, 6)(rng);
        const auto a = labels(n, kp), b = labels(n, kt);
        const auto la = Labeling::from_labels(a), lb = Labeling::from_labels(b);
        ca_bad += std::abs(clustering_accuracy(la, lb) - oracle::brute_force_accuracy(a, b)) > 1e-12;

        // Identity, symmetry and relabelling invariance.
        nmi_bad += std::abs(nmi(la, Labeling::from_labels(permute(a))) - 1.0) > 1e-12;
        nmi_bad += std::abs(nmi(la, lb) - nmi(lb, la)) > 1e-12;
        nmi_bad += std::abs(nmi(la, lb) - nmi(Labeling::from_labels(permute(a)), Labeling::from_labels(permute(b)))) > 1e-12;
    }
    // Independence: a product partition has zero mutual information.
    for (int ka = 2; ka <= 6; ++ka)
        for (int kb = 2; kb <= 6; ++kb) {
            std::vector<int> a, b;
            for (int i = 0; i < ka; ++i)
                for (int j = 0; j < kb; ++j)
                    for (int r = 0; r < 3; ++r) {
                        a.push_back(i);
                        b.push_back(j);
                    }
            nmi_bad += nmi(Labeling::from_labels(a), Labeling::from_labels(b)) > 1e-12;
        }
    return {ca_bad == 0 && nmi_bad == 0, std::to_string(ca_bad) + " CA mismatches vs brute force over 200 pairs, " +
                                              std::to_string(nmi_bad) + " NMI property violations (both == 0)"};
}

// ---- 9 ----------------------------------------------------------------------
Verdict scaling() {
    const Dataset data = test::uniform_points(100000, 2, 9);
    auto median_time = [&](std::size_t p) {
        const auto reps = select_random(data, p, 10);
        std::vector<double> t;
        for (int r = 0; r < 3; ++r) {
            const auto t0 = Clock::now();
            Rng rng(11);
            const auto index = build_rep_index(reps, 50, rng);
            const auto B = build_affinity(data, reps, approx_knn_all(data, reps, index, 5));
            t.push_back(seconds_since(t0));
        }
        std::sort(t.begin(), t.end());
        return t[1];
    };
    const double small = median_time(400);
    const double large = median_time(1600);
    const double ratio = large / small;
    return {ratio >= 1.3 && ratio <= 3.0, "time(p=1600) / time(p=400) = " + num(large, 3) + " s / " + num(small, 3) +
                                              " s = " + num(ratio, 3) + " (in [1.3, 3.0])"};
}

// ---- 10 ---------------------------------------------------------------------
Verdict cli_determinism() {
    test::TempDir dir;
    const auto data = (dir.path / "cg.bin").string();
    const auto [d, l] = generate({Family::circles_gaussians, 6000, -1.0, 10});
    save_dataset(d, data, DataFormat::f64_binary);
    const std::string cli = USPEC_CLI_PATH;

    struct Pipeline {
        std::string name, args;
    };
    const std::vector<Pipeline> pipelines = {
        {"uspec", "--k 11 --p 300"},
        {"uspec-exact-kmeans", "--k 11 --p 200 --select kmeans --knn exact"},
        {"uspec-random", "--k 11 --p 300 --select random --Kn 7"},
        {"usenc", "--algo usenc --k 11 --p 200 --m 6 --kmin 12 --kmax 30"},
    };
    std::size_t runs = 0, differing = 0, failures = 0;
    for (const auto& p : pipelines) {
        std::string reference;
        for (const char* threads : {"1", "1", "2", "4"}) {
            const auto out = (dir.path / (p.name + "_" + threads + "_" + std::to_string(runs) + ".labels")).string();
            const std::string cmd = cli + " -q cluster --in " + data + " " + p.args + " --seed 77 --threads " + threads +
                                    " --out " + out + " > /dev/null";
            ++runs;
            if (std::system(cmd.c_str()) != 0) {
                ++failures;
                continue;
            }
            const auto text = test::read_file(out);
            if (reference.empty()) reference = text;
            differing += text != reference;
        }
        const auto env_out = (dir.path / (p.name + "_env.labels")).string();
        const std::string cmd = "CLUSTER_THREADS=3 " + cli + " -q cluster --in " + data + " " + p.args +
                                " --seed 77 --threads 1 --out " + env_out + " > /dev/null";
        ++runs;
        if (std::system(cmd.c_str()) != 0) ++failures;
        else differing += test::read_file(env_out) != reference;
    }
    return {failures == 0 && differing == 0, std::to_string(runs) + " CLI runs over " + std::to_string(pipelines.size()) +
                                                 " pipelines and thread counts 1, 2, 3, 4: " + std::to_string(differing) +
                                                 " differing label files, " + std::to_string(failures) + " failed runs"};
}

struct Criterion {
    const char* title;
    std::function<Verdict()> check;
};

const std::map<int, Criterion>& criteria() {
    static const std::map<int, Criterion> all = {
        {1, {"transfer-cut equivalence oracle", transfer_cut_oracle}},
        {2, {"approximate KNN recall", knn_recall}},
        {3, {"exactness degeneration", exact_degeneration}},
        {4, {"scaled two_bananas accuracy", scaled_tb}},
        {5, {"scaled concentric_circles accuracy", scaled_cc}},
        {6, {"ensemble gain", ensemble_gain}},
        {7, {"sparsity exactness", sparsity}},
        {8, {"metric oracles", metric_oracles}},
        {9, {"affinity scaling in p", scaling}},
        {10, {"CLI determinism", cli_determinism}},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [id, c] : criteria()) selected.push_back(id);

    set_quiet(true);
    int failed = 0;
    for (int id : selected) {
        const auto it = criteria().find(id);
        if (it == criteria().end()) {
            std::cerr << "unknown criterion " << id << '\n';
            return 2;
        }
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = it->second.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << it->second.title << "): " << v.detail
                  << "  [" << num(seconds_since(t0), 3) << " s]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
