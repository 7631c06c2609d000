// Serial reference vs OpenMP kernels. Parallel variants take the thread
// count as the benchmark argument.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "uspec/affinity.hpp"
#include "uspec/datagen.hpp"
#include "uspec/kernels.hpp"
#include "uspec/pipeline.hpp"
#include "uspec/represent.hpp"

using namespace uspec;
namespace ks = uspec::kernels::serial;
namespace kp = uspec::kernels::parallel;

namespace {

struct Workload {
    Dataset data;
    RepresentativeSet reps;
    RepClusterIndex index;
    SparseAffinity B;
    std::vector<double> weight;
    Matrix V;
    std::vector<double> scale;

    Workload() : data(make_data()), reps(select_random(data, 1000, 2)) {
        Rng rng(3);
        index = build_rep_index(reps, 50, rng);
        B = build_affinity(data, reps, approx_knn_all(data, reps, index, 5));
        weight.resize(B.rows);
        for (std::size_t i = 0; i < B.rows; ++i) weight[i] = 1.0 / (1.0 + static_cast<double>(i % 7));
        V = Matrix(B.cols, 10);
        for (std::size_t j = 0; j < V.values.size(); ++j) V.values[j] = std::cos(static_cast<double>(j));
        scale.assign(10, 1.5);
    }

    static Dataset make_data() {
        Rng rng(1);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> v(100000 * 4);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = g(rng) + static_cast<double>((i / 4) % 10) * 3.0;
        return Dataset(100000, 4, std::move(v));
    }
};

const Workload& work() {
    static const Workload w;
    return w;
}

struct Threads {
    int saved = kernels::thread_count();
    explicit Threads(int t) { kernels::set_thread_count(t); }
    ~Threads() { kernels::set_thread_count(saved); }
};

Matrix first_rows(const Matrix& m, std::size_t rows) {
    Matrix out(rows, m.cols);
    std::copy(m.values.begin(), m.values.begin() + static_cast<long>(rows * m.cols), out.values.begin());
    return out;
}

void BM_assign_nearest_serial(benchmark::State& state) {
    const auto& w = work();
    const Matrix centers = first_rows(w.reps.reps, 200);
    std::vector<int> labels(w.data.n());
    std::vector<double> dist(w.data.n());
    for (auto _ : state) ks::assign_nearest(w.data.values(), centers, labels, dist);
}

void BM_assign_nearest_parallel(benchmark::State& state) {
    const auto& w = work();
    Threads t(static_cast<int>(state.range(0)));
    const Matrix centers = first_rows(w.reps.reps, 200);
    std::vector<int> labels(w.data.n());
    std::vector<double> dist(w.data.n());
    for (auto _ : state) kp::assign_nearest(w.data.values(), centers, labels, dist);
}

void BM_approx_knn_serial(benchmark::State& state) {
    const auto& w = work();
    for (auto _ : state) benchmark::DoNotOptimize(ks::approx_knn(w.data.values(), w.reps.reps, w.index, 5));
}

void BM_approx_knn_parallel(benchmark::State& state) {
    const auto& w = work();
    Threads t(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kp::approx_knn(w.data.values(), w.reps.reps, w.index, 5));
}

void BM_exact_knn_serial(benchmark::State& state) {
    const auto& w = work();
    const Matrix reps = first_rows(w.reps.reps, 200);
    for (auto _ : state) benchmark::DoNotOptimize(ks::exact_knn(w.data.values(), reps, 5));
}

void BM_exact_knn_parallel(benchmark::State& state) {
    const auto& w = work();
    Threads t(static_cast<int>(state.range(0)));
    const Matrix reps = first_rows(w.reps.reps, 200);
    for (auto _ : state) benchmark::DoNotOptimize(kp::exact_knn(w.data.values(), reps, 5));
}

void BM_cross_gram_serial(benchmark::State& state) {
    const auto& w = work();
    for (auto _ : state) benchmark::DoNotOptimize(ks::cross_gram(w.B, w.weight));
}

void BM_cross_gram_parallel(benchmark::State& state) {
    const auto& w = work();
    Threads t(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kp::cross_gram(w.B, w.weight));
}

void BM_lift_serial(benchmark::State& state) {
    const auto& w = work();
    for (auto _ : state) benchmark::DoNotOptimize(ks::lift(w.B, w.weight, w.V, w.scale));
}

void BM_lift_parallel(benchmark::State& state) {
    const auto& w = work();
    Threads t(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kp::lift(w.B, w.weight, w.V, w.scale));
}

void BM_uspec_two_bananas(benchmark::State& state) {
    static const auto tb = generate({Family::two_bananas, 20000, -1.0, 1});
    Threads t(static_cast<int>(state.range(0)));
    RunConfig c;
    for (auto _ : state) benchmark::DoNotOptimize(run_uspec(tb.first, 2, c));
}

void thread_args(benchmark::internal::Benchmark* b) {
    for (int t : {1, 2, 4, 8}) b->Arg(t);
    b->ArgName("threads")->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_assign_nearest_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_nearest_parallel)->Apply(thread_args);
BENCHMARK(BM_approx_knn_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_approx_knn_parallel)->Apply(thread_args);
BENCHMARK(BM_exact_knn_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_knn_parallel)->Apply(thread_args);
BENCHMARK(BM_cross_gram_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cross_gram_parallel)->Apply(thread_args);
BENCHMARK(BM_lift_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lift_parallel)->Apply(thread_args);
BENCHMARK(BM_uspec_two_bananas)->Apply(thread_args);

BENCHMARK_MAIN();
