#include "uspec/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>

namespace uspec {

namespace {
std::atomic<bool> g_quiet{false};
}

void warn(const std::string& message) {
    if (!g_quiet.load(std::memory_order_relaxed)) std::clog << "warning: " << message << '\n';
}

void set_quiet(bool quiet) { g_quiet.store(quiet, std::memory_order_relaxed); }

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {
    if (values.size() != r * c) throw DimensionMismatch("matrix storage does not match its shape");
}

Dataset::Dataset(Matrix values) : values_(std::move(values)) {
    if (values_.rows < 1 || values_.cols < 1) throw ValueError("dataset must have n >= 1 and dim >= 1");
    if (!std::all_of(values_.values.begin(), values_.values.end(), [](double x) { return std::isfinite(x); }))
        throw ValueError("dataset contains NaN or Inf");
}

Dataset::Dataset(std::size_t n, std::size_t dim, std::vector<double> values)
    : Dataset(Matrix(n, dim, std::move(values))) {}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= n()) throw ValueError("subset row out of range");
        std::copy_n(row(rows[i]).begin(), dim(), out.row(i).begin());
    }
    return Dataset(std::move(out));
}

Labeling::Labeling(std::vector<int> l, int num_clusters) : labels(std::move(l)), k(num_clusters) {
    for (int v : labels)
        if (v < 0 || v >= k) throw ValueError("label " + std::to_string(v) + " outside [0, " + std::to_string(k) + ")");
}

Labeling Labeling::from_labels(std::vector<int> l) {
    int k = 0;
    for (int v : l) k = std::max(k, v + 1);
    return Labeling(std::move(l), k);
}

std::string to_string(SelectStrategy s) {
    switch (s) {
        case SelectStrategy::random: return "random";
        case SelectStrategy::kmeans: return "kmeans";
        case SelectStrategy::hybrid: return "hybrid";
    }
    return "?";
}

std::string to_string(KnnMode m) { return m == KnnMode::approx ? "approx" : "exact"; }

SelectStrategy parse_select_strategy(const std::string& s) {
    if (s == "random") return SelectStrategy::random;
    if (s == "kmeans") return SelectStrategy::kmeans;
    if (s == "hybrid") return SelectStrategy::hybrid;
    throw ValueError("unknown selection strategy '" + s + "'");
}

KnnMode parse_knn_mode(const std::string& s) {
    if (s == "approx") return KnnMode::approx;
    if (s == "exact") return KnnMode::exact;
    throw ValueError("unknown knn mode '" + s + "'");
}

RunConfig RunConfig::resolved(std::size_t n) const {
    RunConfig c = *this;
    if (n < 1) throw ConfigError("empty dataset");
    if (c.p < 1) throw ConfigError("p must be >= 1");
    if (c.K < 1) throw ConfigError("K must be >= 1");
    if (c.m < 1) throw ConfigError("m must be >= 1");
    if (c.t_max < 1) throw ConfigError("t_max must be >= 1");
    if (!(c.tol >= 0.0)) throw ConfigError("tol must be >= 0");
    if (c.k < 2) throw ConfigError("k must be >= 2");
    if (c.k_min < 2 || c.k_min > c.k_max) throw ConfigError("need 2 <= k_min <= k_max");

    if (c.p_prime == 0) c.p_prime = 10 * c.p;
    if (c.p_prime > n) {
        warn("p' = " + std::to_string(c.p_prime) + " exceeds N = " + std::to_string(n) + "; clamping to N");
        c.p_prime = n;
    }
    if (c.p > c.p_prime) {
        warn("p = " + std::to_string(c.p) + " clamped to " + std::to_string(c.p_prime));
        c.p = c.p_prime;
    }
    if (c.p < 2) throw ConfigError("need at least 2 representatives");
    if (c.K_prime == 0) c.K_prime = 10 * c.K;
    if (c.K_prime >= c.p) c.K_prime = c.p - 1;
    if (c.K > c.K_prime) {
        warn("K = " + std::to_string(c.K) + " clamped to K' = " + std::to_string(c.K_prime));
        c.K = c.K_prime;
    }
    if (c.k > n) throw ConfigError("k = " + std::to_string(c.k) + " exceeds N = " + std::to_string(n));
    if (c.k > c.p) throw ConfigError("k = " + std::to_string(c.k) + " exceeds the representative count p = " + std::to_string(c.p));
    return c;
}

double sq_euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("sq_euclidean: dimension mismatch");
    return sq_euclidean_unchecked(a.data(), b.data(), a.size());
}

}  // namespace uspec
