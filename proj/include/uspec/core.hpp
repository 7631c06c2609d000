#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uspec {

// Error hierarchy. Every failure surfaced by the library derives from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct ValueError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct DegenerateGraph : Error { using Error::Error; };
struct EigenFailure : Error { using Error::Error; };

// Non-fatal diagnostics (clamped parameters, degenerate kernel width).
void warn(const std::string& message);
void set_quiet(bool quiet);

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> v);

    std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

/// N objects in d dimensions. Immutable once constructed; every entry is finite.
/// Object ids are the row indices 0..N-1.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(Matrix values);
    Dataset(std::size_t n, std::size_t dim, std::vector<double> values);

    std::size_t n() const { return values_.rows; }
    std::size_t dim() const { return values_.cols; }
    std::span<const double> row(std::size_t i) const { return values_.row(i); }
    const Matrix& values() const { return values_; }

    /// Copy of the listed rows, in the given order.
    Dataset subset(std::span<const std::size_t> rows) const;

private:
    Matrix values_;
};

/// Cluster assignment of N objects into k clusters, ids in [0, k).
struct Labeling {
    std::vector<int> labels;
    int k = 0;

    Labeling() = default;
    Labeling(std::vector<int> l, int num_clusters);
    /// Infers k as max label + 1.
    static Labeling from_labels(std::vector<int> l);

    std::size_t size() const { return labels.size(); }
    bool operator==(const Labeling&) const = default;
};

enum class SelectStrategy { random, kmeans, hybrid };
enum class KnnMode { approx, exact };

std::string to_string(SelectStrategy s);
std::string to_string(KnnMode m);
SelectStrategy parse_select_strategy(const std::string& s);
KnnMode parse_knn_mode(const std::string& s);

/// Parameters shared by the U-SPEC and U-SENC pipelines. A zero p_prime or
/// K_prime means "derive from p or K" (10p and 10K).
struct RunConfig {
    std::size_t p = 1000;
    std::size_t p_prime = 0;
    std::size_t K = 5;
    std::size_t K_prime = 0;
    std::size_t k = 2;
    std::size_t m = 20;
    std::size_t k_min = 20;
    std::size_t k_max = 60;
    std::size_t t_max = 100;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    SelectStrategy select = SelectStrategy::hybrid;
    KnnMode knn = KnnMode::approx;
    bool drop_trivial = false;
    bool row_normalize = false;

    /// Applies p' = min(10p, N), p = min(p, p'), K' = min(10K, p-1) and checks
    /// K <= K' < p <= p' <= N, k >= 2, k <= p, k_min <= k_max, m >= 1.
    RunConfig resolved(std::size_t n) const;
};

/// Sum of squared coordinate differences.
double sq_euclidean(std::span<const double> a, std::span<const double> b);

// Unchecked variant for hot loops; callers guarantee equal lengths.
inline double sq_euclidean_unchecked(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

}  // namespace uspec
