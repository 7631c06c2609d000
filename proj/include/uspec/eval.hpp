#pragma once

#include <string>
#include <vector>

#include "uspec/core.hpp"
#include "uspec/pipeline.hpp"

namespace uspec {

/// Counts of objects per (cluster of a, cluster of b). Only labels that occur
/// get a row or column, in ascending label order.
struct ContingencyTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> counts;  // rows x cols
    std::vector<std::size_t> row_sums;
    std::vector<std::size_t> col_sums;
    std::size_t n = 0;

    std::size_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
};

ContingencyTable contingency(std::span<const int> a, std::span<const int> b);

/// I(a;b) / sqrt(H(a) H(b)), natural logs. When either entropy is zero the
/// score is 1 if the two partitions coincide and 0 otherwise.
double nmi(const Labeling& a, const Labeling& b);

/// Best fraction of objects matched under a one-to-one map from predicted to
/// true clusters (Hungarian assignment on the zero-padded square table).
double clustering_accuracy(const Labeling& pred, const Labeling& truth);

/// Maximum-weight perfect matching on a square matrix; result[r] is the
/// column assigned to row r.
std::vector<std::size_t> max_weight_assignment(const std::vector<long long>& weight, std::size_t n);

struct Summary {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
};

Summary summarize(std::span<const double> values);

/// "mean±std" with two decimals after multiplying by `scale`.
std::string format_mean_std(const Summary& s, double scale = 1.0);

struct RunReport {
    std::size_t runs = 0;
    Summary nmi;
    Summary ca;
    Summary selection, index, affinity, eigen, discretize, consensus, total;
};

RunReport run_report(const std::vector<ClusteringResult>& results, const Labeling& truth);

}  // namespace uspec
