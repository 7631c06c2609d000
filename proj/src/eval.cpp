#include "uspec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace uspec {

namespace {

// Dense ids for the labels that occur, ascending.
std::vector<std::size_t> compact(std::span<const int> labels, std::size_t& count) {
    int hi = -1;
    for (int v : labels) {
        if (v < 0) throw ValueError("negative label");
        hi = std::max(hi, v);
    }
    std::vector<long> id(static_cast<std::size_t>(hi + 1), -1);
    for (int v : labels) id[static_cast<std::size_t>(v)] = 0;
    count = 0;
    for (auto& x : id)
        if (x == 0) x = static_cast<long>(count++);
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = static_cast<std::size_t>(id[static_cast<std::size_t>(labels[i])]);
    return out;
}

double entropy(std::span<const std::size_t> sums, double n) {
    double h = 0.0;
    for (std::size_t c : sums) {
        if (c == 0) continue;
        const double q = static_cast<double>(c) / n;
        h -= q * std::log(q);
    }
    return h;
}

}  // namespace

ContingencyTable contingency(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw LengthMismatch("labelings have different lengths");
    if (a.empty()) throw ValueError("empty labeling");
    ContingencyTable t;
    const auto ia = compact(a, t.rows);
    const auto ib = compact(b, t.cols);
    t.n = a.size();
    t.counts.assign(t.rows * t.cols, 0);
    t.row_sums.assign(t.rows, 0);
    t.col_sums.assign(t.cols, 0);
    for (std::size_t i = 0; i < t.n; ++i) {
        ++t.counts[ia[i] * t.cols + ib[i]];
        ++t.row_sums[ia[i]];
        ++t.col_sums[ib[i]];
    }
    return t;
}

double nmi(const Labeling& a, const Labeling& b) {
    const auto t = contingency(a.labels, b.labels);
    const double n = static_cast<double>(t.n);
    const double ha = entropy(t.row_sums, n);
    const double hb = entropy(t.col_sums, n);
    if (ha == 0.0 || hb == 0.0) {
        // Identical partitions have exactly one nonzero cell per row and column.
        const bool same = t.rows == t.cols &&
                          std::count_if(t.counts.begin(), t.counts.end(), [](std::size_t c) { return c > 0; }) ==
                              static_cast<long>(t.rows);
        return same ? 1.0 : 0.0;
    }
    double mi = 0.0;
    for (std::size_t r = 0; r < t.rows; ++r) {
        for (std::size_t c = 0; c < t.cols; ++c) {
            const std::size_t nij = t.at(r, c);
            if (nij == 0) continue;
            const double q = static_cast<double>(nij) / n;
            mi += q * std::log(n * static_cast<double>(nij) /
                               (static_cast<double>(t.row_sums[r]) * static_cast<double>(t.col_sums[c])));
        }
    }
    return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

std::vector<std::size_t> max_weight_assignment(const std::vector<long long>& weight, std::size_t n) {
    if (weight.size() != n * n) throw DimensionMismatch("assignment matrix must be n x n");
    if (n == 0) return {};
    // Shortest augmenting path with potentials, minimizing -weight. 1-based.
    constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t r = 1; r <= n; ++r) {
        match[0] = r;
        std::size_t col = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col] = 1;
            const std::size_t row = match[col];
            long long delta = kInf;
            std::size_t next = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const long long cur = -weight[(row - 1) * n + (j - 1)] - u[row] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = col;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    next = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col = next;
        } while (match[col] != 0);
        do {
            const std::size_t prev = way[col];
            match[col] = match[prev];
            col = prev;
        } while (col != 0);
    }
    std::vector<std::size_t> result(n);
    for (std::size_t j = 1; j <= n; ++j) result[match[j] - 1] = j - 1;
    return result;
}

double clustering_accuracy(const Labeling& pred, const Labeling& truth) {
    const auto t = contingency(pred.labels, truth.labels);
    const std::size_t n = std::max(t.rows, t.cols);
    std::vector<long long> w(n * n, 0);
    for (std::size_t r = 0; r < t.rows; ++r)
        for (std::size_t c = 0; c < t.cols; ++c) w[r * n + c] = static_cast<long long>(t.at(r, c));
    const auto assign = max_weight_assignment(w, n);
    long long matched = 0;
    for (std::size_t r = 0; r < n; ++r) matched += w[r * n + assign[r]];
    return static_cast<double>(matched) / static_cast<double>(t.n);
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw ValueError("summary of no values");
    Summary s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::string format_mean_std(const Summary& s, double scale) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f±%.2f", s.mean * scale, s.std * scale);
    return buf;
}

RunReport run_report(const std::vector<ClusteringResult>& results, const Labeling& truth) {
    if (results.empty()) throw ValueError("run_report: no results");
    RunReport rep;
    rep.runs = results.size();
    std::vector<double> nmis, cas, sel, idx, aff, eig, disc, cons, tot;
    for (const auto& r : results) {
        nmis.push_back(nmi(r.labeling, truth));
        cas.push_back(clustering_accuracy(r.labeling, truth));
        sel.push_back(r.timings.selection);
        idx.push_back(r.timings.index);
        aff.push_back(r.timings.affinity);
        eig.push_back(r.timings.eigen);
        disc.push_back(r.timings.discretize);
        cons.push_back(r.timings.consensus);
        tot.push_back(r.timings.total());
    }
    rep.nmi = summarize(nmis);
    rep.ca = summarize(cas);
    rep.selection = summarize(sel);
    rep.index = summarize(idx);
    rep.affinity = summarize(aff);
    rep.eigen = summarize(eig);
    rep.discretize = summarize(disc);
    rep.consensus = summarize(cons);
    rep.total = summarize(tot);
    return rep;
}

}  // namespace uspec
