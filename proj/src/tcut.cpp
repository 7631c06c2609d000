#include "uspec/tcut.hpp"

#include <lapacke.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "uspec/kernels.hpp"

extern "C" void openblas_set_num_threads(int);

namespace uspec {

TransferCutProblem reduce(const SparseAffinity& B) {
    B.validate();
    TransferCutProblem problem;
    problem.d_x.resize(B.rows);
    std::vector<double> inv_dx(B.rows);
    for (std::size_t i = 0; i < B.rows; ++i) {
        double s = 0.0;
        for (double v : B.row_values(i)) s += v;
        if (!(s > 0.0)) throw DegenerateGraph("row " + std::to_string(i) + " of the cross-affinity matrix is all zero");
        problem.d_x[i] = s;
        inv_dx[i] = 1.0 / s;
    }

    Matrix E = kernels::parallel::cross_gram(B, inv_dx);
    const std::size_t p = B.cols;
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            const double avg = 0.5 * (E(a, b) + E(b, a));
            E(a, b) = avg;
            E(b, a) = avg;
        }
    }
    problem.d_r.assign(p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        double s = 0.0;
        for (double v : E.row(a)) s += v;
        problem.d_r[a] = s;
    }
    problem.E_R = std::move(E);
    return problem;
}

ReducedEigen solve_reduced(const TransferCutProblem& problem, std::size_t k) {
    const std::size_t p = problem.E_R.rows;
    if (k < 1 || k > p) throw ValueError("solve_reduced: need 1 <= k <= p (k=" + std::to_string(k) + ", p=" + std::to_string(p) + ")");

    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < p; ++j)
        if (problem.d_r[j] > 0.0) active.push_back(j);
    const std::size_t q = active.size();
    if (k > q)
        throw ValueError("solve_reduced: k = " + std::to_string(k) + " exceeds the " + std::to_string(q) +
                         " column nodes with nonzero degree");

    std::vector<double> inv_sqrt(q);
    for (std::size_t a = 0; a < q; ++a) inv_sqrt[a] = 1.0 / std::sqrt(problem.d_r[active[a]]);
    std::vector<double> S(q * q);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b) S[a * q + b] = problem.E_R(active[a], active[b]) * inv_sqrt[a] * inv_sqrt[b];

    // Largest k eigenpairs of S.
    openblas_set_num_threads(1);
    const auto n = static_cast<lapack_int>(q);
    const auto kk = static_cast<lapack_int>(k);
    lapack_int found = 0;
    std::vector<double> mu(q);
    std::vector<double> W(q * k);
    std::vector<lapack_int> support(2 * k);
    const lapack_int info = LAPACKE_dsyevr(LAPACK_ROW_MAJOR, 'V', 'I', 'U', n, S.data(), n, 0.0, 0.0, n - kk + 1, n,
                                           LAPACKE_dlamch('S'), &found, mu.data(), W.data(), kk, support.data());
    if (info != 0 || found != kk)
        throw EigenFailure("symmetric eigensolver failed (info=" + std::to_string(info) + ")");

    ReducedEigen out;
    out.lambda.resize(k);
    out.V = Matrix(p, k);
    for (std::size_t c = 0; c < k; ++c) {
        // Descending mu gives ascending lambda.
        const std::size_t src = k - 1 - c;
        out.lambda[c] = std::clamp(1.0 - mu[src], 0.0, kLambdaCeiling);
        std::size_t arg = 0;
        double big = -1.0;
        for (std::size_t a = 0; a < q; ++a) {
            const double v = W[a * k + src] * inv_sqrt[a];
            out.V(active[a], c) = v;
            if (std::abs(v) > big) {
                big = std::abs(v);
                arg = active[a];
            }
        }
        if (out.V(arg, c) < 0.0)
            for (std::size_t j = 0; j < p; ++j) out.V(j, c) = -out.V(j, c);
    }
    return out;
}

SpectralEmbedding lift(const SparseAffinity& B, std::span<const double> d_x, Matrix V, std::vector<double> lambda) {
    if (d_x.size() != B.rows) throw LengthMismatch("lift: d_x length differs from the row count of B");
    if (V.rows != B.cols || V.cols != lambda.size()) throw DimensionMismatch("lift: eigenvector shape mismatch");
    SpectralEmbedding emb;
    emb.eigvals_full.resize(lambda.size());
    std::vector<double> scale(lambda.size());
    for (std::size_t c = 0; c < lambda.size(); ++c) {
        if (!(lambda[c] < 1.0) || lambda[c] < 0.0) throw ValueError("lift: eigenvalue outside [0, 1)");
        const double root = std::sqrt(1.0 - lambda[c]);
        emb.eigvals_full[c] = 1.0 - root;
        scale[c] = 1.0 / (1.0 - emb.eigvals_full[c]);
    }
    std::vector<double> inv_dx(d_x.size());
    for (std::size_t i = 0; i < d_x.size(); ++i) inv_dx[i] = 1.0 / d_x[i];
    emb.H = kernels::parallel::lift(B, inv_dx, V, scale);
    emb.V = std::move(V);
    emb.eigvals_reduced = std::move(lambda);
    return emb;
}

Labeling discretize(const Matrix& H, std::size_t k, Rng& rng, const KMeansOptions& options) {
    const Dataset rows(H);
    return kmeans(rows, k, rng, options).labels;
}

void normalize_rows(Matrix& X) {
    for (std::size_t i = 0; i < X.rows; ++i) {
        auto row = X.row(i);
        double ss = 0.0;
        for (double v : row) ss += v * v;
        if (ss == 0.0) continue;
        const double inv = 1.0 / std::sqrt(ss);
        for (auto& v : row) v *= inv;
    }
}

TcutResult tcut(const SparseAffinity& B, std::size_t k, Rng& rng, const TcutOptions& options) {
    using clock = std::chrono::steady_clock;
    if (k < 1) throw ValueError("tcut: k must be >= 1");
    const auto t0 = clock::now();
    const auto problem = reduce(B);
    auto eig = solve_reduced(problem, k);
    TcutResult result;
    result.embedding = lift(B, problem.d_x, std::move(eig.V), std::move(eig.lambda));
    const auto t1 = clock::now();
    if (!options.drop_trivial && !options.row_normalize) {
        result.labels = discretize(result.embedding.H, k, rng, options.kmeans);
    } else {
        const Matrix& H = result.embedding.H;
        const std::size_t skip = options.drop_trivial && k >= 2 ? 1 : 0;
        Matrix X(H.rows, H.cols - skip);
        for (std::size_t i = 0; i < H.rows; ++i)
            std::copy(H.row(i).begin() + static_cast<long>(skip), H.row(i).end(), X.row(i).begin());
        if (options.row_normalize) normalize_rows(X);
        result.labels = discretize(X, k, rng, options.kmeans);
    }
    result.eigen_seconds = std::chrono::duration<double>(t1 - t0).count();
    result.discretize_seconds = std::chrono::duration<double>(clock::now() - t1).count();
    return result;
}

}  // namespace uspec
