#pragma once

#include <vector>

#include "uspec/affinity.hpp"
#include "uspec/core.hpp"
#include "uspec/kmeans.hpp"
#include "uspec/rng.hpp"

namespace uspec {

/// Bipartite graph between N objects and p column nodes, reduced to the
/// p-node graph with affinity E_R = B^T D_X^{-1} B.
struct TransferCutProblem {
    std::vector<double> d_x;  // row sums of B
    Matrix E_R;               // p x p, symmetric
    std::vector<double> d_r;  // row sums of E_R; zero for columns no object touches
};

/// First k eigenpairs of the reduced problem L_R v = lambda D_R v and their
/// lift to the object side.
struct SpectralEmbedding {
    std::vector<double> eigvals_reduced;  // lambda, ascending, in [0, 1)
    std::vector<double> eigvals_full;     // gamma = 1 - sqrt(1 - lambda)
    Matrix V;                             // p x k, D_R-orthonormal columns
    Matrix H;                             // N x k, H(:,c) = T v_c / (1 - gamma_c)
};

struct TcutOptions {
    /// Discard the first (trivial) eigenvector before discretization.
    bool drop_trivial = false;
    /// Scale each object row of the embedding to unit length before
    /// discretization. Off by default.
    bool row_normalize = false;
    KMeansOptions kmeans;
};

/// Builds d_x and E_R in O(N K^2). Throws DegenerateGraph on an all-zero row.
TransferCutProblem reduce(const SparseAffinity& B);

struct ReducedEigen {
    std::vector<double> lambda;
    Matrix V;
};

/// Smallest k generalized eigenpairs via the normalized form
/// S = D_R^{-1/2} E_R D_R^{-1/2}: top eigenpairs (mu, w) of S give
/// lambda = 1 - mu and v = D_R^{-1/2} w. Columns with d_r = 0 are left out of
/// S and get zero eigenvector entries. Each column's largest-magnitude entry
/// is made positive.
ReducedEigen solve_reduced(const TransferCutProblem& problem, std::size_t k);

/// Eigenvalues are clamped to [0, 1 - 1e-12].
inline constexpr double kLambdaCeiling = 1.0 - 1e-12;

SpectralEmbedding lift(const SparseAffinity& B, std::span<const double> d_x, Matrix V, std::vector<double> lambda);

/// k-means on the N object rows of the embedding.
Labeling discretize(const Matrix& H, std::size_t k, Rng& rng, const KMeansOptions& options = {});

/// Scales every nonzero row to unit Euclidean length; zero rows stay zero.
void normalize_rows(Matrix& X);

struct TcutResult {
    Labeling labels;
    SpectralEmbedding embedding;
    double eigen_seconds = 0.0;       // reduce + solve_reduced + lift
    double discretize_seconds = 0.0;
};

/// reduce -> solve_reduced -> lift -> discretize.
TcutResult tcut(const SparseAffinity& B, std::size_t k, Rng& rng, const TcutOptions& options = {});

}  // namespace uspec
