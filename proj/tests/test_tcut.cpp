#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "uspec/eval.hpp"
#include "uspec/tcut.hpp"

using namespace uspec;

namespace {

SparseAffinity sparse(std::size_t cols, const std::vector<std::vector<std::pair<std::uint32_t, double>>>& rows) {
    SparseAffinity B;
    B.rows = rows.size();
    B.cols = cols;
    B.nnz_per_row = rows.front().size();
    for (const auto& r : rows)
        for (const auto& [c, v] : r) {
            B.col_index.push_back(c);
            B.values.push_back(v);
        }
    return B;
}

// Random N x p affinity with K entries per row.
SparseAffinity random_affinity(std::size_t n, std::size_t p, std::size_t K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(0.05, 1.0);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Row i always touches column i mod p, so no column is isolated once n >= p.
        std::vector<std::uint32_t> cols(p);
        std::iota(cols.begin(), cols.end(), 0);
        std::swap(cols[0], cols[i % p]);
        std::shuffle(cols.begin() + 1, cols.end(), rng);
        cols.resize(K);
        std::sort(cols.begin(), cols.end());
        for (auto c : cols) rows[i].push_back({c, val(rng)});
    }
    return sparse(p, rows);
}

Matrix identity_embedding(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("reduce examples") {
    const auto I = sparse(3, {{{0, 1.0}}, {{1, 1.0}}, {{2, 1.0}}});
    const auto pI = reduce(I);
    CHECK(pI.E_R == identity_embedding(3));
    CHECK(pI.d_x == std::vector<double>{1, 1, 1});

    const auto col = sparse(1, {{{0, 1.0}}, {{0, 1.0}}});
    const auto pc = reduce(col);
    CHECK(pc.E_R.values == std::vector<double>{2.0});
    CHECK(pc.d_r == std::vector<double>{2.0});

    const auto B = random_affinity(20, 5, 3, 1);
    const auto prob = reduce(B);
    const Eigen::MatrixXd E = oracle::reduced_affinity(B);
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) {
            CHECK(std::abs(prob.E_R(a, b) - E(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) < 1e-12);
            CHECK(prob.E_R(a, b) == prob.E_R(b, a));
        }

    auto zero = sparse(2, {{{0, 1.0}}, {{1, 0.0}}});
    CHECK_THROWS_AS(reduce(zero), DegenerateGraph);
}

TEST_CASE("solve_reduced on a connected graph") {
    const auto B = random_affinity(60, 8, 4, 2);
    const auto prob = reduce(B);
    const auto eig = solve_reduced(prob, 4);
    CHECK(std::abs(eig.lambda[0]) < 1e-12);
    for (std::size_t j = 1; j < 8; ++j) CHECK(eig.V(j, 0) == doctest::Approx(eig.V(0, 0)).epsilon(1e-9));
    CHECK_THROWS_AS(solve_reduced(prob, 9), ValueError);
}

TEST_CASE("solve_reduced on two components") {
    // Objects 0-2 touch reps {0,1}, objects 3-5 touch reps {2,3}.
    const auto B = sparse(4, {{{0, 1.0}, {1, 0.5}},
                              {{0, 0.3}, {1, 1.0}},
                              {{0, 0.7}, {1, 0.7}},
                              {{2, 1.0}, {3, 0.2}},
                              {{2, 0.4}, {3, 1.0}},
                              {{2, 0.9}, {3, 0.6}}});
    const auto eig = solve_reduced(reduce(B), 3);
    CHECK(std::abs(eig.lambda[0]) < 1e-12);
    CHECK(std::abs(eig.lambda[1]) < 1e-12);
    CHECK(eig.lambda[2] > 1e-3);

    Rng rng(1);
    const auto res = tcut(B, 2, rng);
    const auto& l = res.labels.labels;
    CHECK(l[0] == l[1]);
    CHECK(l[1] == l[2]);
    CHECK(l[3] == l[4]);
    CHECK(l[4] == l[5]);
    CHECK(l[0] != l[3]);
}

TEST_CASE("reduced eigenpairs match a dense generalized solver and satisfy the invariants") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        const std::size_t p = 5 + s % 16;
        const auto B = random_affinity(40 + 3 * s, p, 2 + s % 3, 100 + s);
        const auto prob = reduce(B);
        const std::size_t k = 1 + s % p;
        const auto eig = solve_reduced(prob, k);
        const auto ref = oracle::laplacian_eigen(oracle::reduced_affinity(B));
        for (std::size_t c = 0; c < k; ++c) {
            CHECK(std::abs(eig.lambda[c] - std::max(0.0, ref.values(static_cast<Eigen::Index>(c)))) < 1e-10);
            if (c > 0) CHECK(eig.lambda[c] >= eig.lambda[c - 1]);
            CHECK(eig.lambda[c] < 1.0);
        }
        // D_R-orthonormal columns.
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                double dot = 0.0;
                for (std::size_t j = 0; j < p; ++j) dot += eig.V(j, a) * prob.d_r[j] * eig.V(j, b);
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
            }
        // Sign convention.
        for (std::size_t c = 0; c < k; ++c) {
            double big = 0.0;
            for (std::size_t j = 0; j < p; ++j)
                if (std::abs(eig.V(j, c)) > std::abs(big)) big = eig.V(j, c);
            CHECK(big > 0.0);
        }
        const auto emb = lift(B, prob.d_x, eig.V, eig.lambda);
        for (std::size_t c = 0; c < k; ++c) {
            const double g = emb.eigvals_full[c];
            CHECK(std::abs(g * (2.0 - g) - emb.eigvals_reduced[c]) < 1e-12);
        }
    }
}

TEST_CASE("lift with lambda = 0 is the transition product") {
    const auto B = random_affinity(30, 6, 3, 7);
    const auto prob = reduce(B);
    Matrix V(6, 1);
    for (std::size_t j = 0; j < 6; ++j) V(j, 0) = static_cast<double>(j) - 2.5;
    const auto emb = lift(B, prob.d_x, V, {0.0});
    CHECK(emb.eigvals_full[0] == 0.0);
    for (std::size_t i = 0; i < 30; ++i) {
        double tv = 0.0;
        for (std::size_t a = 0; a < 3; ++a) tv += B.row_values(i)[a] * V(B.row_cols(i)[a], 0);
        CHECK(emb.H(i, 0) == doctest::Approx(tv / prob.d_x[i]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(lift(B, prob.d_x, V, {1.0}), ValueError);
}

TEST_CASE("lifted embedding spans the full bipartite eigenvectors") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const std::size_t p = 6 + s;
        const auto B = random_affinity(50 + 10 * s, p, 3, 300 + s);
        const auto prob = reduce(B);
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < p; ++j)
            if (prob.d_r[j] > 0.0) active.push_back(j);
        const auto full = oracle::laplacian_eigen(oracle::bipartite_affinity(B, active));
        // Pick k at a clear gap of the full spectrum.
        std::size_t k = 2;
        for (std::size_t c = 2; c < 5; ++c)
            if (full.values(static_cast<Eigen::Index>(c)) - full.values(static_cast<Eigen::Index>(c - 1)) >
                full.values(static_cast<Eigen::Index>(k)) - full.values(static_cast<Eigen::Index>(k - 1)))
                k = c;
        const auto eig = solve_reduced(prob, k);
        const auto emb = lift(B, prob.d_x, eig.V, eig.lambda);
        const auto n = static_cast<Eigen::Index>(B.rows);
        const auto q = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd stacked(n + q, static_cast<Eigen::Index>(k));
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c) {
            for (Eigen::Index i = 0; i < n; ++i) stacked(i, c) = emb.H(static_cast<std::size_t>(i), static_cast<std::size_t>(c));
            for (Eigen::Index a = 0; a < q; ++a) stacked(n + a, c) = emb.V(active[static_cast<std::size_t>(a)], static_cast<std::size_t>(c));
            const double g = full.values(c);
            CHECK(std::abs(g * (2.0 - g) - emb.eigvals_reduced[static_cast<std::size_t>(c)]) < 1e-8);
        }
        CHECK(oracle::subspace_sine(stacked, full.vectors.leftCols(static_cast<Eigen::Index>(k))) < 1e-6);
    }
}

TEST_CASE("isolated representative columns get zero eigenvector entries") {
    const auto B = sparse(4, {{{0, 1.0}, {1, 0.5}}, {{0, 0.2}, {1, 1.0}}, {{1, 0.3}, {3, 0.9}}, {{0, 0.6}, {3, 1.0}}});
    const auto prob = reduce(B);
    CHECK(prob.d_r[2] == 0.0);
    const auto eig = solve_reduced(prob, 3);
    for (std::size_t c = 0; c < 3; ++c) CHECK(eig.V(2, c) == 0.0);
    CHECK_THROWS_AS(solve_reduced(prob, 4), ValueError);
}

TEST_CASE("discretize examples") {
    Matrix H(6, 2);
    for (std::size_t i = 0; i < 6; ++i) {
        H(i, 0) = i < 3 ? 1.0 : -1.0;
        H(i, 1) = 0.25;
    }
    Rng rng(3);
    const auto l = discretize(H, 2, rng);
    CHECK(l.labels[0] == l.labels[2]);
    CHECK(l.labels[3] == l.labels[5]);
    CHECK(l.labels[0] != l.labels[3]);
    Rng one(3);
    const auto all = discretize(H, 1, one);
    CHECK(std::all_of(all.labels.begin(), all.labels.end(), [](int v) { return v == 0; }));
    Rng a(9), b(9);
    const Matrix R = test::uniform_points(100, 3, 2).values();
    CHECK(discretize(R, 4, a) == discretize(R, 4, b));
}

TEST_CASE("identity-like graph with k = p puts every object in its own cluster") {
    const auto I = sparse(4, {{{0, 1.0}}, {{1, 1.0}}, {{2, 1.0}}, {{3, 1.0}}});
    Rng rng(2);
    const auto res = tcut(I, 4, rng);
    auto l = res.labels.labels;
    std::sort(l.begin(), l.end());
    CHECK(l == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("scaling B leaves eigenvalues and labels unchanged") {
    const Dataset d = test::gaussian_mixture(400, 2, 3, 0.6, 5);
    const auto reps = select_hybrid(d, 40, 0, 1);
    Rng ri(1);
    const auto idx = build_rep_index(reps, 20, ri);
    const auto B = build_affinity(d, reps, approx_knn_all(d, reps, idx, 4));
    auto scaled = B;
    for (auto& v : scaled.values) v *= 37.5;
    Rng a(4), b(4);
    const auto r1 = tcut(B, 3, a);
    const auto r2 = tcut(scaled, 3, b);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(std::abs(r1.embedding.eigvals_reduced[c] - r2.embedding.eigvals_reduced[c]) < 1e-12);
    CHECK(nmi(r1.labels, r2.labels) == doctest::Approx(1.0));
}

TEST_CASE("tcut labels agree with spectral clustering of the full graph") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Dataset d = test::gaussian_mixture(150, 2, 3, 0.4, 40 + s);
        RepresentativeSet reps = select_random(d, 18, s);
        const auto B = build_affinity(d, reps, exact_knn(d, reps, 3));
        const auto prob = reduce(B);
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < B.cols; ++j)
            if (prob.d_r[j] > 0.0) active.push_back(j);
        const auto full = oracle::laplacian_eigen(oracle::bipartite_affinity(B, active));
        Matrix U(B.rows, 3);
        for (std::size_t i = 0; i < B.rows; ++i)
            for (std::size_t c = 0; c < 3; ++c) U(i, c) = full.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        Rng a(s), b(s);
        const auto ours = tcut(B, 3, a);
        const auto ref = discretize(U, 3, b);
        CHECK(nmi(ours.labels, ref) == doctest::Approx(1.0));
    }
}

TEST_CASE("drop_trivial discards the first embedding column") {
    const Dataset d = test::gaussian_mixture(300, 2, 3, 0.5, 8);
    const auto reps = select_random(d, 30, 2);
    const auto B = build_affinity(d, reps, exact_knn(d, reps, 3));
    Rng a(1);
    TcutOptions opt;
    opt.drop_trivial = true;
    const auto res = tcut(B, 3, a, opt);
    CHECK(res.labels.size() == 300);
    CHECK(res.embedding.H.cols == 3);
}

TEST_CASE("normalize_rows") {
    Matrix X(3, 2);
    X.values = {3, 4, 0, 0, -2, 0};
    normalize_rows(X);
    const std::vector<double> expect{0.6, 0.8, 0, 0, -1, 0};
    for (std::size_t j = 0; j < 6; ++j) CHECK(X.values[j] == doctest::Approx(expect[j]).epsilon(1e-15));
}

TEST_CASE("row normalization discretizes the direction of each embedding row") {
    const Dataset d = test::gaussian_mixture(400, 2, 4, 0.5, 9);
    const auto reps = select_random(d, 40, 3);
    const auto B = build_affinity(d, reps, exact_knn(d, reps, 4));
    TcutOptions opt;
    opt.row_normalize = true;
    Rng a(1), b(1);
    const auto res = tcut(B, 4, a, opt);
    Matrix H = res.embedding.H;
    normalize_rows(H);
    CHECK(res.labels == discretize(H, 4, b));
    // The reported embedding itself is left unscaled.
    Rng c(1);
    CHECK(tcut(B, 4, c).embedding.H.values == res.embedding.H.values);
}
