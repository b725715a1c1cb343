#include "doctest.h"
#include "oracles.hpp"

#include "fcmsc/errors.hpp"
#include "fcmsc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace fcmsc;

namespace {

/// All-pairs distances by scalar loops, neighbors by full sort.
Matrix brute_force_knn(const Matrix& x, int k, double sigma) {
    const Eigen::Index n = x.cols();
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        std::vector<std::pair<double, Eigen::Index>> cand;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            double d2 = 0.0;
            for (Eigen::Index f = 0; f < x.rows(); ++f) d2 += (x(f, i) - x(f, j)) * (x(f, i) - x(f, j));
            cand.emplace_back(d2, i);
        }
        std::sort(cand.begin(), cand.end());
        for (int t = 0; t < k; ++t) {
            const auto [d2, i] = cand[static_cast<std::size_t>(t)];
            const double v = std::exp(-d2 / (2 * sigma * sigma));
            w(i, j) = std::max(w(i, j), v);
            w(j, i) = std::max(w(j, i), v);
        }
    }
    return w;
}

int components(const Matrix& w) {
    const Eigen::Index n = w.rows();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int count = 0;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        std::vector<Eigen::Index> stack{s};
        comp[static_cast<std::size_t>(s)] = count;
        while (!stack.empty()) {
            const Eigen::Index u = stack.back();
            stack.pop_back();
            for (Eigen::Index v = 0; v < n; ++v)
                if (w(u, v) > 0 && comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = count;
                    stack.push_back(v);
                }
        }
        ++count;
    }
    return count;
}

} // namespace

TEST_CASE("knn_adjacency on two separated triples") {
    Matrix x(2, 6);
    x << 0, 0.1, 0.05, 10, 10.2, 10.1,  //
        0, 0.0, 0.1, 10, 10.0, 10.15;
    const double sigma = 0.3;
    GraphParams p;
    p.k = 2;
    p.sigma = sigma;
    const Matrix w = knn_adjacency(x, p);
    CHECK((w - brute_force_knn(x, 2, sigma)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(w.topRightCorner(3, 3).isZero(0.0));
    CHECK(w.bottomLeftCorner(3, 3).isZero(0.0));

    // Same structure after shuffling the samples.
    const std::vector<int> perm{4, 0, 3, 2, 5, 1};
    Matrix xp(2, 6);
    for (int j = 0; j < 6; ++j) xp.col(j) = x.col(perm[static_cast<std::size_t>(j)]);
    const Matrix wp = knn_adjacency(xp, p);
    CHECK((wp - brute_force_knn(xp, 2, sigma)).cwiseAbs().maxCoeff() < 1e-14);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            if ((perm[static_cast<std::size_t>(a)] < 3) != (perm[static_cast<std::size_t>(b)] < 3))
                CHECK(wp(a, b) == 0.0);
    CHECK(components(wp) == 2);
}

TEST_CASE("knn_adjacency basics") {
    Matrix x(1, 4);
    x << 0, 0, 3, 7;
    GraphParams p;
    p.k = 1;
    p.sigma = 1.0;
    const Matrix w = knn_adjacency(x, p);
    CHECK(w(0, 1) == 1.0);
    CHECK(w == w.transpose());
    CHECK(w.diagonal().isZero(0.0));

    std::mt19937_64 rng(3);
    const Matrix r = oracle::random_matrix(rng, 4, 25);
    const Matrix wa = knn_adjacency(r);
    CHECK(wa == wa.transpose());
    CHECK(wa.minCoeff() >= 0.0);

    p.k = 4;
    CHECK_THROWS_AS(knn_adjacency(x, p), InvalidParameter);
    p.k = 0;
    CHECK_THROWS_AS(knn_adjacency(x, p), InvalidParameter);

    Matrix dup = Matrix::Zero(2, 6);
    dup(0, 5) = 1.0;
    GraphParams ap;
    ap.k = 2;
    CHECK_THROWS_AS(knn_adjacency(dup, ap), DegenerateBandwidth);
}

TEST_CASE("laplacian examples") {
    const ViewGraph z = laplacian(Matrix::Zero(3, 3));
    CHECK(z.l.isZero(0.0));

    Matrix w2(2, 2);
    w2 << 0, 0.7, 0.7, 0;
    const ViewGraph g = laplacian(w2);
    Matrix expect(2, 2);
    expect << 0.7, -0.7, -0.7, 0.7;
    CHECK(g.l == expect);

    Matrix asym = w2;
    asym(0, 1) = 0.8;
    CHECK_THROWS_AS(laplacian(asym), InvalidInput);
}

TEST_CASE("laplacian quadratic form and spectrum") {
    std::mt19937_64 rng(8);
    const Matrix pts = oracle::random_matrix(rng, 3, 12);
    GraphParams p;
    p.k = 3;
    const ViewGraph g = laplacian(knn_adjacency(pts, p));
    for (int t = 0; t < 100; ++t) {
        const Vector x = oracle::random_matrix(rng, 12, 1);
        double sum = 0.0;
        for (int j = 0; j < 12; ++j)
            for (int k = 0; k < 12; ++k) sum += g.w(j, k) * (x(j) - x(k)) * (x(j) - x(k));
        CHECK(std::abs(x.dot(g.l * x) - 0.5 * sum) < 1e-9);
    }
    CHECK((g.l.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((g.l * Vector::Ones(12)).norm() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.l);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("zero eigenvalue multiplicity counts components") {
    std::mt19937_64 rng(9);
    for (int groups : {1, 2, 3, 4}) {
        Matrix pts(2, groups * 4);
        for (int c = 0; c < groups; ++c)
            pts.middleCols(c * 4, 4) =
                oracle::random_matrix(rng, 2, 4, 0.1).colwise() + Vector::Constant(2, 100.0 * c);
        GraphParams p;
        p.k = 3;
        const ViewGraph g = laplacian(knn_adjacency(pts, p));
        Eigen::SelfAdjointEigenSolver<Matrix> es(g.l);
        int zeros = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) zeros += es.eigenvalues()(i) < 1e-9;
        CHECK(components(g.w) == groups);
        CHECK(zeros == groups);
    }
}
