#include "doctest.h"
#include "oracles.hpp"

#include "fcmsc/errors.hpp"
#include "fcmsc/linalg.hpp"

#include <random>

using namespace fcmsc;

TEST_CASE("l21_norm") {
    CHECK(l21_norm(Matrix::Zero(3, 4)) == 0.0);
    Matrix c(2, 1);
    c << 3, 4;
    CHECK(l21_norm(c) == doctest::Approx(5.0));

    std::mt19937_64 rng(1);
    const Matrix m = oracle::random_matrix(rng, 4, 6);
    CHECK(std::abs(l21_norm(m) - oracle::l21(m)) < 1e-12);

    Matrix bad = m;
    bad(1, 2) = std::nan("");
    CHECK_THROWS_AS(l21_norm(bad), InvalidInput);
}

TEST_CASE("nuclear_norm") {
    CHECK(nuclear_norm(Matrix::Identity(3, 3)) == doctest::Approx(3.0));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2;
    CHECK(nuclear_norm(d) == doctest::Approx(2.0));

    std::mt19937_64 rng(2);
    const Matrix m = oracle::random_matrix(rng, 5, 5);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
    const double trace_sqrt = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    CHECK(std::abs(nuclear_norm(m) - trace_sqrt) < 1e-9);
}

TEST_CASE("col_l21_prox examples") {
    Matrix t(2, 1);
    t << 3, 4;
    const Matrix e = col_l21_prox(t, 1.0);
    CHECK(e(0, 0) == doctest::Approx(2.4).epsilon(1e-14));
    CHECK(e(1, 0) == doctest::Approx(3.2).epsilon(1e-14));
    const Matrix ls = oracle::l21_prox_line_search(t, 1.0);
    CHECK((e - ls).cwiseAbs().maxCoeff() < 1e-6);

    Matrix small(2, 1);
    small << 0.3, 0.4;
    CHECK(col_l21_prox(small, 1.0).isZero(0.0));
    CHECK(col_l21_prox(Matrix::Zero(3, 3), 0.7).isZero(0.0));

    CHECK_THROWS_AS(col_l21_prox(t, 0.0), InvalidParameter);
    CHECK_THROWS_AS(col_l21_prox(t, -1.0), InvalidParameter);
}

TEST_CASE("col_l21_prox properties") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> utau(1e-3, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix t = oracle::random_matrix(rng, 6, 8);
        const double tau = utau(rng);
        const Matrix e = col_l21_prox(t, tau);
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            CHECK(e.col(j).norm() <= t.col(j).norm() + 1e-15);
            const double s = t.col(j).dot(e.col(j)) / t.col(j).squaredNorm();
            CHECK(s >= 0.0);
            CHECK((e.col(j) - s * t.col(j)).norm() < 1e-12);
        }
        const double best = oracle::l21_prox_objective(e, t, tau);
        std::normal_distribution<double> g(0.0, 0.05);
        for (int p = 0; p < 1000; ++p) {
            Matrix q = e;
            for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] += g(rng);
            CHECK(best <= oracle::l21_prox_objective(q, t, tau) + 1e-12);
        }
    }
}

TEST_CASE("svt examples") {
    Matrix t = Matrix::Zero(2, 2);
    t(0, 0) = 3;
    t(1, 1) = 1;
    const Matrix j = svt(t, 2.0);
    Matrix expect = Matrix::Zero(2, 2);
    expect(0, 0) = 1;
    CHECK((j - expect).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix scan = oracle::svt_spectrum_scan(t, 2.0);
    CHECK(std::abs(oracle::svt_objective(j, t, 2.0) - oracle::svt_objective(scan, t, 2.0)) <
          1e-6);

    CHECK(svt(t, 3.5).isZero(0.0));

    std::mt19937_64 rng(4);
    const Matrix r = oracle::random_matrix(rng, 5, 7);
    CHECK((svt(r, 1e-12) - r).norm() < 1e-9);
    CHECK_THROWS_AS(svt(r, 0.0), InvalidParameter);
}

TEST_CASE("svt properties") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix t = oracle::random_matrix(rng, 7, 5);
        const double tau = 0.5 + trial * 0.2;
        const Matrix j = svt(t, tau);
        CHECK(nuclear_norm(j) <= nuclear_norm(t) + 1e-12);
        Eigen::JacobiSVD<Matrix> st(t), sj(j);
        for (Eigen::Index i = 0; i < st.singularValues().size(); ++i)
            CHECK(std::abs(sj.singularValues()(i) -
                           std::max(st.singularValues()(i) - tau, 0.0)) < 1e-8);
    }
}

TEST_CASE("solve_sylvester examples") {
    std::mt19937_64 rng(6);
    const Matrix r = oracle::random_matrix(rng, 4, 3);
    CHECK((solve_sylvester(Matrix::Identity(4, 4), Matrix::Zero(3, 3), r) - r)
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK((solve_sylvester(2 * Matrix::Identity(4, 4), Matrix::Identity(3, 3), r) - r / 3)
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    const Matrix a = oracle::random_spd(rng, 5);
    Matrix b = oracle::random_symmetric(rng, 5);
    b += 5.0 * Matrix::Identity(5, 5);
    const Matrix rhs = oracle::random_matrix(rng, 5, 5);
    const Matrix z = solve_sylvester(a, b, rhs);
    CHECK((a * z + z * b - rhs).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((z - oracle::kron_sylvester(a, b, rhs)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("solve_sylvester singular pair") {
    const Matrix a = Matrix::Identity(3, 3);
    const Matrix b = -Matrix::Identity(2, 2);
    const Matrix rhs = Matrix::Ones(3, 2);
    try {
        solve_sylvester(a, b, rhs);
        FAIL("expected IllConditioned");
    } catch (const IllConditioned& e) {
        CHECK(e.i == 0);
        CHECK(e.j == 0);
    }

    Matrix a2 = Matrix::Identity(2, 2);
    a2(1, 1) = 3;
    const Matrix b2 = -Matrix::Identity(1, 1);
    Matrix rhs2(2, 1);
    rhs2 << 0, 4;
    const Matrix z = solve_sylvester(a2, b2, rhs2, SingularPairs::min_norm);
    CHECK(z(0, 0) == 0.0);
    CHECK(z(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("solve_sylvester input checks") {
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 1;
    CHECK_THROWS_AS(solve_sylvester(asym, Matrix::Identity(2, 2), Matrix::Ones(2, 2)),
                    InvalidInput);
    CHECK_THROWS_AS(
        solve_sylvester(Matrix::Identity(2, 2), Matrix::Identity(3, 3), Matrix::Ones(2, 2)),
        ShapeError);
}

TEST_CASE("linalg determinism") {
    std::mt19937_64 rng(7);
    const Matrix t = oracle::random_matrix(rng, 9, 6);
    CHECK(svt(t, 0.8) == svt(t, 0.8));
    CHECK(col_l21_prox(t, 0.8) == col_l21_prox(t, 0.8));
    CHECK(nuclear_norm(t) == nuclear_norm(t));
    const Matrix a = oracle::random_spd(rng, 6);
    const Matrix b = oracle::random_spd(rng, 6);
    const Matrix r = oracle::random_matrix(rng, 6, 6);
    CHECK(solve_sylvester(a, b, r) == solve_sylvester(a, b, r));
}
