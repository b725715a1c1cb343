#include "doctest.h"
#include "oracles.hpp"

#include "fcmsc/kernels.hpp"

#include <random>
#include <vector>

using namespace fcmsc::kernels;

TEST_CASE("col_shrink serial and omp agree bitwise") {
    std::mt19937_64 rng(11);
    for (double tau : {1e-3, 0.5, 2.0, 50.0}) {
        Matrix a = oracle::random_matrix(rng, 13, 37);
        a.col(3).setZero();
        Matrix b = a;
        col_shrink_serial(a, tau);
        col_shrink_omp(b, tau);
        CHECK(a == b);
    }
}

TEST_CASE("pairwise_sq_dist serial and omp agree bitwise") {
    std::mt19937_64 rng(12);
    const Matrix x = oracle::random_matrix(rng, 9, 41);
    const Matrix s = pairwise_sq_dist_serial(x);
    CHECK(s == pairwise_sq_dist_omp(x));
    CHECK(s(4, 17) == doctest::Approx((x.col(4) - x.col(17)).squaredNorm()));
    CHECK(s.diagonal().isZero(0.0));
}

TEST_CASE("spectral_divide serial and omp agree bitwise") {
    std::mt19937_64 rng(13);
    const Matrix m = oracle::random_matrix(rng, 17, 11);
    const Vector a = oracle::random_matrix(rng, 17, 1).array().abs() + 1.0;
    const Vector b = oracle::random_matrix(rng, 11, 1).array().abs() + 1.0;
    Matrix s, o;
    spectral_divide_serial(m, a, b, s);
    spectral_divide_omp(m, a, b, o);
    CHECK(s == o);
    CHECK(s(3, 5) == m(3, 5) / (a(3) + b(5)));
}

TEST_CASE("assign_nearest serial and omp agree bitwise") {
    std::mt19937_64 rng(14);
    const Matrix p = oracle::random_matrix(rng, 200, 4);
    Matrix c = oracle::random_matrix(rng, 5, 4);
    c.row(4) = c.row(1);  // duplicate centroid: ties must pick index 1
    std::vector<int> ls(200), lo(200);
    const double ds = assign_nearest_serial(p, c, ls);
    const double dd = assign_nearest_omp(p, c, lo);
    CHECK(ds == dd);
    CHECK(ls == lo);
    for (int l : ls) CHECK(l != 4);
}
