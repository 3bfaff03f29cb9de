#include <doctest.h>

#include "helpers.hpp"
#include "nordenkit/subspace.hpp"

using namespace nk;

TEST_CASE("null space is orthonormal and annihilated") {
    Rng rng(5);
    const Matrix m = rng.normal_matrix(3, 7);
    const Matrix k = null_space(m);
    CHECK(k.cols() == 4);
    CHECK((m * k).norm() < 1e-12);
    CHECK((k.transpose() * k - Matrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("symmetric and antisymmetric rank-3 spaces") {
    for (int d : {2, 3, 4}) {
        CHECK(sym23_space(d).dim() == d * d * (d + 1) / 2);
        CHECK(anti12_space(d).dim() == d * d * (d - 1) / 2);
    }
}

TEST_CASE("kernel restricted to a subspace") {
    const int d = 3;
    const auto maps = std::vector<LinearMap>{tensor3_map(d, [](const Tensor3& t) { return permute(t, {2, 1, 0}) - t; })};
    const Subspace k = kernel(sym23_space(d), maps);
    // totally symmetric tensors
    CHECK(k.dim() == 10);
}

TEST_CASE("direct sum splits and rejects outside vectors") {
    Matrix a(3, 1), b(3, 1);
    a << 1, 0, 0;
    b << 1, 1, 0;
    b.normalize();
    const DirectSum ds({Subspace(a), Subspace(b)}, 2);
    const auto parts = ds.split(Eigen::Vector3d(2, 1, 0));
    CHECK((parts[0] + parts[1] - Eigen::Vector3d(2, 1, 0)).norm() < 1e-12);
    CHECK(parts[0](0) == doctest::Approx(1.0));
    CHECK(test::error_kind_of([&] { ds.split(Eigen::Vector3d(0, 0, 1)); }) == ErrorKind::DirectSum);
    CHECK(test::error_kind_of([&] { DirectSum({Subspace(a)}, 2); }) == ErrorKind::DirectSum);
    CHECK(test::error_kind_of([&] { DirectSum({Subspace(a), Subspace(a)}, 2); }) == ErrorKind::RankDeficiency);
}

TEST_CASE("projection along a complement agrees with the oracle") {
    Rng rng(6);
    const int N = 6;
    for (int rep = 0; rep < 20; ++rep) {
        const ConstraintOperator c1(rng.normal_matrix(3, N));
        const ConstraintOperator c2(rng.normal_matrix(3, N));
        const Vector v = rng.normal_vector(N);
        const Vector p = project_subspace(v, {c1}, {c2});
        const Vector o = oracle_project(v, {c1}, {c2});
        CHECK((p - o).norm() / v.norm() < 1e-9);
        CHECK((c1.matrix() * p).norm() < 1e-9 * v.norm());
        CHECK((c2.matrix() * (v - p)).norm() < 1e-9 * v.norm());
    }
}
