#include <doctest.h>

#include <random>

#include "seqwarp/errors.hpp"
#include "seqwarp/kaehler.hpp"

using namespace seqwarp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> d;
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

// Term-by-term expansion of the space form curvature, independent of the
// library implementation.
VectorXd curvature_oracle(const MatrixXd& J, double c, const VectorXd& X, const VectorXd& Y, const VectorXd& Z) {
    const VectorXd JX = J * X, JY = J * Y, JZ = J * Z;
    return c / 4 * (Y.dot(Z) * X - X.dot(Z) * Y + JY.dot(Z) * JX - JX.dot(Z) * JY + 2 * X.dot(JY) * JZ);
}

}  // namespace

TEST_CASE("consecutive pairs in dimension 2") {
    MatrixXd expected(2, 2);
    expected << 0, -1, 1, 0;
    CHECK(standard_complex_structure(2) == expected);
}

TEST_CASE("consecutive pairs square to minus the identity exactly") {
    const MatrixXd J = standard_complex_structure(18);
    CHECK(J * J == -MatrixXd::Identity(18, 18));
    CHECK(J.transpose() * J == MatrixXd::Identity(18, 18));
    CHECK(complex_structure_defect(J) == 0.0);
}

TEST_CASE("J preserves inner products") {
    std::mt19937_64 rng(3);
    const KaehlerAmbient amb(standard_complex_structure(18), 0.0);
    for (int i = 0; i < 20; ++i) {
        const VectorXd X = random_vector(rng, 18), Y = random_vector(rng, 18);
        CHECK(std::abs(amb.apply_J(X).dot(amb.apply_J(Y)) - X.dot(Y)) < 1e-12);
    }
}

TEST_CASE("invalid complex structures are rejected") {
    MatrixXd bad = standard_complex_structure(4);
    bad(0, 1) *= 1.001;
    CHECK_THROWS_AS(KaehlerAmbient(bad, 0.0), PreconditionError);
    CHECK_THROWS_AS(KaehlerAmbient(MatrixXd::Identity(4, 4), 0.0), PreconditionError);
}

TEST_CASE("flat ambient has zero curvature") {
    std::mt19937_64 rng(5);
    const KaehlerAmbient amb(standard_complex_structure(6), 0.0);
    const VectorXd X = random_vector(rng, 6), Y = random_vector(rng, 6), Z = random_vector(rng, 6);
    CHECK(amb.curvature(X, Y, Z).norm() == 0.0);
}

TEST_CASE("holomorphic sectional curvature is c") {
    std::mt19937_64 rng(8);
    const double c = 1.7;
    const KaehlerAmbient amb(standard_complex_structure(8), c);
    VectorXd X = random_vector(rng, 8);
    X.normalize();
    const VectorXd JX = amb.apply_J(X);
    CHECK((amb.curvature(X, JX, JX) - c * X).norm() < 1e-12);
    CHECK(amb.curvature4(X, JX, JX, X) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("totally real plane section has curvature c/4") {
    const double c = -2.4;
    const KaehlerAmbient amb(standard_complex_structure(6), c);
    VectorXd X = VectorXd::Zero(6), Y = VectorXd::Zero(6);
    X[0] = 1;  // JX = e_2
    Y[2] = 1;  // orthogonal to X and JX
    CHECK(amb.curvature4(X, Y, Y, X) == doctest::Approx(c / 4).epsilon(1e-14));
}

TEST_CASE("curvature matches the term-by-term oracle and its symmetries") {
    std::mt19937_64 rng(13);
    const double c = 0.9;
    const MatrixXd J = standard_complex_structure(10);
    const KaehlerAmbient amb(J, c);
    for (int i = 0; i < 25; ++i) {
        const VectorXd X = random_vector(rng, 10), Y = random_vector(rng, 10), Z = random_vector(rng, 10),
                       W = random_vector(rng, 10);
        CHECK((amb.curvature(X, Y, Z) - curvature_oracle(J, c, X, Y, Z)).norm() < 1e-12);
        CHECK((amb.curvature(X, Y, Z) + amb.curvature(Y, X, Z)).norm() < 1e-12);
        CHECK((amb.curvature(X, Y, Z) + amb.curvature(Y, Z, X) + amb.curvature(Z, X, Y)).norm() < 1e-12);
        CHECK(std::abs(amb.curvature4(X, Y, Z, W) + amb.curvature4(X, Y, W, Z)) < 1e-12);
        CHECK(std::abs(amb.curvature4(X, Y, Z, W) - amb.curvature4(Z, W, X, Y)) < 1e-12);
        // J commutes with the curvature operator of a Kaehler space form.
        CHECK((amb.curvature(X, Y, amb.apply_J(Z)) - amb.apply_J(amb.curvature(X, Y, Z))).norm() < 1e-12);
    }
}
