#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <conkit/measure.hpp>
#include <conkit/random.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

using namespace conkit;

namespace {

const std::vector<double> kFineSchedule = {1e-4, 1e-5, 1e-6};

std::vector<NormSpec> norm_family(rng::Engine& engine, Index n) {
    return {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(),
            NormSpec::weighted_l2(rng::spd(engine, n, 0.1, 10.0))};
}

} // namespace

TEST_CASE("closed-form measures on hand-worked matrices") {
    Matrix a(2, 2);
    a << -3.0, 1.0, 2.0, -5.0;
    // Column sums: -3 + |2| = -1, -5 + |1| = -4. Row sums: -3 + 1 = -2,
    // -5 + 2 = -3. Both are exact in floating point.
    CHECK(matrix_measure(a, NormSpec::l1()) == -1.0);
    CHECK(matrix_measure(a, NormSpec::linf()) == -2.0);

    Matrix upper(2, 2);
    upper << 0.0, 2.0, 0.0, 0.0;
    CHECK(matrix_measure(upper, NormSpec::l2()) ==
          doctest::Approx(1.0).epsilon(1e-12));

    Matrix skew(2, 2);
    skew << 0.0, 1.0, -1.0, 0.0;
    CHECK(matrix_measure(skew, NormSpec::l2()) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("weighted transform and weighted measure") {
    Matrix a(2, 2);
    a << -1.0, 2.0, 0.0, -1.0;
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 4.0;
    p(1, 1) = 1.0;

    Matrix b = weighted_transform(a, p);
    CHECK(b(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(b(0, 1) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(b(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b(1, 1) == doctest::Approx(-1.0).epsilon(1e-12));

    // Symmetric part of b is [[-1, 2], [2, -1]] with top eigenvalue 1, so
    // this weight makes the matrix look expanding (plain L2 gives 0).
    NormSpec weighted = NormSpec::weighted_l2(p);
    CHECK(matrix_measure(a, weighted) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(matrix_measure(a, NormSpec::l2()) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("vector norms") {
    Vector x(2);
    x << 3.0, -4.0;
    CHECK(vector_norm(x, NormSpec::l1()) == 7.0);
    CHECK(vector_norm(x, NormSpec::l2()) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(vector_norm(x, NormSpec::linf()) == 4.0);

    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 4.0;
    p(1, 1) = 1.0;
    CHECK(vector_norm(x, NormSpec::weighted_l2(p)) ==
          doctest::Approx(std::sqrt(52.0)).epsilon(1e-12));
}

TEST_CASE("induced norms on a fixed matrix") {
    Matrix a(2, 2);
    a << 1.0, -2.0, 3.0, 4.0;
    CHECK(induced_norm(a, NormSpec::l1()) == 6.0);
    CHECK(induced_norm(a, NormSpec::linf()) == 7.0);
    // A^T A = [[10, 10], [10, 20]] has top eigenvalue 15 + sqrt(125).
    const double expected = std::sqrt(15.0 + std::sqrt(125.0));
    CHECK(induced_norm(a, NormSpec::l2()) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("spd_sqrt of [[2,1],[1,2]] matches the closed form") {
    Matrix p(2, 2);
    p << 2.0, 1.0, 1.0, 2.0;
    Matrix s = spd_sqrt(p);

    // Eigenvalues 1 and 3 with (1, +-1)/sqrt(2) eigenvectors give
    // S = [[(sqrt(3)+1)/2, (sqrt(3)-1)/2], [(sqrt(3)-1)/2, (sqrt(3)+1)/2]].
    const double d = (std::sqrt(3.0) + 1.0) / 2.0;
    const double o = (std::sqrt(3.0) - 1.0) / 2.0;
    CHECK(s(0, 0) == doctest::Approx(d).epsilon(1e-12));
    CHECK(s(0, 1) == doctest::Approx(o).epsilon(1e-12));
    CHECK(s(1, 0) == doctest::Approx(o).epsilon(1e-12));
    CHECK(s(1, 1) == doctest::Approx(d).epsilon(1e-12));

    CHECK((s - s.transpose()).norm() <= 1e-14);
    CHECK((s * s - p).norm() <= 1e-10 * p.norm());
}

TEST_CASE("spd_sqrt reconstruction on random SPD matrices") {
    rng::Engine engine(2024);
    for (int rep = 0; rep < 50; ++rep) {
        const Index n = 1 + static_cast<Index>(engine() % 8);
        Matrix p = rng::spd(engine, n, 0.1, 10.0);
        Matrix s = spd_sqrt(p);
        CHECK((s - s.transpose()).norm() <= 1e-12 * std::max(1.0, s.norm()));
        CHECK((s * s - p).norm() <= 1e-10 * p.norm());
    }
}

TEST_CASE("spd validation rejects bad weights") {
    Matrix asym(2, 2);
    asym << 1.0, 0.1, 0.0, 1.0;
    CHECK_THROWS_AS(spd_sqrt(asym), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::weighted_l2(asym), std::invalid_argument);

    Matrix indefinite(2, 2);
    indefinite << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(spd_sqrt(indefinite), std::invalid_argument);

    // Eigenvalue ratio below the 1e-10 floor counts as numerically singular.
    Matrix nearly_singular(2, 2);
    nearly_singular << 1.0, 0.0, 0.0, 1e-11;
    CHECK_THROWS_AS(spd_sqrt(nearly_singular), std::invalid_argument);

    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(spd_sqrt(rect), std::invalid_argument);
}

TEST_CASE("weight accessors require a weighted spec") {
    CHECK_THROWS_AS(NormSpec::l2().weight(), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::l1().weight_sqrt(), std::invalid_argument);
    CHECK(NormSpec::l2().weight_dimension() == -1);

    Matrix p = Matrix::Identity(3, 3);
    NormSpec weighted = NormSpec::weighted_l2(p);
    CHECK(weighted.weight_dimension() == 3);
    CHECK(weighted.weight() == p);
}

TEST_CASE("identity weight reproduces the plain L2 measure") {
    rng::Engine engine(7);
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 1 + static_cast<Index>(engine() % 6);
        Matrix a = rng::matrix(engine, n, n, -2.0, 2.0);
        NormSpec weighted = NormSpec::weighted_l2(Matrix::Identity(n, n));
        const double plain = matrix_measure(a, NormSpec::l2());
        const double via_weight = matrix_measure(a, weighted);
        CHECK(std::abs(plain - via_weight) <= 1e-12 * (1.0 + std::abs(plain)));
    }
}

TEST_CASE("L2 measure equals the top eigenvalue of the symmetric part") {
    rng::Engine engine(31);
    for (int rep = 0; rep < 100; ++rep) {
        Matrix a = rng::matrix(engine, 5, 5, -3.0, 3.0);
        // Independent oracle: direct eigensolve in the test.
        Eigen::SelfAdjointEigenSolver<Matrix> solver(
            0.5 * (a + a.transpose()));
        const double expected = solver.eigenvalues().maxCoeff();
        CHECK(matrix_measure(a, NormSpec::l2()) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("limit oracle quotient on the hand-worked L1 matrix") {
    Matrix a(2, 2);
    a << -3.0, 1.0, 2.0, -5.0;
    LimitMeasureEstimate est =
        matrix_measure_limit_oracle(a, NormSpec::l1());
    // For small h the L1 norm of I + hA is exactly 1 - h, so the quotient
    // is exact at every step of the default schedule.
    CHECK(est.quotient == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(est.richardson == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(est.smallest_h == 1e-6);
}

TEST_CASE("limit oracle agrees with closed forms across kinds and sizes") {
    rng::Engine engine(101);
    for (Index n : {1, 2, 3, 5}) {
        for (int rep = 0; rep < 25; ++rep) {
            Matrix a = rng::matrix(engine, n, n, -1.5, 1.5);
            for (const NormSpec& norm : norm_family(engine, n)) {
                const double closed = matrix_measure(a, norm);
                LimitMeasureEstimate est =
                    matrix_measure_limit_oracle(a, norm, kFineSchedule);
                const double slack = 1e-6 * (1.0 + induced_norm(a, norm));
                CHECK(std::abs(closed - est.richardson) <= slack);
            }
        }
    }
}

TEST_CASE("limit oracle flags underflow of the difference quotient") {
    Matrix a(1, 1);
    a << -1.0;
    CHECK_THROWS_AS(matrix_measure_limit_oracle(a, NormSpec::l1(), {1e-17}),
                    NumericError);
}

TEST_CASE("limit oracle validates the step schedule") {
    Matrix a = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(matrix_measure_limit_oracle(a, NormSpec::l2(), {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        matrix_measure_limit_oracle(a, NormSpec::l2(), {1e-2, 1e-2}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        matrix_measure_limit_oracle(a, NormSpec::l2(), {1e-4, 1e-2}),
        std::invalid_argument);
    CHECK_THROWS_AS(matrix_measure_limit_oracle(a, NormSpec::l2(), {0.0}),
                    std::invalid_argument);
}

TEST_CASE("measure axioms hold on a random corpus") {
    rng::Engine engine(55);
    const double slack = 1e-9;
    for (int rep = 0; rep < 50; ++rep) {
        const Index n = 3;
        Matrix a = rng::matrix(engine, n, n, -1.5, 1.5);
        Matrix b = rng::matrix(engine, n, n, -1.5, 1.5);
        for (const NormSpec& norm : norm_family(engine, n)) {
            const double mu_a = matrix_measure(a, norm);
            const double mu_b = matrix_measure(b, norm);

            for (double alpha : {0.0, 0.7, 2.5}) {
                CHECK(std::abs(matrix_measure(alpha * a, norm) -
                               alpha * mu_a) <= slack);
            }
            CHECK(matrix_measure(a + b, norm) <= mu_a + mu_b + slack);
            for (double shift : {-1.5, 2.0}) {
                Matrix shifted = a + shift * Matrix::Identity(n, n);
                CHECK(std::abs(matrix_measure(shifted, norm) -
                               (mu_a + shift)) <= slack);
            }

            const double norm_a = induced_norm(a, norm);
            CHECK(mu_a <= norm_a + slack);
            CHECK(mu_a >= -norm_a - slack);

            Eigen::EigenSolver<Matrix> eigs(a);
            CHECK(eigs.eigenvalues().real().maxCoeff() <= mu_a + slack);
        }
    }
}

TEST_CASE("operand validation") {
    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(matrix_measure(rect, NormSpec::l2()),
                    std::invalid_argument);
    CHECK_THROWS_AS(induced_norm(rect, NormSpec::l1()),
                    std::invalid_argument);

    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(matrix_measure(bad, NormSpec::l1()),
                    std::invalid_argument);

    Matrix a = Matrix::Identity(3, 3);
    NormSpec weighted = NormSpec::weighted_l2(Matrix::Identity(2, 2));
    CHECK_THROWS_AS(matrix_measure(a, weighted), std::invalid_argument);
    Vector x(3);
    x.setOnes();
    CHECK_THROWS_AS(vector_norm(x, weighted), std::invalid_argument);
}
