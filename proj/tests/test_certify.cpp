#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <conkit/certify.hpp>

#include "test_support.hpp"

#include <cmath>
#include <cstring>

using namespace conkit;
using testsupport::catalog_system;
using testsupport::linear_system;

namespace {

BoxDomain box1(double lo, double hi) {
    BoxDomain box;
    box.lower = Vector::Constant(1, lo);
    box.upper = Vector::Constant(1, hi);
    return box;
}

BoxDomain box_n(Index n, double lo, double hi) {
    BoxDomain box;
    box.lower = Vector::Constant(n, lo);
    box.upper = Vector::Constant(n, hi);
    return box;
}

bool bit_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

} // namespace

TEST_CASE("pointwise rate is the measure of the jacobian") {
    DynamicalSystem rotation = catalog_system("rotation", {{"omega", 3.0}});
    Vector x(2);
    x << 0.4, -1.2;
    CHECK(pointwise_rate(rotation, x, NormSpec::l2()) == 0.0);

    DynamicalSystem cubic =
        catalog_system("scalar_cubic_contractive", {{"a", 1.0}, {"b", 1.0}});
    Vector one = Vector::Constant(1, 1.0);
    CHECK(pointwise_rate(cubic, one, NormSpec::l2()) == -4.0);
}

TEST_CASE("cubic certifies on the unit interval with witness at the origin") {
    DynamicalSystem cubic =
        catalog_system("scalar_cubic_contractive", {{"a", 1.0}, {"b", 1.0}});
    SamplingPlan plan;
    plan.grid_points_per_axis = 101;
    CertificationReport report =
        certify_domain(cubic, box1(-1.0, 1.0), NormSpec::l2(), plan);

    // mu(x) = -1 - 3x^2 peaks at the exact grid midpoint x = 0.
    CHECK(report.sup_measure == -1.0);
    CHECK(report.rate_estimate == 1.0);
    CHECK(report.witness(0) == 0.0);
    CHECK(report.sample_count == 101);
    CHECK(report.certified);
    CHECK(report.caveat == "empirical-on-box");
}

TEST_CASE("grid enumeration is odometer-ordered with exact endpoints") {
    DynamicalSystem sys = linear_system(-Matrix::Identity(2, 2));
    SamplingPlan plan;
    plan.grid_points_per_axis = 2;
    plan.random_points = 3;
    plan.seed = 9;
    std::vector<SampleRecord> records =
        sample_measures(sys, box_n(2, 0.0, 1.0), NormSpec::l2(), plan);

    REQUIRE(records.size() == 7);
    const double expected[4][2] = {
        {0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    for (int k = 0; k < 4; ++k) {
        CHECK(records[k].index == k);
        CHECK(records[k].x(0) == expected[k][0]);
        CHECK(records[k].x(1) == expected[k][1]);
        CHECK(records[k].mu == -1.0);
    }
    for (int k = 4; k < 7; ++k) {
        CHECK(records[k].index == k);
        CHECK(records[k].x(0) >= 0.0);
        CHECK(records[k].x(0) < 1.0);
        CHECK(records[k].x(1) >= 0.0);
        CHECK(records[k].x(1) < 1.0);
    }
}

TEST_CASE("constant measure ties break to the first sample") {
    DynamicalSystem sys = linear_system(-Matrix::Identity(2, 2));
    SamplingPlan plan;
    plan.grid_points_per_axis = 3;
    CertificationReport report =
        certify_domain(sys, box_n(2, -2.0, 2.0), NormSpec::l2(), plan);
    CHECK(report.witness(0) == -2.0);
    CHECK(report.witness(1) == -2.0);
    CHECK(report.rate_estimate == 1.0);
}

TEST_CASE("sweeps are bit-identical across reruns") {
    DynamicalSystem sys =
        catalog_system("diag_dominant_nl", {{"a", 1.0}, {"eps", 0.25}}, 3);
    SamplingPlan plan;
    plan.grid_points_per_axis = 5;
    plan.random_points = 40;
    plan.seed = 7;
    const BoxDomain box = box_n(3, -2.0, 2.0);

    auto first = sample_measures(sys, box, NormSpec::linf(), plan);
    auto second = sample_measures(sys, box, NormSpec::linf(), plan);
    REQUIRE(first.size() == second.size());
    for (std::size_t k = 0; k < first.size(); ++k) {
        CHECK(bit_equal(first[k].mu, second[k].mu));
        for (Index i = 0; i < 3; ++i)
            CHECK(bit_equal(first[k].x(i), second[k].x(i)));
    }

    CertificationReport a = certify_domain(sys, box, NormSpec::linf(), plan);
    CertificationReport b = certify_domain(sys, box, NormSpec::linf(), plan);
    CHECK(bit_equal(a.sup_measure, b.sup_measure));
    CHECK(a.witness == b.witness);
    CHECK(a.sample_count == b.sample_count);
    CHECK(a.certified == b.certified);
}

TEST_CASE("random draws depend on the seed and stay inside the box") {
    DynamicalSystem cubic =
        catalog_system("scalar_cubic_contractive", {{"a", 1.0}, {"b", 1.0}});
    SamplingPlan plan;
    plan.random_points = 50;
    plan.seed = 1;
    const BoxDomain box = box1(-1.5, 2.5);
    auto first = sample_measures(cubic, box, NormSpec::l2(), plan);
    plan.seed = 2;
    auto second = sample_measures(cubic, box, NormSpec::l2(), plan);

    bool any_difference = false;
    for (std::size_t k = 0; k < first.size(); ++k) {
        CHECK(first[k].x(0) >= -1.5);
        CHECK(first[k].x(0) < 2.5);
        if (first[k].x(0) != second[k].x(0)) any_difference = true;
    }
    CHECK(any_difference);
}

TEST_CASE("plan and box validation") {
    DynamicalSystem cubic =
        catalog_system("scalar_cubic_contractive", {{"a", 1.0}, {"b", 1.0}});
    const BoxDomain box = box1(-1.0, 1.0);

    SamplingPlan plan;
    plan.grid_points_per_axis = 1;
    CHECK_THROWS_AS(certify_domain(cubic, box, NormSpec::l2(), plan),
                    std::invalid_argument);

    plan.grid_points_per_axis = 0;
    plan.random_points = 0;
    CHECK_THROWS_AS(certify_domain(cubic, box, NormSpec::l2(), plan),
                    std::invalid_argument);

    plan.random_points = -1;
    CHECK_THROWS_AS(certify_domain(cubic, box, NormSpec::l2(), plan),
                    std::invalid_argument);

    SamplingPlan ok;
    ok.grid_points_per_axis = 3;
    CHECK_THROWS_AS(certify_domain(cubic, box1(1.0, 1.0), NormSpec::l2(), ok),
                    std::invalid_argument);
    CHECK_THROWS_AS(certify_domain(cubic, box1(2.0, 1.0), NormSpec::l2(), ok),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        certify_domain(cubic, box_n(2, -1.0, 1.0), NormSpec::l2(), ok),
        std::invalid_argument);

    DynamicalSystem wide =
        catalog_system("diag_dominant_nl", {{"a", 1.0}, {"eps", 0.25}}, 10);
    SamplingPlan huge;
    huge.grid_points_per_axis = 10;   // 10^10 samples
    CHECK_THROWS_AS(
        certify_domain(wide, box_n(10, -1.0, 1.0), NormSpec::linf(), huge),
        std::invalid_argument);
}

TEST_CASE("evaluation failures report the failing sample") {
    DynamicalSystem exploder(
        "exploder", 1,
        [](const Vector& x) -> Vector {
            Vector f(1);
            f(0) = std::sqrt(x(0));
            return f;
        },
        [](const Vector& x) -> Matrix {
            Matrix j(1, 1);
            j(0, 0) = 0.5 / std::sqrt(x(0));
            return j;
        });
    SamplingPlan plan;
    plan.grid_points_per_axis = 3;
    CHECK_THROWS_WITH_AS(
        certify_domain(exploder, box1(-1.0, 1.0), NormSpec::l2(), plan),
        doctest::Contains("sample"), NumericError);
}

TEST_CASE("krasovskii LMI check on hand-worked matrices") {
    Matrix a(2, 2);
    a << -1.0, 2.0, 0.0, -1.0;
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 4.0;
    p(1, 1) = 1.0;
    // P A + A^T P + 2 c P = [[-4, 8], [8, -1]] for c = 0.5; its top
    // eigenvalue (-5 + sqrt(265))/2 is positive, so the rate fails.
    CHECK_FALSE(krasovskii_check(a, p, 0.5));

    Matrix stable = -2.0 * Matrix::Identity(2, 2);
    CHECK(krasovskii_check(stable, Matrix::Identity(2, 2), 1.0));

    // Exactly marginal: P A + A^T P + 2 c P = 0 is not inside the margin.
    Matrix edge = -1.0 * Matrix::Identity(2, 2);
    CHECK_FALSE(krasovskii_check(edge, Matrix::Identity(2, 2), 1.0));
}

TEST_CASE("krasovskii argument validation") {
    Matrix a = -Matrix::Identity(2, 2);
    Matrix not_spd(2, 2);
    not_spd << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(krasovskii_check(a, not_spd, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(krasovskii_check(a, Matrix::Identity(3, 3), 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        krasovskii_check(a, Matrix::Identity(2, 2),
                         std::numeric_limits<double>::quiet_NaN()),
        std::invalid_argument);
}

TEST_CASE("equivalence audit on the hand-worked triple") {
    Matrix a(2, 2);
    a << -1.0, 2.0, 0.0, -1.0;
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 4.0;
    p(1, 1) = 1.0;
    EquivalenceRecord rec = equivalence_audit(a, p, 0.5);
    CHECK(rec.measure_side == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(rec.lmi_side ==
          doctest::Approx((-5.0 + std::sqrt(265.0)) / 2.0).epsilon(1e-9));
    CHECK_FALSE(rec.boundary);
    CHECK(rec.agree);

    Matrix stable = -2.0 * Matrix::Identity(2, 2);
    EquivalenceRecord good =
        equivalence_audit(stable, Matrix::Identity(2, 2), 1.0);
    CHECK(good.measure_side == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(good.lmi_side == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(good.agree);
}

TEST_CASE("exactly marginal triples are flagged as boundary") {
    Matrix a = -1.0 * Matrix::Identity(3, 3);
    EquivalenceRecord rec = equivalence_audit(a, Matrix::Identity(3, 3), 1.0);
    CHECK(rec.boundary);
}

TEST_CASE("measure and LMI sides agree in sign on random triples") {
    rng::Engine engine(83);
    int positives = 0;
    int negatives = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const Index n = 2 + static_cast<Index>(engine() % 4);
        Matrix a = rng::matrix(engine, n, n, -2.0, 2.0);
        Matrix p = rng::spd(engine, n, 0.1, 10.0);
        const double c = rng::uniform(engine, -2.0, 2.0);
        EquivalenceRecord rec = equivalence_audit(a, p, c);
        if (rec.boundary) continue;
        CHECK(rec.agree);
        // krasovskii_check must never accept a rate the measure rejects
        // (its margin may reject borderline rates the audit accepts).
        if (krasovskii_check(a, p, c)) CHECK(rec.measure_side < 0.0);
        (rec.measure_side < 0.0 ? negatives : positives) += 1;
    }
    // The draw ranges straddle the sign change; both outcomes must occur.
    CHECK(positives > 0);
    CHECK(negatives > 0);
}
