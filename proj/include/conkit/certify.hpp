#pragma once

#include <conkit/measure.hpp>
#include <conkit/system.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace conkit {

/// Axis-aligned box { x : lower <= x <= upper }, strict per axis.
struct BoxDomain {
    Vector lower;
    Vector upper;
};

/// How a box is swept: a full tensor grid with `grid_points_per_axis`
/// points per axis (>= 2 when nonzero), plus `random_points` uniform draws
/// seeded by `seed`. At least one sample must result.
struct SamplingPlan {
    int grid_points_per_axis = 0;
    int random_points = 0;
    std::uint64_t seed = 0;
};

/// One sweep sample: enumeration index, point, and measure of J there.
struct SampleRecord {
    long index;
    Vector x;
    double mu;
};

/// Result of an empirical contraction sweep. rate_estimate = -sup_measure;
/// certified means the estimate is strictly positive. The caveat string
/// records that this is evidence on sampled points of a box, not a proof.
struct CertificationReport {
    NormSpec norm;
    double sup_measure;
    double rate_estimate;
    Vector witness;
    long sample_count;
    bool certified;
    std::string caveat;
};

/// mu(J(x)) under the given norm.
double pointwise_rate(const DynamicalSystem& sys, const Vector& x,
                      const NormSpec& norm);

/// Deterministic sweep of the box: grid points in odometer order (last axis
/// fastest), then the random draws. Evaluation failures are reported with
/// the failing point. Identical inputs produce bit-identical records.
std::vector<SampleRecord> sample_measures(const DynamicalSystem& sys,
                                          const BoxDomain& box,
                                          const NormSpec& norm,
                                          const SamplingPlan& plan);

/// Reduces a non-empty sample sweep to a report. The witness is the first
/// sample attaining the supremum (ties break to the lowest index).
CertificationReport summarize_samples(const std::vector<SampleRecord>& records,
                                      const NormSpec& norm);

/// sample_measures followed by summarize_samples.
CertificationReport certify_domain(const DynamicalSystem& sys,
                                   const BoxDomain& box, const NormSpec& norm,
                                   const SamplingPlan& plan);

/// True when P A + A^T P + 2 c P is negative definite with margin
/// delta = 1e-10 (1 + ||P||_F (||A||_F + 2|c|)), i.e. the largest eigenvalue
/// is below -delta. P must be SPD.
bool krasovskii_check(const Matrix& a, const Matrix& p, double c);

/// One measure-vs-LMI comparison. measure_side = mu_P(A) + c, lmi_side =
/// lambda_max(P A + A^T P + 2 c P). `boundary` flags draws within
/// 1e-8 (1 + |c|) of the sign change, where the two sides may legitimately
/// disagree by roundoff; `agree` compares the signs.
struct EquivalenceRecord {
    double measure_side;
    double lmi_side;
    bool boundary;
    bool agree;
};

EquivalenceRecord equivalence_audit(const Matrix& a, const Matrix& p, double c);

} // namespace conkit
