#include <conkit/certify.hpp>

#include <conkit/random.hpp>

#include <cmath>
#include <sstream>

namespace conkit {

namespace {

constexpr long kMaxSamples = 10'000'000;

void validate_box(const BoxDomain& box, Index dim) {
    detail::require(box.lower.size() == dim && box.upper.size() == dim,
                    "box dimension does not match system dimension");
    detail::require_finite(box.lower, "box lower bound");
    detail::require_finite(box.upper, "box upper bound");
    for (Index i = 0; i < dim; ++i)
        if (!(box.lower(i) < box.upper(i))) {
            std::ostringstream msg;
            msg << "box axis " << i << " is empty: [" << box.lower(i) << ", "
                << box.upper(i) << "]";
            throw std::invalid_argument(msg.str());
        }
}

long validate_plan(const SamplingPlan& plan, Index dim) {
    detail::require(plan.grid_points_per_axis >= 0,
                    "grid_points_per_axis must be >= 0");
    detail::require(plan.grid_points_per_axis != 1,
                    "grid_points_per_axis must be >= 2 when a grid is used");
    detail::require(plan.random_points >= 0, "random_points must be >= 0");
    long grid_total = 0;
    if (plan.grid_points_per_axis >= 2) {
        grid_total = 1;
        for (Index i = 0; i < dim; ++i) {
            grid_total *= plan.grid_points_per_axis;
            if (grid_total > kMaxSamples)
                throw std::invalid_argument("sampling grid too large");
        }
    }
    const long total = grid_total + plan.random_points;
    detail::require(total >= 1, "sampling plan produces no samples");
    return grid_total;
}

} // namespace

double pointwise_rate(const DynamicalSystem& sys, const Vector& x,
                      const NormSpec& norm) {
    return matrix_measure(eval_jacobian(sys, x), norm);
}

std::vector<SampleRecord> sample_measures(const DynamicalSystem& sys,
                                          const BoxDomain& box,
                                          const NormSpec& norm,
                                          const SamplingPlan& plan) {
    const Index dim = sys.dimension();
    validate_box(box, dim);
    const long grid_total = validate_plan(plan, dim);

    std::vector<SampleRecord> records;
    records.reserve(static_cast<std::size_t>(grid_total) +
                    static_cast<std::size_t>(plan.random_points));

    auto evaluate = [&](long index, const Vector& x) {
        try {
            records.push_back({index, x, pointwise_rate(sys, x, norm)});
        } catch (const NumericError& err) {
            std::ostringstream msg;
            msg << err.what() << " (sample " << index << ", x = [";
            for (Index i = 0; i < x.size(); ++i) {
                if (i) msg << ", ";
                msg << x(i);
            }
            msg << "])";
            throw NumericError(msg.str());
        }
    };

    long index = 0;
    if (plan.grid_points_per_axis >= 2) {
        const int g = plan.grid_points_per_axis;
        Vector step(dim);
        for (Index i = 0; i < dim; ++i)
            step(i) = (box.upper(i) - box.lower(i)) / (g - 1);
        // Odometer over the tensor grid, last axis fastest.
        std::vector<int> ticks(static_cast<std::size_t>(dim), 0);
        Vector x(dim);
        for (long count = 0; count < grid_total; ++count) {
            for (Index i = 0; i < dim; ++i) {
                const int t = ticks[static_cast<std::size_t>(i)];
                x(i) = (t == g - 1) ? box.upper(i) : box.lower(i) + t * step(i);
            }
            evaluate(index++, x);
            for (Index i = dim - 1; i >= 0; --i) {
                auto& t = ticks[static_cast<std::size_t>(i)];
                if (++t < g) break;
                t = 0;
            }
        }
    }

    rng::Engine engine(plan.seed);
    for (int k = 0; k < plan.random_points; ++k) {
        Vector x(dim);
        for (Index i = 0; i < dim; ++i)
            x(i) = rng::uniform(engine, box.lower(i), box.upper(i));
        evaluate(index++, x);
    }

    return records;
}

CertificationReport summarize_samples(const std::vector<SampleRecord>& records,
                                      const NormSpec& norm) {
    detail::require(!records.empty(), "no samples to summarize");

    // Strict > keeps the first (lowest index) witness on ties.
    const SampleRecord* worst = &records.front();
    for (const SampleRecord& rec : records)
        if (rec.mu > worst->mu) worst = &rec;

    CertificationReport report;
    report.norm = norm;
    report.sup_measure = worst->mu;
    report.rate_estimate = -worst->mu;
    report.witness = worst->x;
    report.sample_count = static_cast<long>(records.size());
    report.certified = report.rate_estimate > 0.0;
    report.caveat = "empirical-on-box";
    return report;
}

CertificationReport certify_domain(const DynamicalSystem& sys,
                                   const BoxDomain& box, const NormSpec& norm,
                                   const SamplingPlan& plan) {
    return summarize_samples(sample_measures(sys, box, norm, plan), norm);
}

bool krasovskii_check(const Matrix& a, const Matrix& p, double c) {
    detail::require_square(a, "krasovskii_check matrix A");
    detail::require_finite(a, "krasovskii_check matrix A");
    detail::require(std::isfinite(c), "rate c must be finite");
    detail::require(p.rows() == a.rows(), "P and A dimensions must match");
    // Reuses the SPD validation path; throws if P is not usable as a weight.
    NormSpec::weighted_l2(p);
    Matrix m = p * a + a.transpose() * p + 2.0 * c * p;
    const double lmax = symmetric_max_eigenvalue(m);
    const double delta =
        1e-10 * (1.0 + p.norm() * (a.norm() + 2.0 * std::abs(c)));
    return lmax < -delta;
}

EquivalenceRecord equivalence_audit(const Matrix& a, const Matrix& p,
                                    double c) {
    detail::require_square(a, "equivalence_audit matrix A");
    detail::require_finite(a, "equivalence_audit matrix A");
    detail::require(std::isfinite(c), "rate c must be finite");
    detail::require(p.rows() == a.rows(), "P and A dimensions must match");

    NormSpec weighted = NormSpec::weighted_l2(p);
    EquivalenceRecord rec;
    rec.measure_side = matrix_measure(a, weighted) + c;
    rec.lmi_side =
        symmetric_max_eigenvalue(p * a + a.transpose() * p + 2.0 * c * p);
    rec.boundary = std::abs(rec.measure_side) <= 1e-8 * (1.0 + std::abs(c));
    rec.agree = (rec.measure_side < 0.0) == (rec.lmi_side < 0.0);
    return rec;
}

} // namespace conkit
