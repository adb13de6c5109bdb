#pragma once

#include <conkit/types.hpp>

#include <string>
#include <vector>

namespace conkit {

enum class NormKind { L1, L2, LInf, WeightedL2 };

const char* to_string(NormKind kind);

/// A vector norm together with the matrix norm and matrix measure it
/// induces. WeightedL2 carries a symmetric positive definite weight P and
/// means |x|_P = sqrt(x^T P x); its square root factors are computed once at
/// construction. The other kinds are weightless.
///
/// Construction validates weighted specs eagerly: P must be symmetric to
/// 1e-12 relative Frobenius error and its smallest eigenvalue must exceed
/// 1e-10 times the largest, otherwise std::invalid_argument is thrown.
class NormSpec {
public:
    /// Default spec is the Euclidean norm.
    NormSpec() : kind_(NormKind::L2) {}

    static NormSpec l1() { return NormSpec(NormKind::L1); }
    static NormSpec l2() { return NormSpec(NormKind::L2); }
    static NormSpec linf() { return NormSpec(NormKind::LInf); }
    static NormSpec weighted_l2(const Matrix& weight);

    NormKind kind() const { return kind_; }
    bool is_weighted() const { return kind_ == NormKind::WeightedL2; }

    /// Weight P as supplied by the caller. Weighted specs only.
    const Matrix& weight() const;
    /// P^{1/2}, symmetric. Weighted specs only.
    const Matrix& weight_sqrt() const;
    /// P^{-1/2}, symmetric. Weighted specs only.
    const Matrix& weight_inv_sqrt() const;

    /// Dimension the weight constrains operands to, or -1 if weightless.
    Index weight_dimension() const { return is_weighted() ? weight_.rows() : -1; }

private:
    explicit NormSpec(NormKind kind) : kind_(kind) {}

    NormKind kind_;
    Matrix weight_;
    Matrix weight_sqrt_;
    Matrix weight_inv_sqrt_;
};

/// Matrix measure (logarithmic norm) of A under a given induced norm.
struct MeasureValue {
    double value;
    NormSpec norm;
};

/// |x| under the spec's vector norm.
double vector_norm(const Vector& x, const NormSpec& norm);

/// Symmetric positive definite square root via eigendecomposition.
/// Requires p symmetric (1e-12 relative) with lambda_min > 1e-10 lambda_max.
/// The result S is symmetrized and satisfies S*S = p to 1e-10 relative
/// Frobenius error.
Matrix spd_sqrt(const Matrix& p);

/// Similarity transform P^{1/2} A P^{-1/2} that turns weighted-norm
/// questions about A into Euclidean questions about the result.
Matrix weighted_transform(const Matrix& a, const Matrix& p);

/// Largest eigenvalue of the symmetric part (m + m^T)/2.
double symmetric_max_eigenvalue(const Matrix& m);

/// Induced matrix norm ||A|| for the spec's kind. L2 goes through the
/// largest eigenvalue of A^T A; WeightedL2 is the L2 norm of the
/// weighted_transform image.
double induced_norm(const Matrix& a, const NormSpec& norm);

/// Closed-form matrix measure:
///   L1:   max_j ( a_jj + sum_{i != j} |a_ij| )
///   LInf: max_i ( a_ii + sum_{j != i} |a_ij| )
///   L2:   lambda_max( (A + A^T)/2 )
///   WeightedL2: L2 measure of P^{1/2} A P^{-1/2}
double matrix_measure(const Matrix& a, const NormSpec& norm);

MeasureValue matrix_measure_value(const Matrix& a, const NormSpec& norm);

/// Limit-definition estimate of the measure, kept deliberately independent
/// of the closed forms so the two can cross-check each other:
///   q(h) = (||I + hA|| - 1) / h
/// evaluated along a decreasing step schedule. `richardson` extrapolates the
/// last two quotients assuming first-order error and is the value to compare
/// against matrix_measure; `quotient` is the raw q at the smallest h.
struct LimitMeasureEstimate {
    double quotient;
    double richardson;
    double smallest_h;
};

/// Steps must be positive and strictly decreasing. Raises NumericError if
/// ||I + hA|| - 1 underflows to zero for a nonzero A at tiny h.
LimitMeasureEstimate matrix_measure_limit_oracle(
    const Matrix& a, const NormSpec& norm,
    const std::vector<double>& h_schedule = {1e-2, 1e-4, 1e-6});

} // namespace conkit
