#include <conkit/measure.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace conkit {

namespace {

constexpr double kSymmetryTol = 1e-12;   // relative Frobenius
constexpr double kSpdFloor = 1e-10;      // lambda_min > floor * lambda_max

struct SpdEigen {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;
};

// Validates symmetry and positive definiteness, then returns the
// eigensystem of the symmetrized matrix.
SpdEigen spd_eigen(const Matrix& p, const char* what) {
    detail::require_square(p, what);
    detail::require_finite(p, what);
    const double scale = p.norm();
    const double asym = (p - p.transpose()).norm();
    if (asym > kSymmetryTol * std::max(scale, 1e-300)) {
        std::ostringstream msg;
        msg << what << " is not symmetric: relative asymmetry "
            << asym / std::max(scale, 1e-300);
        throw std::invalid_argument(msg.str());
    }
    Matrix sym = 0.5 * (p + p.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericError(std::string(what) + ": eigendecomposition failed");
    const double lmax = solver.eigenvalues().maxCoeff();
    const double lmin = solver.eigenvalues().minCoeff();
    if (!(lmax > 0.0) || !(lmin > kSpdFloor * lmax)) {
        std::ostringstream msg;
        msg << what << " is not positive definite: spectrum [" << lmin << ", "
            << lmax << "]";
        throw std::invalid_argument(msg.str());
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

void require_weight_compatible(const NormSpec& norm, Index n, const char* what) {
    if (norm.is_weighted() && norm.weight_dimension() != n) {
        std::ostringstream msg;
        msg << what << ": weight dimension " << norm.weight_dimension()
            << " does not match operand dimension " << n;
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

const char* to_string(NormKind kind) {
    switch (kind) {
        case NormKind::L1: return "L1";
        case NormKind::L2: return "L2";
        case NormKind::LInf: return "LInf";
        case NormKind::WeightedL2: return "WeightedL2";
    }
    return "unknown";
}

NormSpec NormSpec::weighted_l2(const Matrix& weight) {
    SpdEigen eig = spd_eigen(weight, "weight");
    NormSpec spec(NormKind::WeightedL2);
    spec.weight_ = weight;
    Vector sqrt_vals = eig.eigenvalues.array().sqrt();
    Matrix s = eig.eigenvectors * sqrt_vals.asDiagonal() *
               eig.eigenvectors.transpose();
    Matrix si = eig.eigenvectors * sqrt_vals.cwiseInverse().asDiagonal() *
                eig.eigenvectors.transpose();
    spec.weight_sqrt_ = 0.5 * (s + s.transpose());
    spec.weight_inv_sqrt_ = 0.5 * (si + si.transpose());
    return spec;
}

const Matrix& NormSpec::weight() const {
    detail::require(is_weighted(), "norm has no weight");
    return weight_;
}

const Matrix& NormSpec::weight_sqrt() const {
    detail::require(is_weighted(), "norm has no weight");
    return weight_sqrt_;
}

const Matrix& NormSpec::weight_inv_sqrt() const {
    detail::require(is_weighted(), "norm has no weight");
    return weight_inv_sqrt_;
}

double vector_norm(const Vector& x, const NormSpec& norm) {
    detail::require(x.size() >= 1, "vector must be non-empty");
    detail::require_finite(x, "vector");
    require_weight_compatible(norm, x.size(), "vector_norm");
    switch (norm.kind()) {
        case NormKind::L1: return x.lpNorm<1>();
        case NormKind::L2: return x.norm();
        case NormKind::LInf: return x.lpNorm<Eigen::Infinity>();
        case NormKind::WeightedL2: return (norm.weight_sqrt() * x).norm();
    }
    throw std::invalid_argument("unknown norm kind");
}

Matrix spd_sqrt(const Matrix& p) {
    SpdEigen eig = spd_eigen(p, "spd_sqrt operand");
    Vector sqrt_vals = eig.eigenvalues.array().sqrt();
    Matrix s = eig.eigenvectors * sqrt_vals.asDiagonal() *
               eig.eigenvectors.transpose();
    return 0.5 * (s + s.transpose());
}

Matrix weighted_transform(const Matrix& a, const Matrix& p) {
    detail::require_square(a, "weighted_transform operand");
    detail::require_finite(a, "weighted_transform operand");
    detail::require(a.rows() == p.rows(),
                    "weighted_transform: dimension mismatch");
    NormSpec spec = NormSpec::weighted_l2(p);
    return spec.weight_sqrt() * a * spec.weight_inv_sqrt();
}

double symmetric_max_eigenvalue(const Matrix& m) {
    detail::require_square(m, "symmetric_max_eigenvalue operand");
    detail::require_finite(m, "symmetric_max_eigenvalue operand");
    Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym,
                                                 Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("symmetric eigensolve failed");
    return solver.eigenvalues().maxCoeff();
}

double induced_norm(const Matrix& a, const NormSpec& norm) {
    detail::require_square(a, "induced_norm operand");
    detail::require_finite(a, "induced_norm operand");
    require_weight_compatible(norm, a.rows(), "induced_norm");
    switch (norm.kind()) {
        case NormKind::L1:
            return a.cwiseAbs().colwise().sum().maxCoeff();
        case NormKind::LInf:
            return a.cwiseAbs().rowwise().sum().maxCoeff();
        case NormKind::L2: {
            // ||A||_2 = sqrt(lambda_max(A^T A)); the Gram matrix is
            // symmetric PSD so the symmetric solver applies.
            double lmax = symmetric_max_eigenvalue(a.transpose() * a);
            return std::sqrt(std::max(lmax, 0.0));
        }
        case NormKind::WeightedL2: {
            Matrix b = norm.weight_sqrt() * a * norm.weight_inv_sqrt();
            return induced_norm(b, NormSpec::l2());
        }
    }
    throw std::invalid_argument("unknown norm kind");
}

double matrix_measure(const Matrix& a, const NormSpec& norm) {
    detail::require_square(a, "matrix_measure operand");
    detail::require_finite(a, "matrix_measure operand");
    require_weight_compatible(norm, a.rows(), "matrix_measure");
    const Index n = a.rows();
    switch (norm.kind()) {
        case NormKind::L1: {
            double best = -std::numeric_limits<double>::infinity();
            for (Index j = 0; j < n; ++j) {
                double col = a(j, j);
                for (Index i = 0; i < n; ++i)
                    if (i != j) col += std::abs(a(i, j));
                best = std::max(best, col);
            }
            return best;
        }
        case NormKind::LInf: {
            double best = -std::numeric_limits<double>::infinity();
            for (Index i = 0; i < n; ++i) {
                double row = a(i, i);
                for (Index j = 0; j < n; ++j)
                    if (j != i) row += std::abs(a(i, j));
                best = std::max(best, row);
            }
            return best;
        }
        case NormKind::L2:
            return symmetric_max_eigenvalue(a);
        case NormKind::WeightedL2: {
            Matrix b = norm.weight_sqrt() * a * norm.weight_inv_sqrt();
            return symmetric_max_eigenvalue(b);
        }
    }
    throw std::invalid_argument("unknown norm kind");
}

MeasureValue matrix_measure_value(const Matrix& a, const NormSpec& norm) {
    return {matrix_measure(a, norm), norm};
}

LimitMeasureEstimate matrix_measure_limit_oracle(
    const Matrix& a, const NormSpec& norm,
    const std::vector<double>& h_schedule) {
    detail::require_square(a, "limit oracle operand");
    detail::require_finite(a, "limit oracle operand");
    require_weight_compatible(norm, a.rows(), "limit oracle");
    detail::require(!h_schedule.empty(), "step schedule must be non-empty");
    for (std::size_t i = 0; i < h_schedule.size(); ++i) {
        detail::require(h_schedule[i] > 0.0, "steps must be positive");
        if (i > 0)
            detail::require(h_schedule[i] < h_schedule[i - 1],
                            "steps must be strictly decreasing");
    }

    const Index n = a.rows();
    const Matrix identity = Matrix::Identity(n, n);
    const double a_norm = induced_norm(a, norm);
    const double eps = std::numeric_limits<double>::epsilon();

    // The weighted norm of I + hA is evaluated as a full similarity
    // product each time, sharing nothing with the closed-form route beyond
    // the square-root factors themselves.
    auto perturbed_norm = [&](double h) {
        Matrix m = identity + h * a;
        if (norm.is_weighted())
            m = norm.weight_sqrt() * m * norm.weight_inv_sqrt();
        NormSpec base = norm.is_weighted() ? NormSpec::l2() : norm;
        return induced_norm(m, base);
    };

    std::vector<double> quotients;
    quotients.reserve(h_schedule.size());
    for (double h : h_schedule) {
        const double diff = perturbed_norm(h) - 1.0;
        if (diff == 0.0 && a_norm != 0.0 && h * a_norm < 16.0 * eps) {
            std::ostringstream msg;
            msg << "difference quotient underflowed at h = " << h
                << " (h * ||A|| = " << h * a_norm << ")";
            throw NumericError(msg.str());
        }
        quotients.push_back(diff / h);
    }

    LimitMeasureEstimate est;
    est.smallest_h = h_schedule.back();
    est.quotient = quotients.back();
    if (h_schedule.size() >= 2) {
        // q(h) = mu + K h + O(h^2): eliminate the first-order term from the
        // two smallest steps.
        const double h1 = h_schedule[h_schedule.size() - 2];
        const double h2 = h_schedule[h_schedule.size() - 1];
        const double q1 = quotients[quotients.size() - 2];
        const double q2 = quotients[quotients.size() - 1];
        est.richardson = (h1 * q2 - h2 * q1) / (h1 - h2);
    } else {
        est.richardson = est.quotient;
    }
    return est;
}

} // namespace conkit
