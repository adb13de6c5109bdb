#include <conkit/random.hpp>

#include <Eigen/QR>

namespace conkit::rng {

Matrix matrix(Engine& engine, Index rows, Index cols, double lo, double hi) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = uniform(engine, lo, hi);
    return m;
}

Vector vector(Engine& engine, Index n, double lo, double hi) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform(engine, lo, hi);
    return v;
}

Matrix orthogonal(Engine& engine, Index n) {
    // Uniform entries are good enough as a seed matrix here; the QR factor
    // is orthogonal regardless and the sign fix keeps it deterministic.
    Matrix seed = matrix(engine, n, n, -1.0, 1.0);
    Eigen::HouseholderQR<Matrix> qr(seed);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Matrix spd(Engine& engine, Index n, double lambda_lo, double lambda_hi) {
    Matrix q = orthogonal(engine, n);
    Vector spectrum = vector(engine, n, lambda_lo, lambda_hi);
    Matrix p = q * spectrum.asDiagonal() * q.transpose();
    return 0.5 * (p + p.transpose());
}

} // namespace conkit::rng
