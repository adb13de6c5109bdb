#pragma once

#include <conkit/types.hpp>

#include <cstdint>
#include <random>

/// Seeded random draws used by domain sampling and the equivalence audit.
/// std::mt19937_64 produces an identical bit stream on every platform; the
/// uniform doubles are derived from the raw bits directly because the
/// distribution adapters in <random> are implementation defined.
namespace conkit::rng {

using Engine = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& engine, double lo, double hi) {
    return lo + (hi - lo) * uniform01(engine);
}

/// Matrix with i.i.d. uniform entries in [lo, hi), filled row-major.
Matrix matrix(Engine& engine, Index rows, Index cols, double lo, double hi);

Vector vector(Engine& engine, Index n, double lo, double hi);

/// Haar-ish orthogonal matrix: QR of a random square matrix with the sign
/// ambiguity fixed from the diagonal of R, so the result is deterministic.
Matrix orthogonal(Engine& engine, Index n);

/// Symmetric positive definite matrix Q diag(lambda) Q^T with spectrum drawn
/// uniformly from [lambda_lo, lambda_hi].
Matrix spd(Engine& engine, Index n, double lambda_lo, double lambda_hi);

} // namespace conkit::rng
