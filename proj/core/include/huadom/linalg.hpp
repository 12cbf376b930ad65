/**
 * @file linalg.hpp
 * @brief Dense complex vector/matrix helpers shared by the whole library.
 *
 * Everything is desk scale (matrices up to 64x64), value-semantic and
 * re-entrant. All randomness flows through an explicit 64-bit seed.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "huadom/errors.hpp"

namespace huadom {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest square size accepted by det() and friends.
inline constexpr int kMaxMatrixSize = 64;

/// Deterministic RNG: splitmix-seeded xoshiro-free mt19937_64 with
/// hand-rolled uniform/gaussian so streams are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();

    /// Standard normal via Box-Muller.
    double gaussian();

    Complex complex_gaussian();

    /// Derive an independent stream for (seed, index) pairs.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Determinant via partial-pivot LU. Requires a square matrix of size <= 64.
Complex det(const CMatrix& m);

/// Hermitian square root of a Hermitian positive-definite matrix.
/// Throws DomainError (carrying the minimum eigenvalue) if the input is not
/// Hermitian within `herm_tol` or not positive definite.
CMatrix hermitian_sqrt(const CMatrix& m, double herm_tol = 1e-10);

/// Orthonormal basis of the row null space { x : x^T M = 0 }.
/// Singular values below tol * sigma_max are treated as zero.
std::vector<CVector> null_space(const CMatrix& m, double tol);

/// True iff ||M^H M - I||_F < tol.
bool unitary_check(const CMatrix& m, double tol);

/// Haar-style random unitary from the QR of a seeded complex Gaussian,
/// with the R-diagonal phase fix. Deterministic per seed.
CMatrix random_unitary(int n, std::uint64_t seed);

/// Random vector with iid complex Gaussian entries.
CVector random_gaussian_vector(int n, Rng& rng);

/// Random matrix with iid complex Gaussian entries.
CMatrix random_gaussian_matrix(int rows, int cols, Rng& rng);

/// Frobenius distance to the Hermitian-transpose, ||M - M^H||_F.
double hermiticity_defect(const CMatrix& m);

/// Throws DimensionError unless every entry of m is finite.
void require_finite(const CMatrix& m, const char* what);
void require_finite(const CVector& v, const char* what);

} // namespace huadom
