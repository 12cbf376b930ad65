#include "huadom/linalg.hpp"

#include <cmath>
#include <numbers>

namespace huadom {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t Rng::next_u64() {
    return splitmix64(state_);
}

double Rng::uniform() {
    // 53 high bits -> [0,1) with full double resolution
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t x = seed ^ (0xa0761d6478bd642full + index * 0xe7037ed1a0b428dbull);
    return splitmix64(x);
}

void require_finite(const CMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw DimensionError(std::string(what) + ": non-finite entry");
    }
}

void require_finite(const CVector& v, const char* what) {
    if (!v.allFinite()) {
        throw DimensionError(std::string(what) + ": non-finite entry");
    }
}

Complex det(const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("det: matrix must be square");
    }
    if (m.rows() > kMaxMatrixSize) {
        throw DimensionError("det: matrix exceeds desk scale (64)");
    }
    if (m.rows() == 0) {
        return Complex(1.0, 0.0);
    }
    return Eigen::PartialPivLU<CMatrix>(m).determinant();
}

double hermiticity_defect(const CMatrix& m) {
    return (m - m.adjoint()).norm();
}

CMatrix hermitian_sqrt(const CMatrix& m, double herm_tol) {
    if (m.rows() != m.cols()) {
        throw DimensionError("hermitian_sqrt: matrix must be square");
    }
    const double scale = std::max(1.0, m.norm());
    if (hermiticity_defect(m) > herm_tol * scale) {
        throw DomainError("hermitian_sqrt: matrix not Hermitian", hermiticity_defect(m));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    const Eigen::VectorXd evals = es.eigenvalues();
    const double min_eig = evals.minCoeff();
    if (min_eig <= 0.0) {
        throw DomainError("hermitian_sqrt: matrix not positive definite", min_eig);
    }
    const Eigen::VectorXd roots = evals.array().sqrt();
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<CVector> null_space(const CMatrix& m, double tol) {
    if (tol <= 0.0) {
        throw DomainError("null_space: tol must be positive", tol);
    }
    // x M = 0  <=>  M^T x = 0, so take the kernel of the plain transpose.
    const CMatrix mt = m.transpose();
    Eigen::JacobiSVD<CMatrix> svd(mt, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double cut = tol * sigma_max;
    std::vector<CVector> basis;
    const auto n = mt.cols();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double s = k < sv.size() ? sv(k) : 0.0;
        if (s <= cut) {
            basis.push_back(svd.matrixV().col(k));
        }
    }
    return basis;
}

bool unitary_check(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const CMatrix g = m.adjoint() * m;
    return (g - CMatrix::Identity(m.rows(), m.cols())).norm() < tol;
}

CMatrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
    CMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            g(i, j) = rng.complex_gaussian();
        }
    }
    return g;
}

CVector random_gaussian_vector(int n, Rng& rng) {
    CVector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = rng.complex_gaussian();
    }
    return v;
}

CMatrix random_unitary(int n, std::uint64_t seed) {
    if (n < 1) {
        throw DimensionError("random_unitary: n must be >= 1");
    }
    Rng rng(seed);
    const CMatrix g = random_gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases so the distribution is Haar, not QR-convention-dependent.
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        const Complex phase = a > 0.0 ? d / a : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return q;
}

} // namespace huadom
