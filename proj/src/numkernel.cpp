#include "floq/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/SVD>

namespace floq {

double max_abs(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(max_abs(m), 1e-300);
    return max_abs(m - m.adjoint()) <= rel_tol * scale;
}

bool is_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    const Matrix g = u.adjoint() * u;
    return max_abs(g - Matrix::Identity(u.rows(), u.cols())) <= tol;
}

double principal_angle(double theta) {
    theta = std::remainder(theta, 2.0 * M_PI);
    if (theta <= -M_PI) theta += 2.0 * M_PI;
    return theta;
}

namespace {

void check_finite(const Matrix& m, const char* who) {
    if (!m.allFinite()) throw InvalidInput(std::string(who) + ": non-finite entries");
}

void check_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols()) throw InvalidInput(std::string(who) + ": matrix not square");
}

}  // namespace

HermitianMatrix::HermitianMatrix(Matrix m) {
    check_square(m, "HermitianMatrix");
    check_finite(m, "HermitianMatrix");
    if (!is_hermitian(m))
        throw InvalidInput("HermitianMatrix: input beyond Hermiticity tolerance");
    m_ = 0.5 * (m + m.adjoint());
}

UnitaryMatrix::UnitaryMatrix(Matrix u) {
    check_square(u, "UnitaryMatrix");
    check_finite(u, "UnitaryMatrix");
    if (!is_unitary(u))
        throw InvalidInput("UnitaryMatrix: input beyond unitarity tolerance");
    u_ = std::move(u);
}

HermitianSpectrum eigh(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
    if (solver.info() != Eigen::Success)
        throw NumericFailure("eigh: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianSpectrum eigh(const Matrix& m) { return eigh(HermitianMatrix(m)); }

namespace {

// Deterministic sequence of rotation angles for the Hermitian reductions
// Re(e^{-i phi} U); retried if an accidental cos-degeneracy spoils the
// eigenvectors.
constexpr double kEiguPhis[] = {0.0,        0.7853981633974483, 0.4142135623730951,
                                1.1283791670955126, 0.2718281828459045, 0.9159655941772190};

}  // namespace

UnitarySpectrum eigu(const UnitaryMatrix& u) {
    const Matrix& mat = u.mat();
    const Eigen::Index n = mat.rows();
    const double res_tol = 1e-10 * static_cast<double>(std::max<Eigen::Index>(n, 1));

    UnitarySpectrum best;
    double best_res = std::numeric_limits<double>::infinity();
    for (double phi : kEiguPhis) {
        const Cplx rot = std::exp(Cplx(0.0, -phi));
        Matrix herm = 0.5 * (rot * mat + std::conj(rot) * mat.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
        if (solver.info() != Eigen::Success) continue;
        const Matrix& vec = solver.eigenvectors();

        UnitarySpectrum out;
        out.vectors = vec;
        out.values = Vector(n);
        out.phases = RealVector(n);
        double worst = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            Cplx lambda = vec.col(j).dot(mat * vec.col(j));  // Rayleigh quotient
            const double mod = std::abs(lambda);
            if (mod > 0) lambda /= mod;
            out.values[j] = lambda;
            out.phases[j] = std::arg(lambda);
            worst = std::max(worst, (mat * vec.col(j) - lambda * vec.col(j)).cwiseAbs().maxCoeff());
        }
        if (worst < best_res) {
            best_res = worst;
            best = std::move(out);
        }
        if (best_res <= res_tol) break;
    }
    if (!std::isfinite(best_res))
        throw NumericFailure("eigu: eigensolver did not converge");
    if (best_res > res_tol)
        throw NumericFailure("eigu: residual " + std::to_string(best_res) +
                             " above tolerance; input may be far from normal");

    // Sort by phase, ascending in (-pi, pi].
    std::vector<Eigen::Index> order(static_cast<size_t>(best.vectors.cols()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return best.phases[a] < best.phases[b];
    });
    UnitarySpectrum sorted;
    const Eigen::Index n2 = best.vectors.cols();
    sorted.values = Vector(n2);
    sorted.phases = RealVector(n2);
    sorted.vectors = Matrix(best.vectors.rows(), n2);
    for (Eigen::Index j = 0; j < n2; ++j) {
        sorted.values[j] = best.values[order[static_cast<size_t>(j)]];
        sorted.phases[j] = best.phases[order[static_cast<size_t>(j)]];
        sorted.vectors.col(j) = best.vectors.col(order[static_cast<size_t>(j)]);
    }
    return sorted;
}

UnitarySpectrum eigu(const Matrix& u) { return eigu(UnitaryMatrix(u)); }

namespace {

// Truncated Taylor series of exp(A) for small ||A||; order chosen so the
// remainder is below machine precision at the given norm bound.
Matrix expm_taylor(const Matrix& a, int order) {
    const Eigen::Index n = a.rows();
    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= order; ++k) {
        term = (term * a) / static_cast<double>(k);
        result += term;
    }
    return result;
}

}  // namespace

Matrix expm_antihermitian(const Matrix& m, double s) {
    if (!std::isfinite(s)) throw InvalidInput("expm_antihermitian: non-finite scale");
    check_square(m, "expm_antihermitian");
    check_finite(m, "expm_antihermitian");
    const Eigen::Index n = m.rows();
    if (s == 0.0) return Matrix::Identity(n, n);

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff() * std::abs(s);
    if (norm1 < 0.2) {
        int order = 12;
        if (norm1 < 1e-3) order = 5;
        else if (norm1 < 2e-2) order = 8;
        return expm_taylor(Matrix(Cplx(0.0, -s) * m), order);
    }
    HermitianSpectrum es = eigh(m);
    Vector phase(n);
    for (Eigen::Index j = 0; j < n; ++j) phase[j] = std::exp(Cplx(0.0, -s * es.values[j]));
    return es.vectors * phase.asDiagonal() * es.vectors.adjoint();
}

UnitaryMatrix expm_antihermitian(const HermitianMatrix& m, double s) {
    return UnitaryMatrix(expm_antihermitian(m.mat(), s));
}

Matrix pinv(const Matrix& m, double rank_tol) {
    if (!(rank_tol > 0)) throw InvalidInput("pinv: rank_tol must be positive");
    check_finite(m, "pinv");
    if (m.size() == 0) return m.adjoint();

    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    const double cutoff = rank_tol * (sigma.size() > 0 ? sigma[0] : 0.0);
    Vector inv(sigma.size());
    for (Eigen::Index j = 0; j < sigma.size(); ++j)
        inv[j] = (sigma[j] > cutoff && sigma[j] > 0.0) ? Cplx(1.0 / sigma[j], 0.0) : Cplx(0.0, 0.0);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Matrix overlap_matrix(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw InvalidInput("overlap_matrix: state dimensions differ");
    return a.adjoint() * b;
}

}  // namespace floq
