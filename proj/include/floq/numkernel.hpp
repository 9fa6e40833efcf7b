#ifndef FLOQ_NUMKERNEL_HPP
#define FLOQ_NUMKERNEL_HPP

#include <complex>
#include <Eigen/Dense>

#include "floq/error.hpp"

namespace floq {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

inline constexpr double kHermitianTol = 1e-12;  // rel. max-norm ||M - M^dag||
inline constexpr double kUnitaryTol = 1e-10;    // ||U^dag U - 1||_max

// Largest entry modulus.
double max_abs(const Matrix& m);

bool is_hermitian(const Matrix& m, double rel_tol = kHermitianTol);
bool is_unitary(const Matrix& u, double tol = kUnitaryTol);

// Wrap an angle into the principal branch (-pi, pi].
double principal_angle(double theta);

// Hermitian operator value. Construction validates the Hermiticity
// invariant and symmetrizes (M + M^dag)/2 to absorb roundoff.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(Matrix m);
    const Matrix& mat() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Matrix m_;
};

// Unitary operator value; construction validates ||U^dag U - 1||_max.
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(Matrix u);
    const Matrix& mat() const { return u_; }
    Eigen::Index dim() const { return u_.rows(); }

  private:
    Matrix u_;
};

// Eigendecomposition of a Hermitian operator: ascending real eigenvalues,
// orthonormal eigenvector columns.
struct HermitianSpectrum {
    RealVector values;
    Matrix vectors;
};

// Eigendecomposition of a unitary operator: unit-modulus eigenvalues with
// phases in (-pi, pi], orthonormal eigenvector columns, sorted by phase.
struct UnitarySpectrum {
    Vector values;       // e^{i phase}
    RealVector phases;   // arg(values), principal branch
    Matrix vectors;
};

HermitianSpectrum eigh(const HermitianMatrix& m);
// Convenience overload: validates + symmetrizes internally.
HermitianSpectrum eigh(const Matrix& m);

UnitarySpectrum eigu(const UnitaryMatrix& u);
UnitarySpectrum eigu(const Matrix& u);

// exp(-i s M) for Hermitian M. Exactly unitary up to roundoff: spectral
// route for large ||sM||, truncated Taylor for small steps.
UnitaryMatrix expm_antihermitian(const HermitianMatrix& m, double s);
Matrix expm_antihermitian(const Matrix& m, double s);

// Moore-Penrose pseudoinverse; singular values below rank_tol * sigma_max
// are treated as zero.
Matrix pinv(const Matrix& m, double rank_tol = 1e-12);

// Overlap matrix <a_i|b_j> between two state sets (columns).
Matrix overlap_matrix(const Matrix& a, const Matrix& b);

}  // namespace floq

#endif
