#ifndef FLOQ_AGPSOLVE_HPP
#define FLOQ_AGPSOLVE_HPP

#include "floq/drive.hpp"

namespace floq {

// Dense operator Fourier stack O(t) = sum_{l=-n_max..n_max} e^{i l w t} O_l.
struct FourierOperator {
    double omega = 0.0;
    int n_max = 0;
    std::vector<Matrix> comp;  // comp[l + n_max]

    static FourierOperator zero(Eigen::Index dim, int n_max, double omega);
    static FourierOperator from_series(const FourierSeries& fs, int n_max);

    Eigen::Index dim() const { return comp.empty() ? 0 : comp.front().rows(); }
    const Matrix& harmonic(int l) const;
    Matrix& harmonic(int l);
    Matrix sample(double t) const;
    FourierOperator time_derivative() const;           // multiply by i l w
    double hermitian_violation(int samples = 64) const;  // max ||O - O^dag|| over t
};

// Dense matrix of L(X) = i[H(t), X(t)] - dX/dt on the truncated harmonic
// space; vectorization is harmonic-major, then column-major within each
// harmonic block: index = (l + n_h) dim^2 + col dim + row.
struct Superoperator {
    Matrix mat;
    Eigen::Index dim = 0;
    int n_h = 0;
    double omega = 0.0;
};

inline constexpr Eigen::Index kSuperoperatorRowLimit = 30000;

Superoperator build_superoperator(const FourierOperator& h, int n_h);

Vector vectorize(const FourierOperator& x, int n_h);
FourierOperator devectorize(const Vector& v, Eigen::Index dim, int n_h, double omega);

struct AgpSolveReport {
    double residual = 0.0;       // ||L(L A + dH/dt)||_2
    double sigma_max = 0.0;
    double sigma_min_kept = 0.0;
    double sigma_max_dropped = 0.0;
    Eigen::Index rank = 0;
    bool conditioning_warning = false;  // singular values straddling the cutoff
};

// A_+ = -L^+ (dH/dt): Fourier-truncated Kato AGP.
FourierOperator solve_kato_agp(const FourierOperator& h, int n_h, double rank_tol = 1e-8,
                               AgpSolveReport* report = nullptr);

// Zeroth-order high-frequency record: time-averaged Hamiltonian, its
// spectrum (the infinite-frequency Kato energies) and vanishing Berry
// phases.
struct HfeKatoResult {
    Matrix h_f0;
    RealVector xi0;
    RealVector gamma0;
    Matrix states0;
};

HfeKatoResult hfe_kato(const DriveProtocol& d, int quadrature_points = 1024);

}  // namespace floq

#endif
