#ifndef FLOQ_FLOQUET_HPP
#define FLOQ_FLOQUET_HPP

#include "floq/propagator.hpp"

namespace floq {

struct KatoResult;  // kato.hpp

struct FloquetOptions {
    PropagateOptions prop;
    int micromotion_samples = 256;
    Eigen::Index micromotion_cache_max_dim = 64;  // skip the stored grid above this
    double degeneracy_gap = 1e-9;                 // eigenphase cluster width
};

// Stroboscopic solution at a fixed Floquet gauge t0: monodromy eigenpairs
// U(t0+T, t0) |psi_n> = e^{-i theta_n} |psi_n>, sorted by quasienergy.
// theta carries the unfolding gauge: theta = principal + 2 pi ell.
struct FloquetSolution {
    double period = 0.0;
    double gauge_t0 = 0.0;
    RealVector theta;
    RealVector quasienergy;  // theta / period
    IntVector ell;           // per-level unfolding integers
    Matrix states;           // columns |psi_n[t0]>
    Matrix monodromy_matrix;
    bool degenerate_clusters_symmetry_fixed = false;
    bool has_unfixed_degeneracy = false;

    std::vector<double> micromotion_times;   // offsets from gauge_t0
    std::vector<Matrix> micromotion_cache;   // P at those offsets

    Eigen::Index dim() const { return states.rows(); }
    // H_F at the gauge origin, sum_n quasienergy_n |psi_n><psi_n|.
    Matrix floquet_hamiltonian() const;
};

FloquetSolution solve_floquet(const DriveProtocol& d, double t0 = 0.0,
                              const FloquetOptions& opts = {});

// Micromotion operator P(s) = U(t0+s, t0) exp(+i s H_F), s in [0, T]
// (values outside are reduced mod T). Off-grid times are re-propagated,
// never interpolated.
Matrix micromotion(const DriveProtocol& d, const FloquetSolution& sol, double s,
                   const PropagateOptions& opts = {});

// H_F[s] = P(s) H_F[0] P(s)^dag.
Matrix floquet_hamiltonian_at(const DriveProtocol& d, const FloquetSolution& sol, double s,
                              const PropagateOptions& opts = {});

// A_F(s) = H(t0+s) - H_F[s].
Matrix floquet_agp(const DriveProtocol& d, const FloquetSolution& sol, double s,
                   const PropagateOptions& opts = {});

// Shift quasienergies by ell_n * omega per level; states and the
// stroboscopic propagator are unchanged.
FloquetSolution refold(const FloquetSolution& sol, const IntVector& ell);

struct DriveFamilyFlags {
    bool equilibrium = false;       // ||A_F(t)|| < tol for all t
    bool pure_micromotion = false;  // ||H_F|| < tol
    bool flat = false;              // ||A_K(t)|| < tol for all t
    bool pure_geometric = false;    // ||H_K(t)|| < tol for all t
};

// Classification against both decompositions; flags are not mutually
// exclusive. Norms are entrywise max over the Kato result's sample grid.
DriveFamilyFlags classify_drive(const DriveProtocol& d, const FloquetSolution& sol,
                                const KatoResult& kato, double tol);

}  // namespace floq

#endif
