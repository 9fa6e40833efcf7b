#ifndef FLOQ_KATO_HPP
#define FLOQ_KATO_HPP

#include "floq/floquet.hpp"

namespace floq {

struct KatoOptions {
    // Continuous drives: nodes per period. Kicked drives: nodes per segment
    // (the within-segment overlap factor is closed-form, so this is cheap
    // to raise near sharp resonances).
    int grid_points = 1024;
    PropagateOptions prop;            // micro-steps between grid nodes
    std::vector<double> agp_sample_times;  // offsets from the gauge origin
    int default_agp_samples = 8;      // used when agp_sample_times is empty
    double overlap_floor = 0.5;       // consecutive-state overlap guard
    // Kicked drives: the within-segment Pancharatnam factor is a single
    // closed-form number, so the product can use far more steps than the
    // node grid at no cost.
    long berry_steps_min = 1L << 19;
    // Continuous drives: stride-2 Richardson extrapolation of the Berry
    // phase sums (second-order -> fourth-order).
    bool berry_richardson = true;
};

// Gauge-invariant decomposition data over one period at a fixed Floquet
// gauge. E_K,n(t) = <psi_n[t]|H(t)|psi_n[t]> on transported states,
// xi_K,n(t) their running averages, gamma the Berry phases from the
// discretized parallel-transport product.
struct KatoResult {
    double period = 0.0;
    double gauge_t0 = 0.0;
    std::vector<double> times;      // absolute node times (kick boundaries duplicated)
    Eigen::MatrixXd E_K;            // levels x nodes
    Eigen::MatrixXd xi_K;           // levels x nodes, running average
    RealVector xi_T;                // xi_K,n at t = T
    RealVector gamma_principal;     // (-pi, pi]
    RealVector gamma;               // principal + 2 pi ell (solution's gauge)
    Matrix wilson;                  // e^{-i Gamma(T,0)}
    Matrix kato_op;                 // Xi_K(T,0)
    std::vector<double> agp_times;  // absolute times of the operator samples
    std::vector<Matrix> A_K_samples;
    std::vector<Matrix> H_K_samples;
    Matrix states0;
    double reconstruction_residual = 0.0;  // ||U(T,0) - e^{-i Gamma} e^{-i T Xi}||_max
};

KatoResult kato_analyze(const DriveProtocol& d, const FloquetSolution& sol,
                        const KatoOptions& opts = {});

// --- grid-level building blocks (used by tests and small studies) -----------

// Floquet states transported with U(t, t0) on a materialized grid.
struct StateGrid {
    double period = 0.0;
    double gauge_t0 = 0.0;
    std::vector<double> times;
    std::vector<int> segment;       // containing kick segment, -1 for continuous
    std::vector<Matrix> states;     // per node, columns = levels
};

StateGrid transport_states(const DriveProtocol& d, const FloquetSolution& sol,
                           int grid_points, const PropagateOptions& opts = {});

Eigen::MatrixXd kato_energies(const DriveProtocol& d, const StateGrid& grid);

// Running averages xi(t_j) = (t_j - t_0)^{-1} * trapezoid(E); node 0 takes
// E(0) by continuity. Duplicated nodes contribute zero-width intervals.
Eigen::MatrixXd kato_average(const Eigen::MatrixXd& E, const std::vector<double>& times);

// gamma_n = -arg prod_j <psi_n(t_{j+1})|psi_n(t_j)> with ray closure to the
// first node. Near-zero overlap (< floor) demands a finer grid.
RealVector berry_phases(const StateGrid& grid, double overlap_floor = 0.5);

// A_K at an interior grid node via the central projector difference
// (periodic wrap at the ends).
Matrix kato_agp(const StateGrid& grid, size_t node);

Matrix kato_hamiltonian(const Matrix& h_t, const Matrix& a_k);

Matrix wilson_line(const Matrix& states0, const RealVector& gamma);
Matrix kato_operator(const RealVector& xi_T, const Matrix& states0);

}  // namespace floq

#endif
