#ifndef FLOQ_GAUGES_HPP
#define FLOQ_GAUGES_HPP

#include <functional>

#include "floq/numkernel.hpp"

namespace floq {

// Counterdiabatic gauge rows: which Hamiltonian drives the evolution and
// which accumulated phase is predicted for an eigenstate of the control.
//   kato_cd       H_ctrl + A_K          -> gamma + phi
//   dynamical_cd  H_ctrl + A_D          -> phi          (chi = -gamma)
//   generic       H_ctrl + A'           -> chi + gamma + phi
//   kato_agp_only A_K alone             -> gamma
//   periodic_agp  A' alone, chi = -gamma + 2 pi ell t/T -> 2 pi ell at t = T
enum class GaugeRow { kato_cd, dynamical_cd, generic, kato_agp_only, periodic_agp };

struct ControlPath {
    std::function<Matrix(double)> h;  // H_ctrl(t) on [0, duration]
    double duration = 1.0;
};

struct GaugeEvolutionOptions {
    int grid_points = 4096;
    double degeneracy_floor = 1e-8;  // reject paths with near-degenerate spectrum
};

struct GaugeEvolution {
    RealVector measured;   // accumulated phase per level, unwrapped along the path
    RealVector predicted;  // the Table-row prediction
    RealVector gamma;      // geometric phases in the fixed reference gauge
    RealVector phi;        // dynamical phases
    RealVector chi;        // chi_n(T) (zero when the row has no chi)
    RealVector transport_fidelity;  // |<n_ref(T)|psi(T)>|
};

// Evolve each initial eigenstate of H_ctrl(0) under the row's Hamiltonian
// and measure the accumulated phase against the instantaneous eigenframe
// in a fixed reference gauge. chi/chi_dot are required for the generic
// row; ell selects the winding integers of the periodic row.
GaugeEvolution gauge_shift_evolution(const ControlPath& path, GaugeRow row,
                                     std::function<double(int, double)> chi = {},
                                     std::function<double(int, double)> chi_dot = {},
                                     const IntVector& ell = IntVector(),
                                     const GaugeEvolutionOptions& opts = {});

}  // namespace floq

#endif
