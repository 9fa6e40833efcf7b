#ifndef FLOQ_SPECTRALFLOW_HPP
#define FLOQ_SPECTRALFLOW_HPP

#include <vector>

#include "floq/numkernel.hpp"

namespace floq {

// Solver output for one point of a parameter sweep.
struct SweepPoint {
    double parameter = 0.0;
    double period = 0.0;
    RealVector theta;        // folded Floquet phases
    RealVector xi;           // period-averaged Kato energies
    RealVector gamma;        // Berry phases
    Matrix states;           // columns, solver order
    bool symmetry_fixed = false;  // degenerate clusters already basis-fixed
};

struct TrackOptions {
    double ambiguity_gap = 0.05;     // |overlap| separation demanded of the best pair
    double degeneracy_gap = 1e-9;    // eigenphase cluster width
    Eigen::Index exact_max_dim = 512;  // optimal assignment below, greedy above
    bool throw_on_ambiguity = false;
};

struct Ambiguity {
    int point = 0;
    int band = 0;
    double gap = 0.0;
};

// Continuation of levels across the sweep. Band b at point p corresponds
// to solver index index_path(b, p); values are re-ordered accordingly.
struct BandTrack {
    std::vector<double> grid;
    double period = 0.0;
    Eigen::MatrixXi index_path;      // bands x points
    Eigen::MatrixXd xi, theta, gamma;
    Eigen::MatrixXd match_overlap;   // |<prev|cur>| of the accepted match
    std::vector<Ambiguity> ambiguities;
};

BandTrack track(const std::vector<SweepPoint>& sweep, const TrackOptions& opts = {});

// F_0 = |<ref|psi_band>|^2 per band per point, in tracked order.
Eigen::MatrixXd reference_overlap(const std::vector<SweepPoint>& sweep, const BandTrack& track,
                                  const Vector& reference);

struct PhotonIndices {
    Eigen::MatrixXi ell;                            // bands x points
    std::vector<std::pair<int, int>> unresolved;    // (band, point)
};

// ell = round((xi - eps_F^folded)/omega); entries farther than round_tol
// from an integer are flagged unresolved.
PhotonIndices photon_index(const BandTrack& track, double omega, double round_tol = 0.2);

// Exact minimum-cost assignment (Hungarian algorithm); returns col per row.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

}  // namespace floq

#endif
