#ifndef FLOQ_PROPAGATOR_HPP
#define FLOQ_PROPAGATOR_HPP

#include "floq/drive.hpp"

namespace floq {

// Midpoint-exponential integrator controls. The step count refers to one
// period and is scaled to the requested interval; with auto_refine the
// count doubles until successive refinements differ by less than
// refine_tol (capped at max_steps_per_period). Kicked drives bypass the
// integrator and use exact segment products.
struct PropagateOptions {
    int steps_per_period = 2048;
    bool auto_refine = true;
    double refine_tol = 1e-9;
    int max_steps_per_period = 1 << 16;
};

// Time-ordered evolution U(t1, t0).
Matrix propagate(const DriveProtocol& d, double t0, double t1, const PropagateOptions& opts = {});

// Fixed-step midpoint product (no refinement); kicked drives still exact.
Matrix propagate_fixed(const DriveProtocol& d, double t0, double t1, long steps);

// One-period propagator U(t0 + T, t0).
Matrix monodromy(const DriveProtocol& d, double t0 = 0.0, const PropagateOptions& opts = {});

// Chronological piecewise-constant pieces covering [t0, t0 + T] of a
// kicked drive (partial first/last pieces when t0 falls inside a segment).
struct SegmentWindow {
    Matrix h;
    double duration;
    double start;      // absolute time
    size_t seg_index;  // index into the drive's segment list
};
std::vector<SegmentWindow> segments_in_window(const DriveProtocol& d, double t0);

}  // namespace floq

#endif
