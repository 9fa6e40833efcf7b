#include "floq/propagator.hpp"

#include <cmath>

namespace floq {

namespace {

Matrix propagate_kicked(const DriveProtocol& d, double t0, double t1) {
    const double T = d.period();
    const auto& starts = d.segment_starts();
    const size_t nseg = d.segments().size();

    Matrix u = Matrix::Identity(d.dim(), d.dim());
    double t = t0;
    // index of the segment containing t (periodic extension)
    while (t < t1 - 1e-15 * T) {
        double tau = std::fmod(t, T);
        if (tau < 0) tau += T;
        double base = t - tau;
        size_t j = 0;
        while (j + 1 < nseg && tau >= starts[j + 1] - 1e-15 * T) ++j;
        const double seg_end = base + starts[j + 1];
        const double upto = std::min(t1, seg_end);
        if (upto <= t) break;  // roundoff guard
        u = expm_antihermitian(d.segments()[j].h, upto - t) * u;
        t = upto;
    }
    return u;
}

Matrix propagate_midpoint(const DriveProtocol& d, double t0, double t1, long steps) {
    const Eigen::Index n = d.dim();
    Matrix u = Matrix::Identity(n, n);
    const double dt = (t1 - t0) / static_cast<double>(steps);
    for (long j = 0; j < steps; ++j) {
        const double tm = t0 + (static_cast<double>(j) + 0.5) * dt;
        const Matrix h = d.hamiltonian(tm);
        if (!h.allFinite())
            throw InvalidInput("propagate: non-finite Hamiltonian sample at t = " +
                               std::to_string(tm));
        u = expm_antihermitian(h, dt) * u;
    }
    return u;
}

}  // namespace

Matrix propagate_fixed(const DriveProtocol& d, double t0, double t1, long steps) {
    if (t1 < t0) throw InvalidInput("propagate: t1 must be >= t0");
    if (t1 == t0) return Matrix::Identity(d.dim(), d.dim());
    if (d.is_kicked()) return propagate_kicked(d, t0, t1);
    if (steps < 1) steps = 1;
    return propagate_midpoint(d, t0, t1, steps);
}

Matrix propagate(const DriveProtocol& d, double t0, double t1, const PropagateOptions& opts) {
    if (t1 < t0) throw InvalidInput("propagate: t1 must be >= t0");
    if (t1 == t0) return Matrix::Identity(d.dim(), d.dim());
    if (d.is_kicked()) return propagate_kicked(d, t0, t1);

    const double span = (t1 - t0) / d.period();
    long steps = std::max<long>(1, static_cast<long>(std::ceil(opts.steps_per_period * span)));
    Matrix u = propagate_midpoint(d, t0, t1, steps);
    if (!opts.auto_refine) return u;

    const long cap = std::max<long>(1, static_cast<long>(
                         std::ceil(static_cast<double>(opts.max_steps_per_period) * span)));
    while (steps < cap) {
        steps = std::min(cap, steps * 2);
        Matrix u2 = propagate_midpoint(d, t0, t1, steps);
        const double diff = max_abs(u2 - u);
        u = std::move(u2);
        if (diff < opts.refine_tol) break;
    }
    return u;
}

Matrix monodromy(const DriveProtocol& d, double t0, const PropagateOptions& opts) {
    return propagate(d, t0, t0 + d.period(), opts);
}

std::vector<SegmentWindow> segments_in_window(const DriveProtocol& d, double t0) {
    if (!d.is_kicked()) throw InvalidInput("segments_in_window: drive is not kicked");
    const double T = d.period();
    const auto& starts = d.segment_starts();
    const size_t nseg = d.segments().size();

    std::vector<SegmentWindow> out;
    double t = t0;
    const double t_end = t0 + T;
    while (t < t_end - 1e-15 * T) {
        double tau = std::fmod(t, T);
        if (tau < 0) tau += T;
        double base = t - tau;
        size_t j = 0;
        while (j + 1 < nseg && tau >= starts[j + 1] - 1e-15 * T) ++j;
        const double seg_end = base + starts[j + 1];
        const double upto = std::min(t_end, seg_end);
        if (upto <= t) break;  // roundoff guard
        if (upto - t > 1e-15 * T)
            out.push_back({d.segments()[j].h, upto - t, t, j});
        t = upto;
    }
    return out;
}

}  // namespace floq
