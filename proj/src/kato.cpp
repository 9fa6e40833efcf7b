#include "floq/kato.hpp"

#include <algorithm>
#include <cmath>

namespace floq {

namespace {

constexpr double kProjectorStepLimit = 0.2;

// diag(A^dag B) as a complex vector (per-column overlaps).
Vector column_overlaps(const Matrix& a, const Matrix& b) {
    Vector out(a.cols());
    for (Eigen::Index n = 0; n < a.cols(); ++n) out[n] = a.col(n).dot(b.col(n));
    return out;
}

// Re diag(Psi^dag H Psi): per-level energy expectations.
RealVector level_energies(const Matrix& psi, const Matrix& h) {
    const Matrix hp = h * psi;
    RealVector out(psi.cols());
    for (Eigen::Index n = 0; n < psi.cols(); ++n) out[n] = psi.col(n).dot(hp.col(n)).real();
    return out;
}

}  // namespace

Eigen::MatrixXd kato_average(const Eigen::MatrixXd& E, const std::vector<double>& times) {
    if (static_cast<size_t>(E.cols()) != times.size())
        throw InvalidInput("kato_average: node count mismatch");
    const Eigen::Index levels = E.rows();
    const Eigen::Index nodes = E.cols();
    Eigen::MatrixXd xi(levels, nodes);
    Eigen::VectorXd integral = Eigen::VectorXd::Zero(levels);
    xi.col(0) = E.col(0);
    const double t0 = times.front();
    for (Eigen::Index j = 1; j < nodes; ++j) {
        const double dt = times[size_t(j)] - times[size_t(j - 1)];
        if (dt < 0) throw InvalidInput("kato_average: times must be non-decreasing");
        integral += 0.5 * dt * (E.col(j) + E.col(j - 1));
        const double elapsed = times[size_t(j)] - t0;
        xi.col(j) = elapsed > 0 ? (integral / elapsed).eval() : E.col(j);
    }
    return xi;
}

StateGrid transport_states(const DriveProtocol& d, const FloquetSolution& sol, int grid_points,
                           const PropagateOptions& opts) {
    if (grid_points < 2) throw InvalidInput("transport_states: need at least 2 grid points");
    const Eigen::Index dim = d.dim();
    const double t0 = sol.gauge_t0;
    const double T = d.period();

    StateGrid grid;
    grid.period = T;
    grid.gauge_t0 = t0;

    if (d.is_kicked()) {
        const auto windows = segments_in_window(d, t0);
        size_t total_nodes = 0;
        for (size_t w = 0; w < windows.size(); ++w) total_nodes += size_t(grid_points) + 1;
        if (double(dim) * double(dim) * double(total_nodes) > 1.5e8)
            throw ResourceLimit("transport_states: grid too large to materialize");

        Matrix psi = sol.states;
        for (const auto& w : windows) {
            HermitianSpectrum es = eigh(HermitianMatrix(w.h));
            const Matrix phi = es.vectors.adjoint() * psi;
            const double dt = w.duration / grid_points;
            for (int i = 0; i <= grid_points; ++i) {
                Vector ph(dim);
                for (Eigen::Index a = 0; a < dim; ++a)
                    ph[a] = std::exp(Cplx(0, -es.values[a] * (i * dt)));
                grid.times.push_back(w.start + i * dt);
                grid.segment.push_back(int(w.seg_index));
                grid.states.push_back(es.vectors * (ph.asDiagonal() * phi));
            }
            psi = grid.states.back();
        }
        return grid;
    }

    if (double(dim) * double(dim) * double(grid_points + 1) > 1.5e8)
        throw ResourceLimit("transport_states: grid too large to materialize");
    const double dt = T / grid_points;
    const long micro = std::max<long>(1, opts.steps_per_period / grid_points);
    Matrix psi = sol.states;
    grid.times.push_back(t0);
    grid.segment.push_back(-1);
    grid.states.push_back(psi);
    for (int j = 1; j <= grid_points; ++j) {
        const double a = t0 + (j - 1) * dt, b = t0 + j * dt;
        psi = (propagate_fixed(d, a, b, micro) * psi).eval();
        grid.times.push_back(b);
        grid.segment.push_back(-1);
        grid.states.push_back(psi);
    }
    return grid;
}

Eigen::MatrixXd kato_energies(const DriveProtocol& d, const StateGrid& grid) {
    const size_t nodes = grid.times.size();
    if (nodes == 0) throw InvalidInput("kato_energies: empty grid");
    const Eigen::Index levels = grid.states.front().cols();
    Eigen::MatrixXd E(levels, nodes);
    for (size_t j = 0; j < nodes; ++j) {
        const Matrix h = grid.segment[j] >= 0 ? d.segments()[size_t(grid.segment[j])].h
                                              : d.hamiltonian(grid.times[j]);
        E.col(Eigen::Index(j)) = level_energies(grid.states[j], h);
    }
    return E;
}

RealVector berry_phases(const StateGrid& grid, double overlap_floor) {
    const size_t nodes = grid.times.size();
    if (nodes < 3) throw InvalidInput("berry_phases: grid too small");
    const Eigen::Index levels = grid.states.front().cols();
    RealVector arg_sum = RealVector::Zero(levels);
    for (size_t j = 0; j + 1 < nodes; ++j) {
        const Vector o = column_overlaps(grid.states[j + 1], grid.states[j]);
        for (Eigen::Index n = 0; n < levels; ++n) {
            if (std::abs(o[n]) < overlap_floor)
                throw NumericFailure("berry_phases: overlap below " +
                                     std::to_string(overlap_floor) + " at node " +
                                     std::to_string(j) + "; refine the grid");
            arg_sum[n] += std::arg(o[n]);
        }
    }
    // ray closure to the first node
    const Vector c = column_overlaps(grid.states.front(), grid.states.back());
    RealVector gamma(levels);
    for (Eigen::Index n = 0; n < levels; ++n) {
        if (std::abs(c[n]) < overlap_floor)
            throw NumericFailure("berry_phases: closure overlap too small; refine the grid");
        gamma[n] = principal_angle(-(arg_sum[n] + std::arg(c[n])));
    }
    return gamma;
}

namespace {

Matrix kato_agp_from_states(const Matrix& prev, const Matrix& mid, const Matrix& next,
                            double two_dt) {
    const Eigen::Index dim = mid.rows();
    const Eigen::Index levels = mid.cols();
    Matrix a = Matrix::Zero(dim, dim);
    for (Eigen::Index n = 0; n < levels; ++n) {
        const Matrix p_prev = prev.col(n) * prev.col(n).adjoint();
        const Matrix p_next = next.col(n) * next.col(n).adjoint();
        if (max_abs(p_next - p_prev) > kProjectorStepLimit)
            throw NumericFailure("kato_agp: projector change per step exceeds " +
                                 std::to_string(kProjectorStepLimit) + "; refine the grid");
        const Matrix pdot = (p_next - p_prev) / two_dt;
        const Matrix p = mid.col(n) * mid.col(n).adjoint();
        a += Cplx(0, 0.5) * (pdot * p - p * pdot);
    }
    return 0.5 * (a + a.adjoint());
}

}  // namespace

Matrix kato_agp(const StateGrid& grid, size_t node) {
    const size_t nodes = grid.times.size();
    if (nodes < 3) throw InvalidInput("kato_agp: grid too small");
    if (node >= nodes) throw InvalidInput("kato_agp: node out of range");
    // periodic wrap: node 0 and node N-1 describe the same ray set
    const size_t prev = node == 0 ? nodes - 2 : node - 1;
    const size_t next = node + 1 >= nodes ? 1 : node + 1;
    double dt_m = grid.times[node] - grid.times[prev];
    if (dt_m < 0) dt_m += grid.period;
    double dt_p = grid.times[next] - grid.times[node];
    if (dt_p < 0) dt_p += grid.period;
    if (dt_m + dt_p <= 0) throw InvalidInput("kato_agp: degenerate node spacing");
    return kato_agp_from_states(grid.states[prev], grid.states[node], grid.states[next],
                                dt_m + dt_p);
}

Matrix kato_hamiltonian(const Matrix& h_t, const Matrix& a_k) {
    Matrix hk = h_t - a_k;
    return 0.5 * (hk + hk.adjoint());
}

Matrix wilson_line(const Matrix& states0, const RealVector& gamma) {
    if (states0.cols() != gamma.size()) throw InvalidInput("wilson_line: size mismatch");
    Matrix w = Matrix::Zero(states0.rows(), states0.rows());
    for (Eigen::Index n = 0; n < gamma.size(); ++n)
        w += std::exp(Cplx(0, -gamma[n])) * (states0.col(n) * states0.col(n).adjoint());
    return w;
}

Matrix kato_operator(const RealVector& xi_T, const Matrix& states0) {
    if (states0.cols() != xi_T.size()) throw InvalidInput("kato_operator: size mismatch");
    Matrix xi = Matrix::Zero(states0.rows(), states0.rows());
    for (Eigen::Index n = 0; n < xi_T.size(); ++n)
        xi += xi_T[n] * (states0.col(n) * states0.col(n).adjoint());
    return 0.5 * (xi + xi.adjoint());
}

namespace {

std::vector<double> default_sample_times(const DriveProtocol& d, double t0, int count) {
    // offset to midpoints so kicked samples avoid the segment boundaries
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(t0 + d.period() * (i + 0.5) / count);
    return out;
}

void finalize(KatoResult& r, const FloquetSolution& sol) {
    r.gamma = r.gamma_principal;
    for (Eigen::Index n = 0; n < r.gamma.size(); ++n)
        r.gamma[n] += 2.0 * M_PI * sol.ell[n];
    r.wilson = wilson_line(r.states0, r.gamma_principal);
    r.kato_op = kato_operator(r.xi_T, r.states0);
    Matrix strob = Matrix::Zero(r.states0.rows(), r.states0.rows());
    for (Eigen::Index n = 0; n < r.xi_T.size(); ++n)
        strob += std::exp(Cplx(0, -r.period * r.xi_T[n])) *
                 (r.states0.col(n) * r.states0.col(n).adjoint());
    r.reconstruction_residual = max_abs(sol.monodromy_matrix - r.wilson * strob);
}

KatoResult kato_analyze_kicked(const DriveProtocol& d, const FloquetSolution& sol,
                               const KatoOptions& opts) {
    const Eigen::Index dim = d.dim();
    const double t0 = sol.gauge_t0;
    const auto windows = segments_in_window(d, t0);

    KatoResult r;
    r.period = d.period();
    r.gauge_t0 = t0;
    r.states0 = sol.states;

    std::vector<double> samples = opts.agp_sample_times;
    if (samples.empty() && opts.default_agp_samples > 0)
        samples = default_sample_times(d, t0, opts.default_agp_samples);
    for (double& s : samples) {
        if (s < t0 || s > t0 + d.period()) {
            double tau = std::fmod(s - t0, d.period());
            if (tau < 0) tau += d.period();
            s = t0 + tau;
        }
    }

    // per-segment eigendecompositions, reused across windows
    std::vector<std::optional<HermitianSpectrum>> seg_spec(d.segments().size());
    auto spectrum_of = [&](size_t seg) -> const HermitianSpectrum& {
        if (!seg_spec[seg]) seg_spec[seg] = eigh(HermitianMatrix(d.segments()[seg].h));
        return *seg_spec[seg];
    };

    const int ns = std::max(2, opts.grid_points);
    const size_t total_nodes = windows.size() * (size_t(ns) + 1);
    r.times.reserve(total_nodes);
    Eigen::MatrixXd E(dim, Eigen::Index(total_nodes));

    RealVector arg_sum = RealVector::Zero(dim);
    Matrix psi = sol.states;
    Eigen::Index col = 0;

    for (const auto& w : windows) {
        const auto& es = spectrum_of(w.seg_index);
        const Matrix phi = es.vectors.adjoint() * psi;           // segment eigenbasis
        const Eigen::MatrixXd weight = phi.cwiseAbs2();          // dim x levels
        const RealVector e_level = weight.transpose() * es.values;  // constant in the segment

        const double dt = w.duration / ns;
        // within-segment Pancharatnam factor, identical for every step of a
        // uniform grid, so the product may use many more steps than nodes
        const long ns_berry = std::max<long>(ns, opts.berry_steps_min);
        const double dtb = w.duration / double(ns_berry);
        Vector step_phase(dim);
        for (Eigen::Index a = 0; a < dim; ++a)
            step_phase[a] = std::exp(Cplx(0, es.values[a] * dtb));  // e^{+i E dt}
        for (Eigen::Index n = 0; n < dim; ++n) {
            Cplx o = 0;
            for (Eigen::Index a = 0; a < dim; ++a) o += weight(a, n) * step_phase[a];
            if (std::abs(o) < opts.overlap_floor)
                throw NumericFailure("kato: within-segment overlap below floor; refine grid");
            arg_sum[n] += double(ns_berry) * std::arg(o);
        }

        for (int i = 0; i <= ns; ++i) {
            r.times.push_back(w.start + i * dt);
            E.col(col++) = e_level;
        }

        // operator samples falling into this window
        for (double s : samples) {
            if (s < w.start - 1e-12 || s > w.start + w.duration + 1e-12) continue;
            const double h_fd = std::max(w.duration / 4096.0, 1e-9 * d.period());
            const double sc = std::clamp(s, w.start + h_fd, w.start + w.duration - h_fd);
            auto state_at = [&](double t) -> Matrix {
                Vector ph(dim);
                for (Eigen::Index a = 0; a < dim; ++a)
                    ph[a] = std::exp(Cplx(0, -es.values[a] * (t - w.start)));
                return es.vectors * (ph.asDiagonal() * phi);
            };
            const Matrix before = state_at(sc - h_fd);
            const Matrix mid = state_at(sc);
            const Matrix after = state_at(sc + h_fd);
            const Matrix a_k = kato_agp_from_states(before, mid, after, 2.0 * h_fd);
            r.agp_times.push_back(sc);
            r.A_K_samples.push_back(a_k);
            r.H_K_samples.push_back(kato_hamiltonian(w.h, a_k));
        }

        // advance to the end of the window
        Vector endph(dim);
        for (Eigen::Index a = 0; a < dim; ++a)
            endph[a] = std::exp(Cplx(0, -es.values[a] * w.duration));
        psi = es.vectors * (endph.asDiagonal() * phi);
    }

    // closure
    const Vector c = column_overlaps(sol.states, psi);
    r.gamma_principal = RealVector(dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        if (std::abs(c[n]) < opts.overlap_floor)
            throw NumericFailure("kato: closure overlap too small");
        r.gamma_principal[n] = principal_angle(-(arg_sum[n] + std::arg(c[n])));
    }

    r.E_K = std::move(E);
    r.xi_K = kato_average(r.E_K, r.times);
    r.xi_T = r.xi_K.col(Eigen::Index(r.times.size()) - 1);
    finalize(r, sol);
    return r;
}

KatoResult kato_analyze_continuous(const DriveProtocol& d, const FloquetSolution& sol,
                                   const KatoOptions& opts) {
    const Eigen::Index dim = d.dim();
    const double t0 = sol.gauge_t0;
    const double T = d.period();
    const int N = std::max(8, opts.grid_points);
    const double dt = T / N;
    const long micro = std::max<long>(1, opts.prop.steps_per_period / N);

    KatoResult r;
    r.period = T;
    r.gauge_t0 = t0;
    r.states0 = sol.states;

    std::vector<double> samples = opts.agp_sample_times;
    if (samples.empty() && opts.default_agp_samples > 0)
        samples = default_sample_times(d, t0, opts.default_agp_samples);
    // snap samples to grid nodes
    std::vector<int> sample_nodes;
    for (double s : samples) {
        double tau = std::fmod(s - t0, T);
        if (tau < 0) tau += T;
        int idx = int(std::lround(tau / dt));
        idx = std::clamp(idx, 0, N);
        sample_nodes.push_back(idx);
    }

    r.times.resize(size_t(N) + 1);
    Eigen::MatrixXd E(dim, N + 1);
    RealVector arg_sum = RealVector::Zero(dim);
    RealVector arg_sum_coarse = RealVector::Zero(dim);  // stride-2 for Richardson

    Matrix psi_prev;  // sliding window for projector derivatives
    Matrix psi = sol.states;
    Matrix psi_node1, psi_node_last;

    r.times[0] = t0;
    E.col(0) = level_energies(psi, d.hamiltonian(t0));

    struct PendingSample {
        int node;
        Matrix before, mid;
    };
    std::vector<PendingSample> pending;
    std::vector<std::pair<int, Matrix>> agp_at_node;  // node -> A_K

    for (int j = 1; j <= N; ++j) {
        const double a = t0 + (j - 1) * dt, b = t0 + j * dt;
        Matrix next = (propagate_fixed(d, a, b, micro) * psi).eval();

        const Vector o = column_overlaps(next, psi);
        for (Eigen::Index n = 0; n < dim; ++n) {
            if (std::abs(o[n]) < opts.overlap_floor)
                throw NumericFailure("kato: consecutive-state overlap below floor at node " +
                                     std::to_string(j) + "; refine the grid");
            arg_sum[n] += std::arg(o[n]);
        }
        if (opts.berry_richardson && j % 2 == 0) {
            const Vector o2 = column_overlaps(next, psi_prev);
            for (Eigen::Index n = 0; n < dim; ++n) arg_sum_coarse[n] += std::arg(o2[n]);
        }

        r.times[size_t(j)] = b;
        E.col(j) = level_energies(next, d.hamiltonian(b));

        if (j == 1) psi_node1 = next;
        if (j == N - 1) psi_node_last = next;

        // interior samples: A_K at node j-1 from the (j-2, j-1, j) window
        for (int node : sample_nodes) {
            if (node == j - 1 && node >= 1) {
                const Matrix a_k = kato_agp_from_states(psi_prev, psi, next, 2.0 * dt);
                agp_at_node.push_back({node, a_k});
            }
        }

        psi_prev = std::move(psi);
        psi = std::move(next);
    }

    // wrap samples at node 0 / node N (same ray set)
    for (int node : sample_nodes) {
        if (node == 0 || node == N) {
            const Matrix a_k = kato_agp_from_states(psi_node_last, sol.states, psi_node1, 2.0 * dt);
            agp_at_node.push_back({node, a_k});
        }
    }

    std::sort(agp_at_node.begin(), agp_at_node.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [node, a_k] : agp_at_node) {
        const double ts = t0 + node * dt;
        r.agp_times.push_back(ts);
        r.A_K_samples.push_back(a_k);
        r.H_K_samples.push_back(kato_hamiltonian(d.hamiltonian(ts), a_k));
    }

    const Vector c = column_overlaps(sol.states, psi);
    r.gamma_principal = RealVector(dim);
    const bool richardson = opts.berry_richardson && N % 2 == 0;
    for (Eigen::Index n = 0; n < dim; ++n) {
        if (std::abs(c[n]) < opts.overlap_floor)
            throw NumericFailure("kato: closure overlap too small; refine the grid");
        const double args = richardson
                                ? (4.0 * arg_sum[n] - arg_sum_coarse[n]) / 3.0
                                : arg_sum[n];
        r.gamma_principal[n] = principal_angle(-(args + std::arg(c[n])));
    }

    r.E_K = std::move(E);
    r.xi_K = kato_average(r.E_K, r.times);
    r.xi_T = r.xi_K.col(Eigen::Index(r.times.size()) - 1);
    finalize(r, sol);
    return r;
}

}  // namespace

KatoResult kato_analyze(const DriveProtocol& d, const FloquetSolution& sol,
                        const KatoOptions& opts) {
    if (sol.dim() != d.dim()) throw InvalidInput("kato_analyze: dimension mismatch");
    return d.is_kicked() ? kato_analyze_kicked(d, sol, opts)
                         : kato_analyze_continuous(d, sol, opts);
}

}  // namespace floq
