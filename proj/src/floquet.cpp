#include "floq/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "floq/kato.hpp"

namespace floq {

namespace {

// Circularly clustered eigenphase groups (gap on the circle < tol).
std::vector<std::vector<Eigen::Index>> phase_clusters(const RealVector& theta, double tol) {
    const Eigen::Index n = theta.size();
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return theta[a] < theta[b]; });

    std::vector<std::vector<Eigen::Index>> clusters;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i > 0 && std::abs(theta[order[size_t(i)]] - theta[order[size_t(i - 1)]]) < tol)
            clusters.back().push_back(order[size_t(i)]);
        else
            clusters.push_back({order[size_t(i)]});
    }
    // wrap-around: first and last cluster may join across the branch cut
    if (clusters.size() > 1) {
        const double wrap_gap = std::abs(principal_angle(
            theta[clusters.front().front()] - theta[clusters.back().back()]));
        if (wrap_gap < tol) {
            for (auto idx : clusters.back()) clusters.front().push_back(idx);
            clusters.pop_back();
        }
    }
    return clusters;
}

}  // namespace

Matrix FloquetSolution::floquet_hamiltonian() const {
    Matrix hf = Matrix::Zero(dim(), dim());
    for (Eigen::Index n = 0; n < states.cols(); ++n)
        hf += quasienergy[n] * (states.col(n) * states.col(n).adjoint());
    return 0.5 * (hf + hf.adjoint());
}

FloquetSolution solve_floquet(const DriveProtocol& d, double t0, const FloquetOptions& opts) {
    FloquetSolution sol;
    sol.period = d.period();
    sol.gauge_t0 = t0;
    sol.monodromy_matrix = monodromy(d, t0, opts.prop);

    UnitarySpectrum us = eigu(UnitaryMatrix(sol.monodromy_matrix));
    const Eigen::Index n = us.vectors.cols();

    // U |psi> = e^{-i theta} |psi>  =>  theta = -arg(lambda)
    RealVector theta(n);
    for (Eigen::Index j = 0; j < n; ++j) theta[j] = principal_angle(-us.phases[j]);
    Matrix states = us.vectors;

    // Degenerate clusters: rotate to diagonalize the declared symmetry.
    sol.degenerate_clusters_symmetry_fixed = false;
    sol.has_unfixed_degeneracy = false;
    for (const auto& cluster : phase_clusters(theta, opts.degeneracy_gap)) {
        if (cluster.size() < 2) continue;
        if (d.symmetry() && is_hermitian(*d.symmetry(), 1e-9)) {
            Matrix block(states.rows(), Eigen::Index(cluster.size()));
            for (size_t c = 0; c < cluster.size(); ++c) block.col(Eigen::Index(c)) = states.col(cluster[c]);
            HermitianSpectrum ss = eigh(Matrix(block.adjoint() * (*d.symmetry()) * block));
            block *= ss.vectors;
            for (size_t c = 0; c < cluster.size(); ++c) states.col(cluster[c]) = block.col(Eigen::Index(c));
            sol.degenerate_clusters_symmetry_fixed = true;
        } else {
            sol.has_unfixed_degeneracy = true;  // eigensolver-arbitrary basis
        }
    }

    // Rayleigh phases after any rotation, then sort by quasienergy.
    for (Eigen::Index j = 0; j < n; ++j) {
        const Cplx lambda = states.col(j).dot(sol.monodromy_matrix * states.col(j));
        theta[j] = principal_angle(-std::arg(lambda));
    }
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return theta[a] < theta[b]; });

    sol.theta = RealVector(n);
    sol.states = Matrix(states.rows(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        sol.theta[j] = theta[order[size_t(j)]];
        sol.states.col(j) = states.col(order[size_t(j)]);
    }
    sol.quasienergy = sol.theta / sol.period;
    sol.ell = IntVector::Zero(n);

    // Micromotion sample grid (small dimensions only).
    if (d.dim() <= opts.micromotion_cache_max_dim && opts.micromotion_samples > 0) {
        const int ns = opts.micromotion_samples;
        const Matrix hf = sol.floquet_hamiltonian();
        Matrix u_cum = Matrix::Identity(d.dim(), d.dim());
        const double dt = sol.period / ns;
        long micro = std::max<long>(1, opts.prop.steps_per_period / ns);
        sol.micromotion_times.reserve(size_t(ns) + 1);
        sol.micromotion_cache.reserve(size_t(ns) + 1);
        sol.micromotion_times.push_back(0.0);
        sol.micromotion_cache.push_back(Matrix::Identity(d.dim(), d.dim()));
        for (int j = 1; j <= ns; ++j) {
            const double s0 = t0 + (j - 1) * dt, s1 = t0 + j * dt;
            u_cum = (propagate_fixed(d, s0, s1, micro) * u_cum).eval();
            const double s = j * dt;
            sol.micromotion_times.push_back(s);
            sol.micromotion_cache.push_back(u_cum * expm_antihermitian(hf, -s));
        }
    }
    return sol;
}

Matrix micromotion(const DriveProtocol& d, const FloquetSolution& sol, double s,
                   const PropagateOptions& opts) {
    const double T = sol.period;
    s = std::fmod(s, T);
    if (s < 0) s += T;
    for (size_t j = 0; j < sol.micromotion_times.size(); ++j)
        if (std::abs(sol.micromotion_times[j] - s) < 1e-12 * T) return sol.micromotion_cache[j];
    const Matrix u = propagate(d, sol.gauge_t0, sol.gauge_t0 + s, opts);
    return u * expm_antihermitian(sol.floquet_hamiltonian(), -s);
}

Matrix floquet_hamiltonian_at(const DriveProtocol& d, const FloquetSolution& sol, double s,
                              const PropagateOptions& opts) {
    const Matrix p = micromotion(d, sol, s, opts);
    return 0.5 * ((p * sol.floquet_hamiltonian() * p.adjoint()) +
                  (p * sol.floquet_hamiltonian() * p.adjoint()).adjoint());
}

Matrix floquet_agp(const DriveProtocol& d, const FloquetSolution& sol, double s,
                   const PropagateOptions& opts) {
    return d.hamiltonian(sol.gauge_t0 + s) - floquet_hamiltonian_at(d, sol, s, opts);
}

FloquetSolution refold(const FloquetSolution& sol, const IntVector& ell) {
    if (ell.size() != sol.theta.size())
        throw InvalidInput("refold: gauge vector size mismatch");
    FloquetSolution out = sol;
    for (Eigen::Index j = 0; j < ell.size(); ++j) {
        out.theta[j] += 2.0 * M_PI * ell[j];
        out.ell[j] += ell[j];
    }
    out.quasienergy = out.theta / out.period;
    // H_F changed: drop the micromotion cache, recompute lazily.
    out.micromotion_times.clear();
    out.micromotion_cache.clear();
    return out;
}

DriveFamilyFlags classify_drive(const DriveProtocol& d, const FloquetSolution& sol,
                                const KatoResult& kato, double tol) {
    if (kato.A_K_samples.empty())
        throw InvalidInput("classify_drive: Kato result carries no A_K/H_K samples");

    DriveFamilyFlags flags;
    flags.pure_micromotion = max_abs(sol.floquet_hamiltonian()) < tol;

    double max_ak = 0.0, max_hk = 0.0;
    for (const auto& a : kato.A_K_samples) max_ak = std::max(max_ak, max_abs(a));
    for (const auto& h : kato.H_K_samples) max_hk = std::max(max_hk, max_abs(h));
    flags.flat = max_ak < tol;
    flags.pure_geometric = max_hk < tol;

    double max_af = 0.0;
    for (double s : kato.agp_times)
        max_af = std::max(max_af, max_abs(floquet_agp(d, sol, s - sol.gauge_t0)));
    flags.equilibrium = max_af < tol;
    return flags;
}

}  // namespace floq
