#include "floq/agpsolve.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace floq {

FourierOperator FourierOperator::zero(Eigen::Index dim, int n_max, double omega) {
    if (n_max < 0) throw InvalidInput("FourierOperator: n_max must be >= 0");
    FourierOperator f;
    f.omega = omega;
    f.n_max = n_max;
    f.comp.assign(size_t(2 * n_max + 1), Matrix::Zero(dim, dim));
    return f;
}

FourierOperator FourierOperator::from_series(const FourierSeries& fs, int n_max) {
    if (fs.harmonics.empty()) throw InvalidInput("FourierOperator: empty series");
    const Eigen::Index dim = fs.harmonics.front().second.rows();
    FourierOperator f = zero(dim, n_max, fs.omega);
    for (const auto& [l, h] : fs.harmonics) {
        if (std::abs(l) > n_max) {
            if (max_abs(h) > 1e-14)
                throw InvalidInput("FourierOperator: harmonic beyond truncation");
            continue;
        }
        f.harmonic(l) += h;
    }
    return f;
}

const Matrix& FourierOperator::harmonic(int l) const {
    if (std::abs(l) > n_max) throw InvalidInput("FourierOperator: harmonic out of range");
    return comp[size_t(l + n_max)];
}

Matrix& FourierOperator::harmonic(int l) {
    if (std::abs(l) > n_max) throw InvalidInput("FourierOperator: harmonic out of range");
    return comp[size_t(l + n_max)];
}

Matrix FourierOperator::sample(double t) const {
    Matrix out = Matrix::Zero(dim(), dim());
    for (int l = -n_max; l <= n_max; ++l)
        out += std::exp(Cplx(0, l * omega * t)) * harmonic(l);
    return out;
}

FourierOperator FourierOperator::time_derivative() const {
    FourierOperator d = *this;
    for (int l = -n_max; l <= n_max; ++l) d.harmonic(l) *= Cplx(0, l * omega);
    return d;
}

double FourierOperator::hermitian_violation(int samples) const {
    double worst = 0.0;
    const double T = 2.0 * M_PI / omega;
    for (int i = 0; i < samples; ++i) {
        const Matrix o = sample(T * i / samples);
        worst = std::max(worst, max_abs(o - o.adjoint()));
    }
    return worst;
}

Superoperator build_superoperator(const FourierOperator& h, int n_h) {
    if (n_h < 0) throw InvalidInput("build_superoperator: n_h must be >= 0");
    const Eigen::Index dim = h.dim();
    const Eigen::Index block = dim * dim;
    const Eigen::Index rows = block * (2 * n_h + 1);
    if (rows > kSuperoperatorRowLimit)
        throw ResourceLimit("build_superoperator: " + std::to_string(rows) +
                            " rows exceed the dense limit " +
                            std::to_string(kSuperoperatorRowLimit));

    const Matrix id = Matrix::Identity(dim, dim);
    // commutator superoperators i (I (x) H_l - H_l^T (x) I) per harmonic
    std::vector<Matrix> comm(size_t(2 * h.n_max + 1));
    for (int l = -h.n_max; l <= h.n_max; ++l) {
        const Matrix& hl = h.harmonic(l);
        Matrix c = Matrix::Zero(block, block);
        // vec(H X) = (I (x) H) vec X: H on each diagonal block
        for (Eigen::Index cc = 0; cc < dim; ++cc)
            c.block(cc * dim, cc * dim, dim, dim) += hl;
        // vec(X H) = (H^T (x) I) vec X
        for (Eigen::Index c1 = 0; c1 < dim; ++c1)
            for (Eigen::Index c2 = 0; c2 < dim; ++c2)
                c.block(c1 * dim, c2 * dim, dim, dim) -= hl(c2, c1) * id;
        comm[size_t(l + h.n_max)] = Cplx(0, 1) * c;
    }

    Superoperator s;
    s.dim = dim;
    s.n_h = n_h;
    s.omega = h.omega;
    s.mat = Matrix::Zero(rows, rows);
    for (int mo = -n_h; mo <= n_h; ++mo) {
        for (int mi = -n_h; mi <= n_h; ++mi) {
            const int l = mo - mi;
            if (std::abs(l) <= h.n_max && max_abs(h.harmonic(l)) > 0)
                s.mat.block((mo + n_h) * block, (mi + n_h) * block, block, block) +=
                    comm[size_t(l + h.n_max)];
        }
        // -d/dt: -i mo w on the diagonal block
        s.mat.block((mo + n_h) * block, (mo + n_h) * block, block, block) -=
            Cplx(0, mo * h.omega) * Matrix::Identity(block, block);
    }
    return s;
}

Vector vectorize(const FourierOperator& x, int n_h) {
    const Eigen::Index dim = x.dim();
    const Eigen::Index block = dim * dim;
    Vector v = Vector::Zero(block * (2 * n_h + 1));
    for (int l = -n_h; l <= n_h; ++l) {
        if (std::abs(l) > x.n_max) continue;
        const Matrix& m = x.harmonic(l);
        for (Eigen::Index c = 0; c < dim; ++c)
            v.segment((l + n_h) * block + c * dim, dim) = m.col(c);
    }
    return v;
}

FourierOperator devectorize(const Vector& v, Eigen::Index dim, int n_h, double omega) {
    const Eigen::Index block = dim * dim;
    if (v.size() != block * (2 * n_h + 1)) throw InvalidInput("devectorize: size mismatch");
    FourierOperator f = FourierOperator::zero(dim, n_h, omega);
    for (int l = -n_h; l <= n_h; ++l)
        for (Eigen::Index c = 0; c < dim; ++c)
            f.harmonic(l).col(c) = v.segment((l + n_h) * block + c * dim, dim);
    return f;
}

FourierOperator solve_kato_agp(const FourierOperator& h, int n_h, double rank_tol,
                               AgpSolveReport* report) {
    if (!(rank_tol > 0)) throw InvalidInput("solve_kato_agp: rank_tol must be positive");
    if (n_h < h.n_max)
        throw InvalidInput("solve_kato_agp: truncation below the drive's harmonic content");

    const Superoperator s = build_superoperator(h, n_h);
    const Vector rhs = vectorize(h.time_derivative(), n_h);

    Eigen::BDCSVD<Matrix> svd(s.mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
    const double cutoff = rank_tol * smax;

    Vector inv = Vector::Zero(sigma.size());
    Eigen::Index rank = 0;
    double smin_kept = 0.0, smax_dropped = 0.0;
    bool warn = false;
    for (Eigen::Index j = 0; j < sigma.size(); ++j) {
        if (sigma[j] > cutoff) {
            inv[j] = Cplx(1.0 / sigma[j], 0.0);
            smin_kept = sigma[j];
            ++rank;
        } else {
            smax_dropped = std::max(smax_dropped, sigma[j]);
        }
        if (sigma[j] > 0.1 * cutoff && sigma[j] < 10.0 * cutoff) warn = true;
    }

    const Vector a_vec = -(svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().adjoint() * rhs)));
    FourierOperator a = devectorize(a_vec, s.dim, n_h, h.omega);

    if (report) {
        const Vector r1 = s.mat * a_vec + rhs;
        report->residual = (s.mat * r1).norm();
        report->sigma_max = smax;
        report->sigma_min_kept = smin_kept;
        report->sigma_max_dropped = smax_dropped;
        report->rank = rank;
        report->conditioning_warning = warn;
    }
    return a;
}

HfeKatoResult hfe_kato(const DriveProtocol& d, int quadrature_points) {
    Matrix avg = Matrix::Zero(d.dim(), d.dim());
    if (d.is_kicked()) {
        for (size_t j = 0; j < d.segments().size(); ++j)
            avg += d.segments()[j].h * (d.segment_duration(j) / d.period());
    } else if (d.fourier()) {
        for (const auto& [l, hm] : d.fourier()->harmonics)
            if (l == 0) avg += hm;
    } else {
        for (int i = 0; i < quadrature_points; ++i)
            avg += d.hamiltonian(d.period() * (i + 0.5) / quadrature_points);
        avg /= quadrature_points;
    }
    avg = 0.5 * (avg + avg.adjoint());

    HfeKatoResult out;
    out.h_f0 = avg;
    HermitianSpectrum es = eigh(avg);
    out.xi0 = es.values;
    out.states0 = es.vectors;
    out.gamma0 = RealVector::Zero(es.values.size());
    return out;
}

}  // namespace floq
