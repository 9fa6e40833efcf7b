#include "floq/models.hpp"

#include <cmath>
#include <random>

namespace floq {

Matrix pauli(int axis) {
    Matrix s(2, 2);
    switch (axis) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw InvalidInput("pauli: axis must be 1, 2 or 3");
    }
    return s;
}

Matrix tau(int axis) { return 0.5 * pauli(axis); }

Matrix site_operator(int L, int site, const Matrix& op2) {
    if (L < 1 || site < 0 || site >= L) throw InvalidInput("site_operator: bad site");
    if (op2.rows() != 2 || op2.cols() != 2) throw InvalidInput("site_operator: need 2x2");
    const Eigen::Index dim = Eigen::Index(1) << L;
    Matrix out = Matrix::Zero(dim, dim);
    const Eigen::Index bit = Eigen::Index(1) << site;
    for (Eigen::Index s = 0; s < dim; ++s) {
        const int b = (s & bit) ? 1 : 0;  // bit set = spin down
        for (int bp = 0; bp < 2; ++bp) {
            const Cplx v = op2(bp, b);
            if (v != Cplx(0, 0)) out(bp ? (s | bit) : (s & ~bit), s) += v;
        }
    }
    return out;
}

namespace {

// spin 'up' (+1 under sigma^z) = bit clear
inline double zval(Eigen::Index state, int site) { return (state >> site) & 1 ? -1.0 : 1.0; }

// sum_n c_n sigma^x_n as a dense matrix
Matrix sum_sx(int L, const RealVector& coeff) {
    const Eigen::Index dim = Eigen::Index(1) << L;
    Matrix out = Matrix::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s)
        for (int n = 0; n < L; ++n)
            out(s ^ (Eigen::Index(1) << n), s) += coeff[n];
    return out;
}

Matrix diag_to_matrix(const RealVector& d) {
    Matrix out = Matrix::Zero(d.size(), d.size());
    for (Eigen::Index s = 0; s < d.size(); ++s) out(s, s) = d[s];
    return out;
}

}  // namespace

// --- XY model ---------------------------------------------------------------

DriveProtocol xy_bloch(const XYBlochParams& p) {
    if (!(p.omega > 0)) throw InvalidInput("xy_bloch: omega must be positive");
    const double dk = p.delta_k();
    const double ak = p.amp_k();
    const double w = p.omega;

    const Matrix tz = tau(3), tx = tau(1), ty = tau(2);
    auto sampler = [=](double t) -> Matrix {
        return dk * tz + ak * (std::cos(w * t) * tx + std::sin(w * t) * ty);
    };

    FourierSeries fs;
    fs.omega = w;
    fs.harmonics.push_back({0, dk * tz});
    fs.harmonics.push_back({1, 0.5 * ak * (tx - Cplx(0, 1) * ty)});
    fs.harmonics.push_back({-1, 0.5 * ak * (tx + Cplx(0, 1) * ty)});

    return DriveProtocol::continuous(2, 2.0 * M_PI / w, sampler, fs, "xy_bloch");
}

double XYClosedForms::floquet_energy(int level) const {
    // level 0/1 = eigenstate of the common direction with tau-eigenvalue -/+ 1/2
    return (level == 0 ? -0.5 : 0.5) * (eps_k - omega);
}

double XYClosedForms::kato_energy(int level) const {
    return (level == 0 ? -0.5 : 0.5) * eps_K_sq / eps_k;
}

XYClosedForms xy_closed_forms(const XYBlochParams& p, double t) {
    const double dk = p.delta_k();
    const double ak = p.amp_k();
    const double w = p.omega;
    const double eps_sq = (dk - w) * (dk - w) + ak * ak;
    if (eps_sq < 1e-24)
        throw InvalidInput("xy_closed_forms: rotating-frame Hamiltonian degenerate (eps_k = 0) "
                           "at k = " + std::to_string(p.k) + ", J = " + std::to_string(p.J));
    const double eps = std::sqrt(eps_sq);
    const double eps_K_sq = (dk - w) * dk + ak * ak;

    const Matrix tz = tau(3), tx = tau(1), ty = tau(2);
    const Matrix circ = std::cos(w * t) * tx + std::sin(w * t) * ty;
    const Matrix unit_dir = ((dk - w) / eps) * tz + (ak / eps) * circ;

    XYClosedForms out;
    out.eps_k = eps;
    out.eps_K_sq = eps_K_sq;
    out.omega = w;
    out.h_F = (eps - w) * unit_dir;
    out.a_F = w * ((1.0 + (dk - w) / eps) * tz + (ak / eps) * circ);
    out.h_K = (eps_K_sq / eps) * unit_dir;
    out.a_K = (ak * w / eps) * ((ak / eps) * tz - ((dk - w) / eps) * circ);
    return out;
}

// --- kicked mixed-field Ising ------------------------------------------------

DriveProtocol kicked_mfi(const KickedMFIParams& p) {
    if (p.L < 2) throw InvalidInput("kicked_mfi: L must be at least 2");
    if (p.L > p.max_L)
        throw ResourceLimit("kicked_mfi: L = " + std::to_string(p.L) + " exceeds configured max " +
                            std::to_string(p.max_L));
    if (!(p.T > 0)) throw InvalidInput("kicked_mfi: period must be positive");

    const Eigen::Index dim = Eigen::Index(1) << p.L;
    RealVector diag = RealVector::Zero(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        double e = 0.0;
        for (int n = 0; n < p.L; ++n) {
            e -= 0.25 * p.J * zval(s, n) * zval(s, (n + 1) % p.L);  // periodic
            e -= 0.5 * p.h * zval(s, n);
        }
        diag[s] = e;
    }
    const Matrix h1 = diag_to_matrix(diag);
    const Matrix h2 = sum_sx(p.L, RealVector::Constant(p.L, -0.5 * p.g));

    // U_1 U_2 U_1 with U_m = exp(-i m T H_m / 4): chronologically
    // H_1 for T/4, H_2 for T/2, H_1 for T/4.
    std::vector<KickSegment> segs;
    segs.push_back({h1, 1, 4});
    segs.push_back({h2, 1, 2});
    segs.push_back({h1, 1, 4});
    return DriveProtocol::kicked(dim, p.T, std::move(segs), "kicked_mfi");
}

// --- disordered kicked Ising (DTC) -------------------------------------------

DriveProtocol dtc_chain(const DTCParams& p) {
    if (p.L < 2) throw InvalidInput("dtc_chain: L must be at least 2");
    if (p.L > p.max_L)
        throw ResourceLimit("dtc_chain: L exceeds configured max");
    if (!(p.T > 0)) throw InvalidInput("dtc_chain: period must be positive");

    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    RealVector eta(p.L - 1), couplings(p.L - 1);
    for (int n = 0; n < p.L - 1; ++n) {
        eta[n] = p.disorder_scale * unif(rng);
        couplings[n] = p.J * (1.0 + eta[n]);
    }

    const Eigen::Index dim = Eigen::Index(1) << p.L;
    RealVector diag = RealVector::Zero(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        double e = 0.0;
        for (int n = 0; n < p.L - 1; ++n)  // open boundary
            e += couplings[n] * zval(s, n) * zval(s, n + 1);
        diag[s] = e;
    }
    const Matrix h_int = diag_to_matrix(diag);
    const Matrix h_x = sum_sx(p.L, RealVector::Constant(p.L, 0.5));

    // U_F = exp(-i T H_int) exp(-i theta_x H_x): the kick acts first.
    // Both factors are spread over half a period each, with the segment
    // Hamiltonians rescaled so the segment exponentials reproduce them.
    std::vector<KickSegment> segs;
    segs.push_back({(2.0 * p.theta_x / p.T) * h_x, 1, 2});
    segs.push_back({2.0 * h_int, 1, 2});
    auto d = DriveProtocol::kicked(dim, p.T, std::move(segs), "dtc_chain");

    // spin-flip parity P_x = exp(-i pi H_x) = prod (-i sigma^x)
    Matrix parity = Matrix::Identity(1, 1);
    const Matrix flip = Cplx(0, -1) * pauli(1);
    for (int n = 0; n < p.L; ++n) {
        Matrix next(parity.rows() * 2, parity.cols() * 2);
        next.setZero();
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                if (flip(r, c) != Cplx(0, 0))
                    next.block(r * parity.rows(), c * parity.cols(), parity.rows(),
                               parity.cols()) = flip(r, c) * parity;
        parity = std::move(next);
    }
    d.declare_symmetry("parity_x", parity);
    d.set_metadata("couplings", couplings);
    d.set_metadata("eta", eta);
    return d;
}

// --- AFTI models --------------------------------------------------------------

std::vector<double> afti_kx_grid(int Lx) {
    if (Lx < 2) throw InvalidInput("afti_kx_grid: Lx must be at least 2");
    std::vector<double> kx(static_cast<size_t>(Lx));
    for (int m = 0; m < Lx; ++m)
        kx[static_cast<size_t>(m)] = principal_angle(2.0 * M_PI * m / Lx);
    std::sort(kx.begin(), kx.end());
    return kx;
}

DriveProtocol afti_hex(const AFTIHexParams& p, double kx) {
    if (p.Lx < 2 || p.Ly < 2) throw InvalidInput("afti_hex: lattice extents must be >= 2");
    if (!(p.omega > 0)) throw InvalidInput("afti_hex: omega must be positive");
    const int Ly = p.Ly;
    const Eigen::Index dim = 2 * Ly;
    const double w = p.omega;
    const double famp = p.F / p.J;  // dimensionless modulation exponent
    const double J = p.J;

    // basis index: 2 (y-1) + s with s = 0 (A), 1 (B); bonds:
    //   J3: B(y) - A(y)     (intra-cell)
    //   J2: B(y) - A(y), momentum phase e^{i kx}
    //   J1: B(y) - A(y-1)
    auto sampler = [=](double t) -> Matrix {
        double Jn[3];
        for (int n = 0; n < 3; ++n)
            Jn[n] = J * std::exp(famp * std::cos(w * t + (n * 2.0 * M_PI) / 3.0));
        Matrix h = Matrix::Zero(dim, dim);
        const Cplx phase = std::exp(Cplx(0, kx));
        for (int y = 0; y < Ly; ++y) {
            const Eigen::Index a = 2 * y, b = 2 * y + 1;
            h(b, a) += Jn[2] + Jn[1] * phase;
            if (y > 0) h(b, a - 2) += Jn[0];
        }
        h = (h + h.adjoint()).eval();
        return h;
    };

    // J exp[f cos(theta)] = J sum_m I_m(f) e^{i m theta}
    FourierSeries fs;
    fs.omega = w;
    const int M = 16;
    for (int m = -M; m <= M; ++m) {
        Matrix hm = Matrix::Zero(dim, dim);
        const double bessel = std::cyl_bessel_i(std::abs(m), famp);
        Cplx cn[3];
        for (int n = 0; n < 3; ++n)
            cn[n] = J * bessel * std::exp(Cplx(0, m * (n * 2.0 * M_PI) / 3.0));
        // the harmonic coefficient of the real J_n(t) multiplies the whole
        // Hermitian bond operator; only the momentum phase conjugates
        const Cplx phase = std::exp(Cplx(0, kx));
        for (int y = 0; y < Ly; ++y) {
            const Eigen::Index a = 2 * y, b = 2 * y + 1;
            hm(b, a) += cn[2] + cn[1] * phase;
            hm(a, b) += cn[2] + cn[1] * std::conj(phase);
            if (y > 0) {
                hm(b, a - 2) += cn[0];
                hm(a - 2, b) += cn[0];
            }
        }
        fs.harmonics.push_back({m, hm});
    }
    return DriveProtocol::continuous(dim, 2.0 * M_PI / w, sampler, fs, "afti_hex");
}

DriveProtocol afti_rudner(const AFTIRudnerParams& p, double kx) {
    if (!(p.omega > 0)) throw InvalidInput("afti_rudner: omega must be positive");
    if (p.Ly < 2) throw InvalidInput("afti_rudner: Ly must be at least 2");
    const int Ly = p.Ly;
    const Eigen::Index dim = 2 * Ly;
    const double w = p.omega;

    const Matrix sx = pauli(1), sy = pauli(2), sz = pauli(3);
    const double dx = p.a * std::sin(kx);
    // d_z(k,t) = Delta(t) + (mu-J) - 2b[2 - cos kx - cos ky] + J cos kx cos ky
    const double dz0 = (p.mu - p.J) - 2.0 * p.b * (2.0 - std::cos(kx));
    const double cos_ky_coef = 2.0 * p.b + p.J * std::cos(kx);

    const Matrix onsite_static = dx * sx + dz0 * sz;
    const Matrix hop = Cplx(0, -0.5) * p.a * sy + 0.5 * cos_ky_coef * sz;

    auto assemble = [=](const Matrix& onsite) -> Matrix {
        Matrix h = Matrix::Zero(dim, dim);
        for (int y = 0; y < Ly; ++y) {
            h.block(2 * y, 2 * y, 2, 2) = onsite;
            if (y + 1 < Ly) {
                h.block(2 * y, 2 * (y + 1), 2, 2) = hop;
                h.block(2 * (y + 1), 2 * y, 2, 2) = hop.adjoint();
            }
        }
        return h;
    };

    auto sampler = [=](double t) -> Matrix {
        return assemble(onsite_static + p.Delta0 * std::cos(w * t) * sz);
    };

    FourierSeries fs;
    fs.omega = w;
    fs.harmonics.push_back({0, assemble(onsite_static)});
    Matrix drive_block = Matrix::Zero(dim, dim);
    for (int y = 0; y < Ly; ++y) drive_block.block(2 * y, 2 * y, 2, 2) = 0.5 * p.Delta0 * sz;
    fs.harmonics.push_back({1, drive_block});
    fs.harmonics.push_back({-1, drive_block});
    return DriveProtocol::continuous(dim, 2.0 * M_PI / w, sampler, fs, "afti_rudner");
}

}  // namespace floq
