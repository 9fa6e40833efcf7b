#ifndef FLOQ_MODELS_HPP
#define FLOQ_MODELS_HPP

#include "floq/drive.hpp"

namespace floq {

// --- Pauli algebra --------------------------------------------------------

Matrix pauli(int axis);            // sigma^x, sigma^y, sigma^z for axis 1,2,3
Matrix tau(int axis);              // sigma/2
Matrix site_operator(int L, int site, const Matrix& op2);  // op on one site of a 2^L chain

// --- circularly driven XY chain (free-fermion Bloch form) ------------------

struct XYBlochParams {
    double g = 1.0;      // transverse field
    double J = 0.5;      // hopping
    double A = 2.5;      // drive amplitude
    double omega = 10.0; // drive frequency
    double k = M_PI / 16;  // quasi-momentum in (-pi, pi]

    double delta_k() const { return g + J * std::cos(k); }
    double amp_k() const { return A * std::sin(k); }
};

// h(k,t) = Delta_k tau^z + A_k [cos(wt) tau^x + sin(wt) tau^y], with exact
// Fourier harmonics l in {-1, 0, 1}.
DriveProtocol xy_bloch(const XYBlochParams& p);

// Closed forms of the stroboscopic and geometric decompositions of the XY
// Bloch Hamiltonian at time t. eps_k^2 = (Delta_k - w)^2 + A_k^2 and
// eps_K_sq = (Delta_k - w) Delta_k + A_k^2 (may be negative past the level
// interchange).
struct XYClosedForms {
    Matrix h_F, a_F, h_K, a_K;
    double eps_k = 0.0;
    double eps_K_sq = 0.0;
    double omega = 0.0;
    // level = 0 (lower), 1 (upper) by the tau^z-like ordering used below
    double floquet_energy(int level) const;  // -+ (eps_k - w)/2
    double kato_energy(int level) const;     // -+ eps_K_sq / (2 eps_k)
};

XYClosedForms xy_closed_forms(const XYBlochParams& p, double t);

// --- kicked mixed-field Ising chain ----------------------------------------

struct KickedMFIParams {
    int L = 8;
    double J = 1.0, g = 1.0, h = 1.0;
    double T = 0.1;
    int max_L = 14;
};

// U_F = U_1 U_2 U_1 with U_m = exp(-i m T H_m / 4),
// H_1 = -sum(J/4 sz sz + h/2 sz), H_2 = -g/2 sum sx; periodic chain.
DriveProtocol kicked_mfi(const KickedMFIParams& p);

// --- disordered kicked Ising chain (discrete time crystal) -----------------

struct DTCParams {
    int L = 8;            // even L: parity P_x = exp(-i pi H_x) squares to 1
    double J = 1.0;
    double theta_x = M_PI;
    double T = 0.05;
    unsigned long long seed = 12345;
    double disorder_scale = 1.0;  // 0 switches disorder off
    int max_L = 14;
};

// U_F = exp(-i T H_int) exp(-i theta_x H_x), open chain,
// H_int = sum J_n sz_n sz_{n+1} with J_n = J (1 + eta_n), eta uniform in
// [-0.5, 0.5] from the seed; H_x is the on-site field operator sum sx/2
// (the symbol for it varies; the on-site field reading is used throughout).
// Couplings are frozen in the protocol metadata ("couplings", "eta").
DriveProtocol dtc_chain(const DTCParams& p);

// --- anomalous Floquet models on a cylinder --------------------------------

struct AFTIHexParams {
    int Lx = 100;        // number of k_x values on the periodic direction
    int Ly = 20;         // open direction; Hilbert dimension 2 Ly per k_x
    double J = 1.0;
    double F = 2.0;      // modulation strength (units of J)
    double omega = 8.7;
};

// Honeycomb hopping model with chiral modulation J_n(t) = J exp[(F/J)
// cos(wt + phi_n)], phi_n = (n-1) 2pi/3; cylinder periodic in x, open in y.
DriveProtocol afti_hex(const AFTIHexParams& p, double kx);
// k_x grid for the cylinder, Lx values in (-pi, pi].
std::vector<double> afti_kx_grid(int Lx);

struct AFTIRudnerParams {
    double mu = 1.0;
    double J = 1.5, b = 1.5, a = 4.0;
    double Delta0 = 1.0;
    double omega = 1.0 / 0.07;
    int Ly = 20;
};

// Bipartite-lattice d-vector model, single-harmonic drive through
// Delta(t) = Delta_0 cos(wt); cylinder open in y, dimension 2 Ly.
DriveProtocol afti_rudner(const AFTIRudnerParams& p, double kx);

}  // namespace floq

#endif
