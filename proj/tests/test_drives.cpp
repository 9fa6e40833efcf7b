#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "floq/models.hpp"
#include "floq/propagator.hpp"

using namespace floq;

TEST_CASE("xy_bloch: static limit at k = 0") {
    XYBlochParams p;
    p.k = 0.0;
    const auto d = xy_bloch(p);
    // A_k = A sin 0 = 0: static H = (g + J) tau^z
    const Matrix expected = (p.g + p.J) * tau(3);
    CHECK(max_abs(d.hamiltonian(0.123) - expected) < 1e-14);
    CHECK(max_abs(d.hamiltonian(0.87) - expected) < 1e-14);
}

TEST_CASE("xy_bloch: Fig. 2 parameter arithmetic") {
    XYBlochParams p;
    p.g = 1.0;
    p.J = 0.5;
    p.A = 2.5;
    p.omega = 10.0;
    p.k = M_PI / 16;
    CHECK(p.delta_k() == doctest::Approx(1.49039).epsilon(1e-5));
    CHECK(p.amp_k() == doctest::Approx(0.48773).epsilon(1e-5));
}

TEST_CASE("xy_bloch: periodicity at random times") {
    XYBlochParams p;
    p.k = 0.7;
    const auto d = xy_bloch(p);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 10 * d.period());
    for (int i = 0; i < 100; ++i) {
        const double t = u(rng);
        CHECK(max_abs(d.hamiltonian(t + d.period()) - d.hamiltonian(t)) < 1e-13);
    }
    // Fourier form agrees with the sampler
    for (int i = 0; i < 16; ++i) {
        const double t = u(rng);
        CHECK(max_abs(d.fourier()->sample(t) - d.hamiltonian(t)) < 1e-13);
    }
}

TEST_CASE("xy_closed_forms: undriven limit") {
    XYBlochParams p;
    p.A = 0.0;
    p.k = 0.9;
    const auto cf = xy_closed_forms(p, 0.37);
    CHECK(max_abs(cf.h_K - p.delta_k() * tau(3)) < 1e-12);
    CHECK(max_abs(cf.a_K) < 1e-12);
}

TEST_CASE("xy_closed_forms: both decompositions reproduce H(t)") {
    for (double k : {0.15, 0.8, 1.9, 2.9})
        for (double J : {0.5, 3.0, 10.0})
            for (double w : {6.0, 10.0, 14.0})
                for (double t : {0.0, 0.11, 0.49}) {
                    XYBlochParams p;
                    p.J = J;
                    p.omega = w;
                    p.k = k;
                    const auto cf = xy_closed_forms(p, t);
                    const Matrix h = xy_bloch(p).hamiltonian(t);
                    CHECK(max_abs(cf.h_F + cf.a_F - h) < 1e-12);
                    CHECK(max_abs(cf.h_K + cf.a_K - h) < 1e-12);
                    // a_K traceless with zero diagonal in the h_K eigenbasis
                    auto es = eigh(cf.h_K);
                    const Matrix ak_eig = es.vectors.adjoint() * cf.a_K * es.vectors;
                    CHECK(std::abs(ak_eig(0, 0)) < 1e-12);
                    CHECK(std::abs(ak_eig(1, 1)) < 1e-12);
                }
}

TEST_CASE("xy_closed_forms: eps_K^2 may be negative past the interchange") {
    // Delta_k < omega with small A_k: (Delta-w)Delta + A^2 < 0 is admissible
    XYBlochParams p;
    p.g = 5.0;
    p.J = 0.0;
    p.A = 0.3;
    p.omega = 10.0;
    p.k = 0.2;
    const auto cf = xy_closed_forms(p, 0.0);
    CHECK(cf.eps_K_sq < 0.0);
    CHECK(cf.kato_energy(0) > 0.0);  // level interchange
    CHECK(max_abs(cf.h_K + cf.a_K - xy_bloch(p).hamiltonian(0.0)) < 1e-12);
}

TEST_CASE("xy_closed_forms: rejects the exact rotating-frame degeneracy") {
    XYBlochParams p;
    p.g = 10.0;  // Delta_k = omega and A_k = 0: eps_k = 0 exactly
    p.J = 0.0;
    p.A = 0.0;
    p.omega = 10.0;
    p.k = M_PI / 2;
    CHECK_THROWS_AS(xy_closed_forms(p, 0.0), InvalidInput);
}

TEST_CASE("kicked_mfi: segment structure and the g = 0 limit") {
    KickedMFIParams p;
    p.L = 4;
    p.g = 0.0;
    p.T = 0.3;
    const auto d = kicked_mfi(p);
    REQUIRE(d.segments().size() == 3);
    CHECK(d.segment_duration(0) == doctest::Approx(p.T / 4));
    CHECK(d.segment_duration(1) == doctest::Approx(p.T / 2));
    CHECK(d.segment_duration(2) == doctest::Approx(p.T / 4));

    // U_2 = 1 when g = 0: U_F = U_1 U_1 = exp(-i T H_1 / 2), diagonal in z
    const Matrix u = monodromy(d);
    const Matrix h1 = d.segments()[0].h;
    CHECK(max_abs(u - expm_antihermitian(h1, p.T / 2)) < 1e-13);
    Matrix offdiag = u;
    offdiag.diagonal().setZero();
    CHECK(max_abs(offdiag) < 1e-13);
}

TEST_CASE("kicked_mfi: monodromy equals the directly assembled U_1 U_2 U_1") {
    KickedMFIParams p;
    p.L = 4;
    p.J = p.g = p.h = 1.0;
    p.T = 0.1;  // JT = 0.1
    const auto d = kicked_mfi(p);
    const Matrix u1 = expm_antihermitian(d.segments()[0].h, p.T / 4);
    const Matrix u2 = expm_antihermitian(d.segments()[1].h, p.T / 2);
    CHECK(max_abs(monodromy(d) - u1 * u2 * u1) < 1e-12);
}

TEST_CASE("kicked_mfi: resource rejection") {
    KickedMFIParams p;
    p.L = 15;
    CHECK_THROWS_AS(kicked_mfi(p), ResourceLimit);
}

TEST_CASE("dtc_chain: parity commutes with the Ising segment") {
    DTCParams p;
    p.L = 6;
    p.seed = 99;
    const auto d = dtc_chain(p);
    REQUIRE(d.symmetry().has_value());
    const Matrix& parity = *d.symmetry();
    const Matrix& h_int = d.segments()[1].h;
    CHECK(max_abs(parity * h_int - h_int * parity) < 1e-13);
    // P_x^2 = 1 for even L
    CHECK(max_abs(parity * parity - Matrix::Identity(d.dim(), d.dim())) < 1e-13);
    // kick segment exponentiates to exp(-i theta_x H_x)
    const Matrix u_kick = expm_antihermitian(d.segments()[0].h, d.segment_duration(0));
    Matrix hx = Matrix::Zero(d.dim(), d.dim());
    for (int n = 0; n < p.L; ++n) hx += site_operator(p.L, n, 0.5 * pauli(1));
    CHECK(max_abs(u_kick - expm_antihermitian(hx, p.theta_x)) < 1e-12);
}

TEST_CASE("dtc_chain: reproducible couplings from the seed") {
    DTCParams p;
    p.L = 8;
    p.seed = 4242;
    const auto d1 = dtc_chain(p);
    const auto d2 = dtc_chain(p);
    const RealVector c1 = d1.metadata().at("couplings");
    const RealVector c2 = d2.metadata().at("couplings");
    CHECK(max_abs(Matrix((c1 - c2).cast<Cplx>())) == 0.0);
    for (Eigen::Index i = 0; i < c1.size(); ++i) {
        CHECK(c1[i] >= 0.5 * p.J);
        CHECK(c1[i] <= 1.5 * p.J);
    }
    p.seed = 4243;
    const auto d3 = dtc_chain(p);
    CHECK(max_abs(Matrix((c1 - d3.metadata().at("couplings")).cast<Cplx>())) > 1e-6);
}

TEST_CASE("dtc_chain: theta_x = 0 gives pure Ising evolution") {
    DTCParams p;
    p.L = 4;
    p.theta_x = 0.0;
    p.T = 0.7;
    const auto d = dtc_chain(p);
    const Matrix u = monodromy(d);
    const Matrix h_int = 0.5 * d.segments()[1].h;  // stored scaled by 2
    CHECK(max_abs(u - expm_antihermitian(h_int, p.T)) < 1e-12);
    Matrix offdiag = u;
    offdiag.diagonal().setZero();
    CHECK(max_abs(offdiag) < 1e-13);  // z-product eigenstates
}

TEST_CASE("afti_hex: static graphene limit at F = 0") {
    AFTIHexParams p;
    p.Lx = 8;
    p.Ly = 4;
    p.F = 0.0;
    const auto d = afti_hex(p, 0.6);
    const Matrix h0 = d.hamiltonian(0.0);
    CHECK(max_abs(d.hamiltonian(0.31) - h0) < 1e-13);
    // all bonds carry J
    CHECK(std::abs(h0(1, 0) - Cplx(1.0 + std::cos(0.6), std::sin(0.6))) < 1e-13);
    CHECK(std::abs(h0(3, 0) - Cplx(1.0, 0.0)) < 1e-13);  // J1 bond B(y=1) - A(y=0)
}

TEST_CASE("afti_hex: Hermiticity, periodicity, Fourier consistency") {
    AFTIHexParams p;
    p.Lx = 8;
    p.Ly = 6;
    const auto d = afti_hex(p, -1.1);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, d.period());
    for (int i = 0; i < 16; ++i) {
        const double t = u(rng);
        const Matrix h = d.hamiltonian(t);
        CHECK(max_abs(h - h.adjoint()) < 1e-13);
        CHECK(max_abs(d.hamiltonian(t + d.period()) - h) < 1e-12 * max_abs(h));
        CHECK(max_abs(d.fourier()->sample(t) - h) < 1e-9 * max_abs(h));
    }
}

TEST_CASE("afti_kx_grid covers (-pi, pi]") {
    const auto kx = afti_kx_grid(10);
    CHECK(kx.size() == 10);
    for (double k : kx) {
        CHECK(k > -M_PI - 1e-12);
        CHECK(k <= M_PI + 1e-12);
    }
}

TEST_CASE("afti_rudner: static limit and Hermiticity") {
    AFTIRudnerParams p;
    p.Ly = 5;
    p.Delta0 = 0.0;
    const auto d = afti_rudner(p, 0.4);
    CHECK(max_abs(d.hamiltonian(0.2) - d.hamiltonian(0.9)) < 1e-13);

    AFTIRudnerParams q;
    q.Ly = 5;
    const auto dq = afti_rudner(q, -0.8);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, dq.period());
    for (int i = 0; i < 8; ++i) {
        const Matrix h = dq.hamiltonian(u(rng));
        CHECK(max_abs(h - h.adjoint()) < 1e-13);
    }
    // single-harmonic drive
    CHECK(dq.fourier()->max_harmonic() == 1);
}

TEST_CASE("model zoo: periodicity invariant at 64 random times") {
    std::vector<DriveProtocol> zoo;
    zoo.push_back(xy_bloch(XYBlochParams{}));
    zoo.push_back(kicked_mfi(KickedMFIParams{.L = 4, .T = 0.2}));
    zoo.push_back(dtc_chain(DTCParams{.L = 4}));
    zoo.push_back(afti_hex(AFTIHexParams{.Lx = 4, .Ly = 3}, 0.3));
    zoo.push_back(afti_rudner(AFTIRudnerParams{.Ly = 3}, 1.2));
    std::mt19937_64 rng(13);
    for (const auto& d : zoo) {
        std::uniform_real_distribution<double> u(0.0, d.period());
        for (int i = 0; i < 64; ++i) {
            const double t = u(rng);
            const Matrix h = d.hamiltonian(t);
            CHECK(max_abs(d.hamiltonian(t + d.period()) - h) <= 1e-12 * std::max(1.0, max_abs(h)));
        }
    }
}

TEST_CASE("kicked drives: segment durations sum exactly to the period") {
    const auto mfi = kicked_mfi(KickedMFIParams{.L = 3, .T = 0.7});
    double sum = 0;
    for (size_t j = 0; j < mfi.segments().size(); ++j) sum += mfi.segment_duration(j);
    CHECK(sum == mfi.period());

    std::vector<KickSegment> bad;
    bad.push_back({tau(3), 1, 3});
    bad.push_back({tau(1), 1, 3});
    CHECK_THROWS_AS(DriveProtocol::kicked(2, 1.0, std::move(bad), "bad"), InvalidInput);
}

TEST_CASE("Kato crossing sits strictly before the Floquet resonance (Fig. 2d line)") {
    const double k = M_PI / 16, g = 1.0, A = 2.5, w = 10.0;
    auto eps_K_sq = [&](double J) {
        const double dk = g + J * std::cos(k), ak = A * std::sin(k);
        return (dk - w) * dk + ak * ak;
    };
    // eps_K^2 < 0 between its Delta-roots and > 0 past the upper one
    double lo = 1.0, hi = 12.0;
    REQUIRE(eps_K_sq(lo) < 0);
    REQUIRE(eps_K_sq(hi) > 0);
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (eps_K_sq(mid) < 0 ? lo : hi) = mid;
    }
    const double j_kato = 0.5 * (lo + hi);
    const double j_floq = (w - g) / std::cos(k);
    CHECK(j_kato < j_floq);
    CHECK(j_floq - j_kato > 1e-3);  // strictly before, finite margin
}
