#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "floq/numkernel.hpp"

using namespace floq;

namespace {

Matrix random_hermitian(Eigen::Index n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Cplx(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

Matrix random_unitary(Eigen::Index n, unsigned seed) {
    return expm_antihermitian(random_hermitian(n, seed), 1.0);
}

// 64-term Taylor with scaling and squaring, independent of the spectral path.
Matrix expm_taylor_oracle(const Matrix& a) {
    int squarings = 0;
    double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    Matrix scaled = a;
    while (norm > 0.5) {
        scaled *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    Matrix result = Matrix::Identity(a.rows(), a.cols());
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    for (int k = 1; k <= 64; ++k) {
        term = (term * scaled) / double(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

}  // namespace

TEST_CASE("eigh: diagonal and Pauli cases") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = -1;
    d(1, 1) = 1;
    auto es = eigh(d);
    CHECK(es.values[0] == doctest::Approx(-1.0));
    CHECK(es.values[1] == doctest::Approx(1.0));
    CHECK(max_abs(es.vectors.cwiseAbs() - Matrix::Identity(2, 2)) < 1e-14);

    Matrix tx(2, 2);
    tx << 0, 0.5, 0.5, 0;
    auto et = eigh(tx);
    CHECK(et.values[0] == doctest::Approx(-0.5));
    CHECK(et.values[1] == doctest::Approx(0.5));
}

TEST_CASE("eigh: random rebuild property") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const Matrix m = random_hermitian(8, seed);
        auto es = eigh(m);
        const Matrix rebuilt =
            es.vectors * es.values.asDiagonal().toDenseMatrix().cast<Cplx>() * es.vectors.adjoint();
        CHECK(max_abs(rebuilt - m) < 1e-10);
        for (Eigen::Index i = 0; i + 1 < 8; ++i) CHECK(es.values[i] <= es.values[i + 1]);
        CHECK(max_abs(es.vectors.adjoint() * es.vectors - Matrix::Identity(8, 8)) < 1e-12);
    }
}

TEST_CASE("eigh: rejects non-Hermitian input") {
    Matrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(eigh(bad), InvalidInput);
}

TEST_CASE("eigu: identity and diagonal exponential") {
    auto es = eigu(Matrix(Matrix::Identity(3, 3)));
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(es.phases[i]) < 1e-12);

    // exp(-i pi tau^z) = diag(e^{-i pi/2}, e^{+i pi/2})
    Matrix tz(2, 2);
    tz << 0.5, 0, 0, -0.5;
    auto eu = eigu(expm_antihermitian(tz, M_PI));
    CHECK(eu.phases[0] == doctest::Approx(-M_PI / 2));
    CHECK(eu.phases[1] == doctest::Approx(M_PI / 2));
}

TEST_CASE("eigu: segment-product oracle for a random kicked monodromy") {
    // monodromy assembled directly from segment exponentials
    const Matrix h1 = random_hermitian(4, 5);
    const Matrix h2 = random_hermitian(4, 6);
    const Matrix u = expm_antihermitian(h2, 0.4) * expm_antihermitian(h1, 0.6);
    auto es = eigu(u);
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(std::abs(es.values[i]) - 1.0) < 1e-10);
        CHECK((u * es.vectors.col(i) - es.values[i] * es.vectors.col(i)).cwiseAbs().maxCoeff() <
              1e-9);
    }
    CHECK(max_abs(es.vectors.adjoint() * es.vectors - Matrix::Identity(4, 4)) < 1e-10);
    // phases sorted in (-pi, pi]
    for (Eigen::Index i = 0; i + 1 < 4; ++i) CHECK(es.phases[i] <= es.phases[i + 1]);
}

TEST_CASE("eigu: paired conjugate eigenvalues are resolved") {
    // real symmetric generator -> spectrum in conjugate pairs e^{+-i theta}
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix re(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i)
        for (Eigen::Index j = 0; j < 6; ++j) re(i, j) = g(rng);
    const Matrix h = 0.5 * (re + re.transpose());
    const Matrix u = expm_antihermitian(h, 1.0);
    auto es = eigu(u);
    for (Eigen::Index i = 0; i < 6; ++i)
        CHECK((u * es.vectors.col(i) - es.values[i] * es.vectors.col(i)).cwiseAbs().maxCoeff() <
              1e-10);
}

TEST_CASE("eigu: rejects non-unitary input") {
    Matrix bad = 2.0 * Matrix::Identity(3, 3);
    CHECK_THROWS_AS(eigu(bad), InvalidInput);
}

TEST_CASE("expm_antihermitian: trivial cases") {
    const Matrix m = random_hermitian(5, 9);
    CHECK(max_abs(expm_antihermitian(m, 0.0) - Matrix::Identity(5, 5)) == 0.0);

    Matrix tz(2, 2);
    tz << 0.5, 0, 0, -0.5;
    const Matrix u = expm_antihermitian(tz, 2 * M_PI);
    CHECK(max_abs(u + Matrix::Identity(2, 2)) < 1e-12);  // = -1
}

TEST_CASE("expm_antihermitian: Taylor oracle at moderate step") {
    const Matrix m = random_hermitian(6, 10);
    const Matrix u = expm_antihermitian(m, 0.3);
    const Matrix oracle = expm_taylor_oracle(Matrix(Cplx(0, -0.3) * m));
    CHECK(max_abs(u - oracle) < 1e-11);
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(6, 6)) < 1e-10);
}

TEST_CASE("expm_antihermitian: one-parameter group law") {
    const Matrix m = random_hermitian(6, 20);
    for (auto [s1, s2] : std::vector<std::pair<double, double>>{{0.1, 0.2}, {1.5, -0.7}, {3.0, 2.0}})
        CHECK(max_abs(expm_antihermitian(m, s1 + s2) -
                      expm_antihermitian(m, s1) * expm_antihermitian(m, s2)) < 1e-10);
}

TEST_CASE("pinv: invertible, zero, projector") {
    const Matrix m = random_hermitian(3, 30) + 4.0 * Matrix::Identity(3, 3);
    CHECK(max_abs(pinv(m, 1e-12) - m.inverse()) < 1e-10);

    CHECK(max_abs(pinv(Matrix(Matrix::Zero(4, 4)), 1e-12)) == 0.0);

    Vector v = Vector::Random(5);
    v.normalize();
    const Matrix proj = v * v.adjoint();
    const Matrix pp = pinv(proj, 1e-10);
    CHECK(max_abs(proj * pp * proj - proj) < 1e-12);  // M M+ M = M
    CHECK(max_abs(pp - proj) < 1e-10);                // projectors are their own pseudoinverse
}

TEST_CASE("pinv: Penrose identities on rank-deficient inputs") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 4; ++rep) {
        Matrix a(7, 3), b(3, 7);
        for (Eigen::Index i = 0; i < 7; ++i)
            for (Eigen::Index j = 0; j < 3; ++j) {
                a(i, j) = Cplx(g(rng), g(rng));
                b(j, i) = Cplx(g(rng), g(rng));
            }
        const Matrix m = a * b;
        const Matrix mp = pinv(m, 1e-10);
        const double scale = max_abs(m);
        CHECK(max_abs(m * mp * m - m) < 1e-8 * scale);
        CHECK(max_abs(mp * m * mp - mp) < 1e-8 * scale);
        CHECK(max_abs((m * mp).adjoint() - m * mp) < 1e-8);
        CHECK(max_abs((mp * m).adjoint() - mp * m) < 1e-8);
    }
}

TEST_CASE("pinv: rejects non-positive rank tolerance") {
    CHECK_THROWS_AS(pinv(Matrix(Matrix::Identity(2, 2)), 0.0), InvalidInput);
}

TEST_CASE("overlap_matrix: identities and phases") {
    const Matrix v = random_unitary(6, 40);
    CHECK(max_abs(overlap_matrix(v, v) - Matrix::Identity(6, 6)) < 1e-12);

    Vector phases(6);
    for (Eigen::Index j = 0; j < 6; ++j) phases[j] = std::exp(Cplx(0, 0.3 * double(j)));
    const Matrix w = v * phases.asDiagonal();
    const Matrix o = overlap_matrix(v, w);
    for (Eigen::Index j = 0; j < 6; ++j) CHECK(std::abs(o(j, j) - phases[j]) < 1e-12);

    const Matrix w2 = random_unitary(6, 41);
    CHECK(max_abs(overlap_matrix(v, w2) - v.adjoint() * w2) < 1e-12);
    CHECK(overlap_matrix(v, w2).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);

    CHECK_THROWS_AS(overlap_matrix(v, Matrix(Matrix::Identity(3, 3))), InvalidInput);
}

TEST_CASE("HermitianMatrix/UnitaryMatrix invariants") {
    CHECK_THROWS_AS(HermitianMatrix(Matrix(Matrix::Random(3, 3))), InvalidInput);
    CHECK_THROWS_AS(UnitaryMatrix(Matrix(2.0 * Matrix::Identity(2, 2))), InvalidInput);
    // symmetrization absorbs roundoff-scale asymmetry
    Matrix nearly = random_hermitian(4, 50);
    nearly(0, 1) += Cplx(0, 1e-15);
    HermitianMatrix h(nearly);
    CHECK(max_abs(h.mat() - h.mat().adjoint()) == 0.0);
}

TEST_CASE("eigh rebuild at larger dimensions") {
    const Matrix m = random_hermitian(512, 60);
    auto es = eigh(m);
    const Matrix rebuilt =
        es.vectors * es.values.asDiagonal().toDenseMatrix().cast<Cplx>() * es.vectors.adjoint();
    CHECK(max_abs(rebuilt - m) < 1e-10 * 512);
}
