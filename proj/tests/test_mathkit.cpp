#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "dhlab/mathkit.hpp"
#include "dhlab/rng.hpp"

using namespace dhlab;
using namespace dhlab::mathkit;

namespace {

Mat random_stable(int n, RngStream& rng, double target_rho = 0.8) {
    Mat A = rng.gaussian_mat(n, n);
    const double rho = spectral_radius(A);
    if (rho > 0) A *= target_rho / rho;
    return A;
}

Mat random_spd(int n, RngStream& rng) {
    Mat G = rng.gaussian_mat(n, n);
    return G * G.transpose() + 0.1 * Mat::Identity(n, n);
}

// Independent oracle: truncated series sum_{i<=N} (A')^i M A^i.
Mat dlyap_series_obsv(const Mat& A, const Mat& M, int terms) {
    Mat P = Mat::Zero(A.rows(), A.cols());
    Mat Ai = Mat::Identity(A.rows(), A.cols());
    for (int i = 0; i <= terms; ++i) {
        P += Ai.transpose() * M * Ai;
        Ai = A * Ai;
    }
    return P;
}

Mat dlyap_series_ctrl(const Mat& A, const Mat& M, int terms) {
    Mat U = Mat::Zero(A.rows(), A.cols());
    Mat Ai = Mat::Identity(A.rows(), A.cols());
    for (int i = 0; i <= terms; ++i) {
        U += Ai * M * Ai.transpose();
        Ai = A * Ai;
    }
    return U;
}

Mat bench3d_A() {
    Mat A(3, 3);
    A << 1.01, 0.01, 0.00,
         0.01, 1.01, 0.01,
         0.00, 0.01, 1.01;
    return A;
}

}  // namespace

TEST_CASE("dlyap_obsv: zero dynamics and scalar geometric series") {
    const Mat Z = Mat::Zero(4, 4);
    const Mat I = Mat::Identity(4, 4);
    CHECK((solve_dlyap_obsv(Z, I) - I).norm() < 1e-14);

    Mat a(1, 1), m(1, 1);
    a << 0.5;
    m << 1.0;
    const Mat p = solve_dlyap_obsv(a, m);
    CHECK(p(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("dlyap_obsv: random stable 3x3 matches truncated series to 1e-8") {
    RngStream rng(42, "dlyap-obsv");
    for (int trial = 0; trial < 5; ++trial) {
        const Mat A = random_stable(3, rng);
        const Mat M = Mat::Identity(3, 3);
        const Mat P = solve_dlyap_obsv(A, M);
        const Mat P_oracle = dlyap_series_obsv(A, M, 200);
        CHECK((P - P_oracle).norm() < 1e-8);
    }
}

TEST_CASE("dlyap_ctrl: one-term, scalar, and series oracle") {
    RngStream rng(43, "dlyap-ctrl");
    const Mat Ue = random_spd(3, rng);
    CHECK((solve_dlyap_ctrl(Mat::Zero(3, 3), Ue) - Ue).norm() < 1e-12);

    Mat a(1, 1), m(1, 1);
    a << 0.9;
    m << 1.0;
    CHECK(solve_dlyap_ctrl(a, m)(0, 0) ==
          doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-12));

    const Mat A = random_stable(3, rng);
    const Mat M = random_spd(3, rng);
    const Mat U = solve_dlyap_ctrl(A, M);
    CHECK((U - dlyap_series_ctrl(A, M, 400)).norm() < 1e-8);
}

TEST_CASE("dlyap: doubling and Kronecker paths agree") {
    RngStream rng(44, "dlyap-xcheck");
    for (int n : {2, 5, 9, 22}) {
        const Mat A = random_stable(n, rng, 0.9);
        const Mat M = random_spd(n, rng);
        const Mat Pd = solve_dlyap_obsv(A, M, LyapMethod::Doubling);
        const Mat Pk = solve_dlyap_obsv(A, M, LyapMethod::Kronecker);
        CHECK((Pd - Pk).norm() < 1e-9 * (1.0 + Pk.norm()));
    }
}

TEST_CASE("dlyap: outputs symmetric PSD; errors on bad inputs") {
    RngStream rng(45, "dlyap-psd");
    for (int trial = 0; trial < 10; ++trial) {
        const Mat A = random_stable(5, rng, 0.95);
        const Mat M = random_spd(5, rng);
        const Mat P = solve_dlyap_obsv(A, M);
        CHECK((P - P.transpose()).norm() < 1e-12 * (1.0 + P.norm()));
        Eigen::SelfAdjointEigenSolver<Mat> es(P);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }

    CHECK_THROWS_AS(solve_dlyap_obsv(Mat::Identity(3, 3), Mat::Identity(3, 3)),
                    NotSchurStable);
    Mat nonsym = Mat::Identity(3, 3);
    nonsym(0, 1) = 0.5;
    CHECK_THROWS_AS(solve_dlyap_obsv(0.5 * Mat::Identity(3, 3), nonsym),
                    NonSymmetricInput);
}

TEST_CASE("dlyap: trace duality Tr(P(M1) M2) == Tr(M1 U(M2))") {
    RngStream rng(46, "trace-duality");
    for (int trial = 0; trial < 5; ++trial) {
        const Mat A = random_stable(6, rng, 0.9);
        const Mat M1 = random_spd(6, rng);
        const Mat M2 = random_spd(6, rng);
        // independent routes: doubling for one side, Kronecker for the other
        const Mat P = solve_dlyap_obsv(A, M1, LyapMethod::Doubling);
        const Mat U = solve_dlyap_ctrl(A, M2, LyapMethod::Kronecker);
        const double lhs = (P * M2).trace();
        const double rhs = (M1 * U).trace();
        CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("dare: no dynamics and scalar fixed-point oracle") {
    const Mat Z = Mat::Zero(3, 3);
    const Mat I = Mat::Identity(3, 3);
    const auto sol = solve_dare(Z, I, I, I);
    CHECK((sol.P - I).norm() < 1e-10);
    CHECK(sol.K.norm() < 1e-10);

    // scalar a=1.01 wait-free oracle: iterate p <- 1 + a^2 p - a^2 p^2/(1+p)
    const double a = 1.01;
    double p = 1.0;
    for (int i = 0; i < 200000; ++i) {
        const double pn = 1.0 + a * a * p - a * a * p * p / (1.0 + p);
        if (std::abs(pn - p) < 1e-12 * std::max(1.0, std::abs(pn))) {
            p = pn;
            break;
        }
        p = pn;
    }
    Mat A1(1, 1), B1(1, 1), W(1, 1);
    A1 << a;
    B1 << 1.0;
    W << 1.0;
    const auto scalar_sol = solve_dare(A1, B1, W, W);
    CHECK(scalar_sol.P(0, 0) == doctest::Approx(p).epsilon(1e-9));
}

TEST_CASE("dare: residual, stabilizing gain, and marginally unstable bench") {
    const Mat A = bench3d_A();
    const Mat B = Mat::Identity(3, 3);
    const Mat Q = Mat::Identity(3, 3);
    const Mat R = Mat::Identity(3, 3);
    const auto sol = solve_dare(A, B, Q, R);

    const Mat G = R + B.transpose() * sol.P * B;
    const Mat res = sol.P - (Q + A.transpose() * sol.P * A -
                             A.transpose() * sol.P * B *
                                 G.ldlt().solve(B.transpose() * sol.P * A));
    CHECK(res.norm() <= 1e-9 * (1.0 + sol.P.norm()));
    CHECK(spectral_radius(A + B * sol.K) < 1.0);
    CHECK(spectral_radius(A) > 1.0);  // the plant itself is unstable
}

TEST_CASE("dare: rejects non-stabilizable pair") {
    Mat A = 2.0 * Mat::Identity(2, 2);
    Mat B = Mat::Zero(2, 1);
    CHECK_THROWS_AS(solve_dare(A, B, Mat::Identity(2, 2), Mat::Identity(1, 1)),
                    NotStabilizable);
}

TEST_CASE("pinv: identity, rank-1, and Moore-Penrose identities") {
    CHECK((pinv(Mat::Identity(4, 4)) - Mat::Identity(4, 4)).norm() < 1e-12);

    Mat ones(2, 2);
    ones << 1, 1, 1, 1;
    CHECK((pinv(ones) - 0.25 * ones).norm() < 1e-12);

    RngStream rng(47, "pinv");
    for (int trial = 0; trial < 8; ++trial) {
        Mat M = rng.gaussian_mat(5, 3);
        if (trial % 2 == 1) M.col(2) = M.col(0) + M.col(1);  // rank-deficient
        const Mat Mp = pinv(M);
        const double s = 1.0 + M.norm();
        CHECK((M * Mp * M - M).norm() < 1e-9 * s);
        CHECK((Mp * M * Mp - Mp).norm() < 1e-9 * (1.0 + Mp.norm()));
        CHECK((M * Mp - (M * Mp).transpose()).norm() < 1e-9 * s);
        CHECK((Mp * M - (Mp * M).transpose()).norm() < 1e-9 * s);
    }
}

TEST_CASE("pinv: full-column-rank M equals (M'M)^-1 M'") {
    RngStream rng(48, "pinv-fullrank");
    const Mat M = rng.gaussian_mat(6, 3);
    const Mat lhs = pinv(M);
    const Mat rhs = (M.transpose() * M).ldlt().solve(M.transpose());
    CHECK((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
}

TEST_CASE("spectral_radius: identity, nilpotent, and power-iteration oracle") {
    CHECK(spectral_radius(Mat::Identity(5, 5)) == doctest::Approx(1.0));

    Mat N = Mat::Zero(3, 3);
    N(0, 1) = 2.0;
    N(0, 2) = -1.0;
    N(1, 2) = 3.0;
    CHECK(spectral_radius(N) < 1e-10);

    // power iteration oracle on the symmetric 3-D benchmark matrix
    const Mat A = bench3d_A();
    Vec v = Vec::Ones(3).normalized();
    double lambda = 0.0;
    for (int i = 0; i < 500; ++i) {
        Vec w = A * v;
        lambda = w.norm();
        v = w / lambda;
    }
    const double rho = spectral_radius(A);
    CHECK(rho > 1.0);
    CHECK(rho == doctest::Approx(lambda).epsilon(1e-10));
}

TEST_CASE("kalman_rank: trivial cases") {
    CHECK(kalman_rank(Mat::Zero(4, 4), Mat::Identity(4, 4)) == 4);
    CHECK(kalman_rank(Mat::Identity(3, 3), Mat::Zero(3, 2)) == 0);

    // single-chain integrator: controllable from the last state only
    Mat A = Mat::Zero(3, 3);
    A(0, 1) = 1.0;
    A(1, 2) = 1.0;
    Mat B = Mat::Zero(3, 1);
    B(2, 0) = 1.0;
    CHECK(kalman_rank(A, B) == 3);
}

TEST_CASE("hankel_min_sv: zeros, impulse with direct SVD oracle") {
    std::vector<Vec> zeros(10, Vec::Zero(2));
    CHECK(hankel_min_sv(zeros, 3) == doctest::Approx(0.0));

    // single impulse sequence, depth 2: H = [[1,0,0],[0,0,0],[0,1,0],[0,0,0]]
    std::vector<Vec> impulse(4, Vec::Zero(2));
    impulse[1](0) = 1.0;
    const double smin = hankel_min_sv(impulse, 2);
    Mat H(4, 3);
    H.setZero();
    H(0, 1) = 1.0;
    H(2, 0) = 1.0;
    Eigen::JacobiSVD<Mat> svd(H);
    CHECK(smin == doctest::Approx(svd.singularValues().minCoeff()).epsilon(1e-12));

    CHECK_THROWS_AS(hankel_min_sv(std::vector<Vec>(2, Vec::Zero(1)), 5),
                    InsufficientData);
}

TEST_CASE("hankel_min_sv: iid input excitation level calibration") {
    // i.i.d. unit-variance inputs of length 1000, depth n+1 with n = 3:
    // sigma_min >= 0.1 sqrt(t (n+1)) in at least 90% of seeds.
    const int n = 3;
    const int t = 1000;
    int ok = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        RngStream rng(1000 + s, "hankel-mc");
        std::vector<Vec> u(t);
        for (auto& v : u) v = rng.gaussian_vec(2);
        const double smin = hankel_min_sv(u, n + 1);
        if (smin >= 0.1 * std::sqrt(double(t) * (n + 1))) ++ok;
    }
    CHECK(ok >= 18);
}
