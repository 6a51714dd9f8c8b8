#pragma once

#include <vector>

#include "dhlab/common.hpp"

namespace dhlab::mathkit {

// Dense discrete-time Lyapunov / Riccati kernels used throughout the library.
// Sizes stay small (n <= ~30) so everything is direct dense algebra.
//
// Two solver paths are kept for the Lyapunov equations:
//   - Doubling: Smith squaring iteration, quadratically convergent, the fast
//     path used inside online loops.
//   - Kronecker: the vec-trick linear system, the slow reference path kept
//     for cross-checking (tests compare both on the same inputs).
enum class LyapMethod { Doubling, Kronecker };

// Solves P = M + A_cl' P A_cl (observability orientation).
// Requires rho(A_cl) < 1 - 1e-12 and symmetric PSD M.
Mat solve_dlyap_obsv(const Mat& A_cl, const Mat& M,
                     LyapMethod method = LyapMethod::Doubling);

// Solves U = M + A_cl U A_cl' (controllability orientation).
Mat solve_dlyap_ctrl(const Mat& A_cl, const Mat& M,
                     LyapMethod method = LyapMethod::Doubling);

struct DareSolution {
    Mat P;            // stabilizing solution
    Mat K;            // K = -(R + B'PB)^{-1} B'PA
    long iterations = 0;
};

// Discrete algebraic Riccati equation by value iteration (robustness over
// speed at these sizes). Throws NotStabilizable when the iteration diverges
// or the resulting gain fails to be Schur-stabilizing.
DareSolution solve_dare(const Mat& A, const Mat& B, const Mat& Q, const Mat& R);

// Moore-Penrose pseudoinverse via SVD; rank-deficient inputs are fine.
Mat pinv(const Mat& M);

// max |eigenvalue| of a square matrix.
double spectral_radius(const Mat& M);

// Rank of [B, AB, ..., A^{n-1}B] under a relative singular-value cut.
Eigen::Index kalman_rank(const Mat& A, const Mat& B);

// Minimum singular value of the depth-block Hankel matrix of an input
// sequence; the excitation-level diagnostic is sigma_min / sqrt(t * depth).
double hankel_min_sv(const std::vector<Vec>& u_seq, int depth);

// Convenience wrapper around hankel_min_sv returning the normalized level.
double excitation_level(const std::vector<Vec>& u_seq, int depth);

}  // namespace dhlab::mathkit
