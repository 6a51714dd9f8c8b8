#pragma once

#include <vector>

#include "dhlab/common.hpp"
#include "dhlab/dhs.hpp"

namespace dhlab::augment {

// Incremental realization with the optimality error folded into the state:
//   x_{k+1} = [T_{k+1} - T_k; e_k],  u_k = hG_k - hG_{k-1},
//   A = [A_T 0; C_T I], B = [B_T; D_T], B_w = [B_T_L; 0],
//   e_k = [C_T I] x_k + D_T u_k.
// The zero equilibrium of (x, u, e) encodes the economically optimal
// operating point.
struct AugmentedSystem {
    Mat A;    // n x n
    Mat B;    // n x m
    Mat B_w;  // n x n_L
    Mat C;    // m x n
    Mat D;    // m x m
    Mat C_T;  // m x n_T
    Mat D_T;  // m x m
    int n = 0;
    int m = 0;
    int n_T = 0;
    int n_L = 0;
    Eigen::Index ctrb_rank = 0;  // controllability diagnostic, expect n
};

// Error output maps: e = C_T T + D_T hG with
//   C_T = [0; 1'F_D] (only the last row nonzero) and
//   D_T = [F_M; 0]   (only the last row zero).
std::pair<Mat, Mat> build_error_maps(const dhs::EconomicSpec& spec, int n_T);

AugmentedSystem build_augmented(const dhs::DiscreteModel& dm, const Mat& C_T,
                                const Mat& D_T);

struct PhysicalTrajectory {
    std::vector<Vec> T;   // temperatures per step
    std::vector<Vec> hG;  // generation per step
};

// Undo the incremental encoding: hG_k = hG_prev + sum_{j<=k} u_j and
// T_k = T0 + cumulative upper blocks of x. x_traj[k] is x_k with
// x_0 = [T_0 - T_{-1}; e_{-1}]; the upper block of x_0 is not re-applied.
PhysicalTrajectory physical_from_augmented(const std::vector<Vec>& x_traj,
                                           const std::vector<Vec>& u_traj,
                                           const Vec& T0, const Vec& hG_prev,
                                           int n_T);

struct EquilibriumReport {
    double temperature_gap = 0.0;  // ||mean T - T_star||
    double generation_gap = 0.0;   // ||mean hG - hG_star||
    double error_norm = 0.0;       // ||mean e||
};

// Windowed means of the trailing `window` samples against the dispatch
// optimum computed by the dhs solvers.
EquilibriumReport check_equilibrium(const std::vector<Vec>& T_traj,
                                    const std::vector<Vec>& hG_traj,
                                    const std::vector<Vec>& e_traj, int window,
                                    const dhs::EquilibriumPoint& target);

}  // namespace dhlab::augment
