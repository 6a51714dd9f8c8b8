#pragma once

#include <optional>

#include "dhlab/common.hpp"
#include "dhlab/mathkit.hpp"

namespace dhlab::lqr {

struct LqrWeights {
    Mat Q;
    Mat R;
};

// Throws unless Q and R are symmetric positive definite.
void validate_weights(const LqrWeights& w, Eigen::Index n, Eigen::Index m);

// Closed-loop trajectory data (columns are time-ordered samples).
struct DataBatch {
    Mat X0;  // n x t
    Mat U0;  // m x t
    Mat X1;  // n x t
    std::optional<Mat> W0;  // disturbance columns, for oracle tests only
};

// Stationary state covariance of x+ = (A + BK)x + eps, eps ~ (0, U_eps).
Mat stationary_cov(const Mat& A, const Mat& B, const Mat& K, const Mat& U_eps,
                   mathkit::LyapMethod method = mathkit::LyapMethod::Doubling);

struct CostEval {
    double cost = std::numeric_limits<double>::infinity();
    double rho = std::numeric_limits<double>::infinity();
    Mat P;  // value Lyapunov solution (empty when destabilizing)
    Mat U;  // stationary covariance (empty when destabilizing)
    bool stable() const { return std::isfinite(cost); }
};

// Steady-state quadratic cost of the gain K, evaluated through both trace
// forms, Tr((Q + K'RK) U_K) and Tr(P_K U_eps), which must agree to 1e-8
// relative. Destabilizing gains yield an infinite-cost sentinel instead of
// an exception so that search loops can compare candidates safely.
CostEval evaluate_cost(const Mat& A, const Mat& B, const Mat& K,
                       const LqrWeights& w, const Mat& U_eps,
                       mathkit::LyapMethod cov_method = mathkit::LyapMethod::Doubling,
                       mathkit::LyapMethod value_method = mathkit::LyapMethod::Doubling);

double lqr_cost(const Mat& A, const Mat& B, const Mat& K, const LqrWeights& w,
                const Mat& U_eps);

// Exact gradient of the steady-state cost with respect to the gain:
//   grad C(K) = 2 ((R + B'P_K B)K + B'P_K A) U_K.
Mat policy_gradient(const Mat& A, const Mat& B, const Mat& K,
                    const LqrWeights& w, const Mat& U_eps);

struct ModelLqr {
    Mat K_star;
    Mat P_star;
    double C_star = 0.0;
};

ModelLqr model_lqr(const Mat& A, const Mat& B, const LqrWeights& w,
                   const Mat& U_eps);

struct LsEstimate {
    Mat A_hat;
    Mat B_hat;
    Mat Phi;  // sample covariance of [u; x]
    double cond = 0.0;
};

// Least-squares identification [B A] = Xbar1 Phi^{-1}; requires a full-rank
// data covariance (persistently exciting batch).
LsEstimate ls_identify(const DataBatch& batch);

// Residual disturbance covariance of a batch collected under u = K0 x + noise.
Mat residual_cov(const DataBatch& batch, const Mat& A_hat, const Mat& B_hat,
                 const Mat& K0);

// Certainty-equivalence gain: Riccati solution on the identified model. The
// optimizer does not depend on the estimated disturbance covariance.
mathkit::DareSolution ce_lqr(const Mat& A_hat, const Mat& B_hat,
                             const LqrWeights& w);

}  // namespace dhlab::lqr
