#include "dhlab/lqr.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace dhlab::lqr {

void validate_weights(const LqrWeights& w, Eigen::Index n, Eigen::Index m) {
    if (w.Q.rows() != n || w.Q.cols() != n || w.R.rows() != m || w.R.cols() != m)
        throw DimensionMismatch("weight dimensions disagree with the system");
    auto check_pd = [](const Mat& M, const char* name) {
        if ((M - M.transpose()).norm() > tol::symmetry * (1.0 + M.norm()))
            throw NonSymmetricInput(std::string(name) + " must be symmetric");
        Eigen::SelfAdjointEigenSolver<Mat> es(M);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw NumericsError(std::string(name) + " must be positive definite");
    };
    check_pd(w.Q, "Q");
    check_pd(w.R, "R");
}

Mat stationary_cov(const Mat& A, const Mat& B, const Mat& K, const Mat& U_eps,
                   mathkit::LyapMethod method) {
    return mathkit::solve_dlyap_ctrl(A + B * K, U_eps, method);
}

CostEval evaluate_cost(const Mat& A, const Mat& B, const Mat& K,
                       const LqrWeights& w, const Mat& U_eps,
                       mathkit::LyapMethod cov_method,
                       mathkit::LyapMethod value_method) {
    CostEval out;
    const Mat Acl = A + B * K;
    out.rho = mathkit::spectral_radius(Acl);
    if (out.rho >= 1.0 - tol::schur_margin) return out;  // +inf sentinel

    const Mat M = w.Q + K.transpose() * w.R * K;
    out.U = mathkit::solve_dlyap_ctrl(Acl, U_eps, cov_method);
    out.P = mathkit::solve_dlyap_obsv(Acl, 0.5 * (M + M.transpose()), value_method);
    const double cost_cov = (M * out.U).trace();
    const double cost_value = (out.P * U_eps).trace();
    if (std::abs(cost_cov - cost_value) >
        tol::cost_duality * (1.0 + std::abs(cost_cov))) {
        std::ostringstream os;
        os << "cost trace forms disagree: " << cost_cov << " vs " << cost_value;
        throw NumericsError(os.str());
    }
    out.cost = cost_cov;
    return out;
}

double lqr_cost(const Mat& A, const Mat& B, const Mat& K, const LqrWeights& w,
                const Mat& U_eps) {
    return evaluate_cost(A, B, K, w, U_eps).cost;
}

Mat policy_gradient(const Mat& A, const Mat& B, const Mat& K,
                    const LqrWeights& w, const Mat& U_eps) {
    const auto eval = evaluate_cost(A, B, K, w, U_eps);
    if (!eval.stable()) throw NotSchurStable("gradient of a destabilizing gain");
    return 2.0 * (((w.R + B.transpose() * eval.P * B) * K +
                   B.transpose() * eval.P * A) *
                  eval.U);
}

ModelLqr model_lqr(const Mat& A, const Mat& B, const LqrWeights& w,
                   const Mat& U_eps) {
    validate_weights(w, A.rows(), B.cols());
    const auto dare = mathkit::solve_dare(A, B, w.Q, w.R);
    ModelLqr out;
    out.K_star = dare.K;
    out.P_star = dare.P;
    out.C_star = lqr_cost(A, B, dare.K, w, U_eps);
    return out;
}

LsEstimate ls_identify(const DataBatch& batch) {
    const Eigen::Index n = batch.X0.rows();
    const Eigen::Index m = batch.U0.rows();
    const Eigen::Index t = batch.X0.cols();
    if (batch.U0.cols() != t || batch.X1.cols() != t || batch.X1.rows() != n)
        throw DimensionMismatch("batch columns disagree");
    if (t < n + m)
        throw RankDeficientData("batch shorter than n + m samples");

    Mat D0(m + n, t);
    D0.topRows(m) = batch.U0;
    D0.bottomRows(n) = batch.X0;

    LsEstimate est;
    est.Phi = D0 * D0.transpose() / double(t);
    Eigen::SelfAdjointEigenSolver<Mat> es(est.Phi);
    const double smin = es.eigenvalues().minCoeff();
    const double smax = es.eigenvalues().maxCoeff();
    est.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (smin <= 1e-13 * std::max(1.0, smax)) {
        std::ostringstream os;
        os << "data covariance is rank deficient (cond = " << est.cond << ")";
        throw RankDeficientData(os.str());
    }

    const Mat Xbar1 = batch.X1 * D0.transpose() / double(t);
    const Mat BA = est.Phi.ldlt().solve(Xbar1.transpose()).transpose();
    est.B_hat = BA.leftCols(m);
    est.A_hat = BA.rightCols(n);
    return est;
}

Mat residual_cov(const DataBatch& batch, const Mat& A_hat, const Mat& B_hat,
                 const Mat& K0) {
    const Mat resid = batch.X1 - (A_hat + B_hat * K0) * batch.X0;
    Mat U = resid * resid.transpose() / double(batch.X0.cols());
    return 0.5 * (U + U.transpose());
}

mathkit::DareSolution ce_lqr(const Mat& A_hat, const Mat& B_hat,
                             const LqrWeights& w) {
    return mathkit::solve_dare(A_hat, B_hat, w.Q, w.R);
}

}  // namespace dhlab::lqr
