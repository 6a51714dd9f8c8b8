#include "dhlab/augment.hpp"

#include "dhlab/mathkit.hpp"

namespace dhlab::augment {

std::pair<Mat, Mat> build_error_maps(const dhs::EconomicSpec& spec, int n_T) {
    const auto m = spec.f_g.size();
    if (spec.f_d.size() != n_T)
        throw DimensionMismatch("temperature cost dimension disagrees with n_T");
    Mat C_T = Mat::Zero(m, n_T);
    C_T.row(m - 1) = spec.f_d.transpose();
    Mat D_T = Mat::Zero(m, m);
    D_T.topRows(m - 1) = spec.F_M;
    return {C_T, D_T};
}

AugmentedSystem build_augmented(const dhs::DiscreteModel& dm, const Mat& C_T,
                                const Mat& D_T) {
    const int n_T = static_cast<int>(dm.A_T.rows());
    const int m = static_cast<int>(C_T.rows());
    if (C_T.cols() != n_T || D_T.rows() != m || D_T.cols() != m ||
        dm.B_T.cols() != m)
        throw DimensionMismatch("error-map dimensions disagree with the model");

    AugmentedSystem s;
    s.n_T = n_T;
    s.m = m;
    s.n = n_T + m;
    s.n_L = static_cast<int>(dm.B_T_L.cols());
    s.C_T = C_T;
    s.D_T = D_T;

    s.A = Mat::Zero(s.n, s.n);
    s.A.topLeftCorner(n_T, n_T) = dm.A_T;
    s.A.bottomLeftCorner(m, n_T) = C_T;
    s.A.bottomRightCorner(m, m) = Mat::Identity(m, m);

    s.B = Mat::Zero(s.n, m);
    s.B.topRows(n_T) = dm.B_T;
    s.B.bottomRows(m) = D_T;

    s.B_w = Mat::Zero(s.n, s.n_L);
    s.B_w.topRows(n_T) = dm.B_T_L;

    s.C = Mat::Zero(m, s.n);
    s.C.leftCols(n_T) = C_T;
    s.C.rightCols(m) = Mat::Identity(m, m);
    s.D = D_T;

    s.ctrb_rank = mathkit::kalman_rank(s.A, s.B);
    return s;
}

PhysicalTrajectory physical_from_augmented(const std::vector<Vec>& x_traj,
                                           const std::vector<Vec>& u_traj,
                                           const Vec& T0, const Vec& hG_prev,
                                           int n_T) {
    if (x_traj.size() != u_traj.size() + 1 && x_traj.size() != u_traj.size())
        throw DimensionMismatch("trajectory lengths are inconsistent");
    PhysicalTrajectory out;
    out.T.reserve(x_traj.size());
    out.hG.reserve(u_traj.size() + 1);

    Vec T = T0;
    out.T.push_back(T);
    for (std::size_t k = 1; k < x_traj.size(); ++k) {
        T += x_traj[k].head(n_T);
        out.T.push_back(T);
    }
    Vec hG = hG_prev;
    for (const auto& u : u_traj) {
        hG += u;
        out.hG.push_back(hG);
    }
    return out;
}

EquilibriumReport check_equilibrium(const std::vector<Vec>& T_traj,
                                    const std::vector<Vec>& hG_traj,
                                    const std::vector<Vec>& e_traj, int window,
                                    const dhs::EquilibriumPoint& target) {
    if (T_traj.empty() || hG_traj.empty() || e_traj.empty())
        throw InsufficientData("empty trajectory");
    const auto take = [&](const std::vector<Vec>& v) {
        const std::size_t w =
            std::min<std::size_t>(v.size(), static_cast<std::size_t>(window));
        Vec mean = Vec::Zero(v.back().size());
        for (std::size_t k = v.size() - w; k < v.size(); ++k) mean += v[k];
        return Vec(mean / double(w));
    };
    EquilibriumReport rep;
    rep.temperature_gap = (take(T_traj) - target.T_star).norm();
    rep.generation_gap = (take(hG_traj) - target.hG_star).norm();
    rep.error_norm = take(e_traj).norm();
    return rep;
}

}  // namespace dhlab::augment
