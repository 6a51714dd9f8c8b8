#include "dhlab/mathkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace dhlab::mathkit {

namespace {

void check_square(const Mat& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << " must be square, got " << m.rows() << "x" << m.cols();
        throw DimensionMismatch(os.str());
    }
}

void check_lyap_inputs(const Mat& A_cl, const Mat& M) {
    check_square(A_cl, "A_cl");
    check_square(M, "M");
    if (A_cl.rows() != M.rows())
        throw DimensionMismatch("A_cl and M size mismatch in Lyapunov solve");
    require_finite(A_cl, "A_cl");
    require_finite(M, "M");
    const double m_norm = M.norm();
    if ((M - M.transpose()).norm() > tol::symmetry * std::max(1.0, m_norm))
        throw NonSymmetricInput("Lyapunov right-hand side is not symmetric");
    const double rho = spectral_radius(A_cl);
    if (rho >= 1.0 - tol::schur_margin) {
        std::ostringstream os;
        os << "closed-loop matrix is not Schur stable (rho = " << rho << ")";
        throw NotSchurStable(os.str());
    }
}

// Smith doubling: with A_0 = A, P_0 = M, iterate
//   P_{j+1} = P_j + A_j' P_j A_j,  A_{j+1} = A_j^2.
// P_j converges to sum_i (A')^i M A^i quadratically for rho(A) < 1.
Mat dlyap_doubling(const Mat& A_cl, const Mat& M) {
    Mat P = M;
    Mat Aj = A_cl;
    for (int j = 0; j < 80; ++j) {
        const Mat incr = Aj.transpose() * P * Aj;
        P += incr;
        if (incr.norm() <= 1e-16 * (1.0 + P.norm())) break;
        Aj = Aj * Aj;
        if (!Aj.allFinite() || Aj.norm() > 1e120)
            throw NotSchurStable("doubling iteration diverged");
    }
    P = 0.5 * (P + P.transpose());
    return P;
}

Mat dlyap_kronecker(const Mat& A_cl, const Mat& M) {
    const Eigen::Index n = A_cl.rows();
    const Eigen::Index n2 = n * n;
    // vec(P) - (A' (x) A') vec(P) = vec(M) with vec stacking columns.
    Mat At = A_cl.transpose();
    Mat lhs = Mat::Identity(n2, n2);
    for (Eigen::Index bc = 0; bc < n; ++bc)
        for (Eigen::Index br = 0; br < n; ++br)
            lhs.block(br * n, bc * n, n, n).noalias() -= At(br, bc) * At;
    Vec rhs = Eigen::Map<const Vec>(M.data(), n2);
    Vec vp = lhs.partialPivLu().solve(rhs);
    Mat P = Eigen::Map<const Mat>(vp.data(), n, n);
    P = 0.5 * (P + P.transpose());
    return P;
}

void check_residual(const Mat& A_cl, const Mat& M, const Mat& P) {
    const double res = (P - M - A_cl.transpose() * P * A_cl).norm();
    if (res > tol::lyap_residual * (1.0 + P.norm())) {
        std::ostringstream os;
        os << "Lyapunov residual " << res << " above tolerance";
        throw NumericsError(os.str());
    }
}

}  // namespace

Mat solve_dlyap_obsv(const Mat& A_cl, const Mat& M, LyapMethod method) {
    check_lyap_inputs(A_cl, M);
    Mat P = method == LyapMethod::Doubling ? dlyap_doubling(A_cl, M)
                                           : dlyap_kronecker(A_cl, M);
    check_residual(A_cl, M, P);
    return P;
}

Mat solve_dlyap_ctrl(const Mat& A_cl, const Mat& M, LyapMethod method) {
    // U = M + A U A'  <=>  observability orientation on A'.
    return solve_dlyap_obsv(A_cl.transpose(), M, method);
}

DareSolution solve_dare(const Mat& A, const Mat& B, const Mat& Q, const Mat& R) {
    check_square(A, "A");
    check_square(Q, "Q");
    check_square(R, "R");
    if (B.rows() != A.rows() || Q.rows() != A.rows() || R.rows() != B.cols())
        throw DimensionMismatch("DARE input dimensions disagree");
    require_finite(A, "A");
    require_finite(B, "B");

    const double diverge_cap = 1e14 * (1.0 + Q.norm());
    Mat P = Q;
    long it = 0;
    for (; it < tol::dare_max_iter; ++it) {
        const Mat BtP = B.transpose() * P;
        const Mat G = R + BtP * B;
        const Mat K = -G.ldlt().solve(BtP * A);
        const Mat Acl = A + B * K;
        Mat Pn = Q + K.transpose() * R * K + Acl.transpose() * P * Acl;
        Pn = 0.5 * (Pn + Pn.transpose());
        const double change = (Pn - P).norm();
        P = Pn;
        if (P.norm() > diverge_cap)
            throw NotStabilizable("DARE value iteration diverged");
        if (change <= tol::dare_rel_change * std::max(1.0, P.norm())) {
            // also require the fixed-point residual to be tight before
            // accepting; keep iterating otherwise
            const Mat BtP2 = B.transpose() * P;
            const Mat G2 = R + BtP2 * B;
            const Mat res =
                P - Q - A.transpose() * P * A +
                A.transpose() * P * B * G2.ldlt().solve(BtP2 * A);
            if (res.norm() <= tol::dare_residual * (1.0 + P.norm())) break;
        }
    }
    if (it == tol::dare_max_iter)
        throw NotStabilizable("DARE value iteration hit the iteration cap");

    DareSolution sol;
    sol.P = P;
    const Mat G = R + B.transpose() * P * B;
    sol.K = -G.ldlt().solve(B.transpose() * P * A);
    sol.iterations = it + 1;
    if (spectral_radius(A + B * sol.K) >= 1.0)
        throw NotStabilizable("DARE produced a non-stabilizing gain");
    return sol;
}

Mat pinv(const Mat& M) {
    require_finite(M, "pinv input");
    if (M.size() == 0) return Mat(M.cols(), M.rows());
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = std::numeric_limits<double>::epsilon() *
                       std::max(M.rows(), M.cols()) * sv(0);
    Vec inv = Vec::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double spectral_radius(const Mat& M) {
    check_square(M, "spectral_radius input");
    require_finite(M, "spectral_radius input");
    if (M.rows() == 0) return 0.0;
    Eigen::EigenSolver<Mat> es(M, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::Index kalman_rank(const Mat& A, const Mat& B) {
    check_square(A, "A");
    if (B.rows() != A.rows()) throw DimensionMismatch("kalman_rank: B rows != n");
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    Mat ctrb(n, n * m);
    Mat block = B;
    for (Eigen::Index i = 0; i < n; ++i) {
        ctrb.middleCols(i * m, m) = block;
        if (i + 1 < n) block = A * block;
    }
    Eigen::JacobiSVD<Mat> svd(ctrb);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cut = tol::rank_rel * sv(0);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

double hankel_min_sv(const std::vector<Vec>& u_seq, int depth) {
    if (depth < 1) throw InsufficientData("Hankel depth must be >= 1");
    const auto t = static_cast<Eigen::Index>(u_seq.size());
    if (t < depth)
        throw InsufficientData("input sequence shorter than Hankel depth");
    const Eigen::Index m = u_seq.front().size();
    const Eigen::Index cols = t - depth + 1;
    Mat H(depth * m, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (int r = 0; r < depth; ++r) H.block(r * m, c, m, 1) = u_seq[c + r];
    Eigen::BDCSVD<Mat> svd(H);
    return svd.singularValues().minCoeff();
}

double excitation_level(const std::vector<Vec>& u_seq, int depth) {
    const double smin = hankel_min_sv(u_seq, depth);
    const double t = static_cast<double>(u_seq.size());
    return smin / std::sqrt(t * depth);
}

}  // namespace dhlab::mathkit
