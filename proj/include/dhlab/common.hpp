#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dhlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Base class for all numerical/contract failures raised by this library.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSchurStable : NumericsError {
    using NumericsError::NumericsError;
};
struct NonSymmetricInput : NumericsError {
    using NumericsError::NumericsError;
};
struct NotStabilizable : NumericsError {
    using NumericsError::NumericsError;
};
struct DimensionMismatch : NumericsError {
    using NumericsError::NumericsError;
};
struct RankDeficientData : NumericsError {
    using NumericsError::NumericsError;
};
struct InsufficientData : NumericsError {
    using NumericsError::NumericsError;
};
struct FlowImbalance : NumericsError {
    using NumericsError::NumericsError;
};
struct StepTooLarge : NumericsError {
    using NumericsError::NumericsError;
};
struct Infeasible : NumericsError {
    using NumericsError::NumericsError;
};
struct NonFinite : NumericsError {
    using NumericsError::NumericsError;
};
struct DivergenceDetected : NumericsError {
    using NumericsError::NumericsError;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared tolerance constants. Solvers and tests both read from here so they
// cannot drift apart.
namespace tol {
inline constexpr double lyap_residual = 1e-10;      // relative to 1 + ||P||_F
inline constexpr double dare_residual = 1e-9;       // relative to 1 + ||P||_F
inline constexpr double dare_rel_change = 1e-13;    // value-iteration stop
inline constexpr long dare_max_iter = 100000;
inline constexpr double schur_margin = 1e-12;       // rho >= 1 - this rejects
inline constexpr double symmetry = 1e-10;           // relative symmetry check
inline constexpr double pinv_identity = 1e-9;
inline constexpr double rank_rel = 1e-8;            // controllability rank cut
inline constexpr double psd_min_eig = -1e-10;
inline constexpr double flow_balance = 1e-10;
inline constexpr double cost_duality = 1e-8;        // trace-form agreement
inline constexpr double constraint = 1e-8;          // Xbar0 * V = I residual
inline constexpr double exact_projection = 1e-10;
inline constexpr double guard_rho = 1e-6;           // candidate rejected at 1 - this
inline constexpr double divergence_cap = 1e9;       // state norm abort limit
}  // namespace tol

inline void require_finite(const Mat& m, const std::string& what) {
    if (!m.allFinite()) throw NonFinite(what + " contains NaN/Inf entries");
}

}  // namespace dhlab
