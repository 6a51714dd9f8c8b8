#pragma once

#include <string>
#include <vector>

#include "dhlab/common.hpp"

namespace dhlab::dhs {

// Thermal network of a district heating system: edges are heat exchangers
// and pipelines (producer / load / pipe), nodes are storage tanks. All heat
// quantities are pre-scaled by 1/(rho * C_p); physical unit conversion is a
// CLI concern.
enum class EdgeKind { Producer, Load, Pipe };

struct EdgeSpec {
    std::string id;
    EdgeKind kind = EdgeKind::Pipe;
    std::string tail;   // node the edge draws from
    std::string head;   // node the edge discharges into
    double flow = 0.0;  // mass flow q_E > 0
    double volume = 0.0;
};

struct NodeSpec {
    std::string id;
    double volume = 0.0;
};

// Validated topology. Edges are reordered producers-first, then loads, then
// pipes so that the producer/load selector blocks of the state-space model
// are leading blocks. Temperature state ordering: edges then nodes.
class HeatNetwork {
  public:
    HeatNetwork(std::vector<EdgeSpec> edges, std::vector<NodeSpec> nodes);

    const std::vector<EdgeSpec>& edges() const { return edges_; }
    const std::vector<NodeSpec>& nodes() const { return nodes_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    int n_nodes() const { return static_cast<int>(nodes_.size()); }
    int n_producers() const { return n_producers_; }
    int n_loads() const { return n_loads_; }
    int n_states() const { return n_edges() + n_nodes(); }
    int node_index(const std::string& id) const;

    // node x edge incidence, +1 when the edge enters the node (head),
    // -1 when it leaves (tail).
    Mat incidence() const;

  private:
    std::vector<EdgeSpec> edges_;
    std::vector<NodeSpec> nodes_;
    int n_producers_ = 0;
    int n_loads_ = 0;
};

// Flow-weighted mixing matrix on [edge temps; node temps]:
//   A_h = [ diag(q)        -diag(q) B_sh' ]
//         [ -B_th diag(q)   diag(B_th q)  ]
// with B_th / B_sh the head / tail selectors of the incidence matrix.
// Row and column sums vanish; A_h + A_h' is PSD with a simple zero
// eigenvalue on a connected network.
Mat build_kirchhoff(const HeatNetwork& net);

struct ContinuousModel {
    Mat A1;  // V^{-1} A_h
    Mat B1;  // producer injection selector, volume-scaled
    Mat B2;  // load withdrawal selector, volume-scaled
    int n_T = 0;
    int n_G = 0;
    int n_L = 0;
};

// dT/dt = -A1 T + B1 h_G - B2 h_L
ContinuousModel build_continuous(const HeatNetwork& net);

struct DiscreteModel {
    Mat A_T;    // I - tau A1
    Mat B_T;    // tau B1
    Mat B_T_L;  // -tau B2
    double tau = 0.0;
    bool euler_margin_warning = false;  // tau above 1/rho(A1)
};

// Forward-Euler discretization; rejects tau >= 2/rho(A1) and flags the band
// above 1/rho(A1) with a warning instead of an error.
DiscreteModel discretize(const ContinuousModel& cm, double tau);

struct EconomicSpec {
    Vec f_g;  // producer cost coefficients, strictly positive
    Vec f_d;  // temperature deviation cost coefficients, strictly positive
    Mat F_M;  // (n_G - 1) x n_G equal-marginal-cost residual map
};

EconomicSpec make_economic_spec(const Vec& f_g, const Vec& f_d);

struct EquilibriumPoint {
    Vec T_star;
    Vec hG_star;
};

// Economically optimal generation split for a total demand: marginal costs
// f_i h_i are equalized subject to total balance. Closed form
//   h_i = S / (f_i * sum_j 1/f_j),  S = sum of loads.
Vec solve_dispatch(const EconomicSpec& spec, const Vec& load);

// Optimal temperature profile over the equilibrium line
//   T = pinv(A1)(B1 hG - B2 load) + z * 1,
// picking z that minimizes the weighted temperature deviation.
EquilibriumPoint solve_temperature(const ContinuousModel& cm,
                                   const EconomicSpec& spec, const Vec& hG_star,
                                   const Vec& load);

struct OptimalityResiduals {
    double marginal = 0.0;     // ||F_M hG||
    double temperature = 0.0;  // |1' F_D T|
    double balance = 0.0;      // ||A1 T - B1 hG + B2 load||
    bool optimal(double tolerance = 1e-8) const {
        return marginal <= tolerance && temperature <= tolerance &&
               balance <= tolerance;
    }
};

OptimalityResiduals verify_optimality(const EconomicSpec& spec, const Vec& T,
                                      const Vec& hG, const ContinuousModel& cm,
                                      const Vec& load);

}  // namespace dhlab::dhs
