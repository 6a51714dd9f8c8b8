#include "dhlab/dhs.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "dhlab/mathkit.hpp"

namespace dhlab::dhs {

namespace {

int kind_order(EdgeKind k) {
    switch (k) {
        case EdgeKind::Producer: return 0;
        case EdgeKind::Load: return 1;
        case EdgeKind::Pipe: return 2;
    }
    return 3;
}

}  // namespace

HeatNetwork::HeatNetwork(std::vector<EdgeSpec> edges, std::vector<NodeSpec> nodes)
    : edges_(std::move(edges)), nodes_(std::move(nodes)) {
    if (edges_.empty() || nodes_.empty())
        throw ConfigError("network needs at least one edge and one node");

    std::stable_sort(edges_.begin(), edges_.end(),
                     [](const EdgeSpec& a, const EdgeSpec& b) {
                         return kind_order(a.kind) < kind_order(b.kind);
                     });

    std::map<std::string, int> node_idx;
    for (int i = 0; i < n_nodes(); ++i) {
        if (!node_idx.emplace(nodes_[i].id, i).second)
            throw ConfigError("duplicate node id: " + nodes_[i].id);
        if (!(nodes_[i].volume > 0.0))
            throw ConfigError("node volume must be positive: " + nodes_[i].id);
    }

    std::map<std::string, int> edge_ids;
    for (int i = 0; i < n_edges(); ++i) {
        const auto& e = edges_[i];
        if (!edge_ids.emplace(e.id, i).second)
            throw ConfigError("duplicate edge id: " + e.id);
        if (!node_idx.count(e.tail) || !node_idx.count(e.head))
            throw ConfigError("edge " + e.id + " references an unknown node");
        if (!(e.flow > 0.0))
            throw ConfigError("edge flow must be positive: " + e.id);
        if (!(e.volume > 0.0))
            throw ConfigError("edge volume must be positive: " + e.id);
        if (e.kind == EdgeKind::Producer) ++n_producers_;
        if (e.kind == EdgeKind::Load) ++n_loads_;
    }

    // per-node mass-flow balance: inflow equals outflow
    Vec balance = Vec::Zero(n_nodes());
    for (const auto& e : edges_) {
        balance(node_idx[e.head]) += e.flow;
        balance(node_idx[e.tail]) -= e.flow;
    }
    for (int k = 0; k < n_nodes(); ++k) {
        if (std::abs(balance(k)) > tol::flow_balance) {
            std::ostringstream os;
            os << "node " << nodes_[k].id << " violates flow balance by "
               << balance(k);
            throw FlowImbalance(os.str());
        }
    }

    // connectivity over the state graph (edge states touch their endpoints)
    std::vector<std::vector<int>> adj(n_states());
    for (int i = 0; i < n_edges(); ++i) {
        const int t = n_edges() + node_idx[edges_[i].tail];
        const int h = n_edges() + node_idx[edges_[i].head];
        adj[i] = {t, h};
        adj[t].push_back(i);
        adj[h].push_back(i);
    }
    std::vector<char> seen(n_states(), 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                bfs.push(w);
            }
    }
    if (reached != n_states())
        throw ConfigError("network graph is disconnected");
}

int HeatNetwork::node_index(const std::string& id) const {
    for (int i = 0; i < n_nodes(); ++i)
        if (nodes_[i].id == id) return i;
    throw ConfigError("unknown node id: " + id);
}

Mat HeatNetwork::incidence() const {
    Mat B = Mat::Zero(n_nodes(), n_edges());
    for (int j = 0; j < n_edges(); ++j) {
        B(node_index(edges_[j].head), j) += 1.0;
        B(node_index(edges_[j].tail), j) -= 1.0;
    }
    return B;
}

Mat build_kirchhoff(const HeatNetwork& net) {
    const int E = net.n_edges();
    const int N = net.n_nodes();
    Mat A_h = Mat::Zero(E + N, E + N);
    for (int j = 0; j < E; ++j) {
        const auto& e = net.edges()[j];
        const double q = e.flow;
        const int t = E + net.node_index(e.tail);
        const int h = E + net.node_index(e.head);
        A_h(j, j) = q;    // edge relaxes toward its tail node temperature
        A_h(j, t) -= q;
        A_h(h, j) -= q;   // node mixes the in-edge stream
        A_h(h, h) += q;
    }
    return A_h;
}

ContinuousModel build_continuous(const HeatNetwork& net) {
    const Mat A_h = build_kirchhoff(net);
    const int E = net.n_edges();
    const int N = net.n_nodes();
    Vec vol(E + N);
    for (int j = 0; j < E; ++j) vol(j) = net.edges()[j].volume;
    for (int k = 0; k < N; ++k) vol(E + k) = net.nodes()[k].volume;

    ContinuousModel cm;
    cm.n_T = E + N;
    cm.n_G = net.n_producers();
    cm.n_L = net.n_loads();
    cm.A1 = vol.cwiseInverse().asDiagonal() * A_h;
    cm.B1 = Mat::Zero(cm.n_T, cm.n_G);
    cm.B2 = Mat::Zero(cm.n_T, cm.n_L);
    for (int j = 0; j < cm.n_G; ++j) cm.B1(j, j) = 1.0 / vol(j);
    for (int j = 0; j < cm.n_L; ++j) cm.B2(cm.n_G + j, j) = 1.0 / vol(cm.n_G + j);
    return cm;
}

DiscreteModel discretize(const ContinuousModel& cm, double tau) {
    if (tau < 0.0) throw StepTooLarge("sampling interval must be nonnegative");
    DiscreteModel dm;
    dm.tau = tau;
    if (tau > 0.0) {
        const double rho = mathkit::spectral_radius(cm.A1);
        if (rho > 0.0 && tau >= 2.0 / rho) {
            std::ostringstream os;
            os << "tau = " << tau
               << " exceeds the Euler stability limit 2/rho(A1) = " << 2.0 / rho;
            throw StepTooLarge(os.str());
        }
        dm.euler_margin_warning = rho > 0.0 && tau > 1.0 / rho;
    }
    dm.A_T = Mat::Identity(cm.n_T, cm.n_T) - tau * cm.A1;
    dm.B_T = tau * cm.B1;
    dm.B_T_L = -tau * cm.B2;
    return dm;
}

EconomicSpec make_economic_spec(const Vec& f_g, const Vec& f_d) {
    if (f_g.size() < 1) throw ConfigError("need at least one producer cost");
    if ((f_g.array() <= 0.0).any() || (f_d.array() <= 0.0).any())
        throw ConfigError("economic cost coefficients must be strictly positive");
    EconomicSpec spec;
    spec.f_g = f_g;
    spec.f_d = f_d;
    const auto g = f_g.size();
    spec.F_M = Mat::Zero(g - 1, g);
    for (Eigen::Index i = 0; i + 1 < g; ++i) {
        spec.F_M(i, i) = f_g(i);
        spec.F_M(i, i + 1) = -f_g(i + 1);
    }
    return spec;
}

Vec solve_dispatch(const EconomicSpec& spec, const Vec& load) {
    require_finite(load, "load");
    const double total = load.sum();
    const double harmonic = spec.f_g.cwiseInverse().sum();
    return (total / harmonic) * spec.f_g.cwiseInverse();
}

EquilibriumPoint solve_temperature(const ContinuousModel& cm,
                                   const EconomicSpec& spec, const Vec& hG_star,
                                   const Vec& load) {
    if (hG_star.size() != cm.n_G || load.size() != cm.n_L)
        throw DimensionMismatch("dispatch/load sizes disagree with the model");
    const Vec rhs = cm.B1 * hG_star - cm.B2 * load;
    const Vec T0 = mathkit::pinv(cm.A1) * rhs;
    const double z =
        -spec.f_d.dot(T0) / spec.f_d.sum();  // -(1'F_D T0)/(1'F_D 1), diag F_D
    EquilibriumPoint eq;
    eq.T_star = T0.array() + z;
    eq.hG_star = hG_star;
    return eq;
}

OptimalityResiduals verify_optimality(const EconomicSpec& spec, const Vec& T,
                                      const Vec& hG, const ContinuousModel& cm,
                                      const Vec& load) {
    if (T.size() != cm.n_T || hG.size() != cm.n_G)
        throw DimensionMismatch("equilibrium sizes disagree with the model");
    OptimalityResiduals r;
    r.marginal = spec.F_M.rows() == 0 ? 0.0 : (spec.F_M * hG).norm();
    r.temperature = std::abs(spec.f_d.dot(T));
    r.balance = (cm.A1 * T - cm.B1 * hG + cm.B2 * load).norm();
    return r;
}

}  // namespace dhlab::dhs
