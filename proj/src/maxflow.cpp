#include "nccut/maxflow.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <ostream>

#include "nccut/error.hpp"

namespace nccut {

namespace {

// Search trees grown from both terminals, augmentation along the found path,
// then adoption of the orphaned subtrees. Edge ids come in pairs (e, e ^ 1);
// id 0 is reserved as "no edge".
class BkSolver {
public:
    explicit BkSolver(const FlowNetwork& net)
    {
        const std::size_t n = net.node_count();
        vertices_.resize(n);
        edges_.resize(2);
        edges_.reserve(2 + 2 * net.links.size());
        for (std::size_t i = 0; i < n; ++i)
            vertices_[i].weight = net.cost0[i] - net.cost1[i];
        for (const auto& l : net.links) {
            if (l.a == l.b || l.capacity == 0)
                continue;
            add_edge(l.a, l.b, l.capacity);
        }
    }

    double run()
    {
        double flow = 0;
        Vertex stub;
        Vertex* const nil = &stub;
        Vertex* first = nil;
        Vertex* last = nil;
        int curr_ts = 0;

        for (auto& v : vertices_) {
            v.ts = 0;
            if (v.weight != 0) {
                last = last->next = &v;
                v.dist = 1;
                v.parent = kTerminal;
                v.t = v.weight < 0;
            } else {
                v.parent = 0;
            }
        }
        first = first->next;
        last->next = nil;
        nil->next = nullptr;

        for (;;) {
            int e0 = -1;
            // grow
            while (first != nil) {
                Vertex* v = first;
                if (v->parent) {
                    const int vt = v->t;
                    for (int ei = v->first; ei != 0; ei = edges_[ei].next) {
                        if (edges_[ei ^ vt].weight == 0)
                            continue;
                        Vertex* u = &vertices_[edges_[ei].dst];
                        if (!u->parent) {
                            u->t = vt;
                            u->parent = ei ^ 1;
                            u->ts = v->ts;
                            u->dist = v->dist + 1;
                            if (!u->next) {
                                u->next = nil;
                                last = last->next = u;
                            }
                            continue;
                        }
                        if (u->t != vt) {
                            e0 = ei ^ vt;
                            break;
                        }
                        if (u->dist > v->dist + 1 && u->ts <= v->ts) {
                            u->parent = ei ^ 1;
                            u->ts = v->ts;
                            u->dist = v->dist + 1;
                        }
                    }
                    if (e0 > 0)
                        break;
                }
                first = first->next;
                v->next = nullptr;
            }
            if (e0 <= 0)
                break;

            // augment
            double bottleneck = edges_[e0].weight;
            for (int k = 1; k >= 0; --k) {
                Vertex* v = &vertices_[edges_[e0 ^ k].dst];
                for (;;) {
                    const int ei = v->parent;
                    if (ei < 0)
                        break;
                    bottleneck = std::min(bottleneck, edges_[ei ^ k].weight);
                    v = &vertices_[edges_[ei].dst];
                }
                bottleneck = std::min(bottleneck, std::abs(v->weight));
            }
            edges_[e0].weight -= bottleneck;
            edges_[e0 ^ 1].weight += bottleneck;
            flow += bottleneck;
            for (int k = 1; k >= 0; --k) {
                Vertex* v = &vertices_[edges_[e0 ^ k].dst];
                for (;;) {
                    const int ei = v->parent;
                    if (ei < 0)
                        break;
                    edges_[ei ^ (k ^ 1)].weight += bottleneck;
                    if ((edges_[ei ^ k].weight -= bottleneck) == 0) {
                        orphans_.push_back(v);
                        v->parent = kOrphan;
                    }
                    v = &vertices_[edges_[ei].dst];
                }
                v->weight += bottleneck * (1 - k * 2);
                if (v->weight == 0) {
                    orphans_.push_back(v);
                    v->parent = kOrphan;
                }
            }

            // adopt
            ++curr_ts;
            while (!orphans_.empty()) {
                Vertex* v = orphans_.back();
                orphans_.pop_back();
                int best_dist = INT_MAX;
                int best_edge = 0;
                const int vt = v->t;
                for (int ei = v->first; ei != 0; ei = edges_[ei].next) {
                    if (edges_[ei ^ (vt ^ 1)].weight == 0)
                        continue;
                    Vertex* u = &vertices_[edges_[ei].dst];
                    if (u->t != vt || u->parent == 0)
                        continue;
                    int d = 0;
                    for (;;) {
                        if (u->ts == curr_ts) {
                            d += u->dist;
                            break;
                        }
                        const int ej = u->parent;
                        ++d;
                        if (ej < 0) {
                            if (ej == kOrphan) {
                                d = INT_MAX - 1;
                            } else {
                                u->ts = curr_ts;
                                u->dist = 1;
                            }
                            break;
                        }
                        u = &vertices_[edges_[ej].dst];
                    }
                    if (++d < INT_MAX) {
                        if (d < best_dist) {
                            best_dist = d;
                            best_edge = ei;
                        }
                        for (u = &vertices_[edges_[ei].dst]; u->ts != curr_ts;
                             u = &vertices_[edges_[u->parent].dst]) {
                            u->ts = curr_ts;
                            u->dist = --d;
                        }
                    }
                }
                if ((v->parent = best_edge) > 0) {
                    v->ts = curr_ts;
                    v->dist = best_dist;
                    continue;
                }
                v->ts = 0;
                for (int ei = v->first; ei != 0; ei = edges_[ei].next) {
                    Vertex* u = &vertices_[edges_[ei].dst];
                    const int ej = u->parent;
                    if (u->t != vt || !ej)
                        continue;
                    if (edges_[ei ^ (vt ^ 1)].weight != 0 && !u->next) {
                        u->next = nil;
                        last = last->next = u;
                    }
                    if (ej > 0 && &vertices_[edges_[ej].dst] == v) {
                        orphans_.push_back(u);
                        u->parent = kOrphan;
                    }
                }
            }
        }
        return flow;
    }

    bool in_source_tree(std::size_t i) const noexcept
    {
        return vertices_[i].parent != 0 && vertices_[i].t == 0;
    }

private:
    static constexpr int kTerminal = -1;
    static constexpr int kOrphan = -2;

    struct Vertex {
        Vertex* next = nullptr; // active list
        int parent = 0;
        int first = 0;
        int ts = 0;
        int dist = 0;
        double weight = 0; // > 0: residual from source, < 0: residual to sink
        std::uint8_t t = 0;
    };
    struct Edge {
        int dst = 0;
        int next = 0;
        double weight = 0;
    };

    void add_edge(int i, int j, double capacity)
    {
        const int id = static_cast<int>(edges_.size());
        edges_.push_back(Edge{j, vertices_[i].first, capacity});
        vertices_[i].first = id;
        edges_.push_back(Edge{i, vertices_[j].first, capacity});
        vertices_[j].first = id + 1;
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<Vertex*> orphans_;
};

void check_network(const FlowNetwork& net)
{
    const std::size_t n = net.node_count();
    if (net.cost1.size() != n)
        throw InvalidInput("flow network terminal arrays differ in size");
    auto bad = [](double c) { return !std::isfinite(c) || c < 0; };
    for (std::size_t i = 0; i < n; ++i)
        if (bad(net.cost0[i]) || bad(net.cost1[i]))
            throw NumericalError("terminal capacity is negative or not finite");
    for (const auto& l : net.links) {
        if (l.a < 0 || l.b < 0 || static_cast<std::size_t>(l.a) >= n || static_cast<std::size_t>(l.b) >= n)
            throw InvalidInput("link endpoint out of range");
        if (bad(l.capacity))
            throw NumericalError("link capacity is negative or not finite");
    }
}

} // namespace

double cut_cost(const FlowNetwork& net, std::span<const std::uint8_t> labeling)
{
    if (labeling.size() != net.node_count())
        throw InvalidInput("labeling size does not match the network");
    double cost = 0;
    for (std::size_t i = 0; i < labeling.size(); ++i)
        cost += labeling[i] ? net.cost1[i] : net.cost0[i];
    for (const auto& l : net.links)
        if (labeling[static_cast<std::size_t>(l.a)] != labeling[static_cast<std::size_t>(l.b)])
            cost += l.capacity;
    return cost;
}

CutResult max_flow_min_cut(const FlowNetwork& net)
{
    check_network(net);
    BkSolver solver(net);
    CutResult out;
    // the shared part of both terminal capacities is cut whatever the label
    double common = 0;
    for (std::size_t i = 0; i < net.node_count(); ++i)
        common += std::min(net.cost0[i], net.cost1[i]);
    out.flow = solver.run() + common;
    out.labeling.resize(net.node_count());
    for (std::size_t i = 0; i < net.node_count(); ++i)
        out.labeling[i] = solver.in_source_tree(i) ? 1 : 0;
    out.cut_value = cut_cost(net, out.labeling);
    return out;
}

void write_dimacs(const FlowNetwork& net, std::ostream& out)
{
    const std::size_t n = net.node_count();
    const std::size_t source = n + 1;
    const std::size_t sink = n + 2;
    std::size_t arcs = 0;
    for (std::size_t i = 0; i < n; ++i)
        arcs += (net.cost0[i] > 0) + (net.cost1[i] > 0);
    for (const auto& l : net.links)
        arcs += l.capacity > 0 ? 2 : 0;

    const auto old_precision = out.precision(17);
    out << "p max " << n + 2 << ' ' << arcs << '\n';
    out << "n " << source << " s\n";
    out << "n " << sink << " t\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (net.cost0[i] > 0)
            out << "a " << source << ' ' << i + 1 << ' ' << net.cost0[i] << '\n';
        if (net.cost1[i] > 0)
            out << "a " << i + 1 << ' ' << sink << ' ' << net.cost1[i] << '\n';
    }
    for (const auto& l : net.links) {
        if (l.capacity <= 0)
            continue;
        out << "a " << l.a + 1 << ' ' << l.b + 1 << ' ' << l.capacity << '\n';
        out << "a " << l.b + 1 << ' ' << l.a + 1 << ' ' << l.capacity << '\n';
    }
    out.precision(old_precision);
}

} // namespace nccut
