#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace nccut {

/// Binary labeling problem as an s-t network. The source terminal stands for
/// label 1 (object), the sink for label 0 (background).
struct FlowNetwork {
    struct Link {
        std::int32_t a = 0;
        std::int32_t b = 0;
        double capacity = 0; ///< same in both directions
    };

    /// Capacity source -> node: paid when the node ends up labeled 0.
    std::vector<double> cost0;
    /// Capacity node -> sink: paid when the node ends up labeled 1.
    std::vector<double> cost1;
    std::vector<Link> links;
    /// Per-node constants removed from the unary terms; energy = cut + offset.
    double offset = 0;

    std::size_t node_count() const noexcept { return cost0.size(); }
    void resize(std::size_t n)
    {
        cost0.assign(n, 0.0);
        cost1.assign(n, 0.0);
    }
};

struct CutResult {
    std::vector<std::uint8_t> labeling;
    double cut_value = 0;
    double flow = 0;
};

/// Cost of a labeling under the network (sum of severed capacities).
double cut_cost(const FlowNetwork& net, std::span<const std::uint8_t> labeling);

/// Minimum s-t cut by the Boykov-Kolmogorov augmenting-path method. Nodes
/// reachable from the source in the final residual graph get label 1.
CutResult max_flow_min_cut(const FlowNetwork& net);

/// DIMACS max-flow text: nodes 1..n are the network nodes, n+1 the source,
/// n+2 the sink.
void write_dimacs(const FlowNetwork& net, std::ostream& out);

} // namespace nccut
