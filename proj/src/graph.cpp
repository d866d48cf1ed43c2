#include "nnrpca/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace nnrpca {

SparsityGraph graph_from_pairs(int vertex_count, const std::vector<IndexPair>& pairs,
                               std::optional<IndexPair> bipartite_shape) {
    SparsityGraph g;
    g.vertex_count = vertex_count;
    g.bipartite_shape = bipartite_shape;
    g.edges.reserve(pairs.size());
    for (auto [i, j] : pairs) {
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= vertex_count) throw std::invalid_argument("edge out of range");
        if (bipartite_shape && !(i < bipartite_shape->first && j >= bipartite_shape->first)) {
            throw std::invalid_argument("edge does not cross the bipartite split");
        }
        g.edges.emplace_back(i, j);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

SparsityGraph graph_from(const MeasurementSet& omega) {
    if (omega.shape() == SetShape::Symmetric) {
        return graph_from_pairs(omega.rows(), omega.pairs());
    }
    int m = omega.rows();
    std::vector<IndexPair> shifted;
    shifted.reserve(omega.size());
    for (auto [i, j] : omega.pairs()) shifted.emplace_back(i, j + m);
    return graph_from_pairs(m + omega.cols(), shifted, IndexPair{m, omega.cols()});
}

GraphReport analyze(const SparsityGraph& g) {
    int n = g.vertex_count;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    std::vector<bool> has_loop(static_cast<std::size_t>(n), false);
    for (auto [i, j] : g.edges) {
        degree[static_cast<std::size_t>(i)] += 1;
        if (i == j) {
            has_loop[static_cast<std::size_t>(i)] = true;
        } else {
            degree[static_cast<std::size_t>(j)] += 1;
            adj[static_cast<std::size_t>(i)].push_back(j);
            adj[static_cast<std::size_t>(j)].push_back(i);
        }
    }

    GraphReport report;
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (color[static_cast<std::size_t>(start)] != -1) continue;
        std::vector<int> members;
        bool bipartite = true;
        color[static_cast<std::size_t>(start)] = 0;
        stack.assign(1, start);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            members.push_back(v);
            if (has_loop[static_cast<std::size_t>(v)]) bipartite = false;
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (color[static_cast<std::size_t>(w)] == -1) {
                    color[static_cast<std::size_t>(w)] = color[static_cast<std::size_t>(v)] ^ 1;
                    stack.push_back(w);
                } else if (color[static_cast<std::size_t>(w)] == color[static_cast<std::size_t>(v)]) {
                    bipartite = false;  // odd cycle
                }
            }
        }
        std::sort(members.begin(), members.end());
        report.components.push_back(std::move(members));
        report.component_bipartite.push_back(bipartite);
    }

    report.connected = (report.components.size() == 1);
    if (n > 0) {
        report.max_degree = *std::max_element(degree.begin(), degree.end());
        report.min_degree = *std::min_element(degree.begin(), degree.end());
    }
    return report;
}

std::pair<GraphReport, GraphReport> good_bad_subgraphs(const Instance& inst) {
    const auto& pairs = inst.omega.pairs();
    std::vector<IndexPair> good, bad;
    good.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        (inst.corrupted[k] ? bad : good).push_back(pairs[k]);
    }
    int vertices;
    std::optional<IndexPair> shape;
    if (inst.omega.shape() == SetShape::Symmetric) {
        vertices = inst.rows;
    } else {
        vertices = inst.rows + inst.cols;
        shape = IndexPair{inst.rows, inst.cols};
        auto shift = [m = inst.rows](std::vector<IndexPair>& v) {
            for (auto& [i, j] : v) j += m;
        };
        shift(good);
        shift(bad);
    }
    return {analyze(graph_from_pairs(vertices, good, shape)),
            analyze(graph_from_pairs(vertices, bad, shape))};
}

}  // namespace nnrpca
