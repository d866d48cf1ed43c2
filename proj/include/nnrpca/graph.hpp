#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nnrpca/model.hpp"

namespace nnrpca {

// Graph induced by an index set: one edge per observed entry, self-loops for
// diagonal measurements. A bipartite shape (m, n) marks graphs coming from
// asymmetric sets, whose edges all cross the split.
struct SparsityGraph {
    int vertex_count = 0;
    std::vector<IndexPair> edges;  // i <= j, unique
    std::optional<IndexPair> bipartite_shape;
};

struct GraphReport {
    std::vector<std::vector<int>> components;  // sorted vertex lists
    std::vector<bool> component_bipartite;     // aligned with components
    int max_degree = 0;
    int min_degree = 0;
    bool connected = false;

    bool has_bipartite_component() const {
        for (bool b : component_bipartite)
            if (b) return true;
        return false;
    }
};

SparsityGraph graph_from(const MeasurementSet& omega);
SparsityGraph graph_from_pairs(int vertex_count, const std::vector<IndexPair>& pairs,
                               std::optional<IndexPair> bipartite_shape = std::nullopt);

GraphReport analyze(const SparsityGraph& g);

// Sparsity graphs of the good set G and bad set B, analyzed over the full
// vertex set (a vertex with no good edges contributes degree 0).
std::pair<GraphReport, GraphReport> good_bad_subgraphs(const Instance& inst);

}  // namespace nnrpca
