#include "nnrpca/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nnrpca/graph.hpp"
#include "nnrpca/rng.hpp"

namespace nnrpca {

NoiseModel NoiseModel::constant(double density, double value) {
    return NoiseModel{density, Rule::Constant, value, 0.0};
}

NoiseModel NoiseModel::uniform(double density, double lo, double hi) {
    return NoiseModel{density, Rule::Uniform, lo, hi};
}

NoiseModel NoiseModel::signed_constant(double density, double value) {
    return NoiseModel{density, Rule::SignedConstant, value, 0.0};
}

MeasurementSet sample_omega_symmetric(int n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
    Rng rng(seed);
    std::vector<IndexPair> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            if (rng.bernoulli(p)) pairs.emplace_back(i, j);
        }
    }
    return MeasurementSet::symmetric(n, std::move(pairs));
}

MeasurementSet sample_omega_asymmetric(int m, int n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
    Rng rng(seed);
    std::vector<IndexPair> pairs;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            if (rng.bernoulli(p)) pairs.emplace_back(i, j);
        }
    }
    return MeasurementSet::asymmetric(m, n, std::move(pairs));
}

SparseNoise sample_noise(const MeasurementSet& omega, const NoiseModel& model, std::uint64_t seed) {
    if (model.density < 0.0 || model.density > 1.0) {
        throw std::invalid_argument("noise density must lie in [0, 1]");
    }
    Rng rng(seed);
    std::vector<std::pair<IndexPair, double>> entries;
    for (const auto& pair : omega.pairs()) {
        if (!rng.bernoulli(model.density)) continue;
        double value = 0.0;
        switch (model.rule) {
            case NoiseModel::Rule::Constant:
                value = model.a;
                break;
            case NoiseModel::Rule::Uniform:
                value = rng.uniform(model.a, model.b);
                break;
            case NoiseModel::Rule::SignedConstant:
                value = rng.bernoulli(0.5) ? model.a : -model.a;
                break;
        }
        if (value != 0.0) entries.emplace_back(pair, value);
    }
    return SparseNoise::from_entries(omega.shape(), std::move(entries));
}

std::vector<double> gen_truth(int n, double lo, double hi, std::uint64_t seed) {
    if (!(lo < hi)) throw std::invalid_argument("need lo < hi");
    if (lo < 0.0) throw std::invalid_argument("truth entries must be non-negative");
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) {
        do {
            v = rng.uniform(lo, hi);
        } while (v == 0.0);
    }
    return x;
}

Instance build_prop1_counterexample(int n, int zero_index) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (zero_index < 0 || zero_index >= n) throw std::invalid_argument("zero index out of range");
    std::vector<double> truth(static_cast<std::size_t>(n), 1.0);
    truth[static_cast<std::size_t>(zero_index)] = 0.0;
    std::vector<IndexPair> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            if (i == zero_index && j == zero_index) continue;
            pairs.emplace_back(i, j);
        }
    }
    return build_symmetric_instance(truth, MeasurementSet::symmetric(n, std::move(pairs)),
                                    SparseNoise{});
}

BipartiteCounterexample build_bipartite_counterexample(const std::vector<double>& u_star,
                                                       const MeasurementSet& omega) {
    if (omega.shape() != SetShape::Symmetric) {
        throw std::invalid_argument("expected a symmetric measurement set");
    }
    if (!strictly_positive(u_star)) throw std::invalid_argument("u_star must be strictly positive");
    GraphReport report = analyze(graph_from(omega));
    if (!report.connected || report.components.size() != 1 || !report.component_bipartite[0]) {
        throw std::invalid_argument("the supplied omega is not connected bipartite");
    }

    // Recover the two color classes; put the last vertex in V1.
    int n = omega.rows();
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [i, j] : omega.pairs()) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
    }
    std::vector<int> stack{n - 1};
    color[static_cast<std::size_t>(n - 1)] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (color[static_cast<std::size_t>(w)] == -1) {
                color[static_cast<std::size_t>(w)] = color[static_cast<std::size_t>(v)] ^ 1;
                stack.push_back(w);
            }
        }
    }

    double u_min = *std::min_element(u_star.begin(), u_star.end());
    double u_anchor = u_star[static_cast<std::size_t>(n - 1)];
    double eps = 0.01 * u_min;
    std::vector<double> perturbed(u_star);
    for (int i = 0; i < n; ++i) {
        double ui = u_star[static_cast<std::size_t>(i)];
        perturbed[static_cast<std::size_t>(i)] =
            color[static_cast<std::size_t>(i)] == 0 ? ui + (ui / u_anchor) * eps
                                                    : ui - (ui / (u_anchor + eps)) * eps;
    }

    BipartiteCounterexample result;
    result.instance = build_symmetric_instance(u_star, omega, SparseNoise{});
    result.second_optimum = std::move(perturbed);
    result.epsilon = eps;
    return result;
}

}  // namespace nnrpca
