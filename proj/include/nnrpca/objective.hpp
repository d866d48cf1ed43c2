#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nnrpca/model.hpp"

namespace nnrpca {

enum class Variant { NoiselessSym, NoiselessAsym, RegularizedSym, RegularizedAsym };

// Binds an instance to one of the four objective forms. Asymmetric variants
// evaluate on the symmetrized variable w of length m+n and carry the balance
// weight alpha; regularized variants add lambda * sum max(u_i - beta, 0)^4.
struct ObjectiveSpec {
    const Instance* instance = nullptr;
    Variant variant = Variant::NoiselessSym;
    double lambda = 0.0;
    double beta = 1.0;
    double alpha = 1.0;
    int split_m = -1;  // asymmetric variants: first split_m entries are the u side

    int dimension() const { return instance->rows; }
    bool has_balance_term() const { return split_m >= 0; }
    bool has_regularizer() const { return lambda > 0.0; }

    static ObjectiveSpec noiseless_sym(const Instance& inst);
    static ObjectiveSpec regularized_sym(const Instance& inst);  // lambda = n/2, beta = 1
    static ObjectiveSpec noiseless_asym(const SymmetrizedInstance& inst);
    static ObjectiveSpec regularized_asym(const SymmetrizedInstance& inst);  // lambda = (m+n)/2
};

double eval_regularizer(std::span<const double> u, double lambda, double beta);
double eval_objective(const ObjectiveSpec& spec, std::span<const double> u);

// Exact one-sided derivative lim_{t->0+} (f(u + t d) - f(u)) / t. The
// direction must be feasible: d_i >= 0 wherever u_i = 0.
double directional_derivative(const ObjectiveSpec& spec, std::span<const double> u,
                              std::span<const double> d);

// Subgradient selection with sign(0) := 0 at every kink; coincides with the
// gradient wherever the objective is differentiable.
std::vector<double> subgradient(const ObjectiveSpec& spec, std::span<const double> u);

struct DirectionReport {
    std::vector<double> direction;
    double forward_derivative = 0.0;   // f'(u, d)
    double backward_derivative = 0.0;  // f'(u, -d)
    std::vector<int> t1, t2, n_set;    // extremal-ratio partition
    double gamma = 0.0;                // asymmetric balance correction
};

// Proof-constructive descent direction at a strictly positive u with
// u u^T != truth product; requires the instance truth (oracle use).
DirectionReport descent_direction(const ObjectiveSpec& spec, std::span<const double> u);

enum class StationarityVerdict { CertifiedDescent, NoDescentFound };

struct StationarityResult {
    StationarityVerdict verdict = StationarityVerdict::NoDescentFound;
    std::vector<double> witness;    // populated when descent was certified
    double best_derivative = 0.0;   // most negative f'(u, d) observed
};

// Falsifier for D-min-stationarity: probes coordinate directions, the
// constructive direction when available, and `budget` random feasible unit
// directions. NoDescentFound is not a proof of stationarity.
StationarityResult d_stationarity_test(const ObjectiveSpec& spec, std::span<const double> u,
                                       int budget, std::uint64_t seed = 0);

inline constexpr double kRatioTieTolerance = 1e-9;
inline constexpr double kStationarityTolerance = 1e-8;

}  // namespace nnrpca
