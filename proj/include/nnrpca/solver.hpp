#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnrpca/model.hpp"
#include "nnrpca/objective.hpp"

namespace nnrpca {

struct SolverConfig {
    double mu0 = 0.0;  // <= 0 means 0.1 * ||x0||
    double decay = 0.995;
    int max_iters = 20000;
    double positivity_floor = 1e-12;
    double stop_tol = 1e-10;
    int plateau_window = 100;
    std::uint64_t rng_seed = 0;
    int trace_stride = 100;
};

enum class Termination { MaxIters, Plateau, StepFloor };

std::string to_string(Termination reason);

struct SolverResult {
    std::vector<double> iterate;  // best-objective iterate seen
    double objective = 0.0;       // objective at that iterate
    std::vector<double> trace;    // raw objective, downsampled by trace_stride
    int iterations = 0;
    double recovery_error = 0.0;  // vs the instance truth
    double wall_time_s = 0.0;
    Termination reason = Termination::MaxIters;
};

// Projected subgradient descent with geometrically diminishing steps; each
// step is halved (at most 60 times) until the un-floored update keeps strict
// positivity, then floored at positivity_floor.
SolverResult solve_symmetric(const Instance& inst, const ObjectiveSpec& spec, const SolverConfig& cfg,
                             const std::vector<double>* u0 = nullptr);

// Runs on the symmetrized variable w = [u; v]; recovery error compares the
// recovered u v^T against the true product.
SolverResult solve_asymmetric(const SymmetrizedInstance& inst, const ObjectiveSpec& spec,
                              const SolverConfig& cfg, const std::vector<double>* w0 = nullptr);

// Plain l1 objective on the n x r factor; with r = 1 the iterates coincide
// with solve_symmetric on the noiseless objective for equal seeds.
SolverResult solve_rank_r(const Instance& inst, const SolverConfig& cfg,
                          const std::vector<double>* U0 = nullptr);

}  // namespace nnrpca
