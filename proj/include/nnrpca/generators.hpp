#pragma once

#include <cstdint>
#include <vector>

#include "nnrpca/model.hpp"

namespace nnrpca {

// Corruption model: each measured entry is independently corrupted with
// probability `density`; the value comes from the chosen rule.
struct NoiseModel {
    enum class Rule { Constant, Uniform, SignedConstant };
    double density = 0.0;
    Rule rule = Rule::Constant;
    double a = 2.0;  // Constant/SignedConstant: magnitude; Uniform: lower bound
    double b = 0.0;  // Uniform: upper bound

    static NoiseModel constant(double density, double value = 2.0);
    static NoiseModel uniform(double density, double lo, double hi);
    static NoiseModel signed_constant(double density, double value = 2.0);
};

// Each upper-triangular pair (diagonal included) enters independently with
// probability p.
MeasurementSet sample_omega_symmetric(int n, double p, std::uint64_t seed);
MeasurementSet sample_omega_asymmetric(int m, int n, double p, std::uint64_t seed);

SparseNoise sample_noise(const MeasurementSet& omega, const NoiseModel& model, std::uint64_t seed);

// I.i.d. uniform entries on [lo, hi); exact zeros are redrawn so the result
// stays strictly positive when lo >= 0.
std::vector<double> gen_truth(int n, double lo, double hi, std::uint64_t seed);

// Noiseless instance with u*_i = 0 for one index and all measurements except
// (i, i): the classic spurious-local-minimum construction.
Instance build_prop1_counterexample(int n, int zero_index);

struct BipartiteCounterexample {
    Instance instance;
    std::vector<double> second_optimum;  // distinct point with objective 0
    double epsilon = 0.0;
};

// For a connected bipartite omega (no self-loops), perturbs the truth along
// the scaling freedom of its vertex partition to exhibit a second global
// optimum with exactly zero objective.
BipartiteCounterexample build_bipartite_counterexample(const std::vector<double>& u_star,
                                                       const MeasurementSet& omega);

}  // namespace nnrpca
