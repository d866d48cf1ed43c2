#include "nnrpca/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nnrpca/rng.hpp"

namespace nnrpca {

std::string to_string(Termination reason) {
    switch (reason) {
        case Termination::MaxIters:
            return "max_iters";
        case Termination::Plateau:
            return "plateau";
        case Termination::StepFloor:
            return "step_floor";
    }
    return "unknown";
}

namespace {

struct EngineParams {
    const Instance* inst = nullptr;
    int n = 0;
    int r = 1;
    double lambda = 0.0;
    double beta = 1.0;
    double alpha = 1.0;
    int split_m = -1;
};

// Objective and chosen subgradient in one pass over the measurement set.
double fused_eval(const EngineParams& p, const double* x, double* g) {
    const auto& pairs = p.inst->omega.pairs();
    const auto& observed = p.inst->observed;
    const auto& weights = p.inst->weights;
    const int r = p.r;
    const int dim = p.n * r;
    std::fill(g, g + dim, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const int i = pairs[k].first, j = pairs[k].second;
        const double* xi = x + static_cast<std::size_t>(i) * r;
        const double* xj = x + static_cast<std::size_t>(j) * r;
        double prod = 0.0;
        for (int c = 0; c < r; ++c) prod += xi[c] * xj[c];
        double residual = prod - observed[k];
        total += weights[k] * std::abs(residual);
        if (residual == 0.0) continue;
        double s = residual > 0.0 ? weights[k] : -weights[k];
        double* gi = g + static_cast<std::size_t>(i) * r;
        double* gj = g + static_cast<std::size_t>(j) * r;
        if (i == j) {
            for (int c = 0; c < r; ++c) gi[c] += s * 2.0 * xi[c];
        } else {
            for (int c = 0; c < r; ++c) {
                gi[c] += s * xj[c];
                gj[c] += s * xi[c];
            }
        }
    }
    if (p.lambda > 0.0) {
        for (int i = 0; i < dim; ++i) {
            double excess = x[i] - p.beta;
            if (excess > 0.0) {
                double cube = excess * excess * excess;
                total += p.lambda * cube * excess;
                g[i] += 4.0 * p.lambda * cube;
            }
        }
    }
    if (p.split_m >= 0) {
        double h = 0.0;
        for (int i = 0; i < dim; ++i) h += (i < p.split_m) ? x[i] * x[i] : -x[i] * x[i];
        total += p.alpha * std::abs(h);
        if (h != 0.0) {
            double s = h > 0.0 ? p.alpha : -p.alpha;
            for (int i = 0; i < dim; ++i) g[i] += (i < p.split_m) ? s * 2.0 * x[i] : -s * 2.0 * x[i];
        }
    }
    return total;
}

SolverResult run_engine(const EngineParams& p, const SolverConfig& cfg, const std::vector<double>* x0) {
    auto t_start = std::chrono::steady_clock::now();
    const int dim = p.n * p.r;
    std::vector<double> x;
    if (x0 != nullptr) {
        if (static_cast<int>(x0->size()) != dim) throw std::invalid_argument("initial point size mismatch");
        if (!strictly_positive(*x0)) throw std::invalid_argument("initial point must be strictly positive");
        x = *x0;
    } else {
        Rng rng(cfg.rng_seed);
        x.resize(static_cast<std::size_t>(dim));
        for (auto& v : x) {
            v = cfg.positivity_floor + (1.0 - cfg.positivity_floor) * rng.uniform_open_closed();
        }
    }
    double mu = cfg.mu0;
    if (!(mu > 0.0)) {
        double norm2 = 0.0;
        for (double v : x) norm2 += v * v;
        mu = 0.1 * std::sqrt(norm2);
        if (!(mu > 0.0)) mu = 0.1;
    }
    const double mu_initial = mu;

    std::vector<double> g(static_cast<std::size_t>(dim));
    std::vector<double> best_x = x;
    double best_f = std::numeric_limits<double>::infinity();
    double window_best = std::numeric_limits<double>::infinity();
    SolverResult result;
    result.reason = Termination::MaxIters;

    int k = 0;
    for (; k < cfg.max_iters; ++k) {
        double f = fused_eval(p, x.data(), g.data());
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        if (cfg.trace_stride > 0 && k % cfg.trace_stride == 0) result.trace.push_back(f);
        if (cfg.plateau_window > 0 && k % cfg.plateau_window == 0) {
            // The windowed test is armed only once the step length has
            // decayed past the oscillatory phase; a lucky early iterate can
            // otherwise stall the best-seen objective for a full window.
            bool armed = mu <= mu_initial * std::sqrt(cfg.stop_tol);
            if (k > 0 && armed &&
                window_best - best_f <= cfg.stop_tol * std::max(window_best, 1e-300)) {
                result.reason = Termination::Plateau;
                break;
            }
            window_best = best_f;
        }
        if (mu < 1e-250) {
            result.reason = Termination::StepFloor;
            break;
        }
        // Normalized subgradient direction: mu_k is the step length, which
        // keeps the geometric schedule effective regardless of scale.
        double g_norm2 = 0.0;
        for (int i = 0; i < dim; ++i) g_norm2 += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
        if (g_norm2 > 0.0) {
            double inv = 1.0 / std::sqrt(g_norm2);
            for (int i = 0; i < dim; ++i) g[static_cast<std::size_t>(i)] *= inv;
        }
        // Coordinates already at the floor are left to the floor; halving
        // only protects coordinates that would newly cross zero, so a pinned
        // coordinate cannot starve the step for everyone else.
        double step = mu;
        for (int h = 0; h < 60; ++h) {
            bool positive = true;
            for (int i = 0; i < dim; ++i) {
                double xi = x[static_cast<std::size_t>(i)];
                if (xi <= cfg.positivity_floor) continue;
                if (!(xi - step * g[static_cast<std::size_t>(i)] > 0.0)) {
                    positive = false;
                    break;
                }
            }
            if (positive) break;
            step *= 0.5;
        }
        for (int i = 0; i < dim; ++i) {
            x[static_cast<std::size_t>(i)] =
                std::max(x[static_cast<std::size_t>(i)] - step * g[static_cast<std::size_t>(i)],
                         cfg.positivity_floor);
        }
        mu *= cfg.decay;
    }
    double f_final = fused_eval(p, x.data(), g.data());
    if (f_final < best_f) {
        best_f = f_final;
        best_x = std::move(x);
    }

    result.iterate = std::move(best_x);
    result.objective = best_f;
    result.iterations = k;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

EngineParams params_from_spec(const ObjectiveSpec& spec) {
    EngineParams p;
    p.inst = spec.instance;
    p.n = spec.instance->rows;
    p.r = 1;
    p.lambda = spec.lambda;
    p.beta = spec.beta;
    p.alpha = spec.alpha;
    p.split_m = spec.split_m;
    return p;
}

}  // namespace

SolverResult solve_symmetric(const Instance& inst, const ObjectiveSpec& spec, const SolverConfig& cfg,
                             const std::vector<double>* u0) {
    if (inst.kind != InstanceKind::Symmetric) {
        throw std::invalid_argument("solve_symmetric needs a symmetric instance");
    }
    if (spec.instance != &inst || spec.has_balance_term()) {
        throw std::invalid_argument("objective spec does not match the instance");
    }
    SolverResult result = run_engine(params_from_spec(spec), cfg, u0);
    result.recovery_error = recovery_error_symmetric(result.iterate, inst.u_truth);
    return result;
}

SolverResult solve_asymmetric(const SymmetrizedInstance& inst, const ObjectiveSpec& spec,
                              const SolverConfig& cfg, const std::vector<double>* w0) {
    if (spec.instance != &inst.base || spec.split_m != inst.m) {
        throw std::invalid_argument("objective spec does not match the symmetrized instance");
    }
    SolverResult result = run_engine(params_from_spec(spec), cfg, w0);
    std::span<const double> w(result.iterate);
    std::span<const double> truth(inst.base.u_truth);
    std::size_t m = static_cast<std::size_t>(inst.m);
    result.recovery_error = recovery_error_asymmetric(w.subspan(0, m), w.subspan(m),
                                                      truth.subspan(0, m), truth.subspan(m));
    return result;
}

SolverResult solve_rank_r(const Instance& inst, const SolverConfig& cfg, const std::vector<double>* U0) {
    if (inst.kind != InstanceKind::RankR && inst.kind != InstanceKind::Symmetric) {
        throw std::invalid_argument("solve_rank_r needs a symmetric or rank_r instance");
    }
    EngineParams p;
    p.inst = &inst;
    p.n = inst.rows;
    p.r = inst.rank;
    SolverResult result = run_engine(p, cfg, U0);
    result.recovery_error = recovery_error_rank_r(result.iterate, inst.u_truth, inst.rows, inst.rank);
    return result;
}

}  // namespace nnrpca
