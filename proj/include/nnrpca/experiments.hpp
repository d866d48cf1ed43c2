#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nnrpca/generators.hpp"
#include "nnrpca/model.hpp"
#include "nnrpca/solver.hpp"

namespace nnrpca {

// Shared experiment controls. Trials within a grid cell run in parallel with
// per-trial derived seeds; aggregation is a reduction over trial indices, so
// results are independent of the thread count.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    int trials = 100;
    double tol = 1e-4;
    double p = 1.0;
    double noise_value = 2.0;
    int threads = 0;  // 0 = hardware concurrency
    SolverConfig solver;
};

struct HeatmapCell {
    int n = 0;
    double d = 0.0;
    double recovery_rate = 0.0;
    int trials = 0;
};

std::vector<HeatmapCell> run_heatmap(const std::vector<int>& n_list, const std::vector<double>& d_list,
                                     const ExperimentConfig& cfg);
void write_heatmap_csv(const std::vector<HeatmapCell>& cells, std::ostream& out);

struct RuntimeRow {
    int n = 0;
    int trials = 0;
    double mean_seconds = 0.0;
    double min_seconds = 0.0;
    double max_seconds = 0.0;
};

std::vector<RuntimeRow> run_runtime(const std::vector<int>& n_list, const ExperimentConfig& cfg,
                                    double noise_density = 0.2);
void write_runtime_csv(const std::vector<RuntimeRow>& rows, std::ostream& out);

struct HistogramResult {
    std::vector<double> errors;  // recovery error per trial
    double exact_fraction = 0.0;     // error <= tol
    double spurious_fraction = 0.0;  // error > 0.5
};

HistogramResult run_histogram(const ExperimentConfig& cfg, int n = 3);
void write_histogram_csv(const HistogramResult& result, std::ostream& out);

struct RankSweepCell {
    int r = 0;
    double d = 0.0;
    double success_rate = 0.0;
    int trials = 0;
};

std::vector<RankSweepCell> run_rank_sweep(int n, const std::vector<int>& r_list,
                                          const std::vector<double>& d_list,
                                          const ExperimentConfig& cfg);
void write_rank_sweep_csv(const std::vector<RankSweepCell>& cells, std::ostream& out);

struct VideoResult {
    int frames = 0;
    int width = 0;
    int height = 0;
    double recovery_residual = 0.0;  // mean |X - u v^T| over entries
    std::string background_path;
    std::vector<std::string> foreground_paths;
};

// Reads equal-sized P5 frames from frames_dir (sorted by filename), builds
// the (pixels x frames) instance with the +1 offset, solves the asymmetric
// problem, and writes the background and per-frame foreground images.
VideoResult run_video(const std::string& frames_dir, const std::string& out_dir,
                      const ExperimentConfig& cfg);

struct GraphMcRow {
    std::string check;  // e.g. "connected_nonbipartite", "max_degree", "min_degree"
    std::string shape;  // "symmetric" | "bipartite"
    int n = 0;
    int m = 0;  // 0 for symmetric rows
    double p = 0.0;
    double eta = 0.0;
    int trials = 0;
    int violations = 0;
    double violation_rate = 0.0;
    double bound = 0.0;
    double std_err = 0.0;  // binomial standard error of the bound
    bool applicable = true;
};

std::vector<GraphMcRow> run_graph_montecarlo_symmetric(int n, double p, int trials,
                                                       std::uint64_t seed, double eta);
std::vector<GraphMcRow> run_graph_montecarlo_bipartite(int m, int n, double p, int trials,
                                                       std::uint64_t seed, double eta);
void write_graph_mc_csv(const std::vector<GraphMcRow>& rows, std::ostream& out);

// Random symmetric instance in the sampled-measurement regime; when
// require_connected_nonbipartite is set, omega is re-sampled until the
// sparsity graph qualifies.
Instance make_random_symmetric_instance(int n, double p, double truth_lo, double truth_hi,
                                        const NoiseModel& noise, std::uint64_t seed,
                                        bool require_connected_nonbipartite = false);

}  // namespace nnrpca
