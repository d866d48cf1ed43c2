#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nnrpca/certificates.hpp"
#include "nnrpca/experiments.hpp"
#include "nnrpca/graph.hpp"
#include "nnrpca/model.hpp"
#include "nnrpca/objective.hpp"
#include "nnrpca/solver.hpp"

namespace {

constexpr int kInputError = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

template <typename WriteFn>
void emit(const std::string& path, WriteFn&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
    } else {
        auto out = open_output(path);
        write(out);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-negative rank-1 robust PCA toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    int trials = 100;
    std::string out_path;
    double tol = 1e-4;
    int threads = 0;
    int iters = 20000;
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--trials", trials, "trials per grid cell")->capture_default_str();
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--tol", tol, "recovery threshold")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--iters", iters, "solver iteration cap")->capture_default_str();

    auto make_config = [&]() {
        nnrpca::ExperimentConfig cfg;
        cfg.seed = seed;
        cfg.trials = trials;
        cfg.tol = tol;
        cfg.threads = threads;
        cfg.solver.max_iters = iters;
        return cfg;
    };

    // heatmap
    auto* heatmap = app.add_subcommand("heatmap", "exact-recovery rate over (n, d) grid");
    std::vector<int> n_list{10, 20, 50};
    std::vector<double> d_list{0.0, 0.1, 0.25};
    double sample_p = 1.0;
    double noise_value = 2.0;
    heatmap->add_option("--n", n_list, "dimensions")->delimiter(',')->capture_default_str();
    heatmap->add_option("--d", d_list, "noise densities")->delimiter(',')->capture_default_str();
    heatmap->add_option("--p", sample_p, "observation probability")->capture_default_str();
    heatmap->add_option("--noise-value", noise_value, "corruption value")->capture_default_str();

    // runtime
    auto* runtime = app.add_subcommand("runtime", "solver wall time per dimension");
    std::vector<int> runtime_n{100};
    double runtime_d = 0.2;
    runtime->add_option("--n", runtime_n, "dimensions")->delimiter(',')->capture_default_str();
    runtime->add_option("--d", runtime_d, "noise density")->capture_default_str();

    // histogram
    auto* histogram = app.add_subcommand("histogram", "recovery-error histogram on the spurious instance");
    int hist_n = 3;
    histogram->add_option("--n", hist_n, "instance size")->capture_default_str();

    // rank-sweep
    auto* sweep = app.add_subcommand("rank-sweep", "rank-r success rates over (r, d)");
    int sweep_n = 100;
    std::vector<int> r_list{2};
    std::vector<double> sweep_d{0.25};
    sweep->add_option("--n", sweep_n, "dimension")->capture_default_str();
    sweep->add_option("--r", r_list, "ranks")->delimiter(',')->capture_default_str();
    sweep->add_option("--d", sweep_d, "noise densities")->delimiter(',')->capture_default_str();

    // video
    auto* video = app.add_subcommand("video", "background/foreground separation of PGM frames");
    std::string frames_dir, video_out;
    video->add_option("--frames", frames_dir, "directory of P5 frames")->required();
    video->add_option("--out-dir", video_out, "output directory")->required();

    // graph-mc
    auto* graph_mc = app.add_subcommand("graph-mc", "Monte Carlo validation of the graph lemmas");
    int mc_n = 50;
    int mc_m = 0;
    double mc_p = -1.0;
    double mc_eta = 1.0;
    graph_mc->add_option("--n", mc_n, "vertices (columns for bipartite)")->capture_default_str();
    graph_mc->add_option("--m", mc_m, "rows; makes the graph bipartite")->capture_default_str();
    graph_mc->add_option("--p", mc_p, "edge probability (default: the lemma threshold)");
    graph_mc->add_option("--eta", mc_eta, "confidence exponent")->capture_default_str();

    // certify
    auto* certify = app.add_subcommand("certify", "evaluate recovery certificates on an instance file");
    std::string cert_path;
    double cert_c = 0.0;
    double cert_eta = 1.0;
    certify->add_option("--instance", cert_path, "instance file")->required();
    certify->add_option("--c", cert_c, "assumption constant (default: computed)");
    certify->add_option("--eta", cert_eta, "confidence exponent")->capture_default_str();

    // solve
    auto* solve = app.add_subcommand("solve", "run the subgradient solver on an instance file");
    std::string solve_path;
    bool solve_regularized = false;
    solve->add_option("--instance", solve_path, "instance file")->required();
    solve->add_flag("--regularized", solve_regularized, "use the regularized objective");

    for (auto* sub : {heatmap, runtime, histogram, sweep, video, graph_mc, certify, solve}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*heatmap) {
            auto cfg = make_config();
            cfg.p = sample_p;
            cfg.noise_value = noise_value;
            auto cells = nnrpca::run_heatmap(n_list, d_list, cfg);
            emit(out_path, [&](std::ostream& os) { nnrpca::write_heatmap_csv(cells, os); });
        } else if (*runtime) {
            auto cfg = make_config();
            auto rows = nnrpca::run_runtime(runtime_n, cfg, runtime_d);
            emit(out_path, [&](std::ostream& os) { nnrpca::write_runtime_csv(rows, os); });
        } else if (*histogram) {
            auto cfg = make_config();
            auto result = nnrpca::run_histogram(cfg, hist_n);
            emit(out_path, [&](std::ostream& os) { nnrpca::write_histogram_csv(result, os); });
            std::cerr << "exact fraction: " << result.exact_fraction
                      << ", spurious fraction (error > 0.5): " << result.spurious_fraction << "\n";
        } else if (*sweep) {
            auto cfg = make_config();
            auto cells = nnrpca::run_rank_sweep(sweep_n, r_list, sweep_d, cfg);
            emit(out_path, [&](std::ostream& os) { nnrpca::write_rank_sweep_csv(cells, os); });
        } else if (*video) {
            auto cfg = make_config();
            auto result = nnrpca::run_video(frames_dir, video_out, cfg);
            std::cout << "frames: " << result.frames << " (" << result.width << "x" << result.height
                      << ")\nbackground: " << result.background_path
                      << "\nmean residual: " << result.recovery_residual << "\n";
        } else if (*graph_mc) {
            std::vector<nnrpca::GraphMcRow> rows;
            if (mc_m > 0) {
                double p = mc_p >= 0.0 ? mc_p
                                       : nnrpca::connectivity_threshold_bipartite(mc_m, mc_n, mc_eta);
                rows = nnrpca::run_graph_montecarlo_bipartite(mc_m, mc_n, p, trials, seed, mc_eta);
            } else {
                double p = mc_p >= 0.0 ? mc_p : nnrpca::connectivity_threshold_symmetric(mc_n, mc_eta);
                rows = nnrpca::run_graph_montecarlo_symmetric(mc_n, p, trials, seed, mc_eta);
            }
            emit(out_path, [&](std::ostream& os) { nnrpca::write_graph_mc_csv(rows, os); });
        } else if (*certify) {
            nnrpca::Instance inst = nnrpca::load_instance_file(cert_path);
            double c = cert_c > 0.0 ? cert_c : std::max(nnrpca::assumption1_constant(inst), 0.0);
            if (c <= 0.0) {
                std::cerr << "assumption constant is non-positive; the noise floor assumption fails\n";
                return kInputError;
            }
            nnrpca::CertificateReport report;
            if (inst.kind == nnrpca::InstanceKind::Asymmetric) {
                report = nnrpca::check_det_asymmetric(nnrpca::symmetrize(inst, 1.0), c);
            } else if (inst.kind == nnrpca::InstanceKind::Symmetric) {
                report = nnrpca::check_det_symmetric(inst, c);
            } else {
                std::cerr << "certificates are defined for rank-1 instances\n";
                return kInputError;
            }
            emit(out_path, [&](std::ostream& os) { nnrpca::write_certificate_csv(report, os); });
        } else if (*solve) {
            nnrpca::Instance inst = nnrpca::load_instance_file(solve_path);
            nnrpca::SolverConfig cfg;
            cfg.max_iters = iters;
            cfg.rng_seed = seed;
            nnrpca::SolverResult result;
            if (inst.kind == nnrpca::InstanceKind::Symmetric) {
                nnrpca::ObjectiveSpec spec = solve_regularized
                                                 ? nnrpca::ObjectiveSpec::regularized_sym(inst)
                                                 : nnrpca::ObjectiveSpec::noiseless_sym(inst);
                result = nnrpca::solve_symmetric(inst, spec, cfg);
            } else if (inst.kind == nnrpca::InstanceKind::Asymmetric) {
                nnrpca::SymmetrizedInstance sym = nnrpca::symmetrize(inst, 1.0);
                nnrpca::ObjectiveSpec spec = solve_regularized
                                                 ? nnrpca::ObjectiveSpec::regularized_asym(sym)
                                                 : nnrpca::ObjectiveSpec::noiseless_asym(sym);
                result = nnrpca::solve_asymmetric(sym, spec, cfg);
            } else {
                result = nnrpca::solve_rank_r(inst, cfg);
            }
            emit(out_path, [&](std::ostream& os) {
                os << "objective " << result.objective << "\n"
                   << "iterations " << result.iterations << "\n"
                   << "recovery_error " << result.recovery_error << "\n"
                   << "termination " << nnrpca::to_string(result.reason) << "\n"
                   << "wall_time_s " << result.wall_time_s << "\n";
            });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return 0;
}
