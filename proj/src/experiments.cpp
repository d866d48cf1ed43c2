#include "nnrpca/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nnrpca/certificates.hpp"
#include "nnrpca/graph.hpp"
#include "nnrpca/parallel.hpp"
#include "nnrpca/pgm.hpp"
#include "nnrpca/rng.hpp"

namespace nnrpca {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Stream ids for deriving independent seeds from one trial seed.
enum Stream : std::uint64_t { kTruth = 0, kOmega = 1, kNoise = 2, kInit = 3, kResample = 4 };

}  // namespace

Instance make_random_symmetric_instance(int n, double p, double truth_lo, double truth_hi,
                                        const NoiseModel& noise, std::uint64_t seed,
                                        bool require_connected_nonbipartite) {
    auto truth = gen_truth(n, truth_lo, truth_hi, derive_seed(seed, kTruth));
    MeasurementSet omega = sample_omega_symmetric(n, p, derive_seed(seed, kOmega));
    if (require_connected_nonbipartite) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            GraphReport report = analyze(graph_from(omega));
            if (report.connected && !report.has_bipartite_component()) break;
            if (attempt > 10000) throw std::runtime_error("could not sample a qualifying omega");
            omega = sample_omega_symmetric(
                n, p, derive_seed(derive_seed(seed, kResample), attempt));
        }
    }
    SparseNoise s = sample_noise(omega, noise, derive_seed(seed, kNoise));
    return build_symmetric_instance(truth, std::move(omega), std::move(s));
}

std::vector<HeatmapCell> run_heatmap(const std::vector<int>& n_list, const std::vector<double>& d_list,
                                     const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<HeatmapCell> cells;
    for (int n : n_list) {
        for (double d : d_list) {
            std::vector<char> recovered(static_cast<std::size_t>(cfg.trials), 0);
            std::uint64_t cell_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n) * 10007 +
                                                                static_cast<std::uint64_t>(d * 1e6));
            parallel_for(cfg.trials, cfg.threads, [&](int t) {
                std::uint64_t trial_seed = derive_seed(cell_seed, static_cast<std::uint64_t>(t));
                Instance inst = make_random_symmetric_instance(
                    n, cfg.p, 0.0, 2.0, NoiseModel::constant(d, cfg.noise_value), trial_seed);
                ObjectiveSpec spec = ObjectiveSpec::noiseless_sym(inst);
                SolverConfig solver = cfg.solver;
                solver.rng_seed = derive_seed(trial_seed, kInit);
                SolverResult result = solve_symmetric(inst, spec, solver);
                recovered[static_cast<std::size_t>(t)] = result.recovery_error <= cfg.tol;
            });
            int hits = 0;
            for (char r : recovered) hits += r;
            cells.push_back({n, d, static_cast<double>(hits) / cfg.trials, cfg.trials});
        }
    }
    return cells;
}

void write_heatmap_csv(const std::vector<HeatmapCell>& cells, std::ostream& out) {
    out << "n,d,recovery_rate,trials\n";
    for (const auto& cell : cells) {
        out << cell.n << "," << fmt(cell.d) << "," << fmt(cell.recovery_rate) << "," << cell.trials
            << "\n";
    }
}

std::vector<RuntimeRow> run_runtime(const std::vector<int>& n_list, const ExperimentConfig& cfg,
                                    double noise_density) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<RuntimeRow> rows;
    for (int n : n_list) {
        std::vector<double> times(static_cast<std::size_t>(cfg.trials), 0.0);
        std::uint64_t cell_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
        parallel_for(cfg.trials, cfg.threads, [&](int t) {
            std::uint64_t trial_seed = derive_seed(cell_seed, static_cast<std::uint64_t>(t));
            Instance inst = make_random_symmetric_instance(
                n, cfg.p, 0.0, 2.0, NoiseModel::constant(noise_density, cfg.noise_value), trial_seed);
            ObjectiveSpec spec = ObjectiveSpec::noiseless_sym(inst);
            SolverConfig solver = cfg.solver;
            solver.rng_seed = derive_seed(trial_seed, kInit);
            SolverResult result = solve_symmetric(inst, spec, solver);
            times[static_cast<std::size_t>(t)] = result.wall_time_s;
        });
        RuntimeRow row;
        row.n = n;
        row.trials = cfg.trials;
        row.min_seconds = *std::min_element(times.begin(), times.end());
        row.max_seconds = *std::max_element(times.begin(), times.end());
        for (double t : times) row.mean_seconds += t;
        row.mean_seconds /= cfg.trials;
        rows.push_back(row);
    }
    return rows;
}

void write_runtime_csv(const std::vector<RuntimeRow>& rows, std::ostream& out) {
    out << "n,trials,mean_seconds,min_seconds,max_seconds\n";
    for (const auto& row : rows) {
        out << row.n << "," << row.trials << "," << fmt(row.mean_seconds) << ","
            << fmt(row.min_seconds) << "," << fmt(row.max_seconds) << "\n";
    }
}

HistogramResult run_histogram(const ExperimentConfig& cfg, int n) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    Instance inst = build_prop1_counterexample(n, n - 1);
    ObjectiveSpec spec = ObjectiveSpec::noiseless_sym(inst);
    HistogramResult result;
    result.errors.assign(static_cast<std::size_t>(cfg.trials), 0.0);
    parallel_for(cfg.trials, cfg.threads, [&](int t) {
        SolverConfig solver = cfg.solver;
        solver.rng_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
        SolverResult run = solve_symmetric(inst, spec, solver);
        result.errors[static_cast<std::size_t>(t)] = run.recovery_error;
    });
    int exact = 0, spurious = 0;
    for (double e : result.errors) {
        if (e <= cfg.tol) ++exact;
        if (e > 0.5) ++spurious;
    }
    result.exact_fraction = static_cast<double>(exact) / cfg.trials;
    result.spurious_fraction = static_cast<double>(spurious) / cfg.trials;
    return result;
}

void write_histogram_csv(const HistogramResult& result, std::ostream& out) {
    out << "trial,recovery_error\n";
    for (std::size_t t = 0; t < result.errors.size(); ++t) {
        out << t << "," << fmt(result.errors[t]) << "\n";
    }
}

std::vector<RankSweepCell> run_rank_sweep(int n, const std::vector<int>& r_list,
                                          const std::vector<double>& d_list,
                                          const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<RankSweepCell> cells;
    for (int r : r_list) {
        for (double d : d_list) {
            std::vector<char> recovered(static_cast<std::size_t>(cfg.trials), 0);
            std::uint64_t cell_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r) * 65537 +
                                                                static_cast<std::uint64_t>(d * 1e6));
            parallel_for(cfg.trials, cfg.threads, [&](int t) {
                std::uint64_t trial_seed = derive_seed(cell_seed, static_cast<std::uint64_t>(t));
                auto truth = gen_truth(n * r, 0.5, 2.5, derive_seed(trial_seed, kTruth));
                MeasurementSet omega =
                    sample_omega_symmetric(n, cfg.p, derive_seed(trial_seed, kOmega));
                SparseNoise noise = sample_noise(omega, NoiseModel::constant(d, cfg.noise_value),
                                                 derive_seed(trial_seed, kNoise));
                Instance inst = build_rank_r_instance(truth, n, r, std::move(omega), std::move(noise));
                SolverConfig solver = cfg.solver;
                solver.rng_seed = derive_seed(trial_seed, kInit);
                SolverResult result = solve_rank_r(inst, solver);
                recovered[static_cast<std::size_t>(t)] = result.recovery_error <= cfg.tol;
            });
            int hits = 0;
            for (char x : recovered) hits += x;
            cells.push_back({r, d, static_cast<double>(hits) / cfg.trials, cfg.trials});
        }
    }
    return cells;
}

void write_rank_sweep_csv(const std::vector<RankSweepCell>& cells, std::ostream& out) {
    out << "r,d,success_rate,trials\n";
    for (const auto& cell : cells) {
        out << cell.r << "," << fmt(cell.d) << "," << fmt(cell.success_rate) << "," << cell.trials
            << "\n";
    }
}

VideoResult run_video(const std::string& frames_dir, const std::string& out_dir,
                      const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    std::vector<fs::path> frame_paths;
    if (!fs::is_directory(frames_dir)) throw std::runtime_error(frames_dir + " is not a directory");
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        if (entry.is_regular_file()) frame_paths.push_back(entry.path());
    }
    if (frame_paths.empty()) throw std::runtime_error("no frames found in " + frames_dir);
    std::sort(frame_paths.begin(), frame_paths.end());

    std::vector<PgmImage> frames;
    frames.reserve(frame_paths.size());
    for (const auto& path : frame_paths) {
        frames.push_back(read_pgm_file(path.string()));
        if (frames.back().width != frames.front().width ||
            frames.back().height != frames.front().height) {
            throw std::runtime_error("inconsistent frame sizes in " + frames_dir);
        }
    }

    const int pixels = frames.front().width * frames.front().height;
    const int count = static_cast<int>(frames.size());
    // Column f holds frame f; entries are shifted by +1 so the truth stays
    // strictly positive.
    std::vector<IndexPair> pairs;
    pairs.reserve(static_cast<std::size_t>(pixels) * static_cast<std::size_t>(count));
    for (int i = 0; i < pixels; ++i) {
        for (int f = 0; f < count; ++f) pairs.emplace_back(i, f);
    }
    // The observed matrix is X itself: model it as a noiseless instance with
    // u* = X's columnwise structure unknown, so instead store X through a
    // rank-1 truth of ones plus per-entry noise X_ij + 1 - 1.
    std::vector<double> ones_u(static_cast<std::size_t>(pixels), 1.0);
    std::vector<double> ones_v(static_cast<std::size_t>(count), 1.0);
    std::vector<std::pair<IndexPair, double>> shift;
    shift.reserve(pairs.size());
    for (int i = 0; i < pixels; ++i) {
        for (int f = 0; f < count; ++f) {
            double x = static_cast<double>(frames[static_cast<std::size_t>(f)]
                                               .pixels[static_cast<std::size_t>(i)]) +
                       1.0;
            if (x != 1.0) shift.emplace_back(IndexPair{i, f}, x - 1.0);
        }
    }
    Instance inst = build_asymmetric_instance(
        ones_u, ones_v, MeasurementSet::asymmetric(pixels, count, std::move(pairs)),
        SparseNoise::from_entries(SetShape::Asymmetric, std::move(shift)));
    SymmetrizedInstance sym = symmetrize(inst, 1.0);
    ObjectiveSpec spec = ObjectiveSpec::noiseless_asym(sym);
    SolverConfig solver = cfg.solver;
    solver.rng_seed = cfg.seed;
    SolverResult run = solve_asymmetric(sym, spec, solver);

    std::span<const double> w(run.iterate);
    std::span<const double> u = w.subspan(0, static_cast<std::size_t>(pixels));
    std::span<const double> v = w.subspan(static_cast<std::size_t>(pixels));

    fs::create_directories(out_dir);
    VideoResult result;
    result.frames = count;
    result.width = frames.front().width;
    result.height = frames.front().height;

    double u_max = *std::max_element(u.begin(), u.end());
    PgmImage background;
    background.width = result.width;
    background.height = result.height;
    background.pixels.resize(static_cast<std::size_t>(pixels));
    for (int i = 0; i < pixels; ++i) {
        double scaled = u_max > 0.0 ? u[static_cast<std::size_t>(i)] / u_max * 255.0 : 0.0;
        background.pixels[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(std::clamp(std::lround(scaled), 0L, 255L));
    }
    result.background_path = (fs::path(out_dir) / "background.pgm").string();
    write_pgm_file(background, result.background_path);

    double residual_sum = 0.0;
    for (int f = 0; f < count; ++f) {
        PgmImage fg;
        fg.width = result.width;
        fg.height = result.height;
        fg.pixels.resize(static_cast<std::size_t>(pixels));
        for (int i = 0; i < pixels; ++i) {
            double x = static_cast<double>(frames[static_cast<std::size_t>(f)]
                                               .pixels[static_cast<std::size_t>(i)]) +
                       1.0;
            double diff = std::abs(x - u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(f)]);
            residual_sum += diff;
            fg.pixels[static_cast<std::size_t>(i)] =
                static_cast<std::uint8_t>(std::clamp(std::lround(diff), 0L, 255L));
        }
        char name[32];
        std::snprintf(name, sizeof(name), "foreground_%04d.pgm", f);
        std::string path = (fs::path(out_dir) / name).string();
        write_pgm_file(fg, path);
        result.foreground_paths.push_back(path);
    }
    result.recovery_residual = residual_sum / (static_cast<double>(pixels) * count);
    return result;
}

namespace {

double binomial_std_err(double q, int trials) {
    double clamped = std::clamp(q, 0.0, 1.0);
    return std::sqrt(clamped * (1.0 - clamped) / trials);
}

}  // namespace

std::vector<GraphMcRow> run_graph_montecarlo_symmetric(int n, double p, int trials,
                                                       std::uint64_t seed, double eta) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<char> disconnected_or_bipartite(static_cast<std::size_t>(trials), 0);
    std::vector<char> delta_low(static_cast<std::size_t>(trials), 0);
    std::vector<char> delta_high(static_cast<std::size_t>(trials), 0);
    DegreeBounds bounds;  // inapplicable placeholder when p = 0
    if (p > 0.0) bounds = degree_concentration_symmetric(n, p, eta);
    parallel_for(trials, 0, [&](int t) {
        MeasurementSet omega =
            sample_omega_symmetric(n, p, derive_seed(seed, static_cast<std::uint64_t>(t)));
        GraphReport report = analyze(graph_from(omega));
        bool ok = report.connected && !report.has_bipartite_component();
        disconnected_or_bipartite[static_cast<std::size_t>(t)] = !ok;
        delta_low[static_cast<std::size_t>(t)] = report.min_degree <= bounds.min_degree_bound;
        delta_high[static_cast<std::size_t>(t)] = report.max_degree >= bounds.max_degree_bound;
    });

    auto count = [&](const std::vector<char>& flags) {
        int c = 0;
        for (char f : flags) c += f;
        return c;
    };
    std::vector<GraphMcRow> rows;
    double conn_threshold = connectivity_threshold_symmetric(n, std::max(eta, 1.0));
    double conn_bound = 1.5 * std::pow(static_cast<double>(n), -eta);
    int conn_viol = count(disconnected_or_bipartite);
    rows.push_back({"connected_nonbipartite", "symmetric", n, 0, p, eta, trials, conn_viol,
                    static_cast<double>(conn_viol) / trials, conn_bound,
                    binomial_std_err(conn_bound, trials), p >= conn_threshold && eta >= 1.0});
    int high_viol = count(delta_high);
    rows.push_back({"max_degree", "symmetric", n, 0, p, eta, trials, high_viol,
                    static_cast<double>(high_viol) / trials, bounds.tail_probability,
                    binomial_std_err(bounds.tail_probability, trials), p > 0.0});
    int low_viol = count(delta_low);
    rows.push_back({"min_degree", "symmetric", n, 0, p, eta, trials, low_viol,
                    static_cast<double>(low_viol) / trials, bounds.tail_probability,
                    binomial_std_err(bounds.tail_probability, trials),
                    p > 0.0 && bounds.min_degree_applicable});
    return rows;
}

std::vector<GraphMcRow> run_graph_montecarlo_bipartite(int m, int n, double p, int trials,
                                                       std::uint64_t seed, double eta) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<char> disconnected(static_cast<std::size_t>(trials), 0);
    std::vector<char> delta_low(static_cast<std::size_t>(trials), 0);
    std::vector<char> delta_high(static_cast<std::size_t>(trials), 0);
    DegreeBounds bounds;  // inapplicable placeholder when p = 0
    if (p > 0.0) bounds = degree_concentration_bipartite(m, n, p, eta);
    parallel_for(trials, 0, [&](int t) {
        MeasurementSet omega =
            sample_omega_asymmetric(m, n, p, derive_seed(seed, static_cast<std::uint64_t>(t)));
        GraphReport report = analyze(graph_from(omega));
        disconnected[static_cast<std::size_t>(t)] = !report.connected;
        delta_low[static_cast<std::size_t>(t)] = report.min_degree <= bounds.min_degree_bound;
        delta_high[static_cast<std::size_t>(t)] = report.max_degree >= bounds.max_degree_bound;
    });

    auto count = [&](const std::vector<char>& flags) {
        int c = 0;
        for (char f : flags) c += f;
        return c;
    };
    std::vector<GraphMcRow> rows;
    double conn_threshold = connectivity_threshold_bipartite(m, n, std::max(eta, 1.0));
    double mn_eta = std::pow(static_cast<double>(m) * n, -eta);
    double conn_bound = 2.0 * mn_eta + 4.0 * mn_eta * mn_eta;
    int conn_viol = count(disconnected);
    rows.push_back({"connected", "bipartite", n, m, p, eta, trials, conn_viol,
                    static_cast<double>(conn_viol) / trials, conn_bound,
                    binomial_std_err(conn_bound, trials), p >= conn_threshold && eta >= 1.0});
    int high_viol = count(delta_high);
    rows.push_back({"max_degree", "bipartite", n, m, p, eta, trials, high_viol,
                    static_cast<double>(high_viol) / trials, bounds.tail_probability,
                    binomial_std_err(bounds.tail_probability, trials), p > 0.0});
    int low_viol = count(delta_low);
    rows.push_back({"min_degree", "bipartite", n, m, p, eta, trials, low_viol,
                    static_cast<double>(low_viol) / trials, bounds.tail_probability,
                    binomial_std_err(bounds.tail_probability, trials),
                    p > 0.0 && bounds.min_degree_applicable});
    return rows;
}

void write_graph_mc_csv(const std::vector<GraphMcRow>& rows, std::ostream& out) {
    out << "check,shape,n,m,p,eta,trials,violations,violation_rate,bound,std_err,applicable\n";
    for (const auto& row : rows) {
        out << row.check << "," << row.shape << "," << row.n << "," << row.m << "," << fmt(row.p)
            << "," << fmt(row.eta) << "," << row.trials << "," << row.violations << ","
            << fmt(row.violation_rate) << "," << fmt(row.bound) << "," << fmt(row.std_err) << ","
            << (row.applicable ? 1 : 0) << "\n";
    }
}

}  // namespace nnrpca
