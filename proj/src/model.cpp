#include "nnrpca/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nnrpca {

namespace {

void sort_and_check_unique(std::vector<IndexPair>& pairs, const char* what) {
    std::sort(pairs.begin(), pairs.end());
    auto dup = std::adjacent_find(pairs.begin(), pairs.end());
    if (dup != pairs.end()) {
        throw std::invalid_argument(std::string("duplicate pair in ") + what);
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

MeasurementSet MeasurementSet::symmetric(int n, std::vector<IndexPair> pairs) {
    if (n < 1) throw std::invalid_argument("symmetric measurement set needs n >= 1");
    for (auto& [i, j] : pairs) {
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= n) throw std::invalid_argument("measurement pair out of range");
    }
    sort_and_check_unique(pairs, "symmetric measurement set");
    MeasurementSet set;
    set.shape_ = SetShape::Symmetric;
    set.rows_ = n;
    set.cols_ = n;
    set.pairs_ = std::move(pairs);
    return set;
}

MeasurementSet MeasurementSet::asymmetric(int m, int n, std::vector<IndexPair> pairs) {
    if (m < 1 || n < 1) throw std::invalid_argument("asymmetric measurement set needs m, n >= 1");
    for (const auto& [i, j] : pairs) {
        if (i < 0 || i >= m || j < 0 || j >= n) {
            throw std::invalid_argument("measurement pair out of range");
        }
    }
    sort_and_check_unique(pairs, "asymmetric measurement set");
    MeasurementSet set;
    set.shape_ = SetShape::Asymmetric;
    set.rows_ = m;
    set.cols_ = n;
    set.pairs_ = std::move(pairs);
    return set;
}

bool MeasurementSet::contains(IndexPair p) const {
    if (shape_ == SetShape::Symmetric && p.first > p.second) std::swap(p.first, p.second);
    return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

SparseNoise SparseNoise::from_entries(SetShape shape, std::vector<std::pair<IndexPair, double>> entries) {
    std::vector<std::pair<IndexPair, double>> kept;
    kept.reserve(entries.size());
    for (auto& [pair, value] : entries) {
        if (value == 0.0) continue;  // zero corruptions are not stored
        if (shape == SetShape::Symmetric && pair.first > pair.second) std::swap(pair.first, pair.second);
        kept.emplace_back(pair, value);
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < kept.size(); ++k) {
        if (kept[k].first == kept[k - 1].first) {
            throw std::invalid_argument("duplicate pair in sparse noise");
        }
    }
    SparseNoise noise;
    noise.entries_ = std::move(kept);
    return noise;
}

double SparseNoise::value_at(IndexPair p) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const auto& e, const IndexPair& q) { return e.first < q; });
    if (it != entries_.end() && it->first == p) return it->second;
    return 0.0;
}

std::size_t Instance::bad_count() const {
    std::size_t c = 0;
    for (char f : corrupted) c += (f != 0);
    return c;
}

double Instance::truth_product(int i, int j) const {
    switch (kind) {
        case InstanceKind::Symmetric:
            return u_truth[static_cast<std::size_t>(i)] * u_truth[static_cast<std::size_t>(j)];
        case InstanceKind::Asymmetric:
            return u_truth[static_cast<std::size_t>(i)] * v_truth[static_cast<std::size_t>(j)];
        case InstanceKind::RankR: {
            const double* a = u_truth.data() + static_cast<std::size_t>(i) * rank;
            const double* b = u_truth.data() + static_cast<std::size_t>(j) * rank;
            double s = 0.0;
            for (int k = 0; k < rank; ++k) s += a[k] * b[k];
            return s;
        }
    }
    return 0.0;
}

namespace {

void check_non_negative(const std::vector<double>& x, const char* what) {
    for (double v : x) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + " must be non-negative and finite");
        }
    }
}

void check_noise_support(const MeasurementSet& omega, const SparseNoise& noise) {
    for (const auto& [pair, value] : noise.entries()) {
        (void)value;
        if (!omega.contains(pair)) {
            throw std::invalid_argument("noise support outside the measurement set");
        }
    }
}

void fill_observed(Instance& inst) {
    const auto& pairs = inst.omega.pairs();
    inst.observed.resize(pairs.size());
    inst.corrupted.assign(pairs.size(), 0);
    inst.weights.assign(pairs.size(), 1.0);
    const auto& entries = inst.noise.entries();
    std::size_t e = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        double s = 0.0;
        while (e < entries.size() && entries[e].first < pairs[k]) ++e;
        if (e < entries.size() && entries[e].first == pairs[k]) {
            s = entries[e].second;
            inst.corrupted[k] = 1;
        }
        inst.observed[k] = inst.truth_product(pairs[k].first, pairs[k].second) + s;
    }
}

}  // namespace

Instance build_symmetric_instance(const std::vector<double>& u_star, MeasurementSet omega,
                                  SparseNoise noise) {
    if (omega.shape() != SetShape::Symmetric) {
        throw std::invalid_argument("build_symmetric_instance needs a symmetric measurement set");
    }
    if (static_cast<std::size_t>(omega.rows()) != u_star.size()) {
        throw std::invalid_argument("dimension mismatch between u_star and omega");
    }
    check_non_negative(u_star, "u_star");
    check_noise_support(omega, noise);
    Instance inst;
    inst.kind = InstanceKind::Symmetric;
    inst.rows = omega.rows();
    inst.cols = omega.cols();
    inst.u_truth = u_star;
    inst.omega = std::move(omega);
    inst.noise = std::move(noise);
    fill_observed(inst);
    return inst;
}

Instance build_asymmetric_instance(const std::vector<double>& u_star, const std::vector<double>& v_star,
                                   MeasurementSet omega, SparseNoise noise) {
    if (omega.shape() != SetShape::Asymmetric) {
        throw std::invalid_argument("build_asymmetric_instance needs an asymmetric measurement set");
    }
    if (static_cast<std::size_t>(omega.rows()) != u_star.size() ||
        static_cast<std::size_t>(omega.cols()) != v_star.size()) {
        throw std::invalid_argument("dimension mismatch between components and omega");
    }
    check_non_negative(u_star, "u_star");
    check_non_negative(v_star, "v_star");
    check_noise_support(omega, noise);
    Instance inst;
    inst.kind = InstanceKind::Asymmetric;
    inst.rows = omega.rows();
    inst.cols = omega.cols();
    inst.u_truth = u_star;
    inst.v_truth = v_star;
    inst.omega = std::move(omega);
    inst.noise = std::move(noise);
    fill_observed(inst);
    return inst;
}

Instance build_rank_r_instance(const std::vector<double>& U_star, int n, int r, MeasurementSet omega,
                               SparseNoise noise) {
    if (r < 1) throw std::invalid_argument("rank must be >= 1");
    if (r > n) throw std::invalid_argument("rank must not exceed n");
    if (omega.shape() != SetShape::Symmetric || omega.rows() != n) {
        throw std::invalid_argument("rank-r instance needs a symmetric measurement set on n vertices");
    }
    if (U_star.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(r)) {
        throw std::invalid_argument("U_star must be n x r");
    }
    check_non_negative(U_star, "U_star");
    check_noise_support(omega, noise);
    Instance inst;
    inst.kind = InstanceKind::RankR;
    inst.rows = n;
    inst.cols = n;
    inst.rank = r;
    inst.u_truth = U_star;
    inst.omega = std::move(omega);
    inst.noise = std::move(noise);
    fill_observed(inst);
    return inst;
}

SymmetrizedInstance symmetrize(const Instance& inst, double alpha) {
    if (inst.kind != InstanceKind::Asymmetric) {
        throw std::invalid_argument("symmetrize expects an asymmetric instance");
    }
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    int m = inst.rows;
    int n = inst.cols;
    std::vector<double> w_star(inst.u_truth);
    w_star.insert(w_star.end(), inst.v_truth.begin(), inst.v_truth.end());

    std::vector<IndexPair> bar_pairs;
    bar_pairs.reserve(inst.omega.size());
    for (const auto& [i, j] : inst.omega.pairs()) bar_pairs.emplace_back(i, j + m);
    std::vector<std::pair<IndexPair, double>> bar_noise;
    bar_noise.reserve(inst.noise.size());
    for (const auto& [pair, value] : inst.noise.entries()) {
        bar_noise.emplace_back(IndexPair{pair.first, pair.second + m}, value);
    }
    SymmetrizedInstance sym;
    sym.base = build_symmetric_instance(w_star, MeasurementSet::symmetric(m + n, std::move(bar_pairs)),
                                        SparseNoise::from_entries(SetShape::Symmetric, std::move(bar_noise)));
    sym.m = m;
    sym.n = n;
    sym.alpha = alpha;
    return sym;
}

bool strictly_positive(std::span<const double> x) {
    for (double v : x) {
        if (!(v > 0.0)) return false;
    }
    return true;
}

double condition_number(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("condition number of an empty vector");
    double lo = x[0], hi = x[0];
    for (double v : x) {
        if (!(v > 0.0)) throw std::invalid_argument("condition number needs strictly positive entries");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi / lo;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

double recovery_error_symmetric(std::span<const double> u, std::span<const double> u_star) {
    if (u.size() != u_star.size()) throw std::invalid_argument("dimension mismatch");
    double su = dot(u, u);
    double st = dot(u_star, u_star);
    if (st == 0.0) throw std::invalid_argument("truth is identically zero");
    double cross = dot(u, u_star);
    double num2 = su * su + st * st - 2.0 * cross * cross;
    return std::sqrt(std::max(num2, 0.0)) / st;
}

double recovery_error_asymmetric(std::span<const double> u, std::span<const double> v,
                                 std::span<const double> u_star, std::span<const double> v_star) {
    if (u.size() != u_star.size() || v.size() != v_star.size()) {
        throw std::invalid_argument("dimension mismatch");
    }
    double su = dot(u, u), sv = dot(v, v);
    double stu = dot(u_star, u_star), stv = dot(v_star, v_star);
    double denom2 = stu * stv;
    if (denom2 == 0.0) throw std::invalid_argument("truth is identically zero");
    double cu = dot(u, u_star), cv = dot(v, v_star);
    double num2 = su * sv + denom2 - 2.0 * cu * cv;
    return std::sqrt(std::max(num2, 0.0)) / std::sqrt(denom2);
}

double recovery_error_rank_r(std::span<const double> U, std::span<const double> U_star, int n, int r) {
    if (U.size() != U_star.size() ||
        U.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(r)) {
        throw std::invalid_argument("dimension mismatch");
    }
    // ||A A^T - B B^T||_F^2 = ||A^T A||_F^2 + ||B^T B||_F^2 - 2 ||A^T B||_F^2
    auto gram_norm2 = [n, r](std::span<const double> A, std::span<const double> B) {
        double total = 0.0;
        for (int a = 0; a < r; ++a) {
            for (int b = 0; b < r; ++b) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) {
                    s += A[static_cast<std::size_t>(i) * r + a] * B[static_cast<std::size_t>(i) * r + b];
                }
                total += s * s;
            }
        }
        return total;
    };
    double aa = gram_norm2(U, U);
    double bb = gram_norm2(U_star, U_star);
    if (bb == 0.0) throw std::invalid_argument("truth is identically zero");
    double ab = gram_norm2(U, U_star);
    double num2 = aa + bb - 2.0 * ab;
    return std::sqrt(std::max(num2, 0.0)) / std::sqrt(bb);
}

double recovery_error(const Instance& inst, std::span<const double> candidate) {
    switch (inst.kind) {
        case InstanceKind::Symmetric:
            return recovery_error_symmetric(candidate, inst.u_truth);
        case InstanceKind::Asymmetric: {
            std::size_t m = inst.u_truth.size();
            if (candidate.size() != m + inst.v_truth.size()) {
                throw std::invalid_argument("candidate must be the concatenated [u; v]");
            }
            return recovery_error_asymmetric(candidate.subspan(0, m), candidate.subspan(m),
                                             inst.u_truth, inst.v_truth);
        }
        case InstanceKind::RankR:
            return recovery_error_rank_r(candidate, inst.u_truth, inst.rows, inst.rank);
    }
    throw std::logic_error("unknown instance kind");
}

void save_instance(const Instance& inst, std::ostream& out) {
    switch (inst.kind) {
        case InstanceKind::Symmetric:
            out << "symmetric " << inst.rows << "\n";
            break;
        case InstanceKind::Asymmetric:
            out << "asymmetric " << inst.rows << " " << inst.cols << "\n";
            break;
        case InstanceKind::RankR:
            out << "rank_r " << inst.rows << " " << inst.rank << "\n";
            break;
    }
    const auto& pairs = inst.omega.pairs();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        double s = inst.corrupted[k] ? inst.noise.value_at(pairs[k]) : 0.0;
        out << (pairs[k].first + 1) << " " << (pairs[k].second + 1) << " "
            << format_double(inst.observed[k]) << " " << format_double(s) << "\n";
    }
    auto write_vector = [&out](std::span<const double> v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << " ";
            out << format_double(v[i]);
        }
        out << "\n";
    };
    if (inst.kind == InstanceKind::Symmetric) {
        write_vector(inst.u_truth);
    } else if (inst.kind == InstanceKind::Asymmetric) {
        write_vector(inst.u_truth);
        write_vector(inst.v_truth);
    } else {
        // one line per component vector: row k holds column k of U* (length n)
        for (int k = 0; k < inst.rank; ++k) {
            for (int i = 0; i < inst.rows; ++i) {
                if (i) out << " ";
                out << format_double(inst.u_truth[static_cast<std::size_t>(i) * inst.rank + k]);
            }
            out << "\n";
        }
    }
}

Instance load_instance(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (!blank) lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error("empty instance file");

    std::istringstream header(lines[0]);
    std::string kind;
    header >> kind;
    auto parse_numbers = [](const std::string& text) {
        std::istringstream ss(text);
        std::vector<double> values;
        double v;
        while (ss >> v) values.push_back(v);
        if (!ss.eof()) throw std::runtime_error("malformed numeric line in instance file");
        return values;
    };

    int truth_lines = 0;
    int rows = 0, cols = 0, rank = 1;
    if (kind == "symmetric") {
        if (!(header >> rows)) throw std::runtime_error("malformed header");
        cols = rows;
        truth_lines = 1;
    } else if (kind == "asymmetric") {
        if (!(header >> rows >> cols)) throw std::runtime_error("malformed header");
        truth_lines = 2;
    } else if (kind == "rank_r") {
        if (!(header >> rows >> rank)) throw std::runtime_error("malformed header");
        cols = rows;
        truth_lines = rank;
    } else {
        throw std::runtime_error("unknown instance kind: " + kind);
    }
    if (static_cast<int>(lines.size()) < 1 + truth_lines) {
        throw std::runtime_error("instance file is missing truth vectors");
    }

    std::size_t entry_count = lines.size() - 1 - static_cast<std::size_t>(truth_lines);
    bool symmetric_pairs = (kind != "asymmetric");
    std::vector<IndexPair> pairs;
    std::vector<std::pair<IndexPair, double>> noise_entries;
    std::vector<std::pair<IndexPair, double>> stated;  // pair -> X as written
    pairs.reserve(entry_count);
    stated.reserve(entry_count);
    for (std::size_t k = 0; k < entry_count; ++k) {
        auto values = parse_numbers(lines[1 + k]);
        if (values.size() != 4) throw std::runtime_error("observed entry lines need `i j X S`");
        IndexPair p{static_cast<int>(values[0]) - 1, static_cast<int>(values[1]) - 1};
        if (symmetric_pairs && p.first > p.second) std::swap(p.first, p.second);
        pairs.push_back(p);
        stated.emplace_back(p, values[2]);
        if (values[3] != 0.0) noise_entries.emplace_back(p, values[3]);
    }
    std::sort(stated.begin(), stated.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::vector<double>> truth;
    for (int t = 0; t < truth_lines; ++t) {
        truth.push_back(parse_numbers(lines[lines.size() - static_cast<std::size_t>(truth_lines - t)]));
    }

    Instance inst;
    if (kind == "symmetric") {
        if (truth[0].size() != static_cast<std::size_t>(rows)) {
            throw std::runtime_error("truth vector length mismatch");
        }
        inst = build_symmetric_instance(
            truth[0], MeasurementSet::symmetric(rows, std::move(pairs)),
            SparseNoise::from_entries(SetShape::Symmetric, std::move(noise_entries)));
    } else if (kind == "asymmetric") {
        if (truth[0].size() != static_cast<std::size_t>(rows) ||
            truth[1].size() != static_cast<std::size_t>(cols)) {
            throw std::runtime_error("truth vector length mismatch");
        }
        inst = build_asymmetric_instance(
            truth[0], truth[1], MeasurementSet::asymmetric(rows, cols, std::move(pairs)),
            SparseNoise::from_entries(SetShape::Asymmetric, std::move(noise_entries)));
    } else {
        std::vector<double> U(static_cast<std::size_t>(rows) * static_cast<std::size_t>(rank));
        for (int k = 0; k < rank; ++k) {
            if (truth[static_cast<std::size_t>(k)].size() != static_cast<std::size_t>(rows)) {
                throw std::runtime_error("truth vector length mismatch");
            }
            for (int i = 0; i < rows; ++i) {
                U[static_cast<std::size_t>(i) * rank + k] = truth[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            }
        }
        inst = build_rank_r_instance(U, rows, rank, MeasurementSet::symmetric(rows, std::move(pairs)),
                                     SparseNoise::from_entries(SetShape::Symmetric, std::move(noise_entries)));
    }

    // Stored X must equal truth product plus S exactly.
    const auto& got = inst.observed;
    for (std::size_t k = 0; k < got.size(); ++k) {
        if (got[k] != stated[k].second) {
            throw std::runtime_error("observed entries inconsistent with truth and noise");
        }
    }
    return inst;
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_instance(inst, out);
    if (!out) throw std::runtime_error("failed writing " + path);
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_instance(in);
}

}  // namespace nnrpca
