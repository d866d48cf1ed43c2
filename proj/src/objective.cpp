#include "nnrpca/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nnrpca/rng.hpp"

namespace nnrpca {

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_spec_instance(const ObjectiveSpec& spec) {
    if (spec.instance == nullptr) throw std::invalid_argument("objective spec has no instance");
    if (spec.instance->kind == InstanceKind::Asymmetric) {
        throw std::invalid_argument("objective evaluates symmetric(ized) instances; symmetrize first");
    }
}

void check_dimension(const ObjectiveSpec& spec, std::span<const double> u) {
    if (u.size() != static_cast<std::size_t>(spec.dimension())) {
        throw std::invalid_argument("vector length does not match the instance");
    }
}

// Rate of change of sum_{i<=m} u_i^2 - sum_{i>m} u_i^2 along d.
double balance_rate(std::span<const double> u, std::span<const double> d, int m) {
    double rate = 0.0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        double term = 2.0 * u[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)];
        rate += (i < m) ? term : -term;
    }
    return rate;
}

double balance_value(std::span<const double> u, int m) {
    double value = 0.0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        double term = u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        value += (i < m) ? term : -term;
    }
    return value;
}

}  // namespace

ObjectiveSpec ObjectiveSpec::noiseless_sym(const Instance& inst) {
    ObjectiveSpec spec;
    spec.instance = &inst;
    spec.variant = Variant::NoiselessSym;
    return spec;
}

ObjectiveSpec ObjectiveSpec::regularized_sym(const Instance& inst) {
    ObjectiveSpec spec;
    spec.instance = &inst;
    spec.variant = Variant::RegularizedSym;
    spec.lambda = inst.rows / 2.0;
    spec.beta = 1.0;
    return spec;
}

ObjectiveSpec ObjectiveSpec::noiseless_asym(const SymmetrizedInstance& inst) {
    ObjectiveSpec spec;
    spec.instance = &inst.base;
    spec.variant = Variant::NoiselessAsym;
    spec.alpha = inst.alpha;
    spec.split_m = inst.m;
    return spec;
}

ObjectiveSpec ObjectiveSpec::regularized_asym(const SymmetrizedInstance& inst) {
    ObjectiveSpec spec = noiseless_asym(inst);
    spec.variant = Variant::RegularizedAsym;
    spec.lambda = (inst.m + inst.n) / 2.0;
    spec.beta = 1.0;
    return spec;
}

double eval_regularizer(std::span<const double> u, double lambda, double beta) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be non-negative");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    double total = 0.0;
    for (double v : u) {
        double excess = v - beta;
        if (excess > 0.0) total += excess * excess * excess * excess;
    }
    return lambda * total;
}

double eval_objective(const ObjectiveSpec& spec, std::span<const double> u) {
    check_spec_instance(spec);
    check_dimension(spec, u);
    for (double v : u) {
        if (v < 0.0) throw std::invalid_argument("objective requires u >= 0");
    }
    const Instance& inst = *spec.instance;
    const auto& pairs = inst.omega.pairs();
    double total = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        total += inst.weights[k] *
                 std::abs(u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)] -
                          inst.observed[k]);
    }
    if (spec.has_regularizer()) total += eval_regularizer(u, spec.lambda, spec.beta);
    if (spec.has_balance_term()) total += spec.alpha * std::abs(balance_value(u, spec.split_m));
    return total;
}

double directional_derivative(const ObjectiveSpec& spec, std::span<const double> u,
                              std::span<const double> d) {
    check_spec_instance(spec);
    check_dimension(spec, u);
    if (d.size() != u.size()) throw std::invalid_argument("direction length mismatch");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0 && d[i] < 0.0) throw std::invalid_argument("infeasible direction");
    }
    const Instance& inst = *spec.instance;
    const auto& pairs = inst.omega.pairs();
    double total = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        double ui = u[static_cast<std::size_t>(i)], uj = u[static_cast<std::size_t>(j)];
        double di = d[static_cast<std::size_t>(i)], dj = d[static_cast<std::size_t>(j)];
        double rate = (i == j) ? 2.0 * ui * di : di * uj + dj * ui;
        double residual = ui * uj - inst.observed[k];
        total += inst.weights[k] * (residual == 0.0 ? std::abs(rate) : sign_of(residual) * rate);
    }
    if (spec.has_regularizer()) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            double excess = u[i] - spec.beta;
            if (excess > 0.0) total += 4.0 * spec.lambda * excess * excess * excess * d[i];
        }
    }
    if (spec.has_balance_term()) {
        double h = balance_value(u, spec.split_m);
        double rate = balance_rate(u, d, spec.split_m);
        total += spec.alpha * (h == 0.0 ? std::abs(rate) : sign_of(h) * rate);
    }
    return total;
}

std::vector<double> subgradient(const ObjectiveSpec& spec, std::span<const double> u) {
    check_spec_instance(spec);
    check_dimension(spec, u);
    const Instance& inst = *spec.instance;
    const auto& pairs = inst.omega.pairs();
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        double ui = u[static_cast<std::size_t>(i)], uj = u[static_cast<std::size_t>(j)];
        double s = inst.weights[k] * sign_of(ui * uj - inst.observed[k]);
        if (s == 0.0) continue;
        if (i == j) {
            g[static_cast<std::size_t>(i)] += s * 2.0 * ui;
        } else {
            g[static_cast<std::size_t>(i)] += s * uj;
            g[static_cast<std::size_t>(j)] += s * ui;
        }
    }
    if (spec.has_regularizer()) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            double excess = u[i] - spec.beta;
            if (excess > 0.0) g[i] += 4.0 * spec.lambda * excess * excess * excess;
        }
    }
    if (spec.has_balance_term()) {
        double s = sign_of(balance_value(u, spec.split_m));
        if (s != 0.0) {
            for (int i = 0; i < static_cast<int>(u.size()); ++i) {
                double term = spec.alpha * s * 2.0 * u[static_cast<std::size_t>(i)];
                g[static_cast<std::size_t>(i)] += (i < spec.split_m) ? term : -term;
            }
        }
    }
    return g;
}

namespace {

struct RatioPartition {
    std::vector<int> t1, t2, n_set;
    double max_ratio = 1.0;
    int anchor = 0;  // index whose value normalizes the direction
};

// Extremal-ratio sets of the proof construction: T1 collects entries whose
// truth/iterate ratio attains the maximal multiplicative deviation, T2 those
// attained by iterate/truth; ties are resolved within a relative tolerance.
RatioPartition ratio_partition(std::span<const double> truth, std::span<const double> u) {
    RatioPartition part;
    double best = 0.0;
    int anchor = 0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        double over = truth[static_cast<std::size_t>(i)] / u[static_cast<std::size_t>(i)];
        double deviation = std::max(over, 1.0 / over);
        if (deviation >= best) {
            best = deviation;
            anchor = i;
        }
    }
    part.max_ratio = best;
    part.anchor = anchor;
    double cutoff = best * (1.0 - kRatioTieTolerance);
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        double over = truth[static_cast<std::size_t>(i)] / u[static_cast<std::size_t>(i)];
        if (over >= cutoff && over >= 1.0 / over) {
            part.t1.push_back(i);
        } else if (1.0 / over >= cutoff) {
            part.t2.push_back(i);
        } else {
            part.n_set.push_back(i);
        }
    }
    return part;
}

std::vector<double> symmetric_construction(const RatioPartition& part, std::span<const double> u) {
    std::vector<double> d(u.size(), 0.0);
    double un = u[static_cast<std::size_t>(part.anchor)];
    for (int i : part.t1) d[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] / un;
    for (int i : part.t2) d[static_cast<std::size_t>(i)] = -u[static_cast<std::size_t>(i)] / un;
    return d;
}

// Appendix-style asymmetric direction: the symmetric construction plus a
// multiple of +-w that zeroes the first-order change of the balance term.
std::vector<double> asymmetric_construction(const RatioPartition& part, std::span<const double> u,
                                            int m, double* gamma_out) {
    double un = u[static_cast<std::size_t>(part.anchor)];
    double numerator = 0.0;
    for (int i : part.t1) {
        double w2 = u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        numerator += (i < m) ? w2 : -w2;
    }
    for (int i : part.t2) {
        double w2 = u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        numerator += (i < m) ? -w2 : w2;
    }
    double denom = 0.0;
    for (double v : u) denom += v * v;
    double gamma = numerator / (un * denom);
    *gamma_out = gamma;

    std::vector<double> d(u.size(), 0.0);
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        double wi = u[static_cast<std::size_t>(i)];
        d[static_cast<std::size_t>(i)] = (i < m) ? -wi * gamma : wi * gamma;
    }
    for (int i : part.t1) d[static_cast<std::size_t>(i)] += u[static_cast<std::size_t>(i)] / un;
    for (int i : part.t2) d[static_cast<std::size_t>(i)] -= u[static_cast<std::size_t>(i)] / un;
    return d;
}

}  // namespace

DirectionReport descent_direction(const ObjectiveSpec& spec, std::span<const double> u) {
    check_spec_instance(spec);
    check_dimension(spec, u);
    const Instance& inst = *spec.instance;
    if (!strictly_positive(u)) throw std::invalid_argument("descent direction needs u > 0");
    if (inst.kind == InstanceKind::RankR) {
        throw std::invalid_argument("descent direction is defined for rank-1 objectives");
    }
    const auto& truth = inst.u_truth;
    if (recovery_error_symmetric(u, truth) == 0.0) {
        throw std::invalid_argument("no direction is defined at the optimum");
    }

    RatioPartition part = ratio_partition(truth, u);
    DirectionReport report;
    report.t1 = part.t1;
    report.t2 = part.t2;
    report.n_set = part.n_set;
    if (spec.has_balance_term()) {
        report.direction = asymmetric_construction(part, u, spec.split_m, &report.gamma);
    } else {
        report.direction = symmetric_construction(part, u);
    }
    report.forward_derivative = directional_derivative(spec, u, report.direction);

    // When the constructive direction fails to certify (possible away from
    // the D-stationary regime the proofs target), fall back to coordinate
    // directions of entries whose products over- or under-shoot the truth on
    // every incident measurement.
    if (!(report.forward_derivative < 0.0)) {
        const auto& pairs = inst.omega.pairs();
        int n = spec.dimension();
        std::vector<int> low_count(static_cast<std::size_t>(n), 0);
        std::vector<int> high_count(static_cast<std::size_t>(n), 0);
        std::vector<int> incident(static_cast<std::size_t>(n), 0);
        for (const auto& [i, j] : pairs) {
            double diff = u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)] -
                          truth[static_cast<std::size_t>(i)] * truth[static_cast<std::size_t>(j)];
            for (int v : {i, j}) {
                incident[static_cast<std::size_t>(v)] += 1;
                if (diff > 0.0) high_count[static_cast<std::size_t>(v)] += 1;
                if (diff < 0.0) low_count[static_cast<std::size_t>(v)] += 1;
                if (i == j) break;
            }
        }
        std::vector<double> candidate(u.size(), 0.0);
        for (int v = 0; v < n; ++v) {
            if (incident[static_cast<std::size_t>(v)] == 0) continue;
            double sign = 0.0;
            if (high_count[static_cast<std::size_t>(v)] == incident[static_cast<std::size_t>(v)]) {
                sign = -1.0;
            } else if (low_count[static_cast<std::size_t>(v)] == incident[static_cast<std::size_t>(v)]) {
                sign = 1.0;
            } else {
                continue;
            }
            std::fill(candidate.begin(), candidate.end(), 0.0);
            candidate[static_cast<std::size_t>(v)] = sign;
            double deriv = directional_derivative(spec, u, candidate);
            if (deriv < report.forward_derivative) {
                report.forward_derivative = deriv;
                report.direction = candidate;
            }
        }
    }
    // Scaling points of the asymmetric problem leave the data term flat; the
    // balance penalty then decreases along the pure rescaling direction.
    if (!(report.forward_derivative < 0.0) && spec.has_balance_term()) {
        std::vector<double> scaling(u.size());
        for (double flip : {1.0, -1.0}) {
            for (int i = 0; i < static_cast<int>(u.size()); ++i) {
                double wi = u[static_cast<std::size_t>(i)];
                scaling[static_cast<std::size_t>(i)] = (i < spec.split_m) ? -flip * wi : flip * wi;
            }
            double deriv = directional_derivative(spec, u, scaling);
            if (deriv < report.forward_derivative) {
                report.forward_derivative = deriv;
                report.direction = scaling;
            }
        }
    }
    std::vector<double> negated(report.direction.size());
    for (std::size_t i = 0; i < negated.size(); ++i) negated[i] = -report.direction[i];
    report.backward_derivative = directional_derivative(spec, u, negated);
    return report;
}

StationarityResult d_stationarity_test(const ObjectiveSpec& spec, std::span<const double> u,
                                       int budget, std::uint64_t seed) {
    check_spec_instance(spec);
    check_dimension(spec, u);
    StationarityResult result;
    std::vector<double> best_witness;
    double best = 0.0;

    auto probe = [&](std::span<const double> d) {
        double deriv = directional_derivative(spec, u, d);
        if (deriv < best) {
            best = deriv;
            best_witness.assign(d.begin(), d.end());
        }
    };

    std::vector<double> d(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        d[i] = 1.0;
        probe(d);
        if (u[i] > 0.0) {
            d[i] = -1.0;
            probe(d);
        }
        d[i] = 0.0;
    }

    if (strictly_positive(u) && spec.instance->kind != InstanceKind::RankR &&
        recovery_error_symmetric(u, spec.instance->u_truth) > 0.0) {
        DirectionReport constructive = descent_direction(spec, u);
        probe(constructive.direction);
    }

    Rng rng(derive_seed(seed, 0x5bdd));
    for (int t = 0; t < budget; ++t) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            double x = rng.uniform(-1.0, 1.0);
            if (u[i] == 0.0) x = std::abs(x);
            d[i] = x;
            norm2 += x * x;
        }
        if (norm2 == 0.0) continue;
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : d) x *= inv;
        probe(d);
    }

    result.best_derivative = best;
    if (best < -kStationarityTolerance) {
        result.verdict = StationarityVerdict::CertifiedDescent;
        result.witness = std::move(best_witness);
    }
    return result;
}

}  // namespace nnrpca
