#include "nnrpca/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nnrpca/graph.hpp"

namespace nnrpca {

void CertificateReport::finalize() {
    overall = true;
    for (const auto& cond : conditions) overall = overall && cond.pass;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_rows(const CertificateReport& r, const std::vector<ConditionEntry>& list, bool required,
                std::ostream& out) {
    for (const auto& cond : list) {
        out << r.theorem << "," << cond.name << "," << fmt(cond.lhs) << "," << fmt(cond.rhs) << ","
            << (required ? 1 : 0) << "," << (cond.pass ? 1 : 0) << "\n";
    }
}

double truth_min(const Instance& inst) {
    double lo = std::numeric_limits<double>::infinity();
    for (double v : inst.u_truth) lo = std::min(lo, v);
    for (double v : inst.v_truth) lo = std::min(lo, v);
    return lo;
}

}  // namespace

void write_certificate_csv(const CertificateReport& report, std::ostream& out) {
    out << "theorem,condition,lhs,rhs,required,pass\n";
    write_rows(report, report.conditions, true, out);
    write_rows(report, report.info, false, out);
}

double assumption1_constant(const Instance& inst) {
    if (!strictly_positive(inst.u_truth) ||
        (inst.kind == InstanceKind::Asymmetric && !strictly_positive(inst.v_truth))) {
        throw std::invalid_argument("assumption constant needs strictly positive truth");
    }
    double min_sq = truth_min(inst);
    min_sq *= min_sq;
    double c = 1.0;
    for (double x : inst.observed) c = std::min(c, x / min_sq);
    return c;
}

CertificateReport check_det_symmetric(const Instance& inst, double c) {
    if (inst.kind != InstanceKind::Symmetric) {
        throw std::invalid_argument("check_det_symmetric needs a symmetric instance");
    }
    if (!(c > 0.0) || c > 1.0) throw std::invalid_argument("c must lie in (0, 1]");
    CertificateReport report;
    report.theorem = "det_symmetric";
    report.c = c;

    double u_min = *std::min_element(inst.u_truth.begin(), inst.u_truth.end());
    bool positive = u_min > 0.0;
    report.conditions.push_back({"truth_positive", u_min, 0.0, positive});

    report.kappa = positive ? condition_number(inst.u_truth) : std::numeric_limits<double>::infinity();
    auto [good, bad] = good_bad_subgraphs(inst);
    double lhs = good.min_degree;
    double rhs = (48.0 / (c * c)) * std::pow(report.kappa, 4) * bad.max_degree;
    report.conditions.push_back({"degree_gap", lhs, rhs, lhs > rhs});

    GraphReport omega_report = analyze(graph_from(inst.omega));
    double bipartite_components = 0.0;
    for (bool b : omega_report.component_bipartite) bipartite_components += b ? 1.0 : 0.0;
    report.conditions.push_back({"no_bipartite_component", bipartite_components, 0.0,
                                 bipartite_components == 0.0});

    report.info.push_back({"omega_connected", omega_report.connected ? 1.0 : 0.0, 1.0,
                           omega_report.connected});
    report.finalize();
    return report;
}

CertificateReport check_det_asymmetric(const SymmetrizedInstance& inst, double c) {
    if (!(c > 0.0) || c > 1.0) throw std::invalid_argument("c must lie in (0, 1]");
    CertificateReport report;
    report.theorem = "det_asymmetric";
    report.c = c;

    const auto& w = inst.base.u_truth;
    double w_min = *std::min_element(w.begin(), w.end());
    bool positive = w_min > 0.0;
    report.conditions.push_back({"truth_positive", w_min, 0.0, positive});

    report.kappa = positive ? condition_number(w) : std::numeric_limits<double>::infinity();
    auto [good, bad] = good_bad_subgraphs(inst.base);
    double lhs = good.min_degree;
    double rhs = (48.0 / (c * c)) * std::pow(report.kappa, 4) * bad.max_degree;
    report.conditions.push_back({"degree_gap", lhs, rhs, lhs > rhs});

    double good_components = static_cast<double>(good.components.size());
    report.conditions.push_back({"good_graph_connected", good_components, 1.0, good.connected});
    report.finalize();
    return report;
}

CertificateReport check_prob_symmetric(int n, double p, double d, double kappa, double c, double eta) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(c > 0.0) || c > 1.0) throw std::invalid_argument("c must lie in (0, 1]");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    CertificateReport report;
    report.theorem = "prob_symmetric";
    report.c = c;
    report.eta = eta;
    report.kappa = kappa;

    double k4 = std::pow(kappa, 4);
    double d_threshold = 1.0 / ((144.0 / (c * c)) * k4 + 1.0);
    report.conditions.push_back({"noise_density", d, d_threshold, d < d_threshold});

    double p_threshold = (1740.0 / (c * c)) * k4 * (1.0 + eta) * std::log(static_cast<double>(n)) / n;
    report.conditions.push_back({"sampling_probability", p, p_threshold, p > p_threshold});
    if (p_threshold > 1.0) {
        report.info.push_back({"p_threshold_vacuous", p_threshold, 1.0, false});
    }
    report.success_probability = 1.0 - 3.0 * std::pow(static_cast<double>(n), -eta);
    report.finalize();
    return report;
}

CertificateReport check_prob_asymmetric(int m, int n, double p, double d, double kappa_w, double c,
                                        double eta) {
    if (m < 2) throw std::invalid_argument("m must be at least 2");
    if (m > n) throw std::invalid_argument("expected n >= m; swap dimensions before checking");
    if (!(c > 0.0) || c > 1.0) throw std::invalid_argument("c must lie in (0, 1]");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    CertificateReport report;
    report.theorem = "prob_asymmetric";
    report.c = c;
    report.eta = eta;
    report.kappa = kappa_w;

    double ratio = static_cast<double>(m) / n;
    double k4 = std::pow(kappa_w, 4);
    double d_threshold = ratio / ((144.0 / (c * c)) * k4 + ratio);
    report.conditions.push_back({"noise_density", d, d_threshold, d < d_threshold});

    double p_threshold = (1740.0 / (c * c)) * k4 * (1.0 + eta) * n *
                         std::log(static_cast<double>(n)) / (static_cast<double>(m) * m);
    report.conditions.push_back({"sampling_probability", p, p_threshold, p > p_threshold});
    if (p_threshold > 1.0) {
        report.info.push_back({"p_threshold_vacuous", p_threshold, 1.0, false});
    }
    report.success_probability = 1.0 - 10.0 * std::pow(static_cast<double>(n), -eta);
    report.finalize();
    return report;
}

double connectivity_threshold_symmetric(int n, double eta) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (eta < 1.0) throw std::invalid_argument("the bound is stated for eta >= 1");
    double value = ((2.0 * eta + 2.0) * std::log(static_cast<double>(n)) + 2.0) / (n - 1);
    return std::min(1.0, value);
}

double connectivity_threshold_bipartite(int m, int n, double eta) {
    if (m < 2 || n < 2) throw std::invalid_argument("m and n must be at least 2");
    if (eta < 1.0) throw std::invalid_argument("the bound is stated for eta >= 1");
    double mn = static_cast<double>(m) * n;
    double value = (m + n) * ((1.0 + eta) * std::log(mn) + 1.0) /
                   (static_cast<double>(m - 1) * (n - 1));
    return std::min(1.0, value);
}

DegreeBounds degree_concentration_symmetric(int n, double p, double eta) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("p must lie in (0, 1]");
    DegreeBounds bounds;
    double logn = std::log(static_cast<double>(n));
    bounds.max_degree_bound = std::max(1.5 * n * p, 18.0 * (1.0 + eta) * logn);
    bounds.min_degree_bound = n * p / 2.0;
    bounds.min_degree_precondition = 12.0 * (1.0 + eta) * logn / n;
    bounds.min_degree_applicable = p >= bounds.min_degree_precondition;
    bounds.tail_probability = std::pow(static_cast<double>(n), -eta);
    return bounds;
}

DegreeBounds degree_concentration_bipartite(int m, int n, double p, double eta) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("p must lie in (0, 1]");
    DegreeBounds bounds;
    double logn = std::log(static_cast<double>(n));
    bounds.max_degree_bound = std::max(1.5 * n * p, 18.0 * (1.0 + eta) * n * logn / m);
    bounds.min_degree_bound = m * p / 2.0;
    bounds.min_degree_precondition = 12.0 * (1.0 + eta) * logn / m;
    bounds.min_degree_applicable = p >= bounds.min_degree_precondition;
    bounds.tail_probability = 2.0 * std::pow(static_cast<double>(n), -eta);
    return bounds;
}

bool stationary_box_check(std::span<const double> u, double c, std::span<const double> u_star) {
    if (u_star.empty() || u.empty()) throw std::invalid_argument("empty vectors");
    double star_max = *std::max_element(u_star.begin(), u_star.end());
    double star_min = *std::min_element(u_star.begin(), u_star.end());
    if (!(star_min > 0.0)) throw std::invalid_argument("truth must be strictly positive");
    double scale = 1.0 / star_max;
    double scaled_min = star_min * scale;
    double lower = 0.5 * c * scaled_min * scaled_min;
    for (double v : u) {
        double scaled = v * scale;
        if (scaled < lower || scaled > 2.0) return false;
    }
    return true;
}

}  // namespace nnrpca
