#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nnrpca/model.hpp"

namespace nnrpca {

struct ConditionEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct CertificateReport {
    std::string theorem;
    std::vector<ConditionEntry> conditions;  // overall <=> all of these pass
    std::vector<ConditionEntry> info;        // reported, not required
    bool overall = false;
    double c = 0.0;
    double eta = 0.0;
    double kappa = 0.0;
    double success_probability = 1.0;  // probabilistic guarantees only

    void finalize();  // recomputes overall from conditions
};

void write_certificate_csv(const CertificateReport& report, std::ostream& out);

// Largest admissible constant of the noise-floor assumption, capped at 1; the
// assumption holds for any c strictly below the returned value, and a value
// <= 0 signals that it is violated.
double assumption1_constant(const Instance& inst);

// Deterministic no-spurious-minima conditions for the regularized symmetric
// objective: strict truth positivity, the good/bad degree gap, and the
// absence of bipartite components in the full sparsity graph.
CertificateReport check_det_symmetric(const Instance& inst, double c);

// Asymmetric analog on the symmetrized instance; the degree gap uses the
// concatenated truth and condition (iii) asks the good graph to be connected.
CertificateReport check_det_asymmetric(const SymmetrizedInstance& inst, double c);

// Random sampling/noise thresholds; thresholds above 1 are reported as
// vacuous rather than rejected.
CertificateReport check_prob_symmetric(int n, double p, double d, double kappa, double c, double eta);
CertificateReport check_prob_asymmetric(int m, int n, double p, double d, double kappa_w, double c,
                                        double eta);

double connectivity_threshold_symmetric(int n, double eta);
double connectivity_threshold_bipartite(int m, int n, double eta);

struct DegreeBounds {
    double max_degree_bound = 0.0;   // P(Delta >= bound) <= tail_probability
    double min_degree_bound = 0.0;   // P(delta <= bound) <= tail_probability
    double min_degree_precondition = 0.0;  // required lower bound on p
    bool min_degree_applicable = false;
    double tail_probability = 0.0;
};

DegreeBounds degree_concentration_symmetric(int n, double p, double eta);
DegreeBounds degree_concentration_bipartite(int m, int n, double p, double eta);

// Box of the regularized objective's positive D-stationary points, checked in
// the frame where the truth is rescaled to u*_max = 1 (iterate rescaled
// jointly).
bool stationary_box_check(std::span<const double> u, double c, std::span<const double> u_star);

}  // namespace nnrpca
