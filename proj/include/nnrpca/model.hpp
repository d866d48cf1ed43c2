#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nnrpca {

// Index pairs are 0-based in memory; the plain-text instance format uses
// 1-based indices to match the usual math notation.
using IndexPair = std::pair<int, int>;

enum class SetShape { Symmetric, Asymmetric };

// Set of observed index pairs. Symmetric sets store each unordered pair once
// with i <= j; diagonal pairs are ordinary measurements (self-loops in the
// sparsity graph). Asymmetric sets live on [0,m) x [0,n).
class MeasurementSet {
  public:
    static MeasurementSet symmetric(int n, std::vector<IndexPair> pairs);
    static MeasurementSet asymmetric(int m, int n, std::vector<IndexPair> pairs);

    SetShape shape() const { return shape_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<IndexPair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool contains(IndexPair p) const;

  private:
    MeasurementSet() = default;
    SetShape shape_ = SetShape::Symmetric;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<IndexPair> pairs_;  // sorted, unique
};

// Sparse corruption values keyed by index pair. Only nonzero values are
// stored; the pair convention follows the measurement set it applies to.
class SparseNoise {
  public:
    SparseNoise() = default;
    static SparseNoise from_entries(SetShape shape, std::vector<std::pair<IndexPair, double>> entries);

    const std::vector<std::pair<IndexPair, double>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    double value_at(IndexPair p) const;  // 0 when absent

  private:
    std::vector<std::pair<IndexPair, double>> entries_;  // sorted by pair
};

enum class InstanceKind { Symmetric, Asymmetric, RankR };

// A fully materialized problem instance: ground truth, measurement set,
// sparse corruption, and the observed values on omega. Immutable after
// construction and safe to share across threads.
struct Instance {
    InstanceKind kind = InstanceKind::Symmetric;
    int rows = 0;  // symmetric/rank_r: n; asymmetric: m
    int cols = 0;  // symmetric/rank_r: n; asymmetric: n
    int rank = 1;  // rank_r only

    // symmetric: u* (n); asymmetric: u* (m); rank_r: U* stored row-major (n x r)
    std::vector<double> u_truth;
    std::vector<double> v_truth;  // asymmetric only (n)

    MeasurementSet omega = MeasurementSet::symmetric(1, {});
    SparseNoise noise;
    std::vector<double> observed;  // aligned with omega.pairs()
    std::vector<char> corrupted;   // aligned; 1 iff the pair belongs to B
    // Measurement multiplicities, aligned with omega.pairs(). Constructions
    // that measure the full ordered index square carry weight 2 on
    // off-diagonal pairs; ordinary instances are all ones.
    std::vector<double> weights;

    std::size_t bad_count() const;
    double truth_product(int i, int j) const;
};

// Symmetric instance of size m+n produced from an asymmetric one; pair (i,j)
// of the original maps to (i, j+m) and the truth becomes w* = [u*; v*].
struct SymmetrizedInstance {
    Instance base;
    int m = 0;
    int n = 0;
    double alpha = 1.0;
};

Instance build_symmetric_instance(const std::vector<double>& u_star, MeasurementSet omega,
                                  SparseNoise noise);
Instance build_asymmetric_instance(const std::vector<double>& u_star, const std::vector<double>& v_star,
                                   MeasurementSet omega, SparseNoise noise);
// U_star is n x r, row-major.
Instance build_rank_r_instance(const std::vector<double>& U_star, int n, int r, MeasurementSet omega,
                               SparseNoise noise);

SymmetrizedInstance symmetrize(const Instance& inst, double alpha = 1.0);

bool strictly_positive(std::span<const double> x);
double condition_number(std::span<const double> x);

// ||u u^T - u* u*^T||_F / ||u* u*^T||_F, evaluated through Gram identities.
double recovery_error_symmetric(std::span<const double> u, std::span<const double> u_star);
// ||u v^T - u* v*^T||_F / ||u* v*^T||_F.
double recovery_error_asymmetric(std::span<const double> u, std::span<const double> v,
                                 std::span<const double> u_star, std::span<const double> v_star);
// ||U U^T - U* U*^T||_F / ||U* U*^T||_F with n x r row-major factors.
double recovery_error_rank_r(std::span<const double> U, std::span<const double> U_star, int n, int r);

// Recovery error of a candidate against the instance truth. For asymmetric
// instances the candidate is the concatenated w = [u; v].
double recovery_error(const Instance& inst, std::span<const double> candidate);

// Plain-text fixture format: header `kind n [m] [r]`, one line per observed
// entry `i j X_ij S_ij` (1-based), then the truth vectors.
void save_instance(const Instance& inst, std::ostream& out);
Instance load_instance(std::istream& in);
void save_instance_file(const Instance& inst, const std::string& path);
Instance load_instance_file(const std::string& path);

}  // namespace nnrpca
