#pragma once

// Finite metric spaces, covering numbers, admissible partition sequences and
// Talagrand's gamma_alpha functional.
//
// An admissible sequence {A_k} is an increasing (refining) sequence of
// partitions with |A_k| <= 2^{2^k}; gamma_alpha is the infimum over admissible
// sequences of sup_theta sum_k 2^{k/alpha} diam(A_k(theta)). Note that the
// level-0 budget is 2, not 1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace conc::chaining {

class FiniteMetricSpace {
public:
    // Row-major n x n distance matrix. Validates symmetry, zero diagonal,
    // nonnegativity and the triangle inequality (absolute tolerance 1e-9
    // relative to the largest distance).
    FiniteMetricSpace(std::size_t n, std::vector<double> dist);

    // Euclidean distances between the rows of a row-major n x dim point array.
    static FiniteMetricSpace euclidean(std::span<const double> points, std::size_t dim);

    // Points on the line with |x - y|.
    static FiniteMetricSpace on_line(std::span<const double> xs);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
    const std::vector<double>& distances() const noexcept { return dist_; }

    double diameter() const noexcept;
    double diameter_of(std::span<const std::size_t> subset) const noexcept;

    // Induced metric on a subset of points, in the given order.
    FiniteMetricSpace restrict_to(std::span<const std::size_t> subset) const;

private:
    std::size_t n_;
    std::vector<double> dist_;
};

// Cell labels per level: labels[k][i] is the cell id of point i in A_k.
// Cell ids are 0..(cells-1) in order of first appearance.
struct AdmissiblePartitionSequence {
    std::vector<std::vector<std::size_t>> labels;

    std::size_t depth() const noexcept { return labels.empty() ? 0 : labels.size() - 1; }
    std::size_t cells(std::size_t k) const;
};

// 2^{2^k}, saturating at UINT64_MAX.
std::uint64_t level_budget(std::size_t k) noexcept;

// Throws InvalidArgument naming the first violated invariant: cardinality
// budget, refinement, or singleton termination.
void check_admissible(const AdmissiblePartitionSequence& seq, std::size_t n_points);
bool is_admissible(const AdmissiblePartitionSequence& seq, std::size_t n_points) noexcept;

struct CoveringResult {
    std::size_t count = 0;
    bool exact = false;
};

// Smallest number of closed eps-balls centred at points of the space that
// cover it. Exact set-cover search up to kExactCoverLimit points, greedy above.
inline constexpr std::size_t kExactCoverLimit = 12;
CoveringResult covering_number(const FiniteMetricSpace& space, double eps);

// Entropy-integral upper bound on gamma_alpha:
//   [(log 2)^{1/alpha} (1 - 2^{-1/alpha})]^{-1} int_{diam/1e6}^{diam} (log N(eps))^{1/alpha} d eps
// evaluated with adaptive trapezoid quadrature.
double entropy_integral_gamma_bound(const FiniteMetricSpace& space, double alpha);

// Farthest-point construction refined level by level until all cells are
// singletons. The result always satisfies check_admissible.
AdmissiblePartitionSequence greedy_admissible_sequence(const FiniteMetricSpace& space);

// sup over points of sum_k 2^{k/alpha} diam(A_k(theta)).
double gamma_value(const FiniteMetricSpace& space, const AdmissiblePartitionSequence& seq, double alpha);

// Exact gamma_alpha by enumerating every admissible chain (spaces of at most
// kExactGammaLimit points).
inline constexpr std::size_t kExactGammaLimit = 6;
double gamma_exact_small(const FiniteMetricSpace& space, double alpha);

struct BallSpec {
    int dimension = 1;
    double diameter = 1.0;
};

enum class BallBoundForm {
    // Multiplies by (1 - 2^{-1/2}) for alpha = 2.
    Verbatim,
    // Divides by (1 - 2^{-1/2}), the direction produced by the entropy-integral argument.
    ProofConsistent,
};

// gamma_1 <= (log 2)^2 p diam, gamma_2 <= 2 (log 2)^{-1/2} (1 - 2^{-1/2})^{+-1} sqrt(p) diam.
double gamma_ball_bound(const BallSpec& ball, int alpha, BallBoundForm form = BallBoundForm::Verbatim);

}  // namespace conc::chaining
