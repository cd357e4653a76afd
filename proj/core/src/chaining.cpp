#include "conc/chaining.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "conc/errors.hpp"

namespace conc::chaining {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("alpha must be positive and finite, got " + std::to_string(alpha));
    }
}

// Relabels cell ids by order of first appearance.
std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& raw) {
    std::vector<std::size_t> out(raw.size());
    std::vector<std::size_t> map;
    std::vector<std::size_t> seen;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto it = std::find(seen.begin(), seen.end(), raw[i]);
        if (it == seen.end()) {
            out[i] = seen.size();
            seen.push_back(raw[i]);
        } else {
            out[i] = static_cast<std::size_t>(it - seen.begin());
        }
    }
    return out;
}

std::size_t count_cells(const std::vector<std::size_t>& labels) {
    std::size_t m = 0;
    for (std::size_t c : labels) m = std::max(m, c + 1);
    return m;
}

// Diameter of each cell of one level.
std::vector<double> cell_diameters(const FiniteMetricSpace& space, const std::vector<std::size_t>& labels) {
    std::vector<double> diam(count_cells(labels), 0.0);
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (labels[i] == labels[j]) diam[labels[i]] = std::max(diam[labels[i]], space(i, j));
        }
    }
    return diam;
}

// Adaptive trapezoid on [a, b]: accept a panel once halving it changes the
// estimate by at most tol.
template <class F>
double adaptive_panel(const F& f, double a, double b, double fa, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = 0.5 * (b - a) * (fa + fb);
    const double halves = 0.25 * (b - a) * (fa + 2.0 * fm + fb);
    if (depth >= 60 || std::abs(halves - whole) <= tol) return halves;
    return adaptive_panel(f, a, m, fa, fm, tol, depth + 1) + adaptive_panel(f, m, b, fm, fb, tol, depth + 1);
}

template <class F>
double adaptive_trapezoid(const F& f, double a, double b, int panels, double rel_tol) {
    const double h = (b - a) / panels;
    std::vector<double> x(panels + 1), fx(panels + 1);
    for (int i = 0; i <= panels; ++i) {
        x[i] = (i == panels) ? b : a + i * h;
        fx[i] = f(x[i]);
    }
    double coarse = 0.0;
    for (int i = 0; i < panels; ++i) coarse += 0.5 * h * (fx[i] + fx[i + 1]);
    if (coarse == 0.0) return 0.0;
    const double tol = rel_tol * std::abs(coarse) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) total += adaptive_panel(f, x[i], x[i + 1], fx[i], fx[i + 1], tol, 0);
    return total;
}

// Enumerates all partitions of {0..n-1} as restricted growth strings.
void enumerate_rgs(std::size_t n, std::vector<std::size_t>& cur, std::size_t max_label,
                   std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == n) {
        out.push_back(cur);
        return;
    }
    for (std::size_t c = 0; c <= max_label + (cur.empty() ? 0 : 1) && c <= n; ++c) {
        if (cur.empty() && c > 0) break;
        cur.push_back(c);
        enumerate_rgs(n, cur, std::max(max_label, c), out);
        cur.pop_back();
    }
}

bool refines(const std::vector<std::size_t>& fine, const std::vector<std::size_t>& coarse) {
    for (std::size_t i = 0; i < fine.size(); ++i) {
        for (std::size_t j = i + 1; j < fine.size(); ++j) {
            if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
        }
    }
    return true;
}

struct ExactSearch {
    const FiniteMetricSpace& space;
    double alpha;
    const std::vector<std::vector<std::size_t>>& partitions;
    std::vector<std::vector<double>> diameters;  // per partition index
    std::vector<std::size_t> cells;               // per partition index
    double best = std::numeric_limits<double>::infinity();

    // partial[i] = accumulated weighted diameters of point i through level k-1.
    void descend(std::size_t k, const std::vector<std::size_t>* parent, const std::vector<double>& partial) {
        const std::size_t n = space.size();
        const double current = *std::max_element(partial.begin(), partial.end());
        if (current >= best) return;
        if (level_budget(k) >= n) {
            // Singletons are admissible from here on and contribute nothing.
            best = current;
            return;
        }
        const double weight = std::pow(2.0, static_cast<double>(k) / alpha);
        for (std::size_t p = 0; p < partitions.size(); ++p) {
            if (cells[p] > level_budget(k)) continue;
            if (parent && !refines(partitions[p], *parent)) continue;
            std::vector<double> next(partial);
            for (std::size_t i = 0; i < n; ++i) next[i] += weight * diameters[p][partitions[p][i]];
            descend(k + 1, &partitions[p], next);
        }
    }
};

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> dist) : n_(n), dist_(std::move(dist)) {
    if (n_ == 0) throw InvalidArgument("FiniteMetricSpace: at least one point required");
    if (dist_.size() != n_ * n_) throw InvalidArgument("FiniteMetricSpace: distance matrix must be n x n");
    double scale = 0.0;
    for (double d : dist_) {
        if (!std::isfinite(d) || d < 0.0) throw InvalidArgument("FiniteMetricSpace: distances must be finite and >= 0");
        scale = std::max(scale, d);
    }
    const double tol = 1e-9 * std::max(scale, 1.0);
    for (std::size_t i = 0; i < n_; ++i) {
        if (dist_[i * n_ + i] != 0.0) throw InvalidArgument("FiniteMetricSpace: nonzero diagonal");
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (std::abs(dist_[i * n_ + j] - dist_[j * n_ + i]) > tol) {
                throw InvalidArgument("FiniteMetricSpace: distance matrix not symmetric");
            }
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t k = 0; k < n_; ++k) {
                if (dist_[i * n_ + j] > dist_[i * n_ + k] + dist_[k * n_ + j] + tol) {
                    throw InvalidArgument("FiniteMetricSpace: triangle inequality violated at (" +
                                          std::to_string(i) + "," + std::to_string(j) + "," +
                                          std::to_string(k) + ")");
                }
            }
        }
    }
}

FiniteMetricSpace FiniteMetricSpace::euclidean(std::span<const double> points, std::size_t dim) {
    if (dim == 0 || points.size() % dim != 0) throw InvalidArgument("euclidean: bad point array shape");
    const std::size_t n = points.size() / dim;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double diff = points[i * dim + c] - points[j * dim + c];
                s += diff * diff;
            }
            d[i * n + j] = d[j * n + i] = std::sqrt(s);
        }
    }
    return FiniteMetricSpace(n, std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::on_line(std::span<const double> xs) {
    return euclidean(xs, 1);
}

double FiniteMetricSpace::diameter() const noexcept {
    return *std::max_element(dist_.begin(), dist_.end());
}

double FiniteMetricSpace::diameter_of(std::span<const std::size_t> subset) const noexcept {
    double d = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = a + 1; b < subset.size(); ++b) d = std::max(d, (*this)(subset[a], subset[b]));
    }
    return d;
}

FiniteMetricSpace FiniteMetricSpace::restrict_to(std::span<const std::size_t> subset) const {
    const std::size_t m = subset.size();
    std::vector<double> d(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (subset[a] >= n_ || subset[b] >= n_) throw InvalidArgument("restrict_to: index out of range");
            d[a * m + b] = (*this)(subset[a], subset[b]);
        }
    }
    return FiniteMetricSpace(m, std::move(d));
}

std::size_t AdmissiblePartitionSequence::cells(std::size_t k) const {
    return count_cells(labels.at(k));
}

std::uint64_t level_budget(std::size_t k) noexcept {
    if (k >= 6) return std::numeric_limits<std::uint64_t>::max();
    return std::uint64_t{1} << (std::uint64_t{1} << k);
}

void check_admissible(const AdmissiblePartitionSequence& seq, std::size_t n_points) {
    if (seq.labels.empty()) throw InvalidArgument("admissible sequence: no levels");
    for (std::size_t k = 0; k < seq.labels.size(); ++k) {
        const auto& lv = seq.labels[k];
        if (lv.size() != n_points) {
            throw InvalidArgument("admissible sequence: level " + std::to_string(k) + " has wrong length");
        }
        if (count_cells(lv) > level_budget(k)) {
            throw InvalidArgument("admissible sequence: level " + std::to_string(k) + " exceeds 2^{2^k} cells");
        }
        if (k > 0 && !refines(lv, seq.labels[k - 1])) {
            throw InvalidArgument("admissible sequence: level " + std::to_string(k) + " does not refine level " +
                                  std::to_string(k - 1));
        }
    }
    const auto& last = seq.labels.back();
    std::vector<std::size_t> sorted(last);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("admissible sequence: final level is not all singletons");
    }
}

bool is_admissible(const AdmissiblePartitionSequence& seq, std::size_t n_points) noexcept {
    try {
        check_admissible(seq, n_points);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

CoveringResult covering_number(const FiniteMetricSpace& space, double eps) {
    if (!(eps >= 0.0)) throw DomainError("covering_number: eps must be >= 0");
    const std::size_t n = space.size();

    if (n <= kExactCoverLimit) {
        std::vector<std::uint32_t> ball(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (space(i, j) <= eps) ball[i] |= (1u << j);
            }
        }
        const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
        std::size_t best = n;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            const auto k = static_cast<std::size_t>(std::popcount(mask));
            if (k >= best) continue;
            std::uint32_t covered = 0;
            for (std::uint32_t m = mask; m; m &= m - 1) covered |= ball[std::countr_zero(m)];
            if (covered == full) best = k;
        }
        return {best, true};
    }

    std::vector<char> covered(n, 0);
    std::size_t remaining = n;
    std::size_t count = 0;
    while (remaining > 0) {
        std::size_t best_center = 0;
        std::size_t best_gain = 0;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t gain = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (!covered[j] && space(c, j) <= eps) ++gain;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best_center = c;
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!covered[j] && space(best_center, j) <= eps) {
                covered[j] = 1;
                --remaining;
            }
        }
        ++count;
    }
    return {count, false};
}

double entropy_integral_gamma_bound(const FiniteMetricSpace& space, double alpha) {
    require_alpha(alpha);
    const double diam = space.diameter();
    if (space.size() == 1 || diam == 0.0) return 0.0;

    // N(eps) only changes at pairwise distances, so tabulate it once.
    std::vector<double> breaks(space.distances());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> log_cover(breaks.size());
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        log_cover[i] = std::pow(std::log(static_cast<double>(covering_number(space, breaks[i]).count)), 1.0 / alpha);
    }
    auto integrand = [&](double eps) {
        auto it = std::upper_bound(breaks.begin(), breaks.end(), eps);
        return log_cover[static_cast<std::size_t>(it - breaks.begin()) - 1];
    };

    const double integral = adaptive_trapezoid(integrand, diam * 1e-6, diam, 256, 1e-6);
    const double scale = std::pow(std::numbers::ln2, 1.0 / alpha) * (1.0 - std::pow(2.0, -1.0 / alpha));
    return integral / scale;
}

AdmissiblePartitionSequence greedy_admissible_sequence(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    AdmissiblePartitionSequence seq;
    std::vector<std::size_t> parent(n, 0);

    for (std::size_t k = 0;; ++k) {
        const std::uint64_t budget = level_budget(k);
        if (budget >= n) {
            std::vector<std::size_t> singletons(n);
            for (std::size_t i = 0; i < n; ++i) singletons[i] = i;
            seq.labels.push_back(std::move(singletons));
            break;
        }

        // One seed centre per parent cell (its lowest-index point), then
        // farthest-point insertion within cells while the budget allows.
        std::vector<std::size_t> centers;
        std::vector<std::size_t> nearest(n);
        std::vector<double> gap(n, std::numeric_limits<double>::infinity());
        std::vector<char> seeded(count_cells(parent), 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!seeded[parent[i]]) {
                seeded[parent[i]] = 1;
                centers.push_back(i);
            }
        }
        auto absorb = [&](std::size_t c) {
            for (std::size_t i = 0; i < n; ++i) {
                if (parent[i] == parent[c] && space(i, c) < gap[i]) {
                    gap[i] = space(i, c);
                    nearest[i] = c;
                }
            }
        };
        for (std::size_t c : centers) absorb(c);
        while (centers.size() < budget) {
            std::size_t far = 0;
            for (std::size_t i = 1; i < n; ++i) {
                if (gap[i] > gap[far]) far = i;
            }
            if (gap[far] == 0.0) break;
            centers.push_back(far);
            absorb(far);
        }

        auto labels = canonical_labels(nearest);
        const bool done = count_cells(labels) == n;
        parent = labels;
        seq.labels.push_back(std::move(labels));
        if (done) break;
    }
    check_admissible(seq, n);
    return seq;
}

double gamma_value(const FiniteMetricSpace& space, const AdmissiblePartitionSequence& seq, double alpha) {
    require_alpha(alpha);
    check_admissible(seq, space.size());
    std::vector<double> total(space.size(), 0.0);
    for (std::size_t k = 0; k < seq.labels.size(); ++k) {
        const auto diam = cell_diameters(space, seq.labels[k]);
        const double weight = std::pow(2.0, static_cast<double>(k) / alpha);
        for (std::size_t i = 0; i < space.size(); ++i) total[i] += weight * diam[seq.labels[k][i]];
    }
    return *std::max_element(total.begin(), total.end());
}

double gamma_exact_small(const FiniteMetricSpace& space, double alpha) {
    require_alpha(alpha);
    const std::size_t n = space.size();
    if (n > kExactGammaLimit) {
        throw InvalidArgument("gamma_exact_small: at most " + std::to_string(kExactGammaLimit) + " points, got " +
                              std::to_string(n));
    }
    std::vector<std::vector<std::size_t>> partitions;
    std::vector<std::size_t> cur;
    enumerate_rgs(n, cur, 0, partitions);

    ExactSearch search{space, alpha, partitions, {}, {}};
    for (const auto& p : partitions) {
        search.diameters.push_back(cell_diameters(space, p));
        search.cells.push_back(count_cells(p));
    }
    search.descend(0, nullptr, std::vector<double>(n, 0.0));
    return search.best;
}

double gamma_ball_bound(const BallSpec& ball, int alpha, BallBoundForm form) {
    if (ball.dimension < 1) throw DomainError("gamma_ball_bound: dimension must be >= 1");
    if (!(ball.diameter >= 0.0)) throw DomainError("gamma_ball_bound: diameter must be >= 0");
    const double p = static_cast<double>(ball.dimension);
    constexpr double ln2 = std::numbers::ln2;
    if (alpha == 1) return ln2 * ln2 * p * ball.diameter;
    if (alpha == 2) {
        const double shrink = 1.0 - 1.0 / std::sqrt(2.0);
        const double factor = form == BallBoundForm::Verbatim ? shrink : 1.0 / shrink;
        return 2.0 / std::sqrt(ln2) * factor * std::sqrt(p) * ball.diameter;
    }
    throw DomainError("gamma_ball_bound: only alpha in {1, 2} is supported, got " + std::to_string(alpha));
}

}  // namespace conc::chaining
