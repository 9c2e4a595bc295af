#include "cges/measures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cges/errors.hpp"
#include "cges/kdtree.hpp"
#include "cges/rng.hpp"

namespace cges {

namespace {

constexpr int kBruteForceLimit = 4096;

std::uint64_t query_seed(std::uint64_t seed, std::uint64_t tag, int x, int y,
                         const std::vector<int>& z) {
    std::uint64_t s = mix_seed(seed, tag);
    s = mix_seed(s, static_cast<std::uint64_t>(x) + 1);
    s = mix_seed(s, static_cast<std::uint64_t>(y) + 1);
    for (int v : z) s = mix_seed(s, static_cast<std::uint64_t>(v) + 1);
    return s;
}

/// 1-based ranks of v with ties broken uniformly at random.
std::vector<int> random_tie_ranks(const Eigen::VectorXd& v, Rng& rng) {
    const int n = static_cast<int>(v.size());
    std::vector<int> indices = rng.permutation(n);
    std::stable_sort(indices.begin(), indices.end(),
                     [&](int a, int b) { return v[a] < v[b]; });
    std::vector<int> ranks(n);
    for (int k = 0; k < n; ++k) ranks[indices[k]] = k + 1;
    return ranks;
}

/// Nearest-neighbor index per row, ties resolved uniformly at random.
std::vector<int> nearest_neighbors(const Eigen::MatrixXd& points, Rng& rng) {
    const int n = static_cast<int>(points.rows());
    std::vector<int> out(n);
    if (n <= kBruteForceLimit) {
        for (int i = 0; i < n; ++i) {
            const std::vector<int> ties = nearest_ties_bruteforce(points, i);
            out[i] = ties[rng.below(ties.size())];
        }
    } else {
        const KdTree tree(points);
        for (int i = 0; i < n; ++i) {
            const std::vector<int> ties = tree.nearest_ties(i);
            out[i] = ties[rng.below(ties.size())];
        }
    }
    return out;
}

}  // namespace

RcdResult rcd_statistic(const MeasureContext& ctx, int x, int y,
                        const std::vector<int>& z) {
    const Dataset& data = ctx.dataset;
    if (data.variable(y).dim != 1)
        throw Error("rcd: response variable must be one-dimensional");
    const int n = data.rows();
    if (n < 3) throw Error("rcd: need at least 3 rows");

    Rng rng(query_seed(ctx.seed, /*tag=*/0x524344, x, y, z));
    const Eigen::VectorXd yv = data.variable_values(y).col(0);
    const std::vector<int> ranks = random_tie_ranks(yv, rng);
    const Eigen::MatrixXd xm = data.variable_values(x);

    double numerator = 0.0;
    double denominator = 0.0;
    if (z.empty()) {
        // Unconditional variant: T = sum_i (n*min(R_i, R_M(i)) - L_i^2)
        //                            / sum_i L_i (n - L_i),
        // with M(i) the nearest neighbor of x_i and L_i = #{j : y_j >= y_i}.
        const std::vector<int> m = nearest_neighbors(xm, rng);
        std::vector<int> bigger(n);
        for (int i = 0; i < n; ++i) {
            int count = 0;
            for (int j = 0; j < n; ++j)
                if (yv[j] >= yv[i]) ++count;
            bigger[i] = count;
        }
        for (int i = 0; i < n; ++i) {
            const double li = bigger[i];
            numerator += static_cast<double>(n) * std::min(ranks[i], ranks[m[i]]) - li * li;
            denominator += li * (static_cast<double>(n) - li);
        }
    } else {
        const Eigen::MatrixXd zm = data.columns_for(z);
        Eigen::MatrixXd xz(n, xm.cols() + zm.cols());
        xz << xm, zm;
        const std::vector<int> nn_z = nearest_neighbors(zm, rng);
        const std::vector<int> nn_xz = nearest_neighbors(xz, rng);
        for (int i = 0; i < n; ++i) {
            numerator += std::min(ranks[i], ranks[nn_xz[i]]) -
                         std::min(ranks[i], ranks[nn_z[i]]);
            denominator += ranks[i] - std::min(ranks[i], ranks[nn_z[i]]);
        }
    }
    if (denominator == 0.0)
        throw DegenerateDenominator("rcd: zero denominator (constant response)");
    RcdResult result;
    result.raw = numerator / denominator;
    result.value = std::clamp(result.raw, 0.0, 1.0);
    return result;
}

double OracleMeasure::evaluate(int x, int y, const std::vector<int>& z) const {
    const std::set<int> zs(z.begin(), z.end());
    return d_separated(truth_, x, y, zs) ? 0.0 : 1.0;
}

double gauss_partial_corr(const MeasureContext& ctx, int x, int y,
                          const std::vector<int>& z) {
    const Dataset& data = ctx.dataset;
    if (data.variable(x).dim != 1 || data.variable(y).dim != 1)
        throw Error("pcorr: x and y must be one-dimensional");
    const int n = data.rows();
    const int zw = data.width_of(z);
    if (n <= zw + 2) throw Error("pcorr: sample too small for conditioning set");

    Eigen::VectorXd xv = data.variable_values(x).col(0);
    Eigen::VectorXd yv = data.variable_values(y).col(0);
    if (!z.empty()) {
        Eigen::MatrixXd design(n, zw + 1);
        design.col(0).setOnes();
        design.rightCols(zw) = data.columns_for(z);
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < design.cols())
            throw SingularDesign("pcorr: conditioning design is rank deficient");
        xv -= design * qr.solve(xv);
        yv -= design * qr.solve(yv);
    }
    const double mx = xv.mean();
    const double my = yv.mean();
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = xv[i] - mx;
        const double b = yv[i] - my;
        cov += a * b;
        vx += a * a;
        vy += b * b;
    }
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return (cov * cov) / (vx * vy);
}

}  // namespace cges
