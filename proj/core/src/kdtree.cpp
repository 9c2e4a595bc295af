#include "cges/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace cges {

std::vector<int> nearest_ties_bruteforce(const Eigen::MatrixXd& points,
                                         int self_index) {
    const int n = static_cast<int>(points.rows());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> ties;
    for (int j = 0; j < n; ++j) {
        if (j == self_index) continue;
        const double d = (points.row(j) - points.row(self_index)).squaredNorm();
        if (d < best) {
            best = d;
            ties.clear();
            ties.push_back(j);
        } else if (d == best) {
            ties.push_back(j);
        }
    }
    return ties;
}

KdTree::KdTree(const Eigen::MatrixXd& points, int leaf_size)
    : points_(points), leaf_size_(std::max(1, leaf_size)) {
    order_.resize(points_.rows());
    std::iota(order_.begin(), order_.end(), 0);
    if (!order_.empty()) root_ = build(0, static_cast<int>(order_.size()));
}

int KdTree::build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    const int dim = static_cast<int>(points_.cols());
    node.lower = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::infinity());
    node.upper = Eigen::VectorXd::Constant(dim, -std::numeric_limits<double>::infinity());
    for (int i = begin; i < end; ++i) {
        node.lower = node.lower.cwiseMin(points_.row(order_[i]).transpose());
        node.upper = node.upper.cwiseMax(points_.row(order_[i]).transpose());
    }
    if (end - begin > leaf_size_) {
        int axis = 0;
        (node.upper - node.lower).maxCoeff(&axis);
        if (node.upper[axis] > node.lower[axis]) {
            node.axis = axis;
            const int mid = begin + (end - begin) / 2;
            std::nth_element(order_.begin() + begin, order_.begin() + mid,
                             order_.begin() + end, [&](int a, int b) {
                                 return points_(a, axis) < points_(b, axis);
                             });
            node.split = points_(order_[mid], axis);
            const int self = static_cast<int>(nodes_.size());
            nodes_.push_back(node);
            const int left = build(begin, mid);
            const int right = build(mid, end);
            nodes_[self].left = left;
            nodes_[self].right = right;
            return self;
        }
        // All points identical along every axis: keep as a leaf.
    }
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    return self;
}

void KdTree::search(int node_index, const Eigen::RowVectorXd& query,
                    int self_index, double& best, std::vector<int>& ties) const {
    const Node& node = nodes_[node_index];
    // Lower bound of squared distance from query to the node's box.
    double bound = 0.0;
    for (int d = 0; d < query.size(); ++d) {
        double delta = 0.0;
        if (query[d] < node.lower[d])
            delta = node.lower[d] - query[d];
        else if (query[d] > node.upper[d])
            delta = query[d] - node.upper[d];
        bound += delta * delta;
    }
    if (bound > best) return;  // equal bound kept: ties must be collected

    if (node.left < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int j = order_[i];
            if (j == self_index) continue;
            const double d = (points_.row(j) - query).squaredNorm();
            if (d < best) {
                best = d;
                ties.clear();
                ties.push_back(j);
            } else if (d == best) {
                ties.push_back(j);
            }
        }
        return;
    }
    // Nearer child first for better pruning.
    const bool left_first = query[node.axis] < node.split;
    search(left_first ? node.left : node.right, query, self_index, best, ties);
    search(left_first ? node.right : node.left, query, self_index, best, ties);
}

std::vector<int> KdTree::nearest_ties(int self_index) const {
    std::vector<int> ties;
    if (points_.rows() < 2) return ties;
    double best = std::numeric_limits<double>::infinity();
    const Eigen::RowVectorXd query = points_.row(self_index);
    search(root_, query, self_index, best, ties);
    std::sort(ties.begin(), ties.end());
    return ties;
}

}  // namespace cges
