#pragma once

#include <Eigen/Core>
#include <vector>

namespace cges {

/// Exact nearest-neighbor index over the rows of a point matrix. Queries
/// return every index attaining the minimum distance (excluding the query row
/// itself) so that tie handling matches the brute-force scan bit for bit.
class KdTree {
public:
    explicit KdTree(const Eigen::MatrixXd& points, int leaf_size = 16);

    /// All j != self_index minimizing squared distance to `points.row(self_index)`.
    std::vector<int> nearest_ties(int self_index) const;

private:
    struct Node {
        int left = -1, right = -1;   // children; -1 for leaf
        int begin = 0, end = 0;      // index range into order_
        int axis = 0;
        double split = 0.0;
        Eigen::VectorXd lower, upper;  // bounding box
    };

    int build(int begin, int end);
    void search(int node_index, const Eigen::RowVectorXd& query, int self_index,
                double& best, std::vector<int>& ties) const;

    const Eigen::MatrixXd points_;
    int leaf_size_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// Brute-force variant of KdTree::nearest_ties on an arbitrary matrix.
std::vector<int> nearest_ties_bruteforce(const Eigen::MatrixXd& points,
                                         int self_index);

}  // namespace cges
