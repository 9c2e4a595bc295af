#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "cges/dataset.hpp"

namespace test_util {

/// Dataset with one 1-d variable per column, named x0, x1, ...
inline cges::Dataset make_dataset(const std::vector<Eigen::VectorXd>& columns) {
    Eigen::MatrixXd values(columns.at(0).size(),
                           static_cast<int>(columns.size()));
    std::vector<cges::Variable> vars;
    for (int c = 0; c < values.cols(); ++c) {
        values.col(c) = columns[c];
        vars.push_back({"x" + std::to_string(c), c, 1});
    }
    return cges::Dataset(std::move(values), std::move(vars));
}

inline Eigen::VectorXd to_vector(std::initializer_list<double> values) {
    Eigen::VectorXd out(static_cast<int>(values.size()));
    int i = 0;
    for (double v : values) out[i++] = v;
    return out;
}

}  // namespace test_util
