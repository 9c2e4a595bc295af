#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace cges {

/// A named variable occupying a contiguous block of columns. dim > 1 means a
/// multi-dimensional node.
struct Variable {
    std::string name;
    int offset = 0;
    int dim = 1;
};

/// n-row sample matrix plus the variable -> column-span mapping. Spans are
/// disjoint, contiguous, in order, and cover all columns; all values finite.
class Dataset {
public:
    Dataset() = default;
    Dataset(Eigen::MatrixXd values, std::vector<Variable> variables);

    int rows() const { return static_cast<int>(values_.rows()); }
    int cols() const { return static_cast<int>(values_.cols()); }
    int variable_count() const { return static_cast<int>(variables_.size()); }

    const Variable& variable(int index) const { return variables_.at(index); }
    const std::vector<Variable>& variables() const { return variables_; }
    /// Index of the variable with this name; -1 when absent.
    int find_variable(const std::string& name) const;

    const Eigen::MatrixXd& values() const { return values_; }
    /// The column block of one variable.
    Eigen::MatrixXd variable_values(int index) const;
    /// Concatenated column blocks of several variables, in the given order.
    Eigen::MatrixXd columns_for(const std::vector<int>& variable_indices) const;

    /// Sum of dims over the given variables.
    int width_of(const std::vector<int>& variable_indices) const;

    /// Delimiter-separated text with a header row; a variable `v` with
    /// dim > 1 is stored as columns `v.0, v.1, ...` and reassembled by the
    /// reader from that dot convention.
    static Dataset read_csv(const std::string& path);
    void write_csv(const std::string& path) const;

private:
    void validate() const;

    Eigen::MatrixXd values_;
    std::vector<Variable> variables_;
};

}  // namespace cges
