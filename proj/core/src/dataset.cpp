#include "cges/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cges/errors.hpp"
#include "cges/serialize.hpp"

namespace cges {

Dataset::Dataset(Eigen::MatrixXd values, std::vector<Variable> variables)
    : values_(std::move(values)), variables_(std::move(variables)) {
    validate();
}

void Dataset::validate() const {
    if (values_.rows() < 2) throw Error("Dataset: need at least 2 rows");
    int expected_offset = 0;
    for (const auto& var : variables_) {
        if (var.dim < 1) throw Error("Dataset: variable dim must be positive");
        if (var.offset != expected_offset)
            throw Error("Dataset: variable spans must be contiguous and ordered");
        expected_offset += var.dim;
    }
    if (expected_offset != values_.cols())
        throw Error("Dataset: spans must cover all columns");
    if (!values_.allFinite()) throw Error("Dataset: non-finite value");
}

int Dataset::find_variable(const std::string& name) const {
    for (int i = 0; i < variable_count(); ++i)
        if (variables_[i].name == name) return i;
    return -1;
}

Eigen::MatrixXd Dataset::variable_values(int index) const {
    const Variable& var = variables_.at(index);
    return values_.middleCols(var.offset, var.dim);
}

Eigen::MatrixXd Dataset::columns_for(
    const std::vector<int>& variable_indices) const {
    const int width = width_of(variable_indices);
    Eigen::MatrixXd out(rows(), width);
    int at = 0;
    for (int index : variable_indices) {
        const Variable& var = variables_.at(index);
        out.middleCols(at, var.dim) = values_.middleCols(var.offset, var.dim);
        at += var.dim;
    }
    return out;
}

int Dataset::width_of(const std::vector<int>& variable_indices) const {
    int width = 0;
    for (int index : variable_indices) width += variables_.at(index).dim;
    return width;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, delim)) out.push_back(cell);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

}  // namespace

Dataset Dataset::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("Dataset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("Dataset: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line, ',');
    if (header.empty()) throw ParseError("Dataset: empty header in " + path);

    // Reassemble variable spans from the dot convention.
    std::vector<Variable> vars;
    for (const auto& column : header) {
        const auto dot = column.rfind('.');
        std::string base = column;
        bool continues = false;
        if (dot != std::string::npos && dot + 1 < column.size()) {
            const std::string suffix = column.substr(dot + 1);
            if (!suffix.empty() &&
                suffix.find_first_not_of("0123456789") == std::string::npos) {
                base = column.substr(0, dot);
                continues = !vars.empty() && vars.back().name == base;
                if (!continues && suffix != "0")
                    throw ParseError("Dataset: component columns of '" + base +
                                     "' out of order in " + path);
            }
        }
        if (continues) {
            ++vars.back().dim;
        } else {
            Variable var;
            var.name = base;
            var.offset = vars.empty() ? 0 : vars.back().offset + vars.back().dim;
            vars.push_back(var);
        }
    }

    std::vector<std::vector<double>> data;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line, ',');
        if (cells.size() != header.size())
            throw ParseError("Dataset: row width mismatch in " + path);
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                row[i] = std::stod(cells[i]);
            } catch (const std::exception&) {
                throw ParseError("Dataset: bad number '" + cells[i] + "' in " +
                                 path);
            }
        }
        data.push_back(std::move(row));
    }
    Eigen::MatrixXd values(static_cast<int>(data.size()),
                           static_cast<int>(header.size()));
    for (int r = 0; r < values.rows(); ++r)
        for (int c = 0; c < values.cols(); ++c) values(r, c) = data[r][c];
    return Dataset(std::move(values), std::move(vars));
}

void Dataset::write_csv(const std::string& path) const {
    std::ostringstream out;
    bool first = true;
    for (const auto& var : variables_) {
        for (int k = 0; k < var.dim; ++k) {
            if (!first) out << ',';
            first = false;
            if (var.dim == 1)
                out << var.name;
            else
                out << var.name << '.' << k;
        }
    }
    out << '\n';
    char buffer[64];
    for (int r = 0; r < rows(); ++r) {
        for (int c = 0; c < cols(); ++c) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", values_(r, c));
            if (c) out << ',';
            out << buffer;
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

}  // namespace cges
