#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace astroturf {

// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }

    void push_row(std::span<const double> r) {
        if (rows == 0 && cols == 0) cols = r.size();
        data.insert(data.end(), r.begin(), r.end());
        ++rows;
    }

    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix m(idx.size(), cols);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = row(idx[i]);
            std::copy(src.begin(), src.end(), m.row(i).begin());
        }
        return m;
    }
};

}  // namespace astroturf
