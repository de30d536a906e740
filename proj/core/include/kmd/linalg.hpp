#pragma once

#include <vector>

#include "kmd/laurent.hpp"

namespace kmd {

/// Dense rectangular matrix over Q(v).
class ExactMatrix {
public:
    ExactMatrix() : rows_(0), cols_(0) {}
    ExactMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    static ExactMatrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    RationalFn& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const RationalFn& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    ExactMatrix operator*(const ExactMatrix& o) const;
    ExactMatrix operator+(const ExactMatrix& o) const;
    ExactMatrix operator-(const ExactMatrix& o) const;
    ExactMatrix scaled(const RationalFn& s) const;
    ExactMatrix transpose() const;
    bool is_zero() const;
    bool operator==(const ExactMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

    std::vector<RationalFn> apply(const std::vector<RationalFn>& x) const;

    size_t rank() const;

    struct Solution {
        bool consistent = false;
        std::vector<RationalFn> particular;                // one solution, free vars = 0
        std::vector<std::vector<RationalFn>> kernel;       // basis of the null space
        size_t rank = 0;
        std::vector<size_t> pivot_cols;
    };

    /// Exact solve of M x = rhs by fraction-free (Bareiss) forward elimination
    /// on the denominator-cleared augmented matrix, then exact back substitution.
    Solution solve(const std::vector<RationalFn>& rhs) const;

    std::vector<std::vector<RationalFn>> kernel() const;

    /// Column-stacked inverse application: solve M X = B for X; throws Inconsistent
    /// when M is not invertible.
    ExactMatrix solve_matrix(const ExactMatrix& b) const;

private:
    size_t rows_, cols_;
    std::vector<RationalFn> data_;
};

}  // namespace kmd
