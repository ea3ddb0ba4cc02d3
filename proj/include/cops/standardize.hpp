#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "cops/types.hpp"

namespace cops {

// Per-column z-score transform with statistics frozen at fit time. Columns
// with (population) standard deviation below 1e-12 keep scale 1 so constant
// features pass through centered instead of dividing by zero.
struct Standardizer {
    Vector mean;
    Vector scale;

    static Standardizer fit(const Matrix& x) {
        if (x.rows() == 0)
            throw std::invalid_argument("Standardizer: cannot fit on an empty matrix");
        Standardizer s;
        s.mean = x.colwise().mean();
        s.scale.resize(x.cols());
        for (Index c = 0; c < x.cols(); ++c) {
            double var = (x.col(c).array() - s.mean[c]).square().sum() /
                         static_cast<double>(x.rows());
            double sd = std::sqrt(var);
            s.scale[c] = sd < 1e-12 ? 1.0 : sd;
        }
        return s;
    }

    static Standardizer identity(Index cols) {
        Standardizer s;
        s.mean = Vector::Zero(cols);
        s.scale = Vector::Ones(cols);
        return s;
    }

    Index cols() const { return mean.size(); }

    Matrix apply(const Matrix& x) const {
        if (x.cols() != cols())
            throw std::invalid_argument("Standardizer: matrix has " + std::to_string(x.cols()) +
                                        " columns, statistics cover " + std::to_string(cols()));
        Matrix out = x;
        out.rowwise() -= mean.transpose();
        out.array().rowwise() /= scale.transpose().array();
        return out;
    }
};

// Appends the constant-1 intercept column. It is appended after
// standardization (so it survives centering) and is regularized like any
// other coefficient.
inline Matrix append_bias(const Matrix& x) {
    Matrix out(x.rows(), x.cols() + 1);
    out.leftCols(x.cols()) = x;
    out.col(x.cols()).setOnes();
    return out;
}

} // namespace cops
