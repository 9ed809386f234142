#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <might/model.hpp>
#include <might/rng.hpp>

namespace test {

using might::Index;
using might::Matrix;
using might::Vector;

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
    might::CounterRng rng(seed);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

inline might::DatasetCollection noise_collection(std::vector<Index> n, Index p,
                                                 std::uint64_t seed) {
    std::vector<Matrix> data;
    for (std::size_t k = 0; k < n.size(); ++k) data.push_back(gaussian(n[k], p, seed * 131 + k));
    return might::DatasetCollection(std::move(data));
}

// Rows drawn from N(0, theta^{-1}).
inline Matrix sample_precision(const Matrix& theta, Index rows, std::uint64_t seed) {
    const Matrix sigma = theta.inverse();
    const Matrix L = sigma.llt().matrixL();
    return gaussian(rows, theta.rows(), seed) * L.transpose();
}

inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index i = 0; i < a.size(); ++i)
        if (a.data()[i] != b.data()[i]) return false;
    return true;
}

// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("might_unit_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace test
