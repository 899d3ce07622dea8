#pragma once

#include <cstdint>
#include <vector>

namespace xbar {

// Dense binary matrix, row-major. Row 0 is the top of the array (farthest
// from the ADC); row rows-1 sits next to the ADC.
struct BitMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> bits;

    BitMatrix() = default;
    BitMatrix(int r, int c) : rows(r), cols(c), bits(static_cast<std::size_t>(r) * c, 0) {}

    std::uint8_t& at(int r, int c) { return bits[static_cast<std::size_t>(r) * cols + c]; }
    std::uint8_t at(int r, int c) const { return bits[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const BitMatrix& o) const {
        return rows == o.rows && cols == o.cols && bits == o.bits;
    }
};

// Integer weight matrix before bit-slicing, row-major.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<long long> v;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0) {}

    long long& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    long long at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
};

}  // namespace xbar
