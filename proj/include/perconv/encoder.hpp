#pragma once

#include "perconv/elements.hpp"
#include "perconv/formula.hpp"

#include <array>
#include <string>

namespace perconv {

// 4-channel periodic-table image of a composition. Channel order is
// fixed as (s, p, d, f); shape is [4, 9, 18], row-major.
struct TableTensor {
    static constexpr int kChannels = kBlockCount;
    static constexpr int kSize = kChannels * kGridRows * kGridCols;

    std::array<double, kSize> data{};

    double& at(int channel, int row, int col) {
        return data[(channel * kGridRows + row) * kGridCols + col];
    }
    double at(int channel, int row, int col) const {
        return data[(channel * kGridRows + row) * kGridCols + col];
    }
    double sum() const;
};

// Places each count at (block, row, col) of its element.
// Throws EmptyComposition, UnknownElement.
TableTensor encode(const Composition& c);

// Inverse of encode on its image; always returns an Absolute composition.
// Throws InvalidCell if a nonzero entry sits on a vacant cell or on a cell
// whose element belongs to a different block; EmptyComposition if all-zero.
Composition decode(const TableTensor& t);

// JSON document {shape, channel_names, values} for the encode subcommand.
std::string to_json(const TableTensor& t);

} // namespace perconv
