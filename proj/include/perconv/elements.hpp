#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perconv {

// The table is laid out on a 9x18 grid: rows 0-6 are periods 1-7,
// row 7 holds La..Lu at columns 3-17, row 8 holds Ac..Lr at columns 3-17.
inline constexpr int kGridRows = 9;
inline constexpr int kGridCols = 18;
inline constexpr int kElementCount = 118;

enum class Block : std::uint8_t { S, P, D, F };

inline constexpr int kBlockCount = 4;

const char* block_name(Block b);

struct ElementRecord {
    std::string symbol;
    int atomic_number = 0;
    int row = 0;
    int col = 0;
    Block block = Block::S;
};

// Throws UnknownElement.
const ElementRecord& element(std::string_view symbol);

const ElementRecord& element(int atomic_number);

std::optional<int> atomic_number_of(std::string_view symbol);

// Element occupying a grid cell, if any.
const ElementRecord* element_at(int row, int col);

const std::vector<ElementRecord>& all_elements();

// Raw embedded table, CSV with header `symbol,atomic_number,row,col,block`.
std::string_view element_table_csv();

} // namespace perconv
