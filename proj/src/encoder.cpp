#include "perconv/encoder.hpp"

#include "perconv/errors.hpp"

#include <nlohmann/json.hpp>

namespace perconv {

double TableTensor::sum() const {
    double s = 0.0;
    for (double v : data) s += v;
    return s;
}

TableTensor encode(const Composition& c) {
    if (c.empty()) throw EmptyComposition();
    TableTensor t;
    for (const auto& [sym, n] : c.entries) {
        const ElementRecord& rec = element(sym);
        t.at(static_cast<int>(rec.block), rec.row, rec.col) += n;
    }
    return t;
}

Composition decode(const TableTensor& t) {
    Composition c;
    for (int ch = 0; ch < TableTensor::kChannels; ++ch) {
        for (int r = 0; r < kGridRows; ++r) {
            for (int col = 0; col < kGridCols; ++col) {
                double v = t.at(ch, r, col);
                if (v == 0.0) continue;
                const ElementRecord* rec = element_at(r, col);
                if (!rec)
                    throw InvalidCell("nonzero value on vacant cell (" +
                                      std::to_string(r) + "," + std::to_string(col) + ")");
                if (static_cast<int>(rec->block) != ch)
                    throw InvalidCell("value for " + rec->symbol + " in " +
                                      block_name(static_cast<Block>(ch)) + "-channel but element is " +
                                      block_name(rec->block) + "-block");
                c.entries[rec->symbol] += v;
            }
        }
    }
    if (c.empty()) throw EmptyComposition();
    return c;
}

std::string to_json(const TableTensor& t) {
    nlohmann::json j;
    j["shape"] = {TableTensor::kChannels, kGridRows, kGridCols};
    j["channel_names"] = {"s", "p", "d", "f"};
    j["values"] = t.data;
    return j.dump();
}

} // namespace perconv
