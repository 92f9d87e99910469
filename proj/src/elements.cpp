#include "perconv/elements.hpp"
#include "perconv/errors.hpp"

#include <charconv>
#include <mutex>
#include <unordered_map>

namespace perconv {
namespace {

// Version 1 of the embedded grid table. Regenerate with tools/make_element_table.py.
constexpr std::string_view kElementTable = R"csv(
symbol,atomic_number,row,col,block
H,1,0,0,S
He,2,0,17,S
Li,3,1,0,S
Be,4,1,1,S
B,5,1,12,P
C,6,1,13,P
N,7,1,14,P
O,8,1,15,P
F,9,1,16,P
Ne,10,1,17,P
Na,11,2,0,S
Mg,12,2,1,S
Al,13,2,12,P
Si,14,2,13,P
P,15,2,14,P
S,16,2,15,P
Cl,17,2,16,P
Ar,18,2,17,P
K,19,3,0,S
Ca,20,3,1,S
Sc,21,3,2,D
Ti,22,3,3,D
V,23,3,4,D
Cr,24,3,5,D
Mn,25,3,6,D
Fe,26,3,7,D
Co,27,3,8,D
Ni,28,3,9,D
Cu,29,3,10,D
Zn,30,3,11,D
Ga,31,3,12,P
Ge,32,3,13,P
As,33,3,14,P
Se,34,3,15,P
Br,35,3,16,P
Kr,36,3,17,P
Rb,37,4,0,S
Sr,38,4,1,S
Y,39,4,2,D
Zr,40,4,3,D
Nb,41,4,4,D
Mo,42,4,5,D
Tc,43,4,6,D
Ru,44,4,7,D
Rh,45,4,8,D
Pd,46,4,9,D
Ag,47,4,10,D
Cd,48,4,11,D
In,49,4,12,P
Sn,50,4,13,P
Sb,51,4,14,P
Te,52,4,15,P
I,53,4,16,P
Xe,54,4,17,P
Cs,55,5,0,S
Ba,56,5,1,S
La,57,7,3,F
Ce,58,7,4,F
Pr,59,7,5,F
Nd,60,7,6,F
Pm,61,7,7,F
Sm,62,7,8,F
Eu,63,7,9,F
Gd,64,7,10,F
Tb,65,7,11,F
Dy,66,7,12,F
Ho,67,7,13,F
Er,68,7,14,F
Tm,69,7,15,F
Yb,70,7,16,F
Lu,71,7,17,F
Hf,72,5,3,D
Ta,73,5,4,D
W,74,5,5,D
Re,75,5,6,D
Os,76,5,7,D
Ir,77,5,8,D
Pt,78,5,9,D
Au,79,5,10,D
Hg,80,5,11,D
Tl,81,5,12,P
Pb,82,5,13,P
Bi,83,5,14,P
Po,84,5,15,P
At,85,5,16,P
Rn,86,5,17,P
Fr,87,6,0,S
Ra,88,6,1,S
Ac,89,8,3,F
Th,90,8,4,F
Pa,91,8,5,F
U,92,8,6,F
Np,93,8,7,F
Pu,94,8,8,F
Am,95,8,9,F
Cm,96,8,10,F
Bk,97,8,11,F
Cf,98,8,12,F
Es,99,8,13,F
Fm,100,8,14,F
Md,101,8,15,F
No,102,8,16,F
Lr,103,8,17,F
Rf,104,6,3,D
Db,105,6,4,D
Sg,106,6,5,D
Bh,107,6,6,D
Hs,108,6,7,D
Mt,109,6,8,D
Ds,110,6,9,D
Rg,111,6,10,D
Cn,112,6,11,D
Nh,113,6,12,P
Fl,114,6,13,P
Mc,115,6,14,P
Lv,116,6,15,P
Ts,117,6,16,P
Og,118,6,17,P
)csv";

Block parse_block(std::string_view s) {
    if (s == "S") return Block::S;
    if (s == "P") return Block::P;
    if (s == "D") return Block::D;
    if (s == "F") return Block::F;
    throw DataError("bad block tag in element table: " + std::string(s));
}

struct Registry {
    std::vector<ElementRecord> records;
    std::unordered_map<std::string_view, int> by_symbol; // value = index
    std::array<int, kGridRows * kGridCols> by_cell;      // -1 = vacant

    Registry() {
        by_cell.fill(-1);
        std::string_view csv = element_table_csv();
        std::size_t pos = 0;
        bool header = true;
        while (pos < csv.size()) {
            std::size_t eol = csv.find('\n', pos);
            if (eol == std::string_view::npos) eol = csv.size();
            std::string_view line = csv.substr(pos, eol - pos);
            pos = eol + 1;
            if (line.empty()) continue;
            if (header) { header = false; continue; }
            ElementRecord rec;
            int field = 0;
            std::size_t start = 0;
            for (std::size_t i = 0; i <= line.size(); ++i) {
                if (i == line.size() || line[i] == ',') {
                    std::string_view tok = line.substr(start, i - start);
                    switch (field) {
                    case 0: rec.symbol = std::string(tok); break;
                    case 1: std::from_chars(tok.begin(), tok.end(), rec.atomic_number); break;
                    case 2: std::from_chars(tok.begin(), tok.end(), rec.row); break;
                    case 3: std::from_chars(tok.begin(), tok.end(), rec.col); break;
                    case 4: rec.block = parse_block(tok); break;
                    }
                    ++field;
                    start = i + 1;
                }
            }
            if (field != 5) throw DataError("malformed element table line: " + std::string(line));
            records.push_back(std::move(rec));
        }
        if (records.size() != kElementCount)
            throw DataError("element table must hold 118 records");
        for (int i = 0; i < static_cast<int>(records.size()); ++i) {
            const auto& r = records[i];
            by_symbol.emplace(records[i].symbol, i);
            int cell = r.row * kGridCols + r.col;
            if (by_cell[cell] != -1)
                throw DataError("duplicate grid cell in element table: " + r.symbol);
            by_cell[cell] = i;
        }
    }
};

const Registry& registry() {
    static const Registry reg;
    return reg;
}

} // namespace

const char* block_name(Block b) {
    switch (b) {
    case Block::S: return "s";
    case Block::P: return "p";
    case Block::D: return "d";
    case Block::F: return "f";
    }
    return "?";
}

std::string_view element_table_csv() {
    std::string_view t = kElementTable;
    if (!t.empty() && t.front() == '\n') t.remove_prefix(1);
    return t;
}

const ElementRecord& element(std::string_view symbol) {
    const auto& reg = registry();
    auto it = reg.by_symbol.find(symbol);
    if (it == reg.by_symbol.end()) throw UnknownElement(std::string(symbol));
    return reg.records[it->second];
}

const ElementRecord& element(int atomic_number) {
    if (atomic_number < 1 || atomic_number > kElementCount)
        throw UnknownElement("Z=" + std::to_string(atomic_number));
    return registry().records[atomic_number - 1];
}

std::optional<int> atomic_number_of(std::string_view symbol) {
    const auto& reg = registry();
    auto it = reg.by_symbol.find(symbol);
    if (it == reg.by_symbol.end()) return std::nullopt;
    return reg.records[it->second].atomic_number;
}

const ElementRecord* element_at(int row, int col) {
    if (row < 0 || row >= kGridRows || col < 0 || col >= kGridCols) return nullptr;
    int idx = registry().by_cell[row * kGridCols + col];
    return idx < 0 ? nullptr : &registry().records[idx];
}

const std::vector<ElementRecord>& all_elements() {
    return registry().records;
}

} // namespace perconv
