#pragma once

#include <map>
#include <string>
#include <string_view>

namespace perconv {

enum class Representation { Absolute, Relative };

// Element symbol -> stoichiometric count. Counts are strictly positive;
// in the Relative representation they sum to 1.
struct Composition {
    std::map<std::string, double> entries;
    Representation representation = Representation::Absolute;

    double total() const;
    bool empty() const { return entries.empty(); }

    // Canonical key for composition-level deduplication: sorted
    // symbol:count pairs, counts printed with enough digits to
    // distinguish doped stoichiometries.
    std::string key() const;
};

// Grammar: sequence of (ElementSymbol [number]) and parenthesized groups
// with an optional trailing multiplier. Numbers are non-negative decimals;
// an omitted number means 1. Nesting is arbitrary.
// Throws FormulaSyntaxError, UnknownElement.
Composition parse_formula(std::string_view text);

// Divides every count by the total. Throws EmptyComposition.
Composition to_relative(const Composition& c);

} // namespace perconv
