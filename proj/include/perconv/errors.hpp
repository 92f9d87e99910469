#pragma once

#include <stdexcept>
#include <string>

namespace perconv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownElement : Error {
    std::string symbol;
    explicit UnknownElement(std::string sym)
        : Error("unknown element symbol: " + sym), symbol(std::move(sym)) {}
};

struct FormulaSyntaxError : Error {
    std::size_t position;
    FormulaSyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct EmptyComposition : Error {
    EmptyComposition() : Error("composition is empty") {}
};

struct InvalidCell : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ModelFormatError : Error {
    using Error::Error;
};

struct NonFiniteLoss : Error {
    using Error::Error;
};

} // namespace perconv
