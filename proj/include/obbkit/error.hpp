#pragma once

#include <stdexcept>
#include <string>

namespace obbkit {

enum class Errc {
    EmptyInput,
    InvalidCoordinate,
    DegenerateHull,
    DegenerateBox,
    InfeasibleConfig,
    ParseError,
    InvalidArgument,
};

/// Exception carrying a machine-checkable error code alongside the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::InvalidCoordinate: return "InvalidCoordinate";
        case Errc::DegenerateHull: return "DegenerateHull";
        case Errc::DegenerateBox: return "DegenerateBox";
        case Errc::InfeasibleConfig: return "InfeasibleConfig";
        case Errc::ParseError: return "ParseError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace obbkit
