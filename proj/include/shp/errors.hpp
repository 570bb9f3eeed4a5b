#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace shp {

// Base class for all library errors so callers can catch shp::Error.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad function argument (spec: invalid-parameter).
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error(what) {}
};

// ChannelConfig or impairment/search configuration violates an invariant.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Operation called in the wrong protocol state (e.g. DATA before START).
class ProtocolError : public Error {
public:
    explicit ProtocolError(const std::string& what) : Error(what) {}
};

// Malformed or unordered input data.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

// File I/O failure; carries the byte offset where parsing stopped when known.
class IoError : public Error {
public:
    explicit IoError(const std::string& what, std::int64_t byte_offset = -1)
        : Error(byte_offset >= 0 ? what + " (at byte " + std::to_string(byte_offset) + ")" : what),
          offset(byte_offset) {}
    std::int64_t offset;
};

// Recognizable file but unsupported variant (e.g. non-Ethernet pcap link type).
class UnsupportedFormat : public IoError {
public:
    explicit UnsupportedFormat(const std::string& what) : IoError(what) {}
};

} // namespace shp
