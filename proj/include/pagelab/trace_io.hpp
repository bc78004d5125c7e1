#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pagelab/trace.hpp"

namespace pagelab {

enum class TraceFormat { Text, Binary };

TraceFormat parse_trace_format(const std::string& text);

struct TraceParseError : std::runtime_error {
    TraceParseError(const std::string& msg, std::uint64_t offset)
        : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
          byte_offset(offset) {}
    std::uint64_t byte_offset;
};

// TEXT: one decimal item id per line; lines whose first non-blank character
// is '#' and blank lines are skipped. BINARY: little-endian 64-bit ids, no
// header. Both round-trip with save_trace bit-exactly.
Trace load_trace(const std::string& path, TraceFormat format);

void save_trace(const Trace& trace, const std::string& path, TraceFormat format);

} // namespace pagelab
