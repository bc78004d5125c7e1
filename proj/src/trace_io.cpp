#include "pagelab/trace_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace pagelab {

TraceFormat parse_trace_format(const std::string& text) {
    if (text == "text" || text == "TEXT") return TraceFormat::Text;
    if (text == "binary" || text == "BINARY") return TraceFormat::Binary;
    throw std::invalid_argument("unknown trace format: " + text);
}

namespace {

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

Trace parse_text(const std::string& data) {
    Trace trace;
    std::size_t pos = 0;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::size_t begin = pos, end = eol;
        if (end > begin && data[end - 1] == '\r') --end;
        while (begin < end && (data[begin] == ' ' || data[begin] == '\t')) ++begin;
        while (end > begin && (data[end - 1] == ' ' || data[end - 1] == '\t')) --end;
        if (begin == end || data[begin] == '#') {
            pos = eol + 1;
            continue;
        }
        ItemId value = 0;
        const auto [ptr, ec] = std::from_chars(data.data() + begin, data.data() + end, value);
        if (ec != std::errc() || ptr != data.data() + end)
            throw TraceParseError("malformed item id", begin);
        trace.push_back(value);
        pos = eol + 1;
    }
    return trace;
}

Trace parse_binary(const std::string& data) {
    if (data.size() % 8 != 0)
        throw TraceParseError("truncated 64-bit record", (data.size() / 8) * 8);
    Trace trace(data.size() / 8);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        ItemId v = 0;
        for (std::size_t b = 0; b < 8; ++b)
            v |= static_cast<ItemId>(static_cast<unsigned char>(data[i * 8 + b])) << (8 * b);
        trace[i] = v;
    }
    return trace;
}

} // namespace

Trace load_trace(const std::string& path, TraceFormat format) {
    const std::string data = read_all(path);
    return format == TraceFormat::Text ? parse_text(data) : parse_binary(data);
}

void save_trace(const Trace& trace, const std::string& path, TraceFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path + ": " + std::strerror(errno));
    if (format == TraceFormat::Text) {
        for (ItemId x : trace) out << x << '\n';
    } else {
        std::vector<char> buf(trace.size() * 8);
        for (std::size_t i = 0; i < trace.size(); ++i)
            for (std::size_t b = 0; b < 8; ++b)
                buf[i * 8 + b] = static_cast<char>((trace[i] >> (8 * b)) & 0xff);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace pagelab
