#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spinbeat/detection.hpp"
#include "spinbeat/errors.hpp"
#include "spinbeat/interferometer.hpp"

namespace spinbeat {

// Comma-separated, header row, LF line endings, '.' decimal separator,
// 17 significant digits so doubles round-trip.
namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_trace_csv(const std::string& path, const IntensityTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot write " + path);
    out << "t_s,intensity\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        out << detail::fmt17(trace.times[i]) << "," << detail::fmt17(trace.intensity[i])
            << "\n";
}

inline void write_counts_csv(const std::string& path, const CountTrace& counts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot write " + path);
    out << "t_s,counts\n";
    for (std::size_t i = 0; i < counts.bin_centers.size(); ++i)
        out << detail::fmt17(counts.bin_centers[i]) << "," << counts.counts[i] << "\n";
}

inline IntensityTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t_s,intensity", 0) != 0)
        throw SimError(path + ": expected header 't_s,intensity'");
    IntensityTrace t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw SimError(path + ": malformed row: " + line);
        t.times.push_back(std::stod(line.substr(0, comma)));
        t.intensity.push_back(std::stod(line.substr(comma + 1)));
    }
    return t;
}

inline CountTrace read_counts_csv(const std::string& path, double dwell) {
    std::ifstream in(path);
    if (!in) throw SimError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t_s,counts", 0) != 0)
        throw SimError(path + ": expected header 't_s,counts'");
    CountTrace t;
    t.dwell = dwell;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw SimError(path + ": malformed row: " + line);
        t.bin_centers.push_back(std::stod(line.substr(0, comma)));
        t.counts.push_back(static_cast<std::uint64_t>(std::stoull(line.substr(comma + 1))));
    }
    return t;
}

}  // namespace spinbeat
