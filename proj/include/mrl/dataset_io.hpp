#ifndef MRL_DATASET_IO_HPP
#define MRL_DATASET_IO_HPP

// CSV ingestion and serialization. Input schema: header "time,status,group"
// with status 1 = event observed, 0 = right-censored (mapped internally to
// delta = 1 - status); the group column is optional and defaults to "all".
// All floats are serialized with max_digits10 so files parse back bit-exactly.

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrl/gibbs.hpp"

namespace mrl {

inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double_field(const std::string& tok, std::size_t line_no,
                                 const char* what) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::runtime_error("load_dataset: bad " + std::string(what) + " at line " +
                                 std::to_string(line_no) + ": '" + tok + "'");
    return v;
}

}  // namespace detail

// Datasets keyed by group, ordered by group name.
inline std::map<std::string, Dataset> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_dataset: empty file " + path);
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2 || header[0] != "time" || header[1] != "status" ||
        (header.size() == 3 && header[2] != "group") || header.size() > 3)
        throw std::runtime_error("load_dataset: expected header time,status[,group]");
    const bool has_group = header.size() == 3;

    std::map<std::string, Dataset> groups;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("load_dataset: wrong field count at line " +
                                     std::to_string(line_no));
        const double t = detail::parse_double_field(fields[0], line_no, "time");
        if (!(t > 0.0))
            throw std::runtime_error("load_dataset: non-positive time at line " +
                                     std::to_string(line_no));
        const double status = detail::parse_double_field(fields[1], line_no, "status");
        if (status != 0.0 && status != 1.0)
            throw std::runtime_error("load_dataset: status must be 0 or 1 at line " +
                                     std::to_string(line_no));
        const std::string group = has_group && !fields[2].empty() ? fields[2] : "all";
        Dataset& d = groups[group];
        d.group = group;
        d.time.push_back(t);
        d.censored.push_back(status == 1.0 ? 0 : 1);  // delta = 1 - status
    }
    if (groups.empty()) throw std::runtime_error("load_dataset: no data rows in " + path);
    return groups;
}

inline void write_dataset_csv(const std::string& path,
                              const std::vector<const Dataset*>& datasets) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_dataset_csv: cannot open " + path);
    out << "time,status,group\n";
    for (const Dataset* d : datasets)
        for (std::size_t i = 0; i < d->size(); ++i)
            out << format_double(d->time[i]) << ',' << (d->censored[i] ? 0 : 1) << ','
                << d->group << '\n';
    if (!out) throw std::runtime_error("write_dataset_csv: write failed for " + path);
}

inline void write_dataset_csv(const std::string& path, const Dataset& dataset) {
    write_dataset_csv(path, std::vector<const Dataset*>{&dataset});
}

}  // namespace mrl

#endif
