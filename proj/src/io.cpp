#include "cylobs/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cylobs {

std::string format_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_csv(const Field& u, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    const Grid& g = u.grid;
    out << (g.d_cross == 1 ? "x1,xn,value\n" : "x1,x2,xn,value\n");
    for (int c = 0; c < g.cross_count(); ++c)
        for (int j = 0; j < g.n_axial; ++j) {
            out << format_value(g.x1(c)) << ',';
            if (g.d_cross == 2) out << format_value(g.x2(c)) << ',';
            out << format_value(g.xn(j)) << ',' << format_value(u.at(c, j)) << '\n';
        }
}

void write_csv(const ReducedField& f, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    const Grid& g = f.grid;
    out << (g.d_cross == 1 ? "x1,value\n" : "x1,x2,value\n");
    for (int c = 0; c < g.cross_count(); ++c) {
        out << format_value(g.x1(c)) << ',';
        if (g.d_cross == 2) out << format_value(g.x2(c)) << ',';
        out << format_value(f.values[c]) << '\n';
    }
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << text;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::string_view data) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

}  // namespace cylobs
