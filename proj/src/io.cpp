#include "tilab/io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tilab {
namespace io {

namespace {

void put_i64(std::ostream& os, std::int64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::int64_t get_i64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return static_cast<std::int64_t>(u);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

} // namespace

void write_field(const std::string& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("write_field: cannot open " + path);
    put_i64(os, static_cast<std::int64_t>(f.grid.Nx));
    put_i64(os, static_cast<std::int64_t>(f.grid.Ny));
    put_f64(os, f.grid.X);
    put_f64(os, f.grid.L);
    put_i64(os, f.kind == FieldKind::Complex ? 1 : 0);
    for (const cplx& v : f.values) {
        put_f64(os, v.real());
        if (f.kind == FieldKind::Complex) put_f64(os, v.imag());
    }
    if (!os) throw ConfigError("write_field: write failed for " + path);
}

Field read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("read_field: cannot open " + path);
    const std::int64_t nx = get_i64(is);
    const std::int64_t ny = get_i64(is);
    const double X = get_f64(is);
    const double L = get_f64(is);
    const std::int64_t kind = get_i64(is);
    if (!is || nx <= 0 || ny <= 0) throw ConfigError("read_field: bad header in " + path);
    Field f(Grid2D(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), X, L),
            kind ? FieldKind::Complex : FieldKind::Real);
    for (cplx& v : f.values) {
        const double re = get_f64(is);
        const double im = kind ? get_f64(is) : 0.0;
        v = cplx(re, im);
    }
    if (!is) throw ConfigError("read_field: truncated file " + path);
    return f;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream os(path);
    if (!os) throw ConfigError("write_csv: cannot open " + path);
    os << "# tilab-csv v1 " << table.name << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
    os << std::setprecision(17);
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << row[c] << (c + 1 < row.size() ? "," : "\n");
    }
}

void write_slice_csv(const std::string& path, const Field& f, std::size_t iy) {
    if (iy >= f.grid.Ny) throw SizeMismatch("write_slice_csv: iy out of range");
    CsvTable t;
    t.name = "field-slice";
    const bool cx = f.kind == FieldKind::Complex;
    t.columns = cx ? std::vector<std::string>{"x", "re", "im"} : std::vector<std::string>{"x", "value"};
    for (std::size_t i = 0; i < f.grid.Nx; ++i) {
        const cplx v = f.at(i, iy);
        if (cx)
            t.rows.push_back({f.grid.x(i), v.real(), v.imag()});
        else
            t.rows.push_back({f.grid.x(i), v.real()});
    }
    write_csv(path, t);
}

std::string join_path(const std::string& dir, const std::string& leaf) {
    return (std::filesystem::path(dir) / leaf).string();
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

} // namespace io
} // namespace tilab
