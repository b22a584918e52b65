#pragma once

#include <string>
#include <vector>

#include "tilab/field.hpp"

namespace tilab {
namespace io {

// Flat binary container. Header, all little-endian:
//   int64 Nx, int64 Ny, double X, double L, int64 kind (0 real, 1 complex)
// then row-major samples ([ix][iy]): doubles for real fields, interleaved
// re,im pairs for complex ones.
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);

// CSV with a schema-version comment line, then a column-name header.
struct CsvTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::string& path, const CsvTable& table);

// 1-D slice export: fixed iy row (values along x) as x,re[,im].
void write_slice_csv(const std::string& path, const Field& f, std::size_t iy);

std::string join_path(const std::string& dir, const std::string& leaf);
void ensure_dir(const std::string& dir);

} // namespace io
} // namespace tilab
