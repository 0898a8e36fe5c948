#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "meanfield.hpp"

namespace swarmkit::io {

// CSV layout: one "# axis,<label>,<lower>,<upper>,<cells>" line per axis, a
// "# time,<t>" line, then the cell values one per line in row-major order.
void write_density_csv(const pde::DensityField& field, std::ostream& out);
pde::DensityField read_density_csv(std::istream& in);

// Binary layout (little endian): "SWKD", u32 version (1), u32 axis count,
// f64 time, then per axis {u8 label, 3 zero bytes, u32 cells, f64 lower,
// f64 upper}, then the f64 values.
void write_density_binary(const pde::DensityField& field, std::ostream& out);
pde::DensityField read_density_binary(std::istream& in);

void save_density(const pde::DensityField& field, const std::filesystem::path& path);
// Picks the format from the magic bytes.
pde::DensityField load_density(const std::filesystem::path& path);

// Plot-ready columns: "#" header lines, then one line per cell holding the
// cell-center coordinates followed by the value.
void write_plot_columns(const pde::DensityField& field, std::ostream& out);
void save_plot_columns(const pde::DensityField& field, const std::filesystem::path& path);

// Parses a column file back (coordinates are ignored, values are summed)
// and returns sum(values) * cell volume computed from the header.
double plot_columns_mass(std::istream& in);

}  // namespace swarmkit::io
