#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fisherlab/grid.hpp"
#include "fisherlab/series.hpp"

namespace fisherlab {

// Shortest exact decimal with up to 17 significant digits (round-trips to the
// same double); locale-independent.
std::string format_double(double v);

// Fixed schema: header `t,ix,ip,product,analytic_product,rel_err`, 17
// significant digits, '\n' line endings, empty fields where no analytic value
// exists. Byte-deterministic for identical series.
void write_csv(const CurveSeries& series, std::ostream& out);
void write_csv(const CurveSeries& series, const std::filesystem::path& path);
CurveSeries read_csv(const std::filesystem::path& path);

// {"meta": {...}, "entries": [...], "fit": {...}?} with the CSV field names.
void write_json(const CurveSeries& series, std::ostream& out);
void write_json(const CurveSeries& series, const std::filesystem::path& path);

// Three-column text (x, Re psi, Im psi); `#` comments and blank lines are
// skipped. Requires a uniform x column (relative jitter <= 1e-9), at least 8
// rows, nonzero norm, and a state that is band-limited on its own lattice
// (momentum mass at |p| > 0.9 * Nyquist must not exceed 1e-6). Returns the
// normalized state on the file's own grid.
WaveFunction load_state(const std::filesystem::path& path);

}  // namespace fisherlab
