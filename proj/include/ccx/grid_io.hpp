#pragma once

#include <string>

#include "ccx/grid.hpp"
#include "ccx/moduli.hpp"

namespace ccx {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// Reads a grid from a "CCXGRID 1" text file or a PGM image (P2/P5; values
/// are scaled to [0,1], spacing 1, origin 0). The format is sniffed from the
/// magic bytes.
GridFunction read_grid(const std::string& path);

/// Writes the CCXGRID 1 text format. Writes are atomic (temp file+rename)
/// and round-trip losslessly.
void write_grid(const GridFunction& g, const std::string& path);

/// Masks read from CCXGRID (nonzero = member) or PGM (nonzero = member).
SampleMask read_mask(const std::string& path);
/// Masks are written as CCXGRID with 0/1 values.
void write_mask(const SampleMask& m, const std::string& path);

/// CSV rows "x1,...,xn,value"; '#' starts a comment. The dimension is
/// inferred from the first data row.
ScatteredSamples read_samples_csv(const std::string& path);
void write_samples_csv(const ScatteredSamples& s, const std::string& path);

/// Modulus CSV: header comments carrying a, b and the optional constants,
/// then "knot,omega_f,omega_cav" rows.
ModulusModel read_modulus_csv(const std::string& path);
void write_modulus_csv(const ModulusModel& m, const std::string& path);

}  // namespace ccx
