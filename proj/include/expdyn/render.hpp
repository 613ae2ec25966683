#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "expdyn/orbit.hpp"
#include "expdyn/seq.hpp"

namespace expdyn {

// Pixel lattice over a rectangle in the plane.  Pixel (i, j) is the cell
// center: center + ((i + 0.5)/nx - 0.5) width + i_unit ((j + 0.5)/ny - 0.5) height,
// row-major with j = 0 the bottom row (y grows upward).
struct GridSpec {
    std::complex<double> center{0.0, 0.0};
    double width = 4.0;
    double height = 4.0;
    std::uint32_t nx = 256;
    std::uint32_t ny = 256;

    std::complex<double> pixel_center(std::uint32_t i, std::uint32_t j) const;
    void validate() const;
};

// Escape steps per pixel: 0 = not escaped within cap, otherwise the 1-based
// trajectory position of the first threshold crossing (so entries lie in
// [0, cap]).  A per-pixel sequence error stores the sentinel cap + 1 and is
// counted in error_pixels.
struct EscapeGrid {
    GridSpec spec;
    std::uint64_t cap = 0;
    std::vector<std::uint32_t> steps;  // spec.nx * spec.ny, index j * nx + i
    std::uint64_t error_pixels = 0;

    std::uint32_t at(std::uint32_t i, std::uint32_t j) const { return steps[j * spec.nx + i]; }
};

// Classifies every pixel center by running its orbit.  Rows are distributed
// over `threads` workers; pixels are independent, so the output is identical
// for every thread count.  n1 defaults to seq.start_index() - 1 (first map
// applied = first defined index).
EscapeGrid classify_grid(const ParameterSequence& seq, const GridSpec& spec,
                         const EscapeConfig& cfg, int threads = 1,
                         std::optional<std::uint64_t> n1 = std::nullopt);

// Binary 8-bit PGM: header "P5\n<nx> <ny>\n255\n", then rows top-down (plane
// row j = ny - 1 first).  Pixel value = floor(255 * step / cap), clamped to
// 255, with 0 for pixels that did not escape.  Byte-deterministic for a given
// grid.
void write_pgm(const EscapeGrid& grid, std::ostream& os);
void write_pgm(const EscapeGrid& grid, const std::string& path);

}  // namespace expdyn
