#include "expdyn/render.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <thread>

#include "expdyn/errors.hpp"

namespace expdyn {

std::complex<double> GridSpec::pixel_center(std::uint32_t i, std::uint32_t j) const {
    return center + std::complex<double>(((i + 0.5) / nx - 0.5) * width,
                                         ((j + 0.5) / ny - 0.5) * height);
}

void GridSpec::validate() const {
    if (nx == 0 || ny == 0) throw InvalidParameter("grid needs at least one pixel per axis");
    if (!(width > 0.0) || !(height > 0.0)) throw InvalidParameter("grid extent must be positive");
    if (!std::isfinite(center.real()) || !std::isfinite(center.imag()) ||
        !std::isfinite(width) || !std::isfinite(height))
        throw InvalidParameter("grid geometry must be finite");
}

EscapeGrid classify_grid(const ParameterSequence& seq, const GridSpec& spec,
                         const EscapeConfig& cfg, int threads,
                         std::optional<std::uint64_t> n1) {
    spec.validate();
    if (threads < 1) throw InvalidParameter("threads must be at least 1");
    if (cfg.max_iter > 0xFFFFFFFEull) throw InvalidParameter("cap too large for 32-bit steps");

    EscapeGrid grid;
    grid.spec = spec;
    grid.cap = cfg.max_iter;
    grid.steps.assign(static_cast<std::size_t>(spec.nx) * spec.ny, 0);
    const std::uint64_t base = n1.value_or(seq.start_index() - 1);

    std::vector<std::uint64_t> errors(static_cast<std::size_t>(std::max(threads, 1)), 0);
    auto work_rows = [&](std::uint32_t j0, std::uint32_t stride, std::uint64_t& err) {
        for (std::uint32_t j = j0; j < spec.ny; j += stride) {
            for (std::uint32_t i = 0; i < spec.nx; ++i) {
                std::uint32_t& cell = grid.steps[static_cast<std::size_t>(j) * spec.nx + i];
                try {
                    const OrbitState st = run(seq, spec.pixel_center(i, j), base, cfg);
                    // Escape and overflow both mark the first crossing; the
                    // overflow guard sits beyond the escape threshold, so both
                    // are escapes of the re_threshold.
                    cell = st.status == OrbitStatus::Active
                               ? 0
                               : static_cast<std::uint32_t>(st.event_step);
                } catch (const UndefinedIndex&) {
                    cell = static_cast<std::uint32_t>(grid.cap + 1);
                    ++err;
                }
            }
        }
    };

    if (threads == 1 || spec.ny < 2) {
        work_rows(0, 1, errors[0]);
    } else {
        const auto nt = std::min<std::uint32_t>(static_cast<std::uint32_t>(threads), spec.ny);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::uint32_t w = 0; w < nt; ++w)
            pool.emplace_back(work_rows, w, nt, std::ref(errors[w]));
        for (auto& th : pool) th.join();
    }
    for (const auto e : errors) grid.error_pixels += e;
    return grid;
}

void write_pgm(const EscapeGrid& grid, std::ostream& os) {
    if (grid.cap == 0) throw InvalidParameter("grid cap must be positive");
    os << "P5\n" << grid.spec.nx << " " << grid.spec.ny << "\n255\n";
    std::vector<unsigned char> row(grid.spec.nx);
    for (std::uint32_t jj = 0; jj < grid.spec.ny; ++jj) {
        const std::uint32_t j = grid.spec.ny - 1 - jj;  // top-down output, y grows upward
        for (std::uint32_t i = 0; i < grid.spec.nx; ++i) {
            const std::uint64_t s = std::min<std::uint64_t>(grid.at(i, j), grid.cap);
            row[i] = static_cast<unsigned char>(std::min<std::uint64_t>(255, 255 * s / grid.cap));
        }
        os.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!os) throw DomainError("pgm write failed");
}

void write_pgm(const EscapeGrid& grid, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidParameter("cannot open " + path);
    write_pgm(grid, os);
}

}  // namespace expdyn
