#ifndef OBSIM_IO_HPP
#define OBSIM_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obsim/detect.hpp"
#include "obsim/integrate.hpp"
#include "obsim/steady.hpp"
#include "obsim/sweep.hpp"

namespace obsim {

// Decimal with 17 significant digits; round-trip exact for double.
std::string format_double(double v);

// Minimal CSV assembly: comma separators, LF line endings, header required.
class CsvBuilder {
public:
    explicit CsvBuilder(std::span<const std::string_view> columns);
    void add_row(std::span<const double> values);
    const std::string& content() const { return buf_; }

private:
    std::string buf_;
    std::size_t n_cols_;
};

// Writes via a temp file in the same directory, then renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::string trajectory_csv(const Trajectory& traj);
std::string curve_csv(const HysteresisCurve& curve);
std::string regions_csv(const HysteresisCurve& curve);
std::string grid_csv(const GridScanResult& grid);
std::string threshold_csv(const ThresholdResult& result);
std::string roots_csv(std::span<const SteadyPoint> roots);

}  // namespace obsim

#endif
