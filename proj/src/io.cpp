#include "obsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace obsim {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvBuilder::CsvBuilder(std::span<const std::string_view> columns) : n_cols_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) buf_ += ',';
        buf_ += columns[i];
    }
    buf_ += '\n';
}

void CsvBuilder::add_row(std::span<const double> values) {
    if (values.size() != n_cols_) {
        throw std::logic_error("CsvBuilder: row width does not match the header");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) buf_ += ',';
        buf_ += format_double(values[i]);
    }
    buf_ += '\n';
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string trajectory_csv(const Trajectory& traj) {
    static constexpr std::string_view cols[] = {
        "t",   "re_alpha", "im_alpha", "n",       "transmission_norm",
        "s11", "s22",      "s33",      "abs_s13", "abs_s12",
        "abs_s23"};
    CsvBuilder csv(cols);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const SemiclassicalState& s = traj.states[i];
        const double row[] = {traj.times[i],
                              s.alpha.real(),
                              s.alpha.imag(),
                              traj.photon_numbers[i],
                              traj.transmissions[i],
                              s.s11,
                              s.s22,
                              s.s33,
                              std::abs(s.s13),
                              std::abs(s.s12),
                              std::abs(s.s23)};
        csv.add_row(row);
    }
    return csv.content();
}

std::string curve_csv(const HysteresisCurve& curve) {
    static constexpr std::string_view cols[] = {"axis", "n_up", "n_down"};
    CsvBuilder csv(cols);
    for (std::size_t i = 0; i < curve.axis.size(); ++i) {
        const double row[] = {curve.axis[i], curve.n_up[i], curve.n_down[i]};
        csv.add_row(row);
    }
    return csv.content();
}

std::string regions_csv(const HysteresisCurve& curve) {
    static constexpr std::string_view cols[] = {"lo", "hi", "width"};
    CsvBuilder csv(cols);
    for (const BistableRegion& r : curve.regions) {
        const double row[] = {r.lo, r.hi, r.width};
        csv.add_row(row);
    }
    return csv.content();
}

std::string grid_csv(const GridScanResult& grid) {
    static constexpr std::string_view cols[] = {"axis1", "axis2", "width"};
    CsvBuilder csv(cols);
    for (std::size_t i = 0; i < grid.values1.size(); ++i) {
        for (std::size_t j = 0; j < grid.values2.size(); ++j) {
            const double row[] = {grid.values1[i], grid.values2[j],
                                  grid.widths[i * grid.values2.size() + j]};
            csv.add_row(row);
        }
    }
    return csv.content();
}

std::string threshold_csv(const ThresholdResult& result) {
    static constexpr std::string_view cols[] = {"cooperativity", "width"};
    CsvBuilder csv(cols);
    for (const ThresholdEntry& e : result.entries) {
        const double row[] = {e.cooperativity, e.width};
        csv.add_row(row);
    }
    return csv.content();
}

std::string roots_csv(std::span<const SteadyPoint> roots) {
    static constexpr std::string_view cols[] = {
        "n",       "residual", "stable",  "leading_rate", "re_alpha", "im_alpha",
        "re_s13",  "im_s13",   "re_s12",  "im_s12",       "re_s23",   "im_s23",
        "s11",     "s22",      "s33"};
    CsvBuilder csv(cols);
    for (const SteadyPoint& p : roots) {
        const SemiclassicalState& s = p.state;
        const double stable = p.stability == Stability::stable
                                  ? 1.0
                                  : (p.stability == Stability::unstable ? -1.0 : 0.0);
        const double row[] = {photon_number(s), p.residual,     stable,
                              p.leading_rate,   s.alpha.real(), s.alpha.imag(),
                              s.s13.real(),     s.s13.imag(),   s.s12.real(),
                              s.s12.imag(),     s.s23.real(),   s.s23.imag(),
                              s.s11,            s.s22,          s.s33};
        csv.add_row(row);
    }
    return csv.content();
}

}  // namespace obsim
