#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mfg {

extern const char* const tool_version;

/// Locale-independent number formatting for CSV cells (decimal point,
/// round-trippable precision, no separators).
std::string csv_number(double v);

/// Rectangular CSV with a header row, LF line endings.
class CsvFile {
public:
    CsvFile(const std::string& path, std::vector<std::string> header);
    ~CsvFile();
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

    void row(const std::vector<std::string>& cells);
    void close();

private:
    struct Impl;
    Impl* impl_;
    std::size_t columns_;
};

struct LineSeries {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
};

/// Minimal static SVG line chart: axes, ticks, one polyline per series,
/// and a legend.  Enough for CDF and error-vs-time figures.
void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<LineSeries>& series);

/// Run manifest: resolved configuration, seed, tool version, command line,
/// wall-clock seconds.  Written as JSON to <dir>/manifest.json.
void write_manifest(const std::string& dir, const std::string& command,
                    const std::map<std::string, std::string>& resolved,
                    std::uint64_t seed, double wall_seconds);

/// Create the directory (and parents) if needed; returns the path.
std::string ensure_dir(const std::string& dir);

} // namespace mfg
