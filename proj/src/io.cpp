#include "mfg/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mfg {

const char* const tool_version = "0.1.0";

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvFile::Impl {
    std::ofstream out;
};

CsvFile::CsvFile(const std::string& path, std::vector<std::string> header)
    : impl_(new Impl), columns_(header.size()) {
    impl_->out.open(path, std::ios::binary); // binary keeps LF on any platform
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("cannot open for writing: " + path);
    }
    row(header);
}

CsvFile::~CsvFile() {
    close();
}

void CsvFile::close() {
    if (impl_) {
        impl_->out.flush();
        delete impl_;
        impl_ = nullptr;
    }
}

void CsvFile::row(const std::vector<std::string>& cells) {
    if (!impl_) throw std::logic_error("CsvFile: writing after close");
    if (cells.size() != columns_)
        throw std::invalid_argument("CsvFile: ragged row");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << cells[i];
    }
    impl_->out << '\n';
}

namespace {

struct Range {
    double lo = 0.0, hi = 1.0;
    void widen(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<LineSeries>& series) {
    const int width = 640, height = 440;
    const int ml = 70, mr = 160, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    Range xr, yr;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!any) {
                xr.lo = xr.hi = s.xs[i];
                yr.lo = yr.hi = s.ys[i];
                any = true;
            }
            xr.widen(s.xs[i]);
            yr.widen(s.ys[i]);
        }
    if (xr.hi <= xr.lo) xr.hi = xr.lo + 1.0;
    if (yr.hi <= yr.lo) yr.hi = yr.lo + 1.0;

    auto px = [&](double x) { return ml + pw * (x - xr.lo) / (xr.hi - xr.lo); };
    auto py = [&](double y) { return mt + ph * (1.0 - (y - yr.lo) / (yr.hi - yr.lo)); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b",
                                    "#17becf", "#7f7f7f"};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << svg_escape(title)
        << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
        const double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(fx)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << csv_number(std::round(fx * 1e6) / 1e6)
            << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml
            << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 9 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << csv_number(std::round(fy * 1e6) / 1e6) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << svg_escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">"
        << svg_escape(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        if (ser.xs.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << palette[s % 8]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ser.xs.size(); ++i)
            out << px(ser.xs[i]) << ',' << py(ser.ys[i]) << ' ';
        out << "\"/>\n";
        const double ly = mt + 16.0 * (s + 1);
        out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
            << ml + pw + 34 << "\" y2=\"" << ly << "\" stroke=\"" << palette[s % 8]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << svg_escape(ser.name) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_manifest(const std::string& dir, const std::string& command,
                    const std::map<std::string, std::string>& resolved,
                    std::uint64_t seed, double wall_seconds) {
    nlohmann::json j;
    j["tool"] = "mfgsolve";
    j["version"] = tool_version;
    j["command"] = command;
    j["seed"] = seed;
    j["wall_clock_seconds"] = wall_seconds;
    j["config"] = resolved;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now).count();
    std::ofstream out(std::filesystem::path(dir) / "manifest.json",
                      std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << j.dump(2) << '\n';
}

std::string ensure_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace mfg
