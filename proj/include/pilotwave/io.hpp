// io.hpp - CSV/SVG artifact writers and the output manifest.
//
// CSV: RFC-4180 quoting, LF line endings, floats at 17 significant digits so
// identical runs produce byte-identical files.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pilotwave/vec.hpp"

namespace pw::io {

std::string format_double(double v);
std::string csv_escape(const std::string& field);

class CsvFile {
public:
    explicit CsvFile(const std::filesystem::path& path);

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
};

// Minimal SVG scatter/line plot with a fixed world-to-pixel mapping.
class SvgPlot {
public:
    SvgPlot(double x_min, double x_max, double y_min, double y_max, int width = 720,
            int height = 720);

    void polyline(const std::vector<Vec3>& xy, const std::string& color, double stroke = 1.0);
    void circle(double x, double y, double radius_px, const std::string& color,
                bool filled = true);
    void rect(double x_lo, double y_lo, double x_hi, double y_hi, const std::string& color);
    void text(double x, double y, const std::string& s, int px = 14);
    void save(const std::filesystem::path& path) const;

private:
    double px(double x) const;
    double py(double y) const;
    double x0_, x1_, y0_, y1_;
    int w_, h_;
    std::string body_;
};

std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::string sha256;
};

// manifest.txt: one "path  sha256" line per produced file.
void write_manifest(const std::filesystem::path& out_dir,
                    const std::vector<std::string>& relative_paths,
                    const std::string& summary = "");

}  // namespace pw::io
