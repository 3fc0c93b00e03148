#include "pilotwave/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pw::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

CsvFile::CsvFile(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path.string());
}

void CsvFile::header(const std::vector<std::string>& names) { row(names); }

void CsvFile::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(cells[i]);
    }
    out_ << '\n';  // LF
}

void CsvFile::row_values(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << '\n';
}

void CsvFile::close() { out_.close(); }

SvgPlot::SvgPlot(double x_min, double x_max, double y_min, double y_max, int width, int height)
    : x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max), w_(width), h_(height) {}

double SvgPlot::px(double x) const { return (x - x0_) / (x1_ - x0_) * w_; }
double SvgPlot::py(double y) const { return h_ - (y - y0_) / (y1_ - y0_) * h_; }

void SvgPlot::polyline(const std::vector<Vec3>& xy, const std::string& color, double stroke) {
    if (xy.size() < 2) return;
    std::ostringstream ss;
    ss << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke
       << "\" points=\"";
    for (const auto& p : xy) ss << px(p.x) << ',' << py(p.y) << ' ';
    ss << "\"/>\n";
    body_ += ss.str();
}

void SvgPlot::circle(double x, double y, double radius_px, const std::string& color,
                     bool filled) {
    std::ostringstream ss;
    ss << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << radius_px << "\" ";
    if (filled) ss << "fill=\"" << color << "\"";
    else ss << "fill=\"none\" stroke=\"" << color << "\"";
    ss << "/>\n";
    body_ += ss.str();
}

void SvgPlot::rect(double x_lo, double y_lo, double x_hi, double y_hi,
                   const std::string& color) {
    std::ostringstream ss;
    ss << "<rect x=\"" << px(x_lo) << "\" y=\"" << py(y_hi) << "\" width=\""
       << px(x_hi) - px(x_lo) << "\" height=\"" << py(y_lo) - py(y_hi) << "\" fill=\"" << color
       << "\"/>\n";
    body_ += ss.str();
}

void SvgPlot::text(double x, double y, const std::string& s, int px_size) {
    std::ostringstream ss;
    ss << "<text x=\"" << px(x) << "\" y=\"" << py(y) << "\" font-size=\"" << px_size
       << "\" font-family=\"sans-serif\">" << s << "</text>\n";
    body_ += ss.str();
}

void SvgPlot::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("svg: cannot open " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
        << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_ << "</svg>\n";
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256: cannot open " + path.string());

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("sha256: context allocation failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);

    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        const auto got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

void write_manifest(const std::filesystem::path& out_dir,
                    const std::vector<std::string>& relative_paths, const std::string& summary) {
    std::ofstream out(out_dir / "manifest.txt", std::ios::binary);
    if (!out) throw std::runtime_error("manifest: cannot open manifest.txt");
    for (const auto& rel : relative_paths)
        out << rel << "  " << sha256_file(out_dir / rel) << '\n';
    if (!summary.empty()) out << "# " << summary << '\n';
}

}  // namespace pw::io
