#include "sgsp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sgsp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, const std::vector<std::string>& header)
    : path_(std::move(path)) {
    for (size_t j = 0; j < header.size(); ++j) {
        if (j) body_ += ',';
        body_ += header[j];
    }
    body_ += '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
    for (size_t j = 0; j < cells.size(); ++j) {
        if (j) body_ += ',';
        body_ += format_double(cells[j]);
    }
    body_ += '\n';
}

void CsvWriter::comment(const std::string& text) { body_ += "# " + text + "\n"; }

void CsvWriter::write() {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path_.string());
    out << body_;
}

void SummaryWriter::kv(const std::string& key, double value) {
    csv_ += key + "," + format_double(value) + "\n";
}

void SummaryWriter::kv_text(const std::string& key, const std::string& value) {
    csv_ += key + "," + value + "\n";
}

void SummaryWriter::line(const std::string& text) { text_ += text + "\n"; }

void SummaryWriter::write(const std::filesystem::path& dir) {
    {
        std::ofstream out(dir / "summary.csv", std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write summary.csv");
        out << csv_;
    }
    std::ofstream out(dir / "summary.txt", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write summary.txt");
    out << text_;
}

}  // namespace sgsp
