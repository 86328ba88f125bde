#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sgsp {

/// Deterministic CSV emitter: %.17g doubles, '\n' line ends, no locale or
/// timestamp dependence, so identical inputs give byte-identical files.
class CsvWriter {
  public:
    CsvWriter(std::filesystem::path path, const std::vector<std::string>& header);

    void row(const std::vector<double>& cells);
    void comment(const std::string& text);  // "# ..." line
    void write();                           // flush to disk

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::string body_;
};

/// Paired human summary (summary.txt) and machine mirror (summary.csv);
/// every number in the text lands in the csv as a key,value row first.
class SummaryWriter {
  public:
    void kv(const std::string& key, double value);
    void kv_text(const std::string& key, const std::string& value);
    void line(const std::string& text);
    void write(const std::filesystem::path& dir);

  private:
    std::string csv_ = "key,value\n";
    std::string text_;
};

std::string format_double(double v);

}  // namespace sgsp
