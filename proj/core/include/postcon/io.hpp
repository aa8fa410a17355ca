#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace postcon {

/// Flat key = value experiment configuration.  Lines starting with '#' are
/// comments.  Later assignments win, so command-line overrides can simply be
/// applied on top.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;  // comma separated

    /// FNV-1a over the sorted key=value lines; embedded in every output file.
    std::uint64_t hash() const;
    std::string canonical_text() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

std::uint64_t fnv1a64(const std::string& text);

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& comment_lines = {});

/// Minimal self-contained SVG scatter/line plot; axes may be log-scaled.
struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool line = true;
    bool markers = true;
    std::string color = "#1f6fb2";
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<PlotSeries> series;
};

void write_svg_plot(const std::string& path, const PlotSpec& spec);

}  // namespace postcon
