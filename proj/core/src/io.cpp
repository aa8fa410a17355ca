#include "postcon/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace postcon {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("Config: line " + std::to_string(lineno) +
                                     " is not 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("Config: empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw std::runtime_error("Config: missing key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("Config: key '" + key + "' is not a number: " + v);
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
    const double x = get_double(key);
    const long long n = static_cast<long long>(std::llround(x));
    if (std::abs(x - static_cast<double>(n)) > 1e-9)
        throw std::runtime_error("Config: key '" + key + "' is not an integer");
    return n;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) continue;
        out.push_back(std::stod(t));
    }
    if (out.empty()) throw std::runtime_error("Config: key '" + key + "' holds no numbers");
    return out;
}

std::string Config::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += "=";
        out += v;
        out += "\n";
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical_text()); }

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& comment_lines) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out.precision(17);
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::invalid_argument("write_csv: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

namespace {

struct Mapper {
    double lo, hi, out_lo, out_hi;
    bool log;
    double operator()(double v) const {
        double t = log ? std::log10(v) : v;
        double a = log ? std::log10(lo) : lo;
        double b = log ? std::log10(hi) : hi;
        if (b <= a) b = a + 1.0;
        return out_lo + (t - a) / (b - a) * (out_hi - out_lo);
    }
};

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            if (spec.logx && !(x > 0.0)) continue;
            if (spec.logy && !(y > 0.0)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmin > xmax) {
        xmin = ymin = 0.1;
        xmax = ymax = 1.0;
    }
    if (!spec.logx) {
        const double pad = 0.05 * (xmax - xmin + 1e-12);
        xmin -= pad;
        xmax += pad;
    } else {
        xmin /= 1.3;
        xmax *= 1.3;
    }
    if (!spec.logy) {
        const double pad = 0.05 * (ymax - ymin + 1e-12);
        ymin -= pad;
        ymax += pad;
    } else {
        ymin /= 1.3;
        ymax *= 1.3;
    }

    const double W = 640, H = 480, L = 70, R = 20, T = 40, B = 55;
    const Mapper mx{xmin, xmax, L, W - R, spec.logx};
    const Mapper my{ymin, ymax, H - B, T, spec.logy};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path);
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << spec.title << "</text>\n";
    // axes
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
        << H - B << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << spec.xlabel << "</text>\n";
    out << "<text x=\"16\" y=\"" << (T + H - B) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (T + H - B) / 2 << ")\">" << spec.ylabel << "</text>\n";
    // ticks: 5 per axis
    for (int i = 0; i <= 4; ++i) {
        const double fx = i / 4.0;
        double xv = spec.logx ? std::pow(10.0, std::log10(xmin) + fx * (std::log10(xmax) - std::log10(xmin)))
                              : xmin + fx * (xmax - xmin);
        double yv = spec.logy ? std::pow(10.0, std::log10(ymin) + fx * (std::log10(ymax) - std::log10(ymin)))
                              : ymin + fx * (ymax - ymin);
        const double px = mx(xv), py = my(yv);
        out << "<line x1=\"" << px << "\" y1=\"" << H - B << "\" x2=\"" << px << "\" y2=\""
            << H - B + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << H - B + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << xv << "</text>\n";
        out << "<line x1=\"" << L - 5 << "\" y1=\"" << py << "\" x2=\"" << L << "\" y2=\"" << py
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << L - 8 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << yv << "</text>\n";
    }
    // series
    int legend_row = 0;
    for (const auto& s : spec.series) {
        if (s.line && s.points.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : s.points) out << mx(x) << "," << my(y) << " ";
            out << "\"/>\n";
        }
        if (s.markers) {
            for (const auto& [x, y] : s.points)
                out << "<circle cx=\"" << mx(x) << "\" cy=\"" << my(y) << "\" r=\"3\" fill=\""
                    << s.color << "\"/>\n";
        }
        const double ly = T + 14 + 16 * legend_row++;
        out << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R - 130
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << W - R - 125 << "\" y=\"" << ly
            << "\" font-size=\"12\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace postcon
