#include "output.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace arbor::cli {
namespace {

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return v;
            }
        },
        c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) {
                    return format_double(v);
                }
            }
            return v;
        },
        c);
}

bool numeric(const Cell& c, double& out) {
    if (const double* d = std::get_if<double>(&c)) {
        out = *d;
        return std::isfinite(*d);
    }
    if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) {
        out = static_cast<double>(*i);
        return true;
    }
    return false;
}

struct Series {
    std::vector<double> x;
    std::vector<std::vector<double>> y;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
};

Series collect(const Table& t, const std::string& x, const std::vector<std::string>& ys) {
    Series s;
    const std::size_t xi = t.column(x);
    std::vector<std::size_t> yi;
    for (const std::string& y : ys) {
        yi.push_back(t.column(y));
    }
    s.y.resize(ys.size());
    for (const auto& row : t.rows) {
        double xv = 0;
        if (!numeric(row[xi], xv)) {
            continue;
        }
        s.x.push_back(xv);
        for (std::size_t k = 0; k < yi.size(); ++k) {
            double yv = std::numeric_limits<double>::quiet_NaN();
            numeric(row[yi[k]], yv);
            s.y[k].push_back(yv);
        }
    }
    if (!s.x.empty()) {
        s.xmin = *std::min_element(s.x.begin(), s.x.end());
        s.xmax = *std::max_element(s.x.begin(), s.x.end());
    }
    bool first = true;
    for (const auto& col : s.y) {
        for (double v : col) {
            if (std::isfinite(v)) {
                s.ymin = first ? v : std::min(s.ymin, v);
                s.ymax = first ? v : std::max(s.ymax, v);
                first = false;
            }
        }
    }
    if (s.xmax == s.xmin) {
        s.xmax = s.xmin + 1;
    }
    if (s.ymax == s.ymin) {
        s.ymax = s.ymin + 1;
    }
    return s;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("row width does not match the header");
    }
    rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw std::invalid_argument("no column named '" + name + "'");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(const Table& t, std::ostream& out) {
    out << "# " << t.metadata.dump() << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << csv_field(t.columns[i]);
    }
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_field(cell_text(row[i]));
        }
        out << "\n";
    }
}

void write_json(const Table& t, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["metadata"] = t.metadata;
    doc["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const Cell& c : row) {
            r.push_back(cell_json(c));
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << "\n";
}

std::string render_svg(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                       const std::string& title) {
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    const Series s = collect(t, x, ys);
    constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
    auto px = [&](double v) { return L + (v - s.xmin) / (s.xmax - s.xmin) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - s.ymin) / (s.ymax - s.ymin) * (H - T - B); };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">" << title
        << "</text>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    for (double v : {s.xmin, s.xmax}) {
        out << "<text x=\"" << px(v) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
            << format_double(v) << "</text>\n";
    }
    for (double v : {s.ymin, s.ymax}) {
        out << "<text x=\"" << L - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
            << format_double(v) << "</text>\n";
    }
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x << "</text>\n";
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const char* color = colors[k % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isfinite(s.y[k][i])) {
                out << px(s.x[i]) << "," << py(s.y[k][i]) << " ";
            }
        }
        out << "\"/>\n";
        out << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\""
            << color << "\" font-size=\"12\">" << ys[k] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_ascii(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                         int width, int height) {
    static constexpr char marks[] = "*o+x#";
    const Series s = collect(t, x, ys);
    std::vector<std::string> grid(static_cast<std::size_t>(height), std::string(static_cast<std::size_t>(width), ' '));
    for (std::size_t k = 0; k < ys.size(); ++k) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = s.y[k][i];
            if (!std::isfinite(yv)) {
                continue;
            }
            const int col = static_cast<int>(std::lround((s.x[i] - s.xmin) / (s.xmax - s.xmin) * (width - 1)));
            const int row = static_cast<int>(std::lround((s.ymax - yv) / (s.ymax - s.ymin) * (height - 1)));
            grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = marks[k % 5];
        }
    }
    std::ostringstream out;
    out << format_double(s.ymax) << "\n";
    for (const std::string& line : grid) {
        out << "|" << line << "\n";
    }
    out << "+" << std::string(static_cast<std::size_t>(width), '-') << "\n";
    out << format_double(s.xmin) << " .. " << format_double(s.xmax) << "  (" << x << "; ymin "
        << format_double(s.ymin) << ")\n";
    for (std::size_t k = 0; k < ys.size(); ++k) {
        out << "  " << marks[k % 5] << " " << ys[k] << "\n";
    }
    return out.str();
}

}  // namespace arbor::cli

namespace arbor::cli {
namespace {

struct MapData {
    std::vector<double> xs, ys;
    std::vector<std::string> labels;  // distinct, in first-seen order
    std::vector<std::vector<int>> cell;  // [iy][ix] -> label index, -1 when absent
};

MapData collect_map(const Table& t, const std::string& x, const std::string& y, const std::string& label) {
    const std::size_t xi = t.column(x), yi = t.column(y), li = t.column(label);
    MapData m;
    for (const auto& row : t.rows) {
        double xv = 0, yv = 0;
        if (numeric(row[xi], xv) && numeric(row[yi], yv)) {
            m.xs.push_back(xv);
            m.ys.push_back(yv);
        }
    }
    for (auto* v : {&m.xs, &m.ys}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    m.cell.assign(m.ys.size(), std::vector<int>(m.xs.size(), -1));
    for (const auto& row : t.rows) {
        double xv = 0, yv = 0;
        if (!numeric(row[xi], xv) || !numeric(row[yi], yv)) {
            continue;
        }
        const std::string text = cell_text(row[li]);
        auto it = std::find(m.labels.begin(), m.labels.end(), text);
        if (it == m.labels.end()) {
            m.labels.push_back(text);
            it = m.labels.end() - 1;
        }
        const auto ix = std::lower_bound(m.xs.begin(), m.xs.end(), xv) - m.xs.begin();
        const auto iy = std::lower_bound(m.ys.begin(), m.ys.end(), yv) - m.ys.begin();
        m.cell[static_cast<std::size_t>(iy)][static_cast<std::size_t>(ix)] =
            static_cast<int>(it - m.labels.begin());
    }
    return m;
}

}  // namespace

std::string render_map_svg(const Table& t, const std::string& x, const std::string& y,
                           const std::string& label, const std::string& title) {
    static constexpr const char* colors[] = {"#4c72b0", "#dd8452", "#c44e52", "#55a868", "#8172b3"};
    const MapData m = collect_map(t, x, y, label);
    constexpr double W = 640, H = 480, L = 60, R = 120, T = 40, B = 50;
    const double cw = m.xs.empty() ? 0 : (W - L - R) / static_cast<double>(m.xs.size());
    const double ch = m.ys.empty() ? 0 : (H - T - B) / static_cast<double>(m.ys.size());
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (W - R + L) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << title << "</text>\n";
    for (std::size_t iy = 0; iy < m.ys.size(); ++iy) {
        for (std::size_t ix = 0; ix < m.xs.size(); ++ix) {
            const int k = m.cell[iy][ix];
            if (k < 0) {
                continue;
            }
            out << "<rect x=\"" << L + cw * static_cast<double>(ix) << "\" y=\""
                << H - B - ch * static_cast<double>(iy + 1) << "\" width=\"" << cw << "\" height=\"" << ch
                << "\" fill=\"" << colors[k % 5] << "\"/>\n";
        }
    }
    if (!m.xs.empty() && !m.ys.empty()) {
        out << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << format_double(m.xs.front())
            << "</text>\n";
        out << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"end\" font-size=\"11\">"
            << format_double(m.xs.back()) << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"11\">"
            << format_double(m.ys.front()) << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\" font-size=\"11\">"
            << format_double(m.ys.back()) << "</text>\n";
    }
    out << "<text x=\"" << (W - R + L) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2 << ")\">" << y << "</text>\n";
    for (std::size_t k = 0; k < m.labels.size(); ++k) {
        const double ly = T + 20 * static_cast<double>(k);
        out << "<rect x=\"" << W - R + 10 << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
            << colors[k % 5] << "\"/>\n";
        out << "<text x=\"" << W - R + 28 << "\" y=\"" << ly + 11 << "\" font-size=\"12\">" << m.labels[k]
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_map_ascii(const Table& t, const std::string& x, const std::string& y,
                             const std::string& label) {
    const MapData m = collect_map(t, x, y, label);
    std::ostringstream out;
    for (std::size_t iy = m.ys.size(); iy-- > 0;) {
        out << "|";
        for (std::size_t ix = 0; ix < m.xs.size(); ++ix) {
            const int k = m.cell[iy][ix];
            out << (k < 0 ? ' ' : m.labels[static_cast<std::size_t>(k)].front());
        }
        out << "\n";
    }
    out << "+" << std::string(m.xs.size(), '-') << "\n";
    if (!m.xs.empty() && !m.ys.empty()) {
        out << x << " " << format_double(m.xs.front()) << " .. " << format_double(m.xs.back()) << ", " << y << " "
            << format_double(m.ys.front()) << " .. " << format_double(m.ys.back()) << " (up)\n";
    }
    for (const std::string& l : m.labels) {
        out << "  " << l.front() << " " << l << "\n";
    }
    return out.str();
}

}  // namespace arbor::cli
