#include "gpstrip/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "gpstrip/analytic.hpp"

namespace gpstrip::report {

StripDomain Config::domain(double width) const {
    return make_domain(half_length, width, nx, n_modes, ny_quad);
}

json Config::to_json() const {
    return json{{"schema", kConfigSchema},
                {"nx", nx},
                {"half_length", half_length},
                {"n_modes", n_modes},
                {"ny_quad", ny_quad},
                {"k", k},
                {"tol", tol},
                {"branch", {{"start_offset", branch_start},
                            {"end_offset", branch_end},
                            {"step", branch_step}}},
                {"spectrum", {{"d_min", spec_d_min},
                              {"d_max", spec_d_max},
                              {"step", spec_step},
                              {"n_eigs", spec_n_eigs}}},
                {"lyapunov", {{"d_halfspan", lyap_d_halfspan},
                              {"d_count", lyap_d_count},
                              {"lambda_max", lyap_lambda_max},
                              {"lambda_count", lyap_lambda_count}}}};
}

Config Config::from_json(const json& j) {
    if (!j.contains("schema") || j["schema"] != kConfigSchema)
        throw std::invalid_argument("config: missing or unsupported schema (expected " +
                                    std::string(kConfigSchema) + ")");
    Config c;
    c.nx = j.value("nx", c.nx);
    c.half_length = j.value("half_length", c.half_length);
    c.n_modes = j.value("n_modes", c.n_modes);
    c.ny_quad = j.value("ny_quad", c.ny_quad);
    c.k = j.value("k", c.k);
    c.tol = j.value("tol", c.tol);
    if (j.contains("branch")) {
        const auto& b = j["branch"];
        c.branch_start = b.value("start_offset", c.branch_start);
        c.branch_end = b.value("end_offset", c.branch_end);
        c.branch_step = b.value("step", c.branch_step);
    }
    if (j.contains("spectrum")) {
        const auto& s = j["spectrum"];
        c.spec_d_min = s.value("d_min", c.spec_d_min);
        c.spec_d_max = s.value("d_max", c.spec_d_max);
        c.spec_step = s.value("step", c.spec_step);
        c.spec_n_eigs = s.value("n_eigs", c.spec_n_eigs);
    }
    if (j.contains("lyapunov")) {
        const auto& l = j["lyapunov"];
        c.lyap_d_halfspan = l.value("d_halfspan", c.lyap_d_halfspan);
        c.lyap_d_count = l.value("d_count", c.lyap_d_count);
        c.lyap_lambda_max = l.value("lambda_max", c.lyap_lambda_max);
        c.lyap_lambda_count = l.value("lambda_count", c.lyap_lambda_count);
    }
    if (c.k < 1) throw std::invalid_argument("config: k must be >= 1");
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: parse error in " + path.string() + ": " +
                                    e.what());
    }
    return Config::from_json(j);
}

NdjsonWriter::NdjsonWriter(const std::filesystem::path& path,
                           const std::string& format, const Config& config) {
    std::filesystem::create_directories(path.parent_path());
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    write(json{{"format", format}, {"config", config.to_json()}});
}

void NdjsonWriter::write(const json& record) { out_ << record.dump() << "\n"; }

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& cols,
                     const std::string& format, const Config* config)
    : ncols_(cols.size()) {
    std::filesystem::create_directories(path.parent_path());
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    if (!format.empty() && config)
        out_ << "# " << json{{"format", format}, {"config", config->to_json()}}.dump()
             << "\n";
    for (size_t i = 0; i < cols.size(); ++i)
        out_ << cols[i] << (i + 1 < cols.size() ? "," : "\n");
}

void CsvWriter::write_row(const std::vector<std::string>& values) {
    for (size_t i = 0; i < ncols_; ++i)
        out_ << (i < values.size() ? values[i] : "")
             << (i + 1 < ncols_ ? "," : "\n");
}

std::string CsvWriter::num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

namespace {
struct Frame {
    double x0, x1, y0, y1;            // data range
    double px0 = 70, px1 = 640, py0 = 400, py1 = 40;  // pixel box (y flipped)
    double sx(double x) const { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); }
    double sy(double y) const { return py0 + (y - y0) / (y1 - y0) * (py1 - py0); }
};

std::string fmt_tick(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}
}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series, const Config* config) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (x0 > x1) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
    if (x1 - x0 < 1e-300) x1 = x0 + 1;
    if (y1 - y0 < 1e-300) y1 = y0 + 1;
    const double mx = 0.05 * (x1 - x0), my = 0.08 * (y1 - y0);
    Frame fr{x0 - mx, x1 + mx, y0 - my, y1 + my};

    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='700' height='450' "
           "viewBox='0 0 700 450'>\n<rect width='700' height='450' fill='white'/>\n";
    if (config)
        out << "<desc>format=gpstrip-plot/1 config="
            << config->to_json().dump() << "</desc>\n";
    out << "<text x='350' y='22' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    // axes
    out << "<line x1='" << fr.px0 << "' y1='" << fr.py0 << "' x2='" << fr.px1
        << "' y2='" << fr.py0 << "' stroke='black'/>\n";
    out << "<line x1='" << fr.px0 << "' y1='" << fr.py0 << "' x2='" << fr.px0
        << "' y2='" << fr.py1 << "' stroke='black'/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = fr.x0 + t * (fr.x1 - fr.x0) / 5;
        const double yv = fr.y0 + t * (fr.y1 - fr.y0) / 5;
        out << "<line x1='" << fr.sx(xv) << "' y1='" << fr.py0 << "' x2='" << fr.sx(xv)
            << "' y2='" << fr.py0 + 5 << "' stroke='black'/>\n";
        out << "<text x='" << fr.sx(xv) << "' y='" << fr.py0 + 20
            << "' text-anchor='middle' font-size='11'>" << fmt_tick(xv) << "</text>\n";
        out << "<line x1='" << fr.px0 - 5 << "' y1='" << fr.sy(yv) << "' x2='" << fr.px0
            << "' y2='" << fr.sy(yv) << "' stroke='black'/>\n";
        out << "<text x='" << fr.px0 - 8 << "' y='" << fr.sy(yv) + 4
            << "' text-anchor='end' font-size='11'>" << fmt_tick(yv) << "</text>\n";
    }
    out << "<text x='355' y='440' text-anchor='middle' font-size='13'>" << xlabel
        << "</text>\n";
    out << "<text x='16' y='220' text-anchor='middle' font-size='13' "
           "transform='rotate(-90 16 220)'>"
        << ylabel << "</text>\n";
    int li = 0;
    for (const auto& s : series) {
        if (s.line && s.points.size() > 1) {
            out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
            for (auto [x, y] : s.points) out << fr.sx(x) << "," << fr.sy(y) << " ";
            out << "'/>\n";
        }
        for (auto [x, y] : s.points)
            out << "<circle cx='" << fr.sx(x) << "' cy='" << fr.sy(y)
                << "' r='2.4' fill='" << s.color << "'/>\n";
        out << "<text x='" << fr.px1 - 150 << "' y='" << fr.py1 + 16 + 16 * li
            << "' font-size='12' fill='" << s.color << "'>" << s.label << "</text>\n";
        ++li;
    }
    out << "</svg>\n";
}

void write_vortex_svg(const std::filesystem::path& path, const std::string& title,
                      double half_length, double width,
                      const vortices::VortexSet& vs, const Config* config) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    const double x0 = -6.0, x1 = 6.0;
    Frame fr{x0, x1, 0.0, width};
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='700' height='450' "
           "viewBox='0 0 700 450'>\n<rect width='700' height='450' fill='white'/>\n";
    if (config)
        out << "<desc>format=gpstrip-plot/1 config="
            << config->to_json().dump() << "</desc>\n";
    out << "<text x='350' y='22' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    out << "<rect x='" << fr.px0 << "' y='" << fr.py1 << "' width='" << fr.px1 - fr.px0
        << "' height='" << fr.py0 - fr.py1
        << "' fill='#f5f8ff' stroke='black'/>\n";
    out << "<line x1='" << fr.sx(0) << "' y1='" << fr.py0 << "' x2='" << fr.sx(0)
        << "' y2='" << fr.py1 << "' stroke='#bbbbbb' stroke-dasharray='4'/>\n";
    for (const auto& v : vs.entries) {
        const char* color = v.degree < 0 ? "#d62728" : "#2ca02c";
        out << "<circle cx='" << fr.sx(v.x) << "' cy='" << fr.sy(v.y)
            << "' r='7' fill='none' stroke='" << color << "' stroke-width='2'/>\n";
        out << "<text x='" << fr.sx(v.x) << "' y='" << fr.sy(v.y) + 4
            << "' text-anchor='middle' font-size='12' fill='" << color << "'>"
            << (v.degree < 0 ? "-" : "+") << "</text>\n";
    }
    (void)half_length;
    out << "</svg>\n";
}

}  // namespace gpstrip::report
