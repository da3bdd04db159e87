#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "gpstrip/continuation.hpp"
#include "gpstrip/grid.hpp"

namespace gpstrip::report {

using json = nlohmann::json;

inline constexpr const char* kConfigSchema = "gpstrip-config/1";

struct Config {
    int nx = 801;
    double half_length = 20.0;
    int n_modes = 8;
    int ny_quad = 0;  // 0 = 4 * n_modes
    int k = 1;
    double tol = 1e-10;
    // branch
    double branch_start = 0.05;
    double branch_end = 1.0;
    double branch_step = 0.05;
    // spectrum scan
    double spec_d_min = 0.0;  // 0 = derive from k
    double spec_d_max = 0.0;
    double spec_step = 0.01;
    int spec_n_eigs = 4;
    // lyapunov scan
    double lyap_d_halfspan = 0.2;
    int lyap_d_count = 9;
    double lyap_lambda_max = 0.24;
    int lyap_lambda_count = 9;

    StripDomain domain(double width) const;
    json to_json() const;
    static Config from_json(const json& j);
};

/// Reads a config file; missing file or schema mismatch throws
/// std::invalid_argument (usage error, exit code 2 at the CLI).
Config load_config(const std::filesystem::path& path);

/// NDJSON writer: a header record with format id and the resolved config,
/// then one record per line.
class NdjsonWriter {
  public:
    NdjsonWriter(const std::filesystem::path& path, const std::string& format,
                 const Config& config);
    void write(const json& record);

  private:
    std::ofstream out_;
};

/// CSV mirror for spreadsheet inspection. The first line is a `#` comment
/// carrying the format id and the resolved config.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& cols,
              const std::string& format = "", const Config* config = nullptr);
    void write_row(const std::vector<std::string>& values);
    static std::string num(double v);

  private:
    std::ofstream out_;
    size_t ncols_;
};

/// Minimal static SVG line plot.
struct Series {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<std::pair<double, double>> points;
    bool line = true;
};

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series,
                    const Config* config = nullptr);

/// Vortex map with degree glyphs (+ / -).
void write_vortex_svg(const std::filesystem::path& path, const std::string& title,
                      double half_length, double width,
                      const vortices::VortexSet& vs,
                      const Config* config = nullptr);

}  // namespace gpstrip::report
