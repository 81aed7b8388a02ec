#pragma once
// CSV/SVG output and the scenario configuration file.
#include "r13/fem1d.hpp"
#include "r13/steady1d.hpp"

#include <string>
#include <vector>

namespace r13 {

// 17 significant digits, '.' decimal
std::string formatNumber(double v);

// equal-length columns with a header row
void writeCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& columns);
std::string csvString(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns);

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

// minimal line chart: frame, ticks, one polyline per series, legend
std::string svgLineChart(const std::string& title, const std::string& xlabel, const std::vector<PlotSeries>& series);
void writeText(const std::string& path, const std::string& text);

// key = value lines, '#' comments, optional [section] headers prefixing keys
struct ScenarioConfig {
    FemConfig fem;
    std::string outputDir = "out";
    bool svg = true;
};

ScenarioConfig parseScenario(const std::string& text);
ScenarioConfig loadScenario(const std::string& path);

// R13_DATA_DIR, else the source-tree data directory
std::string dataDir();
// relative paths that do not exist are looked up in dataDir()
std::string resolveDataPath(const std::string& path);

void writeSnapshotCsv(const std::string& path, const std::vector<double>& times,
                      const std::vector<MomentField1D>& snapshots, const ModelCoefficients& k, double kn);
void writeSeriesCsv(const std::string& path, const TimeSeries& s);
void writeSteadyCsv(const std::string& path, const SteadySolution& s);

} // namespace r13
