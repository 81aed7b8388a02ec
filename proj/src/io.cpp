// CSV and SVG writers, scenario configuration parsing.
#include "r13/io.hpp"
#include "r13/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#ifndef R13_DEFAULT_DATA_DIR
#define R13_DEFAULT_DATA_DIR "data"
#endif

namespace r13 {

std::string formatNumber(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csvString(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) fail(ErrorKind::Io, "csv: header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) fail(ErrorKind::Io, "csv: columns have different lengths");
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
    out += "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + formatNumber(columns[j][i]);
        out += "\n";
    }
    return out;
}

void writeText(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) fail(ErrorKind::Io, "cannot create directory " + p.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << text;
    if (!out) fail(ErrorKind::Io, "write failed: " + path);
}

void writeCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& columns) {
    writeText(path, csvString(header, columns));
}

namespace {

std::vector<double> col(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::string fmtTick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-14 ? 0.0 : v);
    return buf;
}

std::string escapeXml(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '<') r += "&lt;";
        else if (c == '>') r += "&gt;";
        else if (c == '&') r += "&amp;";
        else r += c;
    }
    return r;
}

} // namespace

std::string svgLineChart(const std::string& title, const std::string& xlabel, const std::vector<PlotSeries>& series) {
    const double W = 640, H = 420, l = 70, r = 20, t = 40, b = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) fail(ErrorKind::Io, "svg: series '" + s.label + "' has mismatched lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!(x1 >= x0)) x0 = 0, x1 = 1;
    if (!(y1 >= y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return l + (x - x0) / (x1 - x0) * (W - l - r); };
    auto py = [&](double y) { return H - b - (y - y0) / (y1 - y0) * (H - t - b); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escapeXml(title) << "</text>\n";
    o << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << W - l - r << "\" height=\"" << H - t - b
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        o << "<text x=\"" << px(xv) << "\" y=\"" << H - b + 16 << "\" text-anchor=\"middle\">" << fmtTick(xv) << "</text>\n";
        o << "<text x=\"" << l - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmtTick(yv) << "</text>\n";
    }
    o << "<text x=\"" << (l + W - r) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escapeXml(xlabel) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = colors[k % 6];
        o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) o << px(s.x[i]) << "," << py(s.y[i]) << " ";
        o << "\"/>\n";
        const double ly = t + 16 + 16 * k;
        o << "<line x1=\"" << W - r - 110 << "\" y1=\"" << ly << "\" x2=\"" << W - r - 90 << "\" y2=\"" << ly
          << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - r - 84 << "\" y=\"" << ly + 4 << "\">" << escapeXml(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double toDouble(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::Config, "invalid number for " + key + ": '" + v + "'");
}

bool toBool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(ErrorKind::Config, "invalid boolean for " + key + ": '" + v + "'");
}

} // namespace

ScenarioConfig parseScenario(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(ErrorKind::Config, "line " + std::to_string(lineNo) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorKind::Config, "line " + std::to_string(lineNo) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        if (kv.count(key)) fail(ErrorKind::Config, "duplicate key " + key);
        kv[key] = trim(line.substr(eq + 1));
    }
    ScenarioConfig c;
    FemConfig& f = c.fem;
    for (const auto& [key, v] : kv) {
        if (key == "model.eta") f.eta = parseEta(v);
        else if (key == "model.kn") f.kn = toDouble(key, v);
        else if (key == "model.knbar") f.knbar = toDouble(key, v);
        else if (key == "model.chi") f.chi = toDouble(key, v);
        else if (key == "model.bc_mode") f.bcMode = parseBcMode(v);
        else if (key == "walls.theta_left") f.thetaLeft = toDouble(key, v);
        else if (key == "walls.theta_right") f.thetaRight = toDouble(key, v);
        else if (key == "walls.v_left") f.vLeft = toDouble(key, v);
        else if (key == "walls.v_right") f.vRight = toDouble(key, v);
        else if (key == "mesh.h") f.h = toDouble(key, v);
        else if (key == "time.dt") f.dt = toDouble(key, v);
        else if (key == "time.t_end") f.tEnd = toDouble(key, v);
        else if (key == "output.dir") c.outputDir = v;
        else if (key == "output.svg") c.svg = toBool(key, v);
        else if (key == "output.snapshots") {
            std::string item;
            std::istringstream ls(v);
            while (std::getline(ls, item, ','))
                if (!trim(item).empty()) f.snapshots.push_back(toDouble(key, trim(item)));
        } else
            fail(ErrorKind::Config, "unknown configuration key " + key);
    }
    if (!f.kn && !f.knbar) fail(ErrorKind::Config, "one of model.kn and model.knbar is required");
    if (f.kn && f.knbar) fail(ErrorKind::Config, "model.kn and model.knbar are mutually exclusive");
    try {
        f.validate();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        fail(ErrorKind::Config, e.what());
    }
    return c;
}

ScenarioConfig loadScenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open configuration " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parseScenario(ss.str());
}

std::string dataDir() {
    const char* env = std::getenv("R13_DATA_DIR");
    return env && *env ? env : R13_DEFAULT_DATA_DIR;
}

std::string resolveDataPath(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.is_absolute() || std::filesystem::exists(p)) return path;
    return (std::filesystem::path(dataDir()) / p).string();
}

void writeSnapshotCsv(const std::string& path, const std::vector<double>& times,
                      const std::vector<MomentField1D>& snapshots, const ModelCoefficients& k, double kn) {
    std::vector<std::string> header = {"t", "x"};
    for (int c = 0; c < MomentField1D::NCOMP; ++c) header.push_back(MomentField1D::name(c));
    for (const char* n : {"q1", "q2", "sigma12", "sigma22"}) header.push_back(n);
    std::vector<std::vector<double>> cols(header.size());
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        const MomentField1D& f = snapshots[s];
        const PhysicalFluxes1D p = recoverStressHeat(f, k, kn);
        for (int i = 0; i < f.nodes(); ++i) {
            cols[0].push_back(times[s]);
            cols[1].push_back(f.x(i));
            for (int c = 0; c < MomentField1D::NCOMP; ++c) cols[2 + c].push_back(f.u(i, c));
            cols[11].push_back(p.q1(i));
            cols[12].push_back(p.q2(i));
            cols[13].push_back(p.sigma12(i));
            cols[14].push_back(p.sigma22(i));
        }
    }
    writeCsv(path, header, cols);
}

void writeSeriesCsv(const std::string& path, const TimeSeries& s) {
    writeCsv(path, {"t", "entropy", "residual", "energy", "wall_supply"},
             {s.t, s.entropy, s.residual, s.energy, s.wallSupply});
}

void writeSteadyCsv(const std::string& path, const SteadySolution& s) {
    writeCsv(path, {"x", "rho", "theta", "v2", "qbar2", "sbar22", "q2"},
             {col(s.x), col(s.rho), col(s.theta), col(s.v2), col(s.qbar), col(s.sigma), col(s.q)});
}

} // namespace r13
