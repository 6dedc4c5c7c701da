#include "stiffode/dataset/io.hpp"

#include "stiffode/util/fmt.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stiffode::dataset {

void write_series_csv(const ReparamSeries& series, const std::string& path) {
    if (!series.has_derivatives())
        throw std::invalid_argument("write_series_csv: derivatives not estimated");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    const Eigen::Index nu = series.states.cols();
    os << "ts,t";
    for (Eigen::Index c = 1; c <= nu; ++c) os << ",u_" << c;
    for (Eigen::Index c = 1; c <= nu; ++c) os << ",fs_" << c;
    os << ",tdot\n";
    for (std::size_t i = 0; i < series.ts.size(); ++i) {
        os << util::format_g17(series.ts[i]) << "," << util::format_g17(series.t[i]);
        for (Eigen::Index c = 0; c < nu; ++c)
            os << "," << util::format_g17(series.states(i, c));
        for (Eigen::Index c = 0; c < nu; ++c)
            os << "," << util::format_g17(series.fs(i, c));
        os << "," << util::format_g17(series.tdot[i]) << "\n";
    }
}

ReparamSeries read_series_csv(const std::string& path, const Vec& mu) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("empty dataset file " + path);
    int n_cols = 1;
    for (char ch : line)
        if (ch == ',') ++n_cols;
    const int nu = (n_cols - 3) / 2;
    if (n_cols != 3 + 2 * nu)
        throw std::runtime_error("malformed dataset header in " + path);

    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(n_cols);
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != n_cols)
            throw std::runtime_error("ragged dataset row in " + path);
        rows.push_back(std::move(row));
    }
    ReparamSeries s;
    s.mu = mu;
    const int len = static_cast<int>(rows.size());
    s.ts.resize(len);
    s.t.resize(len);
    s.states.resize(len, nu);
    s.fs.resize(len, nu);
    s.tdot.resize(len);
    for (int i = 0; i < len; ++i) {
        s.ts[i] = rows[i][0];
        s.t[i] = rows[i][1];
        for (int c = 0; c < nu; ++c) s.states(i, c) = rows[i][2 + c];
        for (int c = 0; c < nu; ++c) s.fs(i, c) = rows[i][2 + nu + c];
        s.tdot[i] = rows[i][2 + 2 * nu];
    }
    return s;
}

namespace {

nlohmann::json spec_json(const problems::NormalizerSpec& s) {
    return {{"kind", s.kind}, {"params", s.params}};
}

}  // namespace

void write_manifest(const Manifest& m, const problems::ParametricProblem& prob,
                    const std::string& path) {
    nlohmann::json j;
    j["problem"] = m.problem;
    j["seed"] = m.seed;
    j["window"] = m.window;
    j["order"] = m.order;
    j["reference_tol"] = {{"atol", m.atol}, {"rtol", m.rtol}};
    j["dts"] = m.dts;
    j["normalizers"] = {{"state", spec_json(prob.norm.state_spec)},
                        {"parameter", spec_json(prob.norm.param_spec)},
                        {"dynamics", spec_json(prob.norm.dyn_spec)},
                        {"time", spec_json(prob.norm.time_spec)}};
    j["series"] = nlohmann::json::array();
    for (const auto& e : m.series)
        j["series"].push_back(
            {{"file", e.file}, {"role", e.role}, {"mu", e.mu}, {"n", e.n}});
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << j.dump(2) << "\n";
}

Manifest read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    is >> j;
    Manifest m;
    m.problem = j.at("problem").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.window = j.at("window").get<int>();
    m.order = j.at("order").get<int>();
    m.atol = j.at("reference_tol").at("atol").get<double>();
    m.rtol = j.at("reference_tol").at("rtol").get<double>();
    m.dts = j.at("dts").get<double>();
    for (const auto& e : j.at("series")) {
        ManifestEntry ent;
        ent.file = e.at("file").get<std::string>();
        ent.role = e.at("role").get<std::string>();
        ent.mu = e.at("mu").get<std::vector<double>>();
        ent.n = e.at("n").get<int>();
        m.series.push_back(std::move(ent));
    }
    return m;
}

std::vector<ReparamSeries> load_series(const Manifest& m,
                                       const std::string& dir,
                                       const std::string& role) {
    std::vector<ReparamSeries> out;
    for (const auto& e : m.series) {
        if (e.role != role) continue;
        Vec mu(e.mu.size());
        for (std::size_t i = 0; i < e.mu.size(); ++i) mu(i) = e.mu[i];
        out.push_back(read_series_csv(dir + "/" + e.file, mu));
    }
    return out;
}

}  // namespace stiffode::dataset
