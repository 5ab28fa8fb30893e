#include "bg/scenario.hpp"

#include "bg/multiindex.hpp"
#include "bg/io.hpp"
#include "bg/trigpoly.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

int to_int(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "': bad integer '" + s + "'");
    }
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "': bad number '" + s + "'");
    }
}

// "<amp> sin|cos m1 ... mn"
TrigTermSpec parse_trig(const std::vector<std::string>& tk, std::size_t from, std::size_t to,
                        int n, const std::string& key) {
    if (to - from < 2 + static_cast<std::size_t>(n))
        throw config_error("config: key '" + key + "': expected '<amp> sin|cos m1..m" +
                           std::to_string(n) + "'");
    TrigTermSpec t;
    t.amplitude = to_double(tk[from], key);
    if (tk[from + 1] == "sin")
        t.sine = true;
    else if (tk[from + 1] == "cos")
        t.sine = false;
    else
        throw config_error("config: key '" + key + "': phase must be sin or cos");
    for (int a = 0; a < n; ++a) t.mode.push_back(to_int(tk[from + 2 + a], key));
    return t;
}

} // namespace

ScenarioConfig parse_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    ScenarioConfig cfg;
    cfg.ell = -1;
    std::string section, line;
    std::vector<std::pair<std::string, std::string>> deferred; // need n first
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "n")
            cfg.n = to_int(val, full);
        else if (full == "sizes") {
            for (auto& t : tokens(val)) cfg.sizes.push_back(to_int(t, full));
        } else if (full == "k")
            cfg.k = to_int(val, full);
        else if (full == "ell")
            cfg.ell = to_int(val, full);
        else if (full == "operator")
            cfg.op = val;
        else if (full == "tolerance")
            cfg.tolerance = to_double(val, full);
        else if (full == "metric.type")
            cfg.metric.type = val;
        else if (full == "metric.term")
            deferred.emplace_back(full, val);
        else if (full == "input.type")
            cfg.input.type = val;
        else if (full == "input.file")
            cfg.input.file = val;
        else if (full == "input.seed")
            cfg.input.seed = static_cast<unsigned>(to_int(val, full));
        else if (full == "input.max_mode")
            cfg.input.max_mode = to_int(val, full);
        else if (full == "input.term")
            deferred.emplace_back(full, val);
        else if (full == "output.dir")
            cfg.out_dir = val;
        else
            throw config_error("config: line " + std::to_string(lineno) + ": unknown key '" +
                               full + "'");
    }

    if (cfg.n != 4 && cfg.n != 6) throw config_error("config: n must be 4 or 6");
    if (cfg.sizes.empty()) throw config_error("config: sizes missing");
    if (cfg.sizes.size() == 1) cfg.sizes.assign(cfg.n, cfg.sizes[0]);
    if (static_cast<int>(cfg.sizes.size()) != cfg.n)
        throw config_error("config: sizes must list 1 or n entries");
    for (int s : cfg.sizes)
        if (s < 4 || s % 2) throw config_error("config: grid sizes must be even and >= 4");

    for (auto& [key, val] : deferred) {
        std::vector<std::string> tk = tokens(val);
        if (key == "metric.term") {
            cfg.metric.terms.push_back(parse_trig(tk, 0, tk.size(), cfg.n, key));
        } else { // input.term: "<amp> sin|cos m1..mn on i1 i2 ..." (1-based axes)
            auto on = std::find(tk.begin(), tk.end(), "on");
            std::size_t cut = static_cast<std::size_t>(on - tk.begin());
            ExprTermSpec e;
            e.trig = parse_trig(tk, 0, cut, cfg.n, key);
            if (on != tk.end())
                for (auto it = on + 1; it != tk.end(); ++it) {
                    int a = to_int(*it, key) - 1;
                    if (a < 0 || a >= cfg.n)
                        throw config_error("config: key '" + key + "': axis out of range");
                    e.axes.push_back(a);
                }
            if (!std::is_sorted(e.axes.begin(), e.axes.end()) ||
                std::adjacent_find(e.axes.begin(), e.axes.end()) != e.axes.end())
                throw config_error("config: key '" + key + "': axes must strictly increase");
            cfg.input.terms.push_back(std::move(e));
        }
    }

    if (cfg.metric.type != "flat" && cfg.metric.type != "conformal")
        throw config_error("config: metric.type must be flat or conformal");
    if (cfg.metric.type == "conformal" && cfg.metric.terms.empty())
        throw config_error("config: conformal metric needs at least one metric.term");
    if (cfg.input.type != "file" && cfg.input.type != "random" && cfg.input.type != "expression")
        throw config_error("config: input.type must be file, random or expression");
    if (cfg.input.type == "file" && cfg.input.file.empty())
        throw config_error("config: input.file missing");
    if (cfg.input.type == "expression" && cfg.input.terms.empty())
        throw config_error("config: expression input needs at least one input.term");
    if (cfg.input.max_mode < 1) throw config_error("config: input.max_mode must be >= 1");

    if (cfg.k < 0 || cfg.k > cfg.n) throw config_error("config: k out of range");
    static const char* registry[] = {"Lk_ell", "L", "G", "B", "C", "D", "Bp", "Dp", "Q", "Gtop"};
    bool known = cfg.op.empty();
    for (const char* r : registry) known = known || cfg.op == r;
    if (!known) throw config_error("config: unknown operator '" + cfg.op + "'");
    if (cfg.op == "Lk_ell") {
        if (cfg.ell < 1 || cfg.ell > cfg.n / 2 - cfg.k)
            throw config_error("config: ell must lie in [1, n/2-k]");
    } else if (cfg.op == "L" || cfg.op == "G" || cfg.op == "B" || cfg.op == "C" ||
               cfg.op == "D") {
        if (cfg.k >= cfg.n / 2) throw config_error("config: absolute operators need k < n/2");
    } else if (cfg.op == "Bp" || cfg.op == "Dp" || cfg.op == "Q") {
        if (cfg.k > cfg.n / 2 - 2)
            throw config_error("config: relative operators need k <= n/2-2");
    } else if (cfg.op == "Gtop") {
        if (cfg.k != cfg.n / 2) throw config_error("config: Gtop needs k = n/2");
    }
    return cfg;
}

GridPtr build_grid(const ScenarioConfig& cfg) { return TorusGrid::make(cfg.n, cfg.sizes); }

ScalarField build_phi(const ScenarioConfig& cfg, const GridPtr& grid) {
    TrigPoly p;
    for (const auto& t : cfg.metric.terms) p.terms.push_back({t.amplitude, t.mode, t.sine});
    return p.sample(grid);
}

Metric build_metric(const ScenarioConfig& cfg, const GridPtr& grid) {
    if (cfg.metric.type == "flat") return flat_metric(grid);
    return conformal_metric(build_phi(cfg, grid));
}

FormField build_input(const ScenarioConfig& cfg, const GridPtr& grid) {
    if (cfg.input.type == "random")
        return random_lowfreq_form(grid, cfg.k, cfg.input.max_mode, cfg.input.seed);
    if (cfg.input.type == "file") {
        FormField f = load_form(cfg.input.file);
        if (f.grid->n != cfg.n || f.grid->sizes != cfg.sizes || f.degree != cfg.k)
            throw config_error("config: input file grid/degree mismatch");
        return f;
    }
    FormField f(grid, cfg.k);
    for (const auto& e : cfg.input.terms) {
        if (static_cast<int>(e.axes.size()) != cfg.k)
            throw config_error("config: input.term component degree != k");
        TrigPoly p;
        p.terms.push_back({e.trig.amplitude, e.trig.mode, e.trig.sine});
        ScalarField s = p.sample(grid);
        double* c = f.comp(multi_index_rank(cfg.n, e.axes));
        for (std::size_t q = 0; q < grid->npts; ++q) c[q] += s.v[q];
    }
    return f;
}

} // namespace bg
