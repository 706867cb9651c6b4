#include "fracbvp/cli.hpp"

#include "fracbvp/conditions.hpp"
#include "fracbvp/config.hpp"
#include "fracbvp/errors.hpp"
#include "fracbvp/green.hpp"
#include "fracbvp/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace fracbvp::cli {
namespace {

using nlohmann::json;

// CSV values: 17 significant digits, C locale.
std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string brief(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const char* yes_no(bool b) {
    return b ? "yes" : "no";
}

class IoError : public Error {
public:
    using Error::Error;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << content) || !f.flush()) {
        throw IoError("cannot write '" + path + "'");
    }
}

// Writes to --out when given, else to stdout.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        write_file(path, content);
    }
}

// "dir/sol.csv" -> "dir/sol_2.csv"
std::string numbered(const std::string& path, std::size_t k) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    const std::string suffix = "_" + std::to_string(k);
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash) ||
        dot == (slash == std::string::npos ? 0 : slash + 1)) {
        return path + suffix;
    }
    return path.substr(0, dot) + suffix + path.substr(dot);
}

struct Common {
    std::string config_path;
    bool sigma_unweighted = false;

    void attach(CLI::App* sub) {
        sub->add_option("--config", config_path, "problem description (JSON)")->required();
        sub->add_flag("--sigma-unweighted", sigma_unweighted,
                      "omit h from the sigma sum (overrides the config)");
    }

    ProblemConfig load() const {
        ProblemConfig c = load_config(config_path);
        c.sigma_unweighted = c.sigma_unweighted || sigma_unweighted;
        return c;
    }
};

std::string green_csv(const bvp::GreenMatrix& G) {
    std::string s = "t,s,G\n";
    const ShiftedGrid grid = G.grid();
    for (std::size_t i = 0; i < G.rows(); ++i) {
        for (std::size_t j = 0; j < G.cols(); ++j) {
            s += full(grid.point_of(i)) + "," + std::to_string(j) + "," + full(G(i, j)) + "\n";
        }
    }
    return s;
}

json constants_json(const bvp::ConeConstants& c, const ShiftedGrid& grid) {
    json q = json::array();
    for (std::size_t i = c.quarter.lo; i <= c.quarter.hi; ++i) {
        q.push_back(grid.point_of(i));
    }
    return json{
        {"gamma", c.gamma},
        {"eta", c.eta},
        {"sigma", c.sigma},
        {"sigma_weighted", c.sigma_weighted},
        {"sigma_unweighted", c.sigma_unweighted},
        {"sigma_weighting", c.weighting == bvp::SigmaWeighting::WithH ? "h" : "none"},
        {"quarter_interval", q},
        {"t_star", c.midpoint},
        {"t_star_in_quarter", c.midpoint_in_quarter},
        {"s_lo", c.s_lo},
        {"s_hi", c.s_hi},
    };
}

std::string constants_text(const bvp::ConeConstants& c, const ShiftedGrid& grid) {
    std::ostringstream o;
    o << "gamma = " << brief(c.gamma) << "\n";
    o << "eta = " << brief(c.eta) << "\n";
    o << "sigma = " << brief(c.sigma)
      << (c.weighting == bvp::SigmaWeighting::WithH ? " (weighted by h)" : " (unweighted)") << "\n";
    o << "sigma_weighted = " << brief(c.sigma_weighted) << "\n";
    o << "sigma_unweighted = " << brief(c.sigma_unweighted) << "\n";
    o << "quarter interval points:";
    for (std::size_t i = c.quarter.lo; i <= c.quarter.hi; ++i) {
        o << " " << brief(grid.point_of(i));
    }
    o << "\n";
    o << "t* = " << brief(c.midpoint) << " (in quarter interval: " << yes_no(c.midpoint_in_quarter)
      << ")\n";
    o << "sigma sum over s = " << c.s_lo << ".." << c.s_hi << "\n";
    return o.str();
}

json radius_json(const bvp::RadiusCheck& r) {
    return json{{"r", r.r},
                {"holds", r.holds},
                {"tight", r.tight},
                {"threshold", r.threshold},
                {"ratio", r.ratio},
                {"witness_t", r.witness_t},
                {"witness_y", r.witness_y}};
}

json limit_json(const bvp::LimitCheck& l) {
    json samples = json::array();
    for (const auto& [y, q] : l.samples) {
        samples.push_back(json::array({y, q}));
    }
    return json{{"heuristic_holds", l.heuristic_holds}, {"threshold", l.threshold}, {"samples", samples}};
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json report_json(const bvp::ConditionReport& rep, const ShiftedGrid& grid) {
    json h1 = json::array();
    json h2 = json::array();
    for (const auto& r : rep.h1) {
        h1.push_back(radius_json(r));
    }
    for (const auto& r : rep.h2) {
        h2.push_back(radius_json(r));
    }
    return json{
        {"constants", constants_json(rep.constants, grid)},
        {"y_samples", rep.y_samples},
        {"h1", h1},
        {"h2", h2},
        {"h3", limit_json(rep.h3)},
        {"h4", limit_json(rep.h4)},
        {"f_positive", rep.f_positive},
        {"one_solution", {{"applicable", rep.one_solution_applicable},
                          {"r1", optional_json(rep.r1)},
                          {"r2", optional_json(rep.r2)}}},
        {"two_solutions_h1_h3", {{"applicable", rep.two_solutions_h1_h3_applicable},
                                 {"m", optional_json(rep.m_h1_h3)}}},
        {"two_solutions_h2_h4", {{"applicable", rep.two_solutions_h2_h4_applicable},
                                 {"m", optional_json(rep.m_h2_h4)}}},
    };
}

std::string radius_line(const bvp::RadiusCheck& r) {
    std::string s = "  r = " + brief(r.r) + ": ";
    s += r.holds ? (r.tight ? "holds (tight)" : "holds") : "fails";
    s += "  ratio " + brief(r.ratio) + ", threshold " + brief(r.threshold) + ", extreme at t = " +
         brief(r.witness_t) + ", y = " + brief(r.witness_y) + "\n";
    return s;
}

std::string limit_line(const char* name, const bvp::LimitCheck& l) {
    std::string s = std::string(name) + ": " + (l.heuristic_holds ? "holds" : "fails") + " (heuristic)";
    if (!l.samples.empty()) {
        s += "  last min_t f/y = " + brief(l.samples.back().second) + " at y = " +
             brief(l.samples.back().first);
    }
    s += ", needs > " + brief(l.threshold) + "\n";
    return s;
}

std::string report_text(const bvp::ConditionReport& rep, const ShiftedGrid& grid) {
    std::string s = constants_text(rep.constants, grid);
    s += "y samples per radius = " + std::to_string(rep.y_samples) + "\n";
    s += "H1 (max f <= eta r / lambda on 0 <= y <= r):\n";
    for (const auto& r : rep.h1) {
        s += radius_line(r);
    }
    s += "H2 (min f >= sigma r / lambda on gamma r <= y <= r):\n";
    for (const auto& r : rep.h2) {
        s += radius_line(r);
    }
    s += limit_line("H3 (f/y -> infinity as y -> 0+)", rep.h3);
    s += limit_line("H4 (f/y -> infinity as y -> infinity)", rep.h4);
    s += std::string("f > 0 at all samples: ") + yes_no(rep.f_positive) + "\n";
    s += std::string("one solution (H1 at r1, H2 at r2): ") +
         (rep.one_solution_applicable ? "applicable" : "not applicable");
    if (rep.one_solution_applicable) {
        s += ", r1 = " + brief(*rep.r1) + ", r2 = " + brief(*rep.r2);
    }
    s += "\n";
    s += std::string("two solutions (H1 and H3): ") +
         (rep.two_solutions_h1_h3_applicable ? "applicable, m = " + brief(*rep.m_h1_h3)
                                             : std::string("not applicable")) +
         "\n";
    s += std::string("two solutions (H2, H4, f > 0): ") +
         (rep.two_solutions_h2_h4_applicable ? "applicable, m = " + brief(*rep.m_h2_h4)
                                             : std::string("not applicable")) +
         "\n";
    return s;
}

std::string solution_csv(const GridFunction& y) {
    std::string s = "t,y\n";
    for (std::size_t i = 0; i < y.size(); ++i) {
        s += full(y.grid().point_of(i)) + "," + full(y[i]) + "\n";
    }
    return s;
}

int cmd_green(const Common& common, const std::string& out_path, std::ostream& out) {
    const ProblemConfig cfg = common.load();
    const bvp::GreenMatrix G = bvp::build_green(cfg.nu, cfg.b);
    emit(out_path, green_csv(G), out);
    return kOk;
}

int cmd_constants(const Common& common, bool as_json, std::ostream& out) {
    const ProblemConfig cfg = common.load();
    const bvp::Problem P = cfg.problem();
    const bvp::GreenMatrix G = bvp::build_green(P.nu, P.b);
    const bvp::ConeConstants c = bvp::cone_constants(P, G, cfg.weighting());
    if (as_json) {
        out << constants_json(c, G.grid()).dump(2) << "\n";
    } else {
        out << constants_text(c, G.grid());
    }
    return kOk;
}

int cmd_check(const Common& common, const std::vector<double>& radii, bool as_json, double margin,
              std::size_t samples, std::ostream& out) {
    const ProblemConfig cfg = common.load();
    const bvp::Problem P = cfg.problem();
    const bvp::GreenMatrix G = bvp::build_green(P.nu, P.b);
    bvp::ConditionOptions opts;
    opts.limit_margin = margin;
    opts.y_samples_per_r = samples;
    opts.weighting = cfg.weighting();
    const bvp::ConditionReport rep = bvp::check_conditions(P, G, radii, opts);
    if (as_json) {
        out << report_json(rep, G.grid()).dump(2) << "\n";
    } else {
        out << report_text(rep, G.grid());
    }
    return kOk;
}

int cmd_solve(const Common& common, const std::string& out_path, bool verbose, std::ostream& out,
              std::ostream& err) {
    const ProblemConfig cfg = common.load();
    const bvp::Problem P = cfg.problem();
    const bvp::GreenMatrix G = bvp::build_green(P.nu, P.b);
    const bvp::SearchResult r =
        bvp::find_positive_solutions(P, G, cfg.solver.starts, cfg.search_options());
    if (verbose) {
        for (const auto& f : r.failures) {
            err << "start " << brief(f.start) << " (" << f.stage << "): " << f.reason << "\n";
        }
    }
    if (r.solutions.empty()) {
        err << "no start produced a verified solution\n";
        return kNoSolution;
    }
    for (std::size_t k = 0; k < r.solutions.size(); ++k) {
        const bvp::Solution& s = r.solutions[k];
        out << "solution " << k + 1 << ": norm = " << brief(s.y.norm())
            << ", residual = " << brief(s.residual_norm) << ", in_cone = " << yes_no(s.in_cone)
            << ", method = " << bvp::to_string(s.method) << ", iterations = " << s.iterations;
        if (!out_path.empty()) {
            const std::string file = numbered(out_path, k + 1);
            write_file(file, solution_csv(s.y));
            out << ", file = " << file;
        }
        out << "\n";
    }
    return kOk;
}

int cmd_sweep(const Common& common, double from, double to, int steps, const std::string& out_path,
              std::ostream& out) {
    if (!(from > 0.0) || !(to > from) || !std::isfinite(to)) {
        throw ConfigError("--lambda-from/--lambda-to: need 0 < from < to");
    }
    if (steps < 2) {
        throw ConfigError("--steps: need at least 2");
    }
    const ProblemConfig cfg = common.load();
    const bvp::GreenMatrix G = bvp::build_green(cfg.nu, cfg.b);

    std::vector<std::pair<double, std::vector<double>>> rows;
    std::size_t widest = 0;
    for (int k = 0; k < steps; ++k) {
        const double lambda =
            k == steps - 1 ? to : from * std::pow(to / from, static_cast<double>(k) / (steps - 1));
        const bvp::Problem P = cfg.problem(lambda);
        const bvp::SearchResult r =
            bvp::find_positive_solutions(P, G, cfg.solver.starts, cfg.search_options());
        std::vector<double> norms;
        for (const auto& s : r.solutions) {
            norms.push_back(s.y.norm());
        }
        widest = std::max(widest, norms.size());
        rows.emplace_back(lambda, std::move(norms));
    }

    std::string csv = "lambda,num_solutions";
    for (std::size_t j = 1; j <= std::max<std::size_t>(widest, 1); ++j) {
        csv += ",norm_" + std::to_string(j);
    }
    csv += "\n";
    for (const auto& [lambda, norms] : rows) {
        csv += full(lambda) + "," + std::to_string(norms.size());
        for (std::size_t j = 0; j < std::max<std::size_t>(widest, 1); ++j) {
            csv += ",";
            if (j < norms.size()) {
                csv += full(norms[j]);
            }
        }
        csv += "\n";
    }
    emit(out_path, csv, out);
    return kOk;
}

}  // namespace

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ValidationError*>(&e)) {
        return kValidationFailed;
    }
    if (dynamic_cast<const DegenerateCone*>(&e)) {
        return kDegenerateCone;
    }
    if (dynamic_cast<const IoError*>(&e)) {
        return kIoError;
    }
    return kConfigError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Positive solutions of discrete fractional boundary value problems", "fracbvp"};
    app.require_subcommand(1);

    Common common;
    std::string out_path;
    bool as_json = false;
    bool verbose = false;
    std::vector<double> radii;
    double margin = 1.0;
    std::size_t samples = 64;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;

    CLI::App* green = app.add_subcommand("green", "tabulate G(t, s) as CSV");
    common.attach(green);
    green->add_option("--out", out_path, "CSV destination (default: stdout)");

    CLI::App* constants = app.add_subcommand("constants", "print gamma, eta, sigma and the quarter interval");
    common.attach(constants);
    constants->add_flag("--json", as_json);

    CLI::App* check = app.add_subcommand("check", "sample H1-H4 and report which existence results apply");
    common.attach(check);
    check->add_option("--radii", radii, "radii r, increasing")->required()->delimiter(',');
    check->add_flag("--json", as_json);
    check->add_option("--limit-margin", margin, "H3/H4 need min f/y > margin * sigma / lambda")
        ->check(CLI::PositiveNumber);
    check->add_option("--samples", samples, "y samples per radius")->check(CLI::Range(1, 1000000));

    CLI::App* solve = app.add_subcommand("solve", "multi-start search for positive solutions");
    common.attach(solve);
    solve->add_option("--out", out_path, "CSV path; solution k goes to <stem>_k<ext>");
    solve->add_flag("--verbose", verbose, "report failed starts on stderr");

    CLI::App* sweep = app.add_subcommand("sweep", "count solutions over a geometric lambda grid");
    common.attach(sweep);
    sweep->add_option("--lambda-from", from)->required();
    sweep->add_option("--lambda-to", to)->required();
    sweep->add_option("--steps", steps)->required();
    sweep->add_option("--out", out_path, "CSV destination (default: stdout)");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    try {
        if (green->parsed()) {
            return cmd_green(common, out_path, out);
        }
        if (constants->parsed()) {
            return cmd_constants(common, as_json, out);
        }
        if (check->parsed()) {
            return cmd_check(common, radii, as_json, margin, samples, out);
        }
        if (solve->parsed()) {
            return cmd_solve(common, out_path, verbose, out, err);
        }
        return cmd_sweep(common, from, to, steps, out_path, out);
    } catch (const Error& e) {
        err << "error: " << (dynamic_cast<const EvalError*>(&e) ? "f: " : "") << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace fracbvp::cli
