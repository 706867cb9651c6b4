#include "fracbvp/config.hpp"

#include "fracbvp/expr.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fracbvp::cli {
namespace {

using nlohmann::json;

double number(const json& j, const std::string& field) {
    if (!j.is_number()) {
        throw ConfigError(field + ": expected a number");
    }
    return j.get<double>();
}

int integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) {
        throw ConfigError(field + ": expected an integer");
    }
    const auto v = j.get<long long>();
    if (v < -1000000000LL || v > 1000000000LL) {
        throw ConfigError(field + ": out of range");
    }
    return static_cast<int>(v);
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) {
        throw ConfigError(field + ": expected an expression string");
    }
    return j.get<std::string>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(prefix + key + ": unknown key");
        }
    }
}

const json& required(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(std::string(key) + ": missing");
    }
    return *it;
}

SolverConfig parse_solver(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("solver: expected an object");
    }
    reject_unknown(j, {"method", "tol", "max_iter", "damping", "starts"}, "solver.");
    SolverConfig s;
    if (j.contains("method")) {
        const json& m = j["method"];
        if (m == "picard") {
            s.method = bvp::Method::Picard;
        } else if (m == "newton") {
            s.method = bvp::Method::Newton;
        } else {
            throw ConfigError("solver.method: expected \"picard\" or \"newton\"");
        }
    }
    if (j.contains("tol")) {
        s.tol = number(j["tol"], "solver.tol");
        if (!(s.tol > 0.0)) {
            throw ConfigError("solver.tol: must be positive");
        }
    }
    if (j.contains("max_iter")) {
        s.max_iter = integer(j["max_iter"], "solver.max_iter");
        if (s.max_iter < 1) {
            throw ConfigError("solver.max_iter: must be at least 1");
        }
    }
    if (j.contains("damping")) {
        s.damping = number(j["damping"], "solver.damping");
        if (!(s.damping > 0.0 && s.damping <= 1.0)) {
            throw ConfigError("solver.damping: must lie in (0, 1]");
        }
    }
    if (j.contains("starts")) {
        const json& a = j["starts"];
        if (!a.is_array() || a.empty()) {
            throw ConfigError("solver.starts: expected a non-empty array");
        }
        s.starts.clear();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string field = "solver.starts[" + std::to_string(i) + "]";
            const double c = number(a[i], field);
            if (!(c > 0.0)) {
                throw ConfigError(field + ": must be positive");
            }
            s.starts.push_back(c);
        }
    }
    return s;
}

expr::Expr parse_field(const std::string& source, const char* field) {
    try {
        return expr::parse(source);
    } catch (const SyntaxError& e) {
        throw ConfigError(std::string(field) + ": " + e.what());
    }
}

}  // namespace

std::vector<double> default_starts() {
    std::vector<double> s;
    for (int k = 0; k <= 16; ++k) {
        s.push_back(std::ldexp(0.01, k));
    }
    return s;
}

bvp::Problem ProblemConfig::problem() const {
    return problem(lambda);
}

bvp::Problem ProblemConfig::problem(double lambda_override) const {
    const expr::Expr he = parse_field(h, "h");
    const expr::Expr fe = parse_field(f, "f");
    if (he.uses_y()) {
        throw ConfigError("h: must depend on t only");
    }
    try {
        return bvp::Problem::from_expressions(nu, b, lambda_override, he, fe);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    } catch (const EvalError& e) {
        throw ConfigError(e.what());
    }
}

bvp::SearchOptions ProblemConfig::search_options() const {
    bvp::SearchOptions o;
    o.method = solver.method;
    o.tol = solver.tol;
    o.max_iter = solver.max_iter;
    o.damping = solver.damping;
    return o;
}

ProblemConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    reject_unknown(j, {"nu", "b", "lambda", "h", "f", "solver", "sigma_unweighted"}, "");

    ProblemConfig c;
    c.nu = number(required(j, "nu"), "nu");
    c.b = integer(required(j, "b"), "b");
    c.lambda = number(required(j, "lambda"), "lambda");
    c.h = text(required(j, "h"), "h");
    c.f = text(required(j, "f"), "f");
    if (j.contains("solver")) {
        c.solver = parse_solver(j["solver"]);
    }
    if (j.contains("sigma_unweighted")) {
        if (!j["sigma_unweighted"].is_boolean()) {
            throw ConfigError("sigma_unweighted: expected true or false");
        }
        c.sigma_unweighted = j["sigma_unweighted"].get<bool>();
    }
    // Surface problem errors at load time.
    (void)c.problem();
    return c;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fracbvp::cli
