#include "json_io.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace tds {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse,
                    "JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

[[noreturn]] void schema_error(const std::string& what) {
    throw Error(ErrorCode::Parse, "descriptor schema error: " + what);
}

std::vector<double> read_matrix(const json& j, std::size_t dim, const std::string& name) {
    std::vector<double> M;
    if (!j.is_array()) schema_error(name + " must be an array");
    if (!j.empty() && j[0].is_array()) {
        for (const auto& row : j) {
            if (!row.is_array() || row.size() != dim) schema_error(name + ": ragged rows");
            for (const auto& v : row) M.push_back(v.get<double>());
        }
    } else {
        for (const auto& v : j) M.push_back(v.get<double>());
    }
    if (M.size() != dim * dim)
        schema_error(name + ": expected " + std::to_string(dim * dim) + " entries");
    return M;
}

DelaySpec read_delay_spec(const json& j, const std::string& name) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    schema_error(name + " must be a number or parameter name");
}

double read_holder_exponent(const json& j, const std::string& name) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        schema_error(name + ": unrecognized string value '" + s + "'");
    }
    if (!j.is_number()) schema_error(name + " must be a number or \"inf\"");
    return j.get<double>();
}

json finite_or_string(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

ParamPoint read_point(const CharFun& cf, const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != cf.num_params())
        schema_error(name + " must be an array of " + std::to_string(cf.num_params()) +
                     " reals (one per parameter)");
    ParamPoint p;
    for (const auto& v : j) p.push_back(v.get<double>());
    return p;
}

} // namespace

CharFun charfun_from_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object()) schema_error("system descriptor must be an object");
    if (!j.contains("m") || !j["m"].is_number_integer()) schema_error("\"m\" (integer) required");
    int m = j["m"].get<int>();
    if (!j.contains("params") || !j["params"].is_array())
        schema_error("\"params\" (array of names) required");
    std::vector<std::string> params;
    for (const auto& p : j["params"]) params.push_back(p.get<std::string>());

    std::vector<double> lower;
    if (j.contains("lower_bounds")) {
        for (const auto& v : j["lower_bounds"]) lower.push_back(v.get<double>());
    }

    std::vector<QPTerm> terms;
    if (!j.contains("terms") || !j["terms"].is_array()) schema_error("\"terms\" array required");
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("power") || !t.contains("coeff"))
            schema_error("each term needs \"power\" and \"coeff\"");
        QPTerm term;
        term.power = t["power"].get<int>();
        term.coeff = Expr::parse(t["coeff"].get<std::string>());
        term.delay =
            t.contains("delay") ? Expr::parse(t["delay"].get<std::string>()) : Expr::constant(0.0);
        terms.push_back(std::move(term));
    }
    return CharFun(m, std::move(terms), std::move(params), std::move(lower));
}

std::string charfun_to_json(const CharFun& cf, int indent) {
    json j;
    j["m"] = cf.m();
    j["params"] = cf.param_names();
    bool nontrivial_lb = false;
    for (double lb : cf.lower_bounds())
        if (lb != 0.0) nontrivial_lb = true;
    if (nontrivial_lb) j["lower_bounds"] = cf.lower_bounds();
    j["terms"] = json::array();
    for (const QPTerm& t : cf.terms()) {
        json jt;
        jt["power"] = t.power;
        jt["coeff"] = t.coeff.str();
        jt["delay"] = t.delay.str();
        j["terms"].push_back(std::move(jt));
    }
    return j.dump(indent);
}

DistributedModel model_from_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object()) schema_error("model descriptor must be an object");
    DistributedModel dm;
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        schema_error("\"dim\" (integer) required");
    dm.dim = j["dim"].get<std::size_t>();
    if (!j.contains("A0")) schema_error("\"A0\" required");
    dm.A0 = read_matrix(j["A0"], dm.dim, "A0");
    if (j.contains("discrete")) {
        for (const auto& t : j["discrete"]) {
            DistributedModel::DiscreteTerm dt;
            dt.A = read_matrix(t.at("A"), dm.dim, "discrete.A");
            dt.delay = read_delay_spec(t.at("delay"), "discrete.delay");
            dm.discrete.push_back(std::move(dt));
        }
    }
    if (j.contains("distributed")) {
        for (const auto& t : j["distributed"]) {
            DistributedModel::DistributedTerm dt;
            dt.A = read_matrix(t.at("A"), dm.dim, "distributed.A");
            dt.lower = read_delay_spec(t.at("lower"), "distributed.lower");
            dt.upper = read_delay_spec(t.at("upper"), "distributed.upper");
            for (const auto& g : t.at("kernel")) dt.kernel.push_back(g.get<double>());
            dm.distributed.push_back(std::move(dt));
        }
    }
    dm.validate();
    return dm;
}

std::string hypothesis_report_to_json(const CharFun& cf, const HypothesisReport& rep, int indent) {
    json j;
    j["verdict"] = rep.pass ? "PASS" : "WARN";
    j["m"] = cf.m();
    j["params"] = cf.param_names();
    j["issues"] = json::array();
    for (const auto& issue : rep.issues) {
        json ji;
        ji["term_index"] = issue.term_index;
        ji["reason"] = issue.reason;
        j["issues"].push_back(std::move(ji));
    }
    return j.dump(indent);
}

std::string polecount_report_to_json(const PoleCountReport& rep, int indent) {
    json j;
    j["nu"] = rep.nu;
    j["omega_radius"] = rep.omega_radius;
    j["samples"] = rep.samples;
    j["winding_residual"] = rep.winding_residual;
    j["min_abs_f_on_contour"] = rep.min_abs_f;
    return j.dump(indent);
}

std::string conversion_to_json(const ConvertedCharFun& conv, int indent) {
    json j;
    j["charfun"] = json::parse(charfun_to_json(conv.cf, 0));
    j["cleared_power"] = conv.report.cleared_power;
    j["spurious_origin_zeros"] = conv.report.spurious_origin_zeros;
    if (conv.report.spurious_origin_zeros > 0)
        j["note"] = "clearing added zeros at s = 0; pole counting at points where f(0, tau) = 0 "
                    "is refused";
    return j.dump(indent);
}

RayTask ray_task_from_json(const CharFun& cf, const std::string& text) {
    json j = parse_json(text);
    RayTask task;
    if (!j.contains("point")) schema_error("ray task: \"point\" required");
    task.tau0 = read_point(cf, j["point"], "point");
    if (!j.contains("direction")) schema_error("ray task: \"direction\" required");
    task.dir = read_point(cf, j["direction"], "direction");
    task.eta = j.value("eta", 0.5);
    task.delta = j.value("delta", 1e-4);
    task.theta_cap = j.value("theta_max", 0.0);
    task.theta0 = j.value("theta0", 0.0);
    task.force_general = j.value("force_general", false);
    return task;
}

namespace {

json task_echo(const CharFun& cf, const RayTask& task) {
    double max_abs = 0.0;
    for (double v : task.tau0) max_abs = std::max(max_abs, std::fabs(v));
    json e;
    e["point"] = task.tau0;
    e["direction"] = task.dir;
    e["eta"] = task.eta;
    e["delta"] = task.delta;
    e["theta_max"] = task.theta_cap > 0.0 ? task.theta_cap : 100.0 * (1.0 + max_abs);
    e["theta0"] = task.theta0;
    e["params"] = cf.param_names();
    return e;
}

const char* verdict_name(RayVerdict v) {
    switch (v) {
    case RayVerdict::Converged: return "CONVERGED";
    case RayVerdict::Diverged: return "DIVERGED";
    default: return "FAILED";
    }
}

} // namespace

std::string line_trace_to_json(const CharFun& cf, const RayTask& task, const LineTrace& trace,
                               int indent) {
    json j;
    j["verdict"] = verdict_name(trace.verdict);
    if (!trace.reason.empty()) j["reason"] = trace.reason;
    j["theta_lim"] = trace.theta_final;
    j["final_omega"] = trace.final_omega;
    j["retarded_path"] = trace.used_retarded_path;
    j["steps"] = trace.steps.size();
    j["config"] = task_echo(cf, task);
    return j.dump(indent);
}

std::string line_trace_to_csv(const LineTrace& trace) {
    std::ostringstream out;
    out.precision(17);
    out << "k,theta,delta,omega_min,min_abs_f\n";
    for (const LineStep& s : trace.steps)
        out << s.k << "," << s.theta << "," << s.delta << "," << s.omega_min << ","
            << s.min_abs_f << "\n";
    return out.str();
}

RegionTask region_task_from_json(const CharFun& cf, const std::string& text) {
    json j = parse_json(text);
    RegionTask task;
    if (!j.contains("point")) schema_error("region task: \"point\" required");
    task.tau0 = read_point(cf, j["point"], "point");
    bool has_p = j.contains("p"), has_q = j.contains("q");
    if (has_p && has_q)
        task.config.hp = HolderPair::make(read_holder_exponent(j["p"], "p"),
                                          read_holder_exponent(j["q"], "q"));
    else if (has_p)
        task.config.hp = HolderPair::from_p(read_holder_exponent(j["p"], "p"));
    else if (has_q)
        task.config.hp = HolderPair::from_q(read_holder_exponent(j["q"], "q"));
    task.config.eta = j.value("eta", 0.5);
    task.config.grid_h = j.value("grid_h", 0.0);
    task.config.extent = j.value("extent", 0.0);
    task.config.max_generations = j.value("max_generations", std::size_t(64));
    task.config.max_balls = j.value("max_balls", std::size_t(4000));
    return task;
}

std::string region_state_to_json(const CharFun& cf, const RegionTask& task,
                                 const RegionState& state, int indent) {
    json j;
    j["nu"] = state.nu;
    j["generations"] = state.generations;
    j["covered_cells"] = state.covered_cells;
    j["balls"] = json::array();
    for (const Ball& b : state.balls) {
        json jb;
        jb["center"] = b.center;
        jb["radius"] = b.radius;
        jb["q"] = finite_or_string(b.q);
        j["balls"].push_back(std::move(jb));
    }
    j["polygon"] = json::array();
    for (const auto& v : state.polygon) j["polygon"].push_back({v[0], v[1]});
    j["capped_faces"] = state.capped_faces;
    j["terminal_frontier"] = json::array();
    for (const auto& t : state.terminal_frontier) {
        json jt;
        jt["point"] = t.point;
        jt["eps_bound"] = t.eps_bound;
        jt["min_abs_f"] = t.min_abs_f;
        j["terminal_frontier"].push_back(std::move(jt));
    }
    json cfg;
    cfg["point"] = task.tau0;
    cfg["p"] = finite_or_string(task.config.hp.p);
    cfg["q"] = finite_or_string(task.config.hp.q);
    cfg["eta"] = task.config.eta;
    cfg["grid_h"] = state.grid_h;
    cfg["extent"] = task.config.extent;
    cfg["max_generations"] = task.config.max_generations;
    cfg["max_balls"] = task.config.max_balls;
    cfg["params"] = cf.param_names();
    j["config"] = std::move(cfg);
    return j.dump(indent);
}

} // namespace tds
