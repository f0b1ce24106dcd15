#include "capalarm/cli.hpp"

#include "capalarm/dejd_solver.hpp"
#include "capalarm/errors.hpp"
#include "capalarm/model_json.hpp"
#include "capalarm/montecarlo.hpp"
#include "capalarm/scale_fn.hpp"
#include "capalarm/snlp_solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace capalarm::cli {

namespace {

using nlohmann::json;

struct Flags {
    // global
    std::string config, out;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    // problem
    std::string preset, model_type, h;
    std::optional<double> mu, sigma, lambda, p, eta_minus, eta_plus, eta, c, big_c, lam, alpha;
    std::optional<double> q, gamma, rho, x0;
    // outputs and grids
    std::string grid, csv, report, axis;
    // scale functions
    bool numeric = false;
    int nodes = 32;
    // simulation
    std::optional<std::size_t> paths;
    std::optional<double> dt, t_max;
    bool antithetic = false;
    std::optional<unsigned> threads;
};

// Base parameter sets for the presets.
json preset_document(const std::string& name) {
    const json fig_cost = {{"q", 0.05}, {"gamma", 0.04}, {"h", "Constant1"}};
    const json exp_cost = {{"q", 0.05}, {"gamma", 0.04}, {"h", {{"type", "ExpUtility"}, {"rho", 1.0}}}};
    if (name == "fig2")
        return {{"model", {{"mu", -1.0}, {"sigma", 1.0}, {"lambda", 1.0}, {"p", 0.5}, {"eta_minus", 1.0}, {"eta_plus", 2.0}}},
                {"cost", fig_cost},
                {"x0", 2.0}};
    if (name == "fig3a")
        return {{"model", {{"type", "TemperedStable"}, {"c", 0.05}, {"bigC", 0.05}, {"lam", 2.0}, {"alpha", 1.5}}},
                {"cost", exp_cost}};
    if (name == "fig3b")
        return {{"model", {{"type", "TemperedStable"}, {"c", 0.05}, {"bigC", 0.075}, {"lam", 2.0}, {"alpha", 0.8}}},
                {"cost", exp_cost}};
    if (name == "fig3c")
        return {{"model", {{"type", "VarianceGamma"}, {"c", 0.05}, {"bigC", 0.075}, {"lam", 2.0}}}, {"cost", exp_cost}};
    if (name == "fig4a")
        return {{"model", {{"type", "ExpJumpCPP"}, {"mu", 0.3}, {"sigma", 0.0}, {"lambda", 0.5}, {"eta", 1.0}}},
                {"cost", fig_cost},
                {"x0", 2.0}};
    if (name == "fig4b")
        return {{"model", {{"type", "ExpJumpCPP"}, {"mu", 0.175}, {"sigma", 0.5}, {"lambda", 0.5}, {"eta", 1.0}}},
                {"cost", fig_cost},
                {"x0", 2.0}};
    throw DomainError("unknown preset '" + name + "' (fig2, fig3a, fig3b, fig3c, fig4a, fig4b)");
}

json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file '" + path + "'");
    json doc = json::parse(in);
    if (!doc.is_object()) throw DomainError("config: expected a JSON object");
    for (const auto& item : doc.items())
        if (item.key() != "model" && item.key() != "cost" && item.key() != "x0" && item.key() != "sim")
            throw DomainError("config: unknown field '" + item.key() + "'");
    return doc;
}

// Model field a flag maps to, per model type ("" for DEJD).
const char* model_key(const std::string& type, const std::string& flag) {
    static const std::map<std::string, std::map<std::string, const char*>> table{
        {"", {{"mu", "mu"}, {"sigma", "sigma"}, {"lambda", "lambda"}, {"p", "p"}, {"eta-minus", "eta_minus"}, {"eta-plus", "eta_plus"}}},
        {"ExpJumpCPP", {{"mu", "mu"}, {"sigma", "sigma"}, {"lambda", "lambda"}, {"eta", "eta"}, {"eta-minus", "eta"}}},
        {"TemperedStable", {{"c", "c"}, {"mu", "c"}, {"big-c", "bigC"}, {"lam", "lam"}, {"lambda", "lam"}, {"alpha", "alpha"}}},
        {"VarianceGamma", {{"c", "c"}, {"mu", "c"}, {"big-c", "bigC"}, {"lam", "lam"}, {"lambda", "lam"}}},
    };
    const auto t = table.find(type);
    if (t == table.end()) throw DomainError("unknown model type '" + type + "'");
    const auto k = t->second.find(flag);
    if (k == t->second.end())
        throw DomainError("flag --" + flag + " does not apply to " + (type.empty() ? std::string("the DEJD") : type));
    return k->second;
}

std::string model_type_of(const json& model) {
    return model.contains("type") && model["type"].is_string() ? model["type"].get<std::string>() : "";
}

json assemble_document(const Flags& f) {
    json doc = json::object();
    if (!f.preset.empty()) doc = preset_document(f.preset);
    if (!f.config.empty()) {
        const json config = read_config(f.config);
        for (const auto& item : config.items()) doc[item.key()] = item.value();
    }
    json model = doc.contains("model") ? doc["model"] : json::object();
    if (!f.model_type.empty()) {
        const std::string type = f.model_type == "dejd" || f.model_type == "DEJD" ? "" : f.model_type;
        if (model_type_of(model) != type) model = json::object();
        if (!type.empty()) model["type"] = type;
    }
    const std::string type = model_type_of(model);
    const std::pair<const char*, const std::optional<double>*> model_flags[] = {
        {"mu", &f.mu},   {"sigma", &f.sigma}, {"lambda", &f.lambda}, {"p", &f.p},       {"eta-minus", &f.eta_minus},
        {"eta-plus", &f.eta_plus}, {"eta", &f.eta}, {"c", &f.c}, {"big-c", &f.big_c}, {"lam", &f.lam},
        {"alpha", &f.alpha},
    };
    for (const auto& [flag, value] : model_flags)
        if (value->has_value()) model[model_key(type, flag)] = **value;
    doc["model"] = model;

    json cost = doc.contains("cost") ? doc["cost"] : json::object();
    if (f.q) cost["q"] = *f.q;
    if (f.gamma) cost["gamma"] = *f.gamma;
    if (!f.h.empty()) {
        if (f.h == "Constant1") cost["h"] = "Constant1";
        else if (f.h == "ExpUtility") {
            const json keep = cost.contains("h") && cost["h"].is_object() && cost["h"].contains("rho") ? cost["h"]["rho"] : json();
            cost["h"] = {{"type", "ExpUtility"}};
            if (!keep.is_null()) cost["h"]["rho"] = keep;
        } else throw DomainError("unknown penalty '" + f.h + "' (Constant1 or ExpUtility)");
    }
    if (f.rho) {
        if (!cost.contains("h") || !cost["h"].is_object()) cost["h"] = {{"type", "ExpUtility"}};
        if (cost["h"].value("type", "") != "ExpUtility") throw DomainError("--rho requires h = ExpUtility");
        cost["h"]["rho"] = std::isinf(*f.rho) ? json("inf") : json(*f.rho);
    }
    doc["cost"] = cost;
    if (f.x0) doc["x0"] = *f.x0;
    return doc;
}

struct Problem {
    std::optional<DejdParams> dejd;
    std::optional<SpectralNegModel> sn;
    CostSpec cost;
};

Problem load_problem(const json& doc) {
    const json& model = doc.at("model");
    if (model.empty()) throw DomainError("missing model: use --preset, --config or the model flags");
    Problem pb;
    if (is_spectral_model_json(model)) pb.sn = spectral_model_from_json(model);
    else pb.dejd = dejd_params_from_json(model);
    pb.cost = cost_spec_from_json(doc.at("cost"));
    return pb;
}

double x0_of(const json& doc) {
    if (!doc.contains("x0")) throw DomainError("missing field 'x0' (flag --x0)");
    if (!doc["x0"].is_number()) throw DomainError("field 'x0' must be a number");
    return doc["x0"].get<double>();
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> values;
    auto to_number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) throw DomainError("invalid grid value '" + s + "'");
        return v;
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw DomainError("grid ranges take the form lo:hi:step");
        const double lo = to_number(parts[0]), hi = to_number(parts[1]), step = to_number(parts[2]);
        if (!(step > 0.0) || hi < lo) throw DomainError("grid range needs hi >= lo and step > 0");
        const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        if (n > 10000000) throw DomainError("grid too large");
        for (long k = 0; k <= n; ++k) values.push_back(lo + static_cast<double>(k) * step);
    } else {
        std::stringstream ss(spec);
        for (std::string part; std::getline(ss, part, ',');) values.push_back(to_number(part));
    }
    if (values.empty()) throw DomainError("empty grid");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1])) throw DomainError("grid values must be strictly increasing");
    return values;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i) text += (i ? "," : "") + header[i];
    text += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + fmt(row[i]);
        text += "\n";
    }
    return text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DomainError("cannot write '" + path + "'");
    file << text;
}

void emit(const Flags& f, std::ostream& out, const std::string& text) {
    if (f.out.empty()) out << text;
    else write_file(f.out, text);
}

double tol_of(const Flags& f) {
    const double tol = f.tol.value_or(kDefaultRootTol);
    if (!(tol > 0.0)) throw DomainError("--tol must be > 0");
    return tol;
}

// phi and G on a grid, for either solver.
std::string value_table(const std::vector<double>& xs, const std::function<double(double)>& phi,
                        const std::function<double(double)>& G) {
    std::vector<std::vector<double>> rows;
    for (double x : xs) rows.push_back({x, phi(x), G(x)});
    return csv({"x", "phi", "G"}, rows);
}

DejdSolution dejd_solution(const Problem& pb, double tol) {
    if (!std::holds_alternative<Constant1>(pb.cost.h))
        throw DomainError("the DEJD solver supports h = Constant1 only; use solve-snlp for a general h");
    return DejdSolution(*pb.dejd, pb.cost.q, pb.cost.gamma, tol);
}

// -- subcommands -------------------------------------------------------------

int solve_dejd(const Flags& f, std::ostream& out) {
    const json doc = assemble_document(f);
    const Problem pb = load_problem(doc);
    if (!pb.dejd) throw DomainError("solve-dejd needs a DEJD model (no 'type' field)");
    const auto sol = dejd_solution(pb, tol_of(f));
    json j = {{"solver", "dejd"},
              {"model", to_json(*pb.dejd)},
              {"cost", to_json(pb.cost)},
              {"regime", to_string(sol.regime())},
              {"xi1", sol.roots().xi1},
              {"xi2", sol.roots().xi2},
              {"l1", sol.l1()},
              {"l2", sol.l2()},
              {"C1", sol.C1()},
              {"C2", sol.C2()},
              {"L1", sol.L1()},
              {"L2", sol.L2()},
              {"overall_drift", sol.passage().overall_drift()},
              {"smooth_fit_condition", sol.smooth_fit_condition()},
              {"A_star", sol.A_star()},
              {"notes", sol.diagnostics()}};
    emit(f, out, j.dump(2) + "\n");
    if (!f.csv.empty()) {
        const auto xs = parse_grid(f.grid.empty() ? "0.05:4:0.05" : f.grid);
        write_file(f.csv, value_table(xs, [&](double x) { return sol.value(x); },
                                      [&](double x) { return sol.stopping_value(x); }));
    }
    return kOk;
}

SnlpSolution snlp_solution(const Problem& pb, const Flags& f) {
    ScaleOptions opts;
    opts.force_numeric = f.numeric;
    opts.talbot_nodes = f.nodes;
    return SnlpSolution(*pb.sn, pb.cost, tol_of(f), opts);
}

int solve_snlp(const Flags& f, std::ostream& out) {
    const json doc = assemble_document(f);
    const Problem pb = load_problem(doc);
    if (!pb.sn) throw DomainError("solve-snlp needs a spectrally negative model ('type' field)");
    const auto sol = snlp_solution(pb, f);
    const auto& ctx = sol.context();
    json j = {{"solver", "snlp"},
              {"model", to_json(*pb.sn)},
              {"cost", to_json(pb.cost)},
              {"zeta", ctx.zeta()},
              {"scale_method", to_string(ctx.method())},
              {"variation", to_string(sol.variation())},
              {"W_at_zero", ctx.W_at_zero()},
              {"A_star", sol.A_star()},
              {"notes", sol.diagnostics()}};
    emit(f, out, j.dump(2) + "\n");
    if (!f.csv.empty()) {
        const auto xs = parse_grid(f.grid.empty() ? "0.05:4:0.05" : f.grid);
        write_file(f.csv, value_table(xs, [&](double x) { return sol.value(x); },
                                      [&](double x) { return sol.stopping_value(x); }));
    }
    return kOk;
}

int eval_scale(const Flags& f, std::ostream& out) {
    const json doc = assemble_document(f);
    const json& model = doc.at("model");
    if (!is_spectral_model_json(model)) throw DomainError("eval-scale needs a spectrally negative model ('type' field)");
    const auto sn = spectral_model_from_json(model);
    const json& cost = doc.at("cost");
    if (!cost.contains("q")) throw DomainError("missing field 'q' (flag --q)");
    ScaleOptions opts;
    opts.force_numeric = f.numeric;
    opts.talbot_nodes = f.nodes;
    const ScaleContext ctx(sn, cost.at("q").get<double>(), opts);
    std::vector<std::vector<double>> rows;
    for (double x : parse_grid(f.grid.empty() ? "0:5:0.1" : f.grid))
        rows.push_back({x, ctx.W(x), ctx.Z(x), ctx.W_scaled(x)});
    emit(f, out, csv({"x", "W_q", "Z_q", "W_scaled"}, rows));
    return kOk;
}

void set_axis(json& doc, const std::string& axis, double v) {
    if (axis == "gamma") {
        doc["cost"]["gamma"] = v;
        return;
    }
    if (axis == "rho") {
        if (!is_spectral_model_json(doc["model"])) throw DomainError("axis rho needs a spectrally negative model");
        doc["cost"]["h"] = {{"type", "ExpUtility"}, {"rho", v}};
        return;
    }
    static const std::map<std::string, std::string> flag_of{{"mu", "mu"},           {"lambda", "lambda"},
                                                            {"eta_minus", "eta-minus"}, {"eta_plus", "eta-plus"},
                                                            {"sigma", "sigma"},     {"p", "p"}};
    const auto it = flag_of.find(axis);
    if (it == flag_of.end())
        throw DomainError("unknown sweep axis '" + axis + "' (gamma, mu, lambda, eta_minus, eta_plus, sigma, p, rho)");
    doc["model"][model_key(model_type_of(doc["model"]), it->second)] = v;
}

int sweep(const Flags& f, std::ostream& out) {
    if (f.axis.empty()) throw DomainError("missing field 'axis' (flag --axis)");
    if (f.grid.empty()) throw DomainError("missing field 'grid' (flag --grid)");
    const auto values = parse_grid(f.grid);
    const json base = assemble_document(f);
    std::vector<std::vector<double>> rows;
    for (double v : values) {
        json doc = base;
        set_axis(doc, f.axis, v);
        const Problem pb = load_problem(doc);
        const double a = pb.dejd ? dejd_solution(pb, tol_of(f)).A_star()
                                 : optimal_threshold_sn(ScaleContext(*pb.sn, pb.cost.q), pb.cost, tol_of(f));
        rows.push_back({v, a});
    }
    emit(f, out, csv({f.axis, "A_star"}, rows));
    return kOk;
}

int fit_check(const Flags& f, std::ostream& out, std::ostream& err) {
    const json doc = assemble_document(f);
    const Problem pb = load_problem(doc);
    if (!pb.sn || !std::holds_alternative<ExpJumpCPP>(*pb.sn))
        throw UnsupportedModelError("fit-check needs an ExpJumpCPP model (analytic scale function)");
    Flags analytic = f;
    analytic.numeric = false;
    const auto sol = snlp_solution(pb, analytic);
    const double a = sol.A_star();
    std::vector<double> xs;
    if (!f.grid.empty()) xs = parse_grid(f.grid);
    else {
        for (int k = 1; k * 0.01 <= a + 2.0 + 1e-12; ++k) xs.push_back(k * 0.01);
        for (double d : {-1e-4, -1e-7, 0.0, 1e-7, 1e-4}) xs.push_back(a + d);
        std::sort(xs.begin(), xs.end());
        std::vector<double> kept;
        for (double x : xs)
            if (x > 0.0 && (kept.empty() || x > kept.back())) kept.push_back(x);
        xs = kept;
    }
    bool dominated = true;
    std::vector<std::vector<double>> rows;
    for (double x : xs) {
        const double phi = sol.value(x), G = sol.stopping_value(x);
        dominated = dominated && phi <= G + 1e-12;
        rows.push_back({x, phi, G});
    }
    emit(f, out, csv({"x", "phi", "G"}, rows));

    const auto rep = sol.fit_diagnostics();
    json r = {{"A_star", a},
              {"variation", to_string(rep.variation)},
              {"available", rep.available},
              {"notice", rep.notice},
              {"continuity_gap", rep.continuity_gap},
              {"derivative_gap", rep.derivative_gap},
              {"phi_slope_right", rep.phi_slope_right},
              {"G_slope_left", rep.G_slope_left},
              {"w0_times_phi", rep.w0_times_phi},
              {"G_dominates_phi", dominated}};
    if (f.report.empty()) err << r.dump(2) << "\n";
    else write_file(f.report, r.dump(2) + "\n");
    return kOk;
}

SimConfig sim_config(const Flags& f, const json& doc) {
    SimConfig cfg;
    if (doc.contains("sim")) {
        const json& s = doc["sim"];
        for (const auto& item : s.items()) {
            const auto& k = item.key();
            if (k == "n_paths") cfg.n_paths = item.value().get<std::size_t>();
            else if (k == "dt") cfg.dt = item.value().get<double>();
            else if (k == "t_max") cfg.t_max = item.value().get<double>();
            else if (k == "seed") cfg.seed = item.value().get<std::uint64_t>();
            else if (k == "antithetic") cfg.antithetic = item.value().get<bool>();
            else if (k == "threads") cfg.threads = item.value().get<unsigned>();
            else throw DomainError("sim: unknown field '" + k + "'");
        }
    }
    if (f.paths) cfg.n_paths = *f.paths;
    if (f.dt) cfg.dt = *f.dt;
    if (f.t_max) cfg.t_max = *f.t_max;
    if (f.seed) cfg.seed = *f.seed;
    if (f.antithetic) cfg.antithetic = true;
    if (f.threads) cfg.threads = *f.threads;
    if (cfg.n_paths < 1) throw DomainError("sim: n_paths must be >= 1");
    if (!(cfg.dt > 0.0)) throw DomainError("sim: dt must be > 0");
    return cfg;
}

struct Analytic {
    std::function<double(double, double)> R, H, U;
    double A_star = 0.0;
    double sigma = 0.0;
};

int validate_cmd(const Flags& f, std::ostream& out, std::ostream& err) {
    const json doc = assemble_document(f);
    const Problem pb = load_problem(doc);
    const double x0 = x0_of(doc);
    const SimConfig cfg = sim_config(f, doc);

    Analytic an;
    std::optional<DejdSolution> dejd;
    std::optional<SnlpSolution> snlp;
    SimModel sim_model = DejdParams{};
    if (pb.dejd) {
        dejd.emplace(dejd_solution(pb, tol_of(f)));
        an.R = [&](double x, double A) { return dejd->violation_risk(x, A); };
        an.H = [&](double x, double A) { return dejd->regret(x, A); };
        an.U = [&](double x, double A) { return dejd->threshold_value(x, A); };
        an.A_star = dejd->A_star();
        an.sigma = pb.dejd->sigma;
        sim_model = *pb.dejd;
    } else {
        if (!std::holds_alternative<ExpJumpCPP>(*pb.sn))
            throw UnsupportedModelError("validate: cannot simulate " + model_name(*pb.sn) + " paths");
        snlp.emplace(snlp_solution(pb, f));
        an.R = [&](double x, double A) { return snlp->violation_risk(x, A); };
        an.H = [&](double x, double A) { return snlp->regret(x, A); };
        an.U = [&](double x, double A) { return snlp->threshold_value(x, A); };
        an.A_star = snlp->A_star();
        an.sigma = gaussian_sigma(*pb.sn);
        sim_model = *pb.sn;
    }

    const auto levels = f.grid.empty() ? std::vector<double>{an.A_star, an.A_star + 1.0} : parse_grid(f.grid);
    for (double A : levels)
        if (A < 0.0) throw DomainError("validate: thresholds must be >= 0");
    const auto sim = simulate_thresholds(sim_model, x0, levels, pb.cost, cfg);

    const double shift = an.sigma > 0.0 ? grid_monitoring_shift(an.sigma, cfg.dt) : 0.0;
    const double trunc = sim.truncated_fraction > 0.0 ? sim.truncated_fraction * sim.truncation_bound / pb.cost.gamma : 0.0;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> failures;
    for (const auto& row : sim.rows) {
        const double A = row.A;
        auto check = [&](const char* name, const Estimate& e, const std::function<double(double, double)>& fn,
                         double trunc_allow) {
            const double exact = fn(x0, A);
            const double allowance = monitoring_allowance(fn, x0, A, shift);
            const double bound = 3.0 * e.std_error + allowance + trunc_allow;
            if (!(std::abs(e.mean - exact) <= bound)) {
                std::ostringstream msg;
                msg.precision(10);
                msg << name << " at A = " << A << ": estimate " << e.mean << " vs analytic " << exact << " (allowed "
                    << bound << ")";
                failures.push_back(msg.str());
            }
            return exact;
        };
        check("R", row.R, an.R, 0.0);
        check("H", row.H, an.H, trunc);
        const double phi = check("U", row.U, an.U, pb.cost.gamma * trunc);
        rows.push_back({A, row.U.mean, row.U.std_error, row.R.mean, row.R.std_error, row.H.mean, row.H.std_error, phi});
    }
    emit(f, out, csv({"A", "U_hat", "U_se", "R_hat", "R_se", "H_hat", "H_se", "phi_analytic"}, rows));
    if (!failures.empty()) {
        for (const auto& msg : failures) err << "validation failed: " << msg << "\n";
        return kValidationFailed;
    }
    return kOk;
}

void add_problem_flags(CLI::App* cmd, Flags& f) {
    cmd->set_help_flag("--help", "print this help");  // --h names the penalty
    cmd->add_option("--preset", f.preset, "fig2, fig3a, fig3b, fig3c, fig4a or fig4b base parameters");
    cmd->add_option("--model", f.model_type, "dejd, ExpJumpCPP, TemperedStable or VarianceGamma");
    cmd->add_option("--mu", f.mu);
    cmd->add_option("--sigma", f.sigma);
    cmd->add_option("--lambda", f.lambda);
    cmd->add_option("--p", f.p);
    cmd->add_option("--eta-minus", f.eta_minus);
    cmd->add_option("--eta-plus", f.eta_plus);
    cmd->add_option("--eta", f.eta);
    cmd->add_option("--c", f.c);
    cmd->add_option("--big-c", f.big_c);
    cmd->add_option("--lam", f.lam);
    cmd->add_option("--alpha", f.alpha);
    cmd->add_option("--q", f.q);
    cmd->add_option("--gamma", f.gamma);
    cmd->add_option("--h", f.h, "Constant1 or ExpUtility");
    cmd->add_option("--rho", f.rho);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Optimal capital-raising alarm thresholds"};
    app.set_help_flag("--help", "print this help");
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.add_option("--config", f.config, "JSON file with model, cost, x0 and sim sections");
    app.add_option("--out", f.out, "write the primary output here instead of stdout");
    app.add_option("--tol", f.tol, "root-finding tolerance");
    app.add_option("--seed", f.seed, "Monte Carlo seed");

    auto* dejd = app.add_subcommand("solve-dejd", "closed-form DEJD solution with h = 1");
    add_problem_flags(dejd, f);
    dejd->add_option("--grid", f.grid, "x grid for --csv (lo:hi:step or a comma list)");
    dejd->add_option("--csv", f.csv, "write x,phi,G here");

    auto* snlp = app.add_subcommand("solve-snlp", "scale-function solution for a spectrally negative model");
    add_problem_flags(snlp, f);
    snlp->add_option("--grid", f.grid);
    snlp->add_option("--csv", f.csv);
    snlp->add_flag("--numeric", f.numeric, "force Laplace inversion");
    snlp->add_option("--nodes", f.nodes, "Talbot nodes");

    auto* scale = app.add_subcommand("eval-scale", "W, Z and scaled W on a grid");
    add_problem_flags(scale, f);
    scale->add_option("--grid", f.grid);
    scale->add_flag("--numeric", f.numeric);
    scale->add_option("--nodes", f.nodes);

    auto* sw = app.add_subcommand("sweep", "A* along one parameter axis");
    add_problem_flags(sw, f);
    sw->add_option("--axis", f.axis, "gamma, mu, lambda, eta_minus, eta_plus, sigma, p or rho");
    sw->add_option("--grid", f.grid, "strictly increasing axis values");

    auto* fit = app.add_subcommand("fit-check", "phi and G around A* with fit gaps (ExpJumpCPP)");
    add_problem_flags(fit, f);
    fit->add_option("--grid", f.grid);
    fit->add_option("--report", f.report, "write the gap report here instead of stderr");

    auto* val = app.add_subcommand("validate", "Monte Carlo check of R, H and U at threshold rules");
    add_problem_flags(val, f);
    val->add_option("--x0", f.x0);
    val->add_option("--grid", f.grid, "thresholds (default A* and A* + 1)");
    val->add_option("--paths", f.paths);
    val->add_option("--dt", f.dt);
    val->add_option("--t-max", f.t_max);
    val->add_flag("--antithetic", f.antithetic);
    val->add_option("--threads", f.threads);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    try {
        if (*dejd) return solve_dejd(f, out);
        if (*snlp) return solve_snlp(f, out);
        if (*scale) return eval_scale(f, out);
        if (*sw) return sweep(f, out);
        if (*fit) return fit_check(f, out, err);
        return validate_cmd(f, out, err);
    } catch (const InfiniteRegretError& e) {
        err << "error: " << e.what() << "\n";
        return kDegenerate;
    } catch (const NumericFailure& e) {
        err << "error: " << e.what() << "\n";
        return kDegenerate;
    } catch (const std::invalid_argument& e) {  // precondition and unsupported-model errors
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDegenerate;
    }
}

} // namespace capalarm::cli
