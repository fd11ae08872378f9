// combclassic: build scenario combs, check classicality, solve the measure LP, probe, sweep.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

#include "combclassic/classicality.hpp"
#include "combclassic/measure.hpp"
#include "combclassic/models.hpp"
#include "combclassic/serialize.hpp"

using namespace combclassic;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct ScenarioOptions {
    double gamma = 0.5;
    double alpha = 1.0;
    std::vector<double> times{0.0, 1.0, 2.0};
    bool probe_initial = false;
    bool tau_e_zero = false;
    std::uint64_t seed = 1;
    Index env_dim = 2;
    int slots = 2;
    int grid = 4096;
};

struct Target {
    std::string name;
    std::optional<Comb> comb;
    std::optional<Dilation> dilation;
};

void add_scenario_options(CLI::App* app, ScenarioOptions& o) {
    app->add_option("--gamma", o.gamma, "Lorentzian width for example1")->check(CLI::PositiveNumber);
    app->add_option("--alpha", o.alpha, "weight of |+> in the example1 initial state")->check(CLI::Range(0.0, 1.0));
    app->add_option("--times", o.times, "example1 times t0,t1,...")->delimiter(',');
    app->add_flag("--probe-initial", o.probe_initial, "example1: also probe at t0");
    app->add_flag("--tau-e-zero", o.tau_e_zero, "genuinely-quantum: environment output |0><0| instead of I/2");
    app->add_option("--seed", o.seed, "seed for the random scenario");
    app->add_option("--env-dim", o.env_dim, "environment dimension for the random scenario")->check(CLI::PositiveNumber);
    app->add_option("--slots", o.slots, "slot count for the random scenario")->check(CLI::PositiveNumber);
    app->add_option("--grid", o.grid, "environment grid points for example1 discord")->check(CLI::Range(2, 1 << 20));
}

Target load_target(const std::string& name, const ScenarioOptions& o) {
    Target t{name, std::nullopt, std::nullopt};
    if (name == "example1") {
        t.comb = dephasing_comb(lorentzian_kernel(o.gamma), o.times, example1_initial_state(o.alpha), o.probe_initial);
    } else if (name == "appendix-d") {
        t.dilation = appendix_d_dilation();
    } else if (name == "appendix-g") {
        t.dilation = appendix_g_dilation();
    } else if (name == "genuinely-quantum") {
        t.dilation = genuinely_quantum_process(o.tau_e_zero);
    } else if (name == "random") {
        t.dilation = random_dilation(o.seed, 2, o.env_dim, o.slots);
    } else {
        const Json j = read_json_file(name);
        const std::string kind = j.is_object() && j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
        if (kind == "comb") t.comb = comb_from_json(j);
        else if (kind == "dilation") t.dilation = dilation_from_json(j);
        else throw SchemaError("/kind", "expected comb or dilation");
    }
    if (t.dilation && !t.comb) t.comb = comb_from_dilation(*t.dilation);
    if (t.comb) {
        const auto v = validate_comb(*t.comb);
        if (!v.pass) throw NotCptp("input is not a valid comb");
    }
    return t;
}

void emit(const Json& report, const std::string& path) {
    const std::string text = report.dump(2) + "\n";
    if (!path.empty()) write_file_atomic(path, text);
    std::cout << text;
}

Json discord_report(const Target& t, const ScenarioOptions& o, double tol) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "discord_report";
    Json per = Json::array();
    bool all = true;
    if (t.dilation) {
        const std::vector<const ChoiState*> none(t.dilation->slots(), nullptr);
        for (int s = 0; s < t.dilation->slots(); ++s) {
            const bool z = zero_discord_check(propagate_until(*t.dilation, none, s), t.dilation->system_dim, tol);
            per.push_back(z);
            all = all && z;
        }
    } else if (t.name == "example1") {
        const MemoryKernel k = lorentzian_kernel(o.gamma);
        GridOptions go;
        go.points = o.grid;
        const EnvGrid grid = lorentzian_grid(o.gamma, go);
        for (double time : o.times) {
            const bool z = zero_discord_check(example1_joint_state(k, grid, time, o.alpha), 2, tol);
            per.push_back(z);
            all = all && z;
        }
    } else {
        throw BadParameter("discord needs a dilation or the example1 scenario");
    }
    j["zero_discord"] = all;
    j["per_slot"] = std::move(per);
    j["tol"] = tol;
    return j;
}

Json check_report(const Target& t, const std::string& verb, const ScenarioOptions& o, double tol) {
    if (verb == "kolmogorov") return report_json(kolmogorov_check(*t.comb, tol));
    if (verb == "markov") return report_json(markov_check(projective_family(*t.comb).full(), tol));
    if (verb == "causality") return report_json(validate_comb(*t.comb, tol), tol);
    if (verb == "chi") {
        const auto dec = decompose_classical(*t.comb);
        return report_json(chi_constraints_check(dec.chi, t.comb->layout, tol), tol);
    }
    if (verb == "ndgd") {
        if (!t.dilation) throw BadParameter("ndgd needs a dilation");
        return report_json(ndgd_check(*t.dilation, tol), tol);
    }
    if (verb == "discord") return discord_report(t, o, tol);
    if (verb == "summary") {
        Json j;
        j["schema"] = kSchemaVersion;
        j["kind"] = "summary_report";
        const auto k = kolmogorov_check(*t.comb, tol);
        j["classical"] = k.pass;
        j["worst_violation"] = k.worst_violation;
        const auto dec = decompose_classical(*t.comb);
        j["chi_constraints"] = chi_constraints_check(dec.chi, t.comb->layout, tol).pass;
        j["ndgd"] = t.dilation ? Json(ndgd_check(*t.dilation, tol).pass) : Json(nullptr);
        j["tol"] = tol;
        return j;
    }
    throw BadParameter("unknown check verb " + verb);
}

Instrument instrument_arg(const std::string& spec, Index dim) {
    if (spec == "projective") return projective_instrument(dim);
    if (spec == "identity") return identity_instrument(dim);
    if (spec == "dephasing") return dephasing_instrument(dim);
    Instrument inst = instrument_from_json(read_json_file(spec));
    validate_instrument(inst);
    return inst;
}

std::string table_csv(const ProbTable& t) {
    std::ostringstream out;
    for (int s : t.slots) out << "x" << s << ",";
    out << "probability\n";
    char buf[64];
    for (std::size_t k = 0; k < t.size(); ++k) {
        for (Index x : t.outcome(k)) out << x << ",";
        std::snprintf(buf, sizeof buf, "%.17g\n", t.probs[k]);
        out << buf;
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classicality checks for multi-time quantum processes"};
    app.require_subcommand(1);
    double tol = kDefaultTol;
    app.add_option("--tol", tol, "numerical tolerance")->check(CLI::PositiveNumber);

    ScenarioOptions so;
    std::string target, output, report_path, verb = "kolmogorov";
    bool with_check = false, with_dual = false, with_bound = false;
    std::size_t cap = lp_cap();
    LpOptions lp_opt;
    std::vector<std::string> instruments;
    int r0_levels = 5, directions = 40, radii = 6;

    auto* scenario = app.add_subcommand("scenario", "build a named scenario and write its comb JSON");
    scenario->add_option("name", target, "example1 | appendix-d | appendix-g | genuinely-quantum | random")->required();
    scenario->add_option("-o,--output", output, "comb JSON path");
    scenario->add_option("--report", report_path, "report JSON path");
    scenario->add_flag("--check", with_check, "run kolmogorov_check on the comb");
    add_scenario_options(scenario, so);

    auto* check = app.add_subcommand("check", "classicality checks on a scenario name or a comb/dilation JSON");
    check->add_option("target", target)->required();
    check->add_option("--verb", verb, "kolmogorov | markov | ndgd | discord | chi | causality | summary");
    check->add_option("--report", report_path, "report JSON path");
    add_scenario_options(check, so);

    auto* meas = app.add_subcommand("measure", "non-classicality measure M by linear programming");
    meas->add_option("target", target)->required();
    meas->add_flag("--dual", with_dual, "also solve the dual program");
    meas->add_flag("--upper-bound", with_bound, "two-time upper bound");
    meas->add_option("--cap", cap, "maximum number of testing sequences")->check(CLI::PositiveNumber);
    meas->add_option("--max-pivots", lp_opt.max_pivots, "simplex pivot limit")->check(CLI::NonNegativeNumber);
    meas->add_option("--report", report_path, "report JSON path");
    add_scenario_options(meas, so);

    auto* probe = app.add_subcommand("probe", "joint outcome table for a comb and per-slot instruments");
    probe->add_option("target", target)->required();
    probe->add_option("-i,--instrument", instruments, "per slot: projective | identity | dephasing | instrument JSON")
        ->required();
    probe->add_option("-o,--output", output, "CSV path");
    add_scenario_options(probe, so);

    auto* sweep = app.add_subcommand("sweep", "final-time POVM sweep on the genuinely quantum process");
    sweep->add_flag("--tau-e-zero", so.tau_e_zero, "environment output |0><0| instead of I/2");
    sweep->add_option("--r0-levels", r0_levels)->check(CLI::PositiveNumber);
    sweep->add_option("--directions", directions)->check(CLI::PositiveNumber);
    sweep->add_option("--radii", radii)->check(CLI::Range(2, 1000));
    sweep->add_option("-o,--output", output, "CSV path");
    sweep->add_option("--report", report_path, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*scenario) {
            const Target t = load_target(target, so);
            const std::string comb_text = to_json(*t.comb).dump() + "\n";
            if (!output.empty()) write_file_atomic(output, comb_text);
            Json rep;
            rep["schema"] = kSchemaVersion;
            rep["kind"] = "scenario_report";
            rep["scenario"] = target;
            rep["slots"] = t.comb->slots();
            rep["system_dim"] = t.comb->system_dim;
            rep["valid_comb"] = validate_comb(*t.comb, tol).pass;
            if (with_check) {
                const auto k = kolmogorov_check(*t.comb, tol);
                rep["pass"] = k.pass;
                rep["worst_violation"] = k.worst_violation;
            }
            rep["tol"] = tol;
            if (output.empty() && report_path.empty() && !with_check) std::cout << comb_text;
            else emit(rep, report_path);
        } else if (*check) {
            emit(check_report(load_target(target, so), verb, so, tol), report_path);
        } else if (*meas) {
            const Target t = load_target(target, so);
            emit(report_json(measure(*t.comb, with_dual, with_bound, cap, lp_opt)), report_path);
        } else if (*probe) {
            const Target t = load_target(target, so);
            if (static_cast<int>(instruments.size()) != t.comb->slots())
                throw WrongArity("need one instrument per slot");
            std::vector<Instrument> insts;
            for (const auto& s : instruments) insts.push_back(instrument_arg(s, t.comb->system_dim));
            const std::string csv = table_csv(joint_table(*t.comb, insts));
            if (!output.empty()) write_file_atomic(output, csv);
            else std::cout << csv;
        } else if (*sweep) {
            const SweepReport rep = povm_classicality_sweep(genuinely_quantum_process(so.tau_e_zero),
                                                            bloch_grid(r0_levels, directions, radii), tol);
            if (!output.empty()) write_file_atomic(output, rep.csv());
            Json j;
            j["schema"] = kSchemaVersion;
            j["kind"] = "sweep_report";
            j["points"] = rep.points.size();
            j["certified"] = rep.certified;
            j["fitted_c"] = rep.fitted_c;
            j["max_blind_radius"] = rep.max_blind_radius;
            j["min_deviation_far"] = rep.min_deviation_far;
            j["tau_e"] = so.tau_e_zero ? "zero" : "mixed";
            j["tol"] = tol;
            if (output.empty()) std::cout << rep.csv();
            else emit(j, report_path);
        }
    } catch (const SolverFailure& e) {
        std::cerr << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
