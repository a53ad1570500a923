// Command-line front end: iterate maps, hunt periodic orbits, continue
// branches and detect bifurcations, tabulate the closed-form curves, and run
// the verification gates. Exit codes: 0 ok, 1 usage error, 2 numerical
// failure, 3 verification gate failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "revhenon/bifurcations.hpp"
#include "revhenon/errors.hpp"
#include "revhenon/io.hpp"
#include "revhenon/measure.hpp"
#include "revhenon/orbits.hpp"
#include "revhenon/reversibility.hpp"

using namespace revhenon;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
};

JobConfig build_config(const CommonArgs& args) {
    JobConfig cfg;
    if (!args.config_path.empty()) cfg.kv = parse_config_file(args.config_path);
    for (const auto& [k, v] : args.overrides) cfg.set(k, v);  // flags win over the file
    if (!cfg.has("format")) cfg.set("format", "csv");
    return cfg;
}

void add_map_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key = value config file");
    auto keep = [&args](const std::string& key) {
        return [&args, key](const std::string& v) { args.overrides.emplace_back(key, v); };
    };
    cmd->add_option_function<std::string>("--family", keep("family"), "map family name");
    cmd->add_option_function<std::string>("--M", keep("M"), "nonlinearity parameter M");
    cmd->add_option_function<std::string>("--b", keep("b"), "Jacobian parameter b");
    cmd->add_option_function<std::string>("--mu", keep("mu"), "perturbation magnitude mu");
    cmd->add_option_function<std::string>("--F", keep("F"),
                                          "nonlinearity: quadratic-minus | quadratic-plus | poly:c0,c1,...");
    cmd->add_option_function<std::string>("--eps", keep("eps"), "perturbation terms i,j,a;i,j,a;...");
    cmd->add_option_function<std::string>("--eps-p", keep("eps_p"), "separable p(u) coefficients");
    cmd->add_option_function<std::string>("--eps-q", keep("eps_q"), "separable q(v) coefficients");
    cmd->add_option_function<std::string>("--eps2", keep("eps2"), "second perturbation terms");
    cmd->add_option_function<std::string>("--out", keep("out"), "output file (default stdout)");
    cmd->add_option_function<std::string>("--format", keep("format"), "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::ostream& open_out(const JobConfig& cfg, std::ofstream& file) {
    const std::string path = cfg.get("out");
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);  // LF line endings on every platform
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

int fail_usage(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
}

int fail_numeric(const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
}

// ----------------------------------------------------------------- iterate

int cmd_iterate(const CommonArgs& args) {
    const JobConfig cfg = build_config(args);
    const MapInstance map = cfg.make_map();
    const int n = cfg.get_int("steps", 0);
    Point2 p{cfg.get_double("x0", 0.0), cfg.get_double("y0", 0.0)};
    if (cfg.has("seed_file")) {
        const auto pts = load_seed_points(cfg.get("seed_file"));
        if (pts.empty()) throw std::invalid_argument("seed file has no points");
        p = pts.front();
    }
    std::ofstream file;
    std::ostream& out = open_out(cfg, file);
    const bool json = cfg.get("format") == "json";
    const SolverConfig scfg;
    if (!json) out << "step,x,y\n";
    int k = 0;
    try {
        for (;; ++k) {
            if (json) {
                nlohmann::json line = {{"step", k}, {"x", p.x}, {"y", p.y}};
                out << line.dump() << "\n";
            } else {
                out << k << "," << format_g17(p.x) << "," << format_g17(p.y) << "\n";
            }
            if (k == std::abs(n)) break;
            p = n >= 0 ? step(map, p, scfg) : step_inverse(map, p, scfg);
        }
    } catch (const NumericsError& e) {
        std::cerr << "numerical failure at step " << (k + 1) << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}

// ------------------------------------------------------------------- orbit

int cmd_orbit(const CommonArgs& args) {
    const JobConfig cfg = build_config(args);
    const MapInstance map = cfg.make_map();
    const int period = cfg.get_int("period", 1);
    std::ofstream file;
    std::ostream& out = open_out(cfg, file);

    std::vector<Orbit> orbits;
    if (cfg.has("seed_file")) {
        auto seed = load_seed_points(cfg.get("seed_file"));
        if (static_cast<int>(seed.size()) != period)
            throw std::invalid_argument("seed file point count does not match --period");
        orbits.push_back(find_orbit(map, period, seed));
    } else {
        const double lo = cfg.get_double("box_lo", -3.5), hi = cfg.get_double("box_hi", 3.5);
        const SearchBox box{lo, hi, lo, hi, cfg.get_int("grid", 100)};
        orbits = brute_force_seeds(map, period, box);
    }
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        const SymmetryResult r = classify_symmetry(orbits[i], orbits, 1e-8);
        orbits[i].symmetry = r.cls;
        orbits[i].partner = r.cls == SymmetryClass::CoupleMember ? r.partner : -1;
    }
    nlohmann::json report = nlohmann::json::array();
    for (const Orbit& o : orbits) report.push_back(orbit_to_json(o));
    out << (orbits.size() == 1 ? report[0].dump(2) : report.dump(2)) << "\n";
    return 0;
}

// ------------------------------------------------------------------ branch

int cmd_branch(const CommonArgs& args) {
    const JobConfig cfg = build_config(args);
    const std::string range = cfg.get("range");
    const auto colon = range.find(':');
    if (range.empty() || colon == std::string::npos)
        throw std::invalid_argument("--range lo:hi is required for branch");
    const double lo = std::stod(range.substr(0, colon));
    const double hi = std::stod(range.substr(colon + 1));
    const int period = cfg.get_int("period", 1);
    const int steps = cfg.get_int("steps", 100);
    const std::string param = cfg.get("param", "M");
    if (param != "M" && param != "b" && param != "mu")
        throw std::invalid_argument("--param must be one of M, b, mu");

    JobConfig base = cfg;
    auto map_at = [base, param](double value) {
        JobConfig c = base;
        c.set(param, format_g17(value));
        return c.make_map();
    };
    const FreeParam which = param == "M" ? FreeParam::M : param == "b" ? FreeParam::B : FreeParam::Mu;

    auto seed = load_seed_points(cfg.get("seed_file"));
    if (cfg.get("seed_file").empty()) throw std::invalid_argument("--seed-file is required for branch");
    if (static_cast<int>(seed.size()) != period)
        throw std::invalid_argument("seed file point count does not match --period");
    const Orbit start = find_orbit(map_at(lo), period, seed);

    ContinuationOptions opts;
    opts.initial_step = (hi - lo) / std::max(1, steps);
    opts.allow_stall = true;
    const Branch branch = continue_branch(map_at, which, lo, hi, start, opts);

    std::ofstream file;
    std::ostream& out = open_out(cfg, file);
    out << "parameter,trace,det";
    for (int i = 0; i < period; ++i) out << ",x" << i << ",y" << i;
    out << "\n";
    for (const auto& s : branch.samples) {
        out << format_g17(s.param) << "," << format_g17(s.orbit.trace) << ","
            << format_g17(s.orbit.det);
        for (const Point2& p : s.orbit.points)
            out << "," << format_g17(p.x) << "," << format_g17(p.y);
        out << "\n";
    }

    nlohmann::json events = nlohmann::json::array();
    for (const auto& ev : detect_events(branch)) {
        nlohmann::json j;
        j["kind"] = event_kind_name(ev.kind);
        j["parameter"] = ev.parameter;
        if (ev.kind == EventKind::ResonanceCrossing)
            j["resonance"] = std::to_string(ev.res_p) + ":" + std::to_string(ev.res_q);
        j["orbit"] = orbit_to_json(ev.orbit_at_event);
        if (!ev.emitted.empty()) {
            j["emitted"] = nlohmann::json::array();
            for (const Orbit& o : ev.emitted) j["emitted"].push_back(orbit_to_json(o));
        }
        events.push_back(j);
    }
    std::ostream& ev_out = file.is_open() ? std::cout : out;
    ev_out << events.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ curves

int cmd_curves(const CommonArgs& args) {
    const JobConfig cfg = build_config(args);
    const std::string range = cfg.get("range", "-2:2");
    const auto colon = range.find(':');
    const double lo = std::stod(range.substr(0, colon));
    const double hi = std::stod(range.substr(colon + 1));
    const int grid = cfg.get_int("grid", 81);
    const double mu = cfg.get_double("mu", 0.0);
    std::ofstream file;
    std::ostream& out = open_out(cfg, file);
    out << "b,M_fold,M_pitchfork\n";
    for (int i = 0; i < grid; ++i) {
        const double b = lo + (hi - lo) * i / (grid - 1);
        if (std::fabs(b) < 1e-6) continue;  // the excluded strip around b = 0
        out << format_g17(b) << "," << format_g17(curve_F(b, mu)) << ","
            << format_g17(curve_PF(b, mu)) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const CommonArgs& args) {
    const JobConfig cfg = build_config(args);
    const MapInstance map = cfg.make_map();
    const int samples = cfg.get_int("samples", 1000);
    const double extent = cfg.get_double("extent", 2.0);
    const double gate_rev = cfg.get_double("gate_rev", 1e-11);
    const double gate_jac = cfg.get_double("gate_jac", 1e-6);
    const double gate_transfer = cfg.get_double("gate_transfer", 1e-10);
    const SolverConfig scfg;

    std::mt19937 rng(cfg.get_int("seed", 12345));
    std::uniform_real_distribution<double> u(-extent, extent);

    double worst_rev = 0.0, worst_jac = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Point2 p{u(rng), u(rng)};
        worst_rev = std::max(worst_rev, reversibility_residual(map, p, scfg));
        const Point2 img = step(map, p, scfg);
        const double ja = jacobian_analytic(map, p, img);
        const double jf = jacobian_fd(map, p, scfg).det();
        worst_jac = std::max(worst_jac, std::fabs(ja - jf) / std::max(1.0, std::fabs(ja)));
    }

    nlohmann::json report;
    report["family"] = family_name(map.family());
    report["samples"] = samples;
    report["reversibility_max"] = worst_rev;
    report["jacobian_rel_max"] = worst_jac;
    bool pass = worst_rev <= gate_rev && worst_jac <= gate_jac;

    const bool transfer_applies = (map.family() == Family::QRexample1) &&
                                  map.eps1().form() == PerturbationSpec::Form::SeparableSum;
    if (transfer_applies) {
        const DensitySpec spec{map.eps1().separable_p().derivative()};
        double worst_transfer = 0.0;
        for (int k = 0; k < samples; ++k) {
            const Point2 p{u(rng), u(rng)};
            worst_transfer = std::max(worst_transfer, transfer_residual(map, spec, p, scfg));
        }
        report["transfer_max"] = worst_transfer;
        pass = pass && worst_transfer <= gate_transfer;
    }
    report["pass"] = pass;

    std::ofstream file;
    std::ostream& out = open_out(cfg, file);
    out << report.dump(2) << "\n";
    return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reversible Henon-like map toolkit"};
    app.require_subcommand(1);

    CommonArgs it_args, orbit_args, branch_args, curves_args, verify_args;

    CLI::App* it = app.add_subcommand("iterate", "write a forward or backward trajectory");
    add_map_flags(it, it_args);
    it->add_option_function<std::string>(
        "--steps", [&](const std::string& v) { it_args.overrides.emplace_back("steps", v); },
        "number of steps; negative iterates the inverse");
    it->add_option_function<std::string>(
        "--x0", [&](const std::string& v) { it_args.overrides.emplace_back("x0", v); }, "start x");
    it->add_option_function<std::string>(
        "--y0", [&](const std::string& v) { it_args.overrides.emplace_back("y0", v); }, "start y");
    it->add_option_function<std::string>(
        "--seed-file", [&](const std::string& v) { it_args.overrides.emplace_back("seed_file", v); },
        "start from the first point of this file");

    CLI::App* orb = app.add_subcommand("orbit", "find one orbit from a seed, or scan a box");
    add_map_flags(orb, orbit_args);
    orb->add_option_function<std::string>(
        "--period", [&](const std::string& v) { orbit_args.overrides.emplace_back("period", v); },
        "orbit period");
    orb->add_option_function<std::string>(
        "--seed-file", [&](const std::string& v) { orbit_args.overrides.emplace_back("seed_file", v); },
        "seed points, one per orbit point");
    orb->add_option_function<std::string>(
        "--grid", [&](const std::string& v) { orbit_args.overrides.emplace_back("grid", v); },
        "brute-force grid per axis");
    orb->add_option_function<std::string>(
        "--box", [&](const std::string& v) {
            const auto colon = v.find(':');
            if (colon == std::string::npos) throw CLI::ValidationError("--box expects lo:hi");
            orbit_args.overrides.emplace_back("box_lo", v.substr(0, colon));
            orbit_args.overrides.emplace_back("box_hi", v.substr(colon + 1));
        },
        "brute-force box lo:hi on both axes");

    CLI::App* br = app.add_subcommand("branch", "continue an orbit in one parameter");
    add_map_flags(br, branch_args);
    for (const char* key : {"period", "range", "steps", "param", "seed_file"}) {
        const std::string opt = std::string("--") + (std::string(key) == "seed_file" ? "seed-file" : key);
        br->add_option_function<std::string>(
            opt, [&branch_args, key](const std::string& v) { branch_args.overrides.emplace_back(key, v); });
    }

    CLI::App* cu = app.add_subcommand("curves", "tabulate the fold and pitchfork curves");
    add_map_flags(cu, curves_args);
    cu->add_option_function<std::string>(
        "--range", [&](const std::string& v) { curves_args.overrides.emplace_back("range", v); },
        "b range lo:hi");
    cu->add_option_function<std::string>(
        "--grid", [&](const std::string& v) { curves_args.overrides.emplace_back("grid", v); },
        "number of b samples");

    CLI::App* ve = app.add_subcommand("verify", "run the verification gates");
    add_map_flags(ve, verify_args);
    for (const char* key : {"samples", "extent", "gate_rev", "gate_jac", "gate_transfer", "seed"}) {
        std::string opt = std::string("--") + key;
        for (auto& ch : opt)
            if (ch == '_') ch = '-';
        ve->add_option_function<std::string>(
            opt, [&verify_args, key](const std::string& v) { verify_args.overrides.emplace_back(key, v); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (it->parsed()) return cmd_iterate(it_args);
        if (orb->parsed()) return cmd_orbit(orbit_args);
        if (br->parsed()) return cmd_branch(branch_args);
        if (cu->parsed()) return cmd_curves(curves_args);
        if (ve->parsed()) return cmd_verify(verify_args);
    } catch (const NumericsError& e) {
        return fail_numeric(e);
    } catch (const std::exception& e) {
        return fail_usage(e);
    }
    return 1;
}
