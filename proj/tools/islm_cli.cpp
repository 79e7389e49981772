#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "islm/defaults.hpp"
#include "islm/isocline.hpp"
#include "islm/json_io.hpp"
#include "islm/scenario.hpp"
#include "islm/slowfast.hpp"
#include "islm/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace islm;

namespace {

constexpr const char* kVersion = "islm 1.0.0";

// FNV-1a over the raw config bytes; stable across runs for identical input.
std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Run {
    std::string subcommand;
    std::string config_path;
    fs::path out_dir;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void write(const std::string& name, const std::string& bytes) {
        std::ofstream out(out_dir / name, std::ios::binary);
        out << bytes;
        outputs.push_back(name);
    }

    void finish() {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        json manifest{
            {"subcommand", subcommand},
            {"config", config_path},
            {"config_hash", hash_file(config_path)},
            {"outputs", outputs},
            {"wall_clock_ms", ms},
            {"version", kVersion},
        };
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }
};

std::string csv_row(std::initializer_list<double> vals) {
    std::string row;
    bool first = true;
    for (double v : vals) {
        if (!first) row += ',';
        row += format_double(v);
        first = false;
    }
    return row;
}

GridSpec grid_for(const ModelConfig& cfg, double y_max, double r_min, double r_max,
                  std::size_t nodes) {
    GridSpec g = default_grid(cfg);
    if (y_max > 0) g.y_max = y_max;
    if (r_min < r_max) {
        g.r_min = r_min;
        g.r_max = r_max;
    }
    g.ny = g.nr = nodes;
    return g;
}

std::vector<SvgPolyline> curve_polylines(const IsoclineCurve& c, bool labelled) {
    std::vector<SvgPolyline> out;
    if (!labelled || c.arcs.empty()) {
        SvgPolyline pl;
        pl.points = c.points;
        pl.css_class = "isocline";
        out.push_back(std::move(pl));
        return out;
    }
    for (const auto& a : c.arcs) {
        SvgPolyline pl;
        for (std::size_t k = a.begin; k < a.end; ++k) pl.points.push_back(c.points[k]);
        pl.css_class = a.stability == Stability::Stable ? "stable-arc" : "unstable-arc";
        out.push_back(std::move(pl));
    }
    return out;
}

json cycle_to_json(const CycleReport& rep) {
    json samples = json::array();
    for (const auto& s : rep.cycle_samples)
        samples.push_back({{"t", s.t}, {"y", s.state.y}, {"r", s.state.r}});
    json jumps = json::array();
    for (const auto& jmp : rep.jumps)
        jumps.push_back({{"from", {{"y", jmp.from.y}, {"r", jmp.from.r}}},
                         {"to", {{"y", jmp.to.y}, {"r", jmp.to.r}}}});
    return json{
        {"period", rep.period},
        {"orientation", to_string(rep.orientation)},
        {"poincare_residual", rep.poincare_residual},
        {"y_range", {rep.y_range.first, rep.y_range.second}},
        {"r_range", {rep.r_range.first, rep.r_range.second}},
        {"jumps", jumps},
        {"samples", samples},
    };
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and analysis engine for a slow-fast IS-LM model"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    double y_max = 0.0, r_min = 0.0, r_max = 0.0;
    std::size_t nodes = 201;
    double t_end = 100.0;
    double y0 = -1.0, r0 = 0.0;
    double sweep_from = 0.0, sweep_to = 0.0;
    std::size_t sweep_count = 25;
    std::string eps_csv = "1e-2,1e-3,1e-4";
    std::string param_name = "monetary_ms";

    app.add_option("--config", config_path, "model configuration JSON")->required();
    app.add_option("--out", out_dir, "output directory (created if absent)");
    app.add_option("--y-max", y_max, "grid override: maximum Y");
    app.add_option("--r-min", r_min, "grid override: minimum R");
    app.add_option("--r-max", r_max, "grid override: maximum R");
    app.add_option("--nodes", nodes, "grid nodes per axis");

    auto* cmd_verify = app.add_subcommand("verify", "certify the regime conditions over a grid");
    auto* cmd_equil = app.add_subcommand("equilibria", "locate and classify all equilibria");
    auto* cmd_iso = app.add_subcommand("isoclines", "trace the IS and LM isoclines to CSV");
    auto* cmd_sim = app.add_subcommand("simulate", "integrate a trajectory to CSV");
    cmd_sim->add_option("--t-end", t_end, "integration horizon");
    cmd_sim->add_option("--y0", y0, "initial Y (default: cycle seed)");
    cmd_sim->add_option("--r0", r0, "initial R");
    auto* cmd_cycle = app.add_subcommand("cycle", "detect the relaxation cycle; JSON + SVG");
    auto* cmd_sweep = app.add_subcommand("sweep", "equilibrium branches over a parameter sweep");
    cmd_sweep->add_option("--param", param_name, "monetary_ms | fiscal_shift");
    cmd_sweep->add_option("--from", sweep_from, "first sweep value")->required();
    cmd_sweep->add_option("--to", sweep_to, "last sweep value")->required();
    cmd_sweep->add_option("--count", sweep_count, "number of sweep values");
    auto* cmd_hyst = app.add_subcommand("hysteresis", "quasi-static up/down run; JSON + SVG");
    cmd_hyst->add_option("--param", param_name, "monetary_ms | fiscal_shift");
    cmd_hyst->add_option("--from", sweep_from, "path start")->required();
    cmd_hyst->add_option("--to", sweep_to, "path end")->required();
    cmd_hyst->add_option("--count", sweep_count, "number of path values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }

    Run run;
    run.config_path = config_path;
    run.out_dir = out_dir;

    ModelConfig cfg;
    try {
        std::error_code ec;
        fs::create_directories(run.out_dir, ec);
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    }

    const GridSpec grid = grid_for(cfg, y_max, r_min, r_max, nodes);

    try {
        if (app.got_subcommand(cmd_verify)) {
            run.subcommand = "verify";
            const ConditionReport rep = verify_conditions(cfg, grid);
            run.write("report.json", report_to_json(rep).dump(2) + "\n");
            run.finish();
            if (!rep.passed()) {
                std::cerr << "verification failed: " << rep.violations.size()
                          << " violation(s)\n";
                return 1;
            }
            std::cout << "verification passed\n";
            return 0;
        }

        if (app.got_subcommand(cmd_equil)) {
            run.subcommand = "equilibria";
            const auto eqs = find_equilibria(cfg, grid);
            run.write("equilibria.json", equilibria_to_json(eqs).dump(2) + "\n");
            run.finish();
            std::cout << eqs.size() << " equilibria\n";
            return 0;
        }

        if (app.got_subcommand(cmd_iso)) {
            run.subcommand = "isoclines";
            for (const CurveId which : {CurveId::IS, CurveId::LM}) {
                const IsoclineCurve c = arc_stability(trace_isocline(which, cfg, grid), cfg);
                std::string csv = "y,r,i_s,residual,arc_label,stability\n";
                for (std::size_t k = 0; k < c.points.size(); ++k) {
                    const State& s = c.points[k];
                    const Arc* arc = nullptr;
                    for (const auto& a : c.arcs)
                        if (k >= a.begin && k < a.end) arc = &a;
                    csv += csv_row({s.y, s.r, short_rate(s.r, cfg),
                                    curve_residual(which, s.y, s.r, cfg)});
                    csv += ',';
                    csv += arc ? to_string(arc->label) : "monotone";
                    csv += ',';
                    csv += arc ? to_string(arc->stability) : "stable";
                    csv += '\n';
                }
                run.write(which == CurveId::IS ? "isocline_is.csv" : "isocline_lm.csv", csv);
            }
            run.finish();
            std::cout << "isoclines written\n";
            return 0;
        }

        if (app.got_subcommand(cmd_sim)) {
            run.subcommand = "simulate";
            const State s0 = y0 >= 0.0 ? State(y0, r0) : cycle_seed(cfg);
            Trajectory traj = integrate(s0, cfg, t_end);
            mark_jumps(traj, cfg);
            std::string csv = "t,y,r,i_s,dy_dt,dr_dt,is_jump\n";
            for (std::size_t k = 0; k < traj.samples.size(); ++k) {
                const auto& s = traj.samples[k];
                const VectorFieldValue v = vector_field(s.state, cfg);
                bool in_jump = false;
                for (const auto& j : traj.jumps)
                    if (k >= j.begin && k < j.end) in_jump = true;
                csv += csv_row({s.t, s.state.y, s.state.r, short_rate(s.state.r, cfg), v.dy_dt,
                                v.dr_dt, in_jump ? 1.0 : 0.0});
                csv += '\n';
            }
            run.write("trajectory.csv", csv);
            run.finish();
            std::cout << traj.samples.size() << " samples\n";
            return 0;
        }

        if (app.got_subcommand(cmd_cycle)) {
            run.subcommand = "cycle";
            const CycleReport rep = detect_cycle(cfg, cycle_seed(cfg));
            run.write("cycle.json", cycle_to_json(rep).dump(2) + "\n");

            const CurveId which = fast_curve(cfg);
            const IsoclineCurve fastc = arc_stability(trace_isocline(which, cfg, grid), cfg);
            const IsoclineCurve other = trace_isocline(
                which == CurveId::IS ? CurveId::LM : CurveId::IS, cfg, grid);
            std::vector<SvgPolyline> polys = curve_polylines(fastc, true);
            for (auto& pl : curve_polylines(other, false)) polys.push_back(std::move(pl));
            SvgPolyline cyc;
            for (const auto& s : rep.cycle_samples) cyc.points.push_back(s.state);
            cyc.css_class = "cycle";
            cyc.arrows = true;
            polys.push_back(std::move(cyc));
            run.write("phase.svg", emit_svg(polys));
            run.finish();
            std::cout << "cycle: " << to_string(rep.orientation) << ", period " << rep.period
                      << "\n";
            return 0;
        }

        if (app.got_subcommand(cmd_sweep)) {
            run.subcommand = "sweep";
            SweepSpec spec;
            spec.parameter = param_name == "fiscal_shift" ? SweepParameter::FiscalShift
                                                          : SweepParameter::MonetaryMS;
            spec.base = cfg;
            for (std::size_t k = 0; k < sweep_count; ++k)
                spec.values.push_back(sweep_from + (sweep_to - sweep_from) * double(k) /
                                                       double(sweep_count - 1));
            const BranchDiagram diag = sweep(spec, grid);
            std::string csv = "parameter_value,eq_index,y,r,kind\n";
            for (const auto& slice : diag.slices)
                for (std::size_t i = 0; i < slice.equilibria.size(); ++i) {
                    const auto& e = slice.equilibria[i];
                    csv += csv_row({slice.value, double(i), e.state.y, e.state.r});
                    csv += ',';
                    csv += to_string(e.kind);
                    csv += '\n';
                }
            run.write("sweep.csv", csv);
            json folds = json::array();
            for (double f : diag.fold_values) folds.push_back(f);
            run.write("folds.json", json{{"fold_values", folds}}.dump(2) + "\n");
            run.finish();
            std::cout << diag.fold_values.size() << " fold(s)\n";
            return 0;
        }

        if (app.got_subcommand(cmd_hyst)) {
            run.subcommand = "hysteresis";
            const SweepParameter param = param_name == "fiscal_shift"
                                             ? SweepParameter::FiscalShift
                                             : SweepParameter::MonetaryMS;
            std::vector<double> path;
            for (std::size_t k = 0; k < sweep_count; ++k)
                path.push_back(sweep_from + (sweep_to - sweep_from) * double(k) /
                                                double(sweep_count - 1));
            const HysteresisReport rep = hysteresis_run(cfg, param, path, grid);
            json j{
                {"parameter", to_string(rep.parameter)},
                {"up_jump", rep.up_jump},
                {"down_jump", rep.down_jump},
                {"up_state_before", {{"y", rep.up_state_before.y}, {"r", rep.up_state_before.r}}},
                {"down_state_before",
                 {{"y", rep.down_state_before.y}, {"r", rep.down_state_before.r}}},
            };
            run.write("hysteresis.json", j.dump(2) + "\n");

            // Branch diagram: tracked state coordinate vs parameter.
            SvgPolyline up, down;
            for (const auto& [v, s] : rep.up_branch) up.points.emplace_back(v, s.y);
            for (const auto& [v, s] : rep.down_branch) down.points.emplace_back(v, s.y);
            up.css_class = "stable-arc";
            down.css_class = "unstable-arc";
            run.write("branches.svg", emit_svg({up, down}));
            run.finish();
            std::cout << "up jump at " << rep.up_jump << ", down jump at " << rep.down_jump
                      << "\n";
            return 0;
        }
    } catch (const Error& e) {
        run.finish();
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 3;
}
