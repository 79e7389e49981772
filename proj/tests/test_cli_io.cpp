#include <doctest.h>

#include <cstdlib>
#include <random>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "islm/defaults.hpp"
#include "islm/json_io.hpp"
#include "islm/svg.hpp"

using namespace islm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ISLM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("islm_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

bool same_config(const ModelConfig& a, const ModelConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

} // namespace

TEST_CASE("ModelConfig survives a JSON round trip on all fields") {
    for (const ModelConfig& c : {default_kaldor(), kaldor_cycle(), default_three_phase(),
                                 three_phase_cycle(), original_degenerate()}) {
        const ModelConfig back = config_from_json(config_to_json(c));
        CHECK(same_config(c, back));
    }
}

TEST_CASE("shipped config files match the in-code baselines") {
    const fs::path dir(ISLM_CONFIG_DIR);
    CHECK(same_config(load_config((dir / "default_kaldor.json").string()), default_kaldor()));
    CHECK(same_config(load_config((dir / "kaldor_cycle.json").string()), kaldor_cycle()));
    CHECK(same_config(load_config((dir / "default_three_phase.json").string()),
                      default_three_phase()));
    CHECK(same_config(load_config((dir / "three_phase_cycle.json").string()),
                      three_phase_cycle()));
}

TEST_CASE("unknown and missing fields are rejected") {
    json j = config_to_json(default_kaldor());
    j["surprise"] = 1;
    CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);

    json k = config_to_json(default_kaldor());
    k.erase("alpha");
    CHECK_THROWS_AS(config_from_json(k), std::invalid_argument);

    json m = config_to_json(default_kaldor());
    m["invest"].erase("ym");
    CHECK_THROWS_AS(config_from_json(m), std::invalid_argument);
}

TEST_CASE("format_double produces shortest round-trip decimals") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-3) == "0.001");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-2.5) == "-2.5");
    const double v = 0.30973;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("emit_svg is deterministic and classes split by stability") {
    std::vector<SvgPolyline> polys;
    SvgPolyline a;
    a.points = {State(0.0, 0.0), State(1.0, 1.0), State(2.0, 0.5)};
    a.css_class = "stable-arc";
    SvgPolyline b;
    b.points = {State(0.5, 2.0), State(1.5, 2.5)};
    b.css_class = "unstable-arc";
    polys.push_back(a);
    polys.push_back(b);

    const std::string s1 = emit_svg(polys);
    const std::string s2 = emit_svg(polys);
    CHECK(s1 == s2);
    CHECK(s1.find("stable-arc") != std::string::npos);
    CHECK(s1.find("unstable-arc") != std::string::npos);
    CHECK(s1.find("<polyline") != std::string::npos);

    CHECK_THROWS_AS(emit_svg({}), EmptyGeometry);

    // Two-point polyline: exactly one polyline element, viewbox encloses it.
    const std::string one = emit_svg({b});
    std::size_t count = 0, pos = 0;
    while ((pos = one.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 1;
    }
    CHECK(count == 1);
}

TEST_CASE("CLI verify exits 0 on passing configs and writes a report") {
    const fs::path dir(ISLM_CONFIG_DIR);
    const fs::path out = temp_dir("verify");
    const int rc = run_cli("--config " + (dir / "default_kaldor.json").string() + " --out " +
                           out.string() + " --nodes 41 verify");
    CHECK(rc == 0);
    const json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep.at("passed").get<bool>());
    CHECK(rep.at("violations").empty());
    const json manifest = json::parse(slurp(out / "manifest.json"));
    CHECK(manifest.at("subcommand") == "verify");
    CHECK(manifest.at("outputs").size() == 1);
}

TEST_CASE("CLI verify exits 1 when a regime condition fails") {
    // Valid config whose sigmoid never out-slopes saving: the hump interval
    // does not exist, so verification reports a violation.
    ModelConfig c = default_kaldor();
    c.invest.a = 0.1;
    const fs::path out = temp_dir("viol");
    const fs::path cfg = out / "flat_hump.json";
    std::ofstream(cfg) << config_to_json(c).dump(2);
    const int rc = run_cli("--config " + cfg.string() + " --out " + out.string() +
                           " --nodes 31 verify");
    CHECK(rc == 1);
    const json rep = json::parse(slurp(out / "report.json"));
    CHECK(!rep.at("passed").get<bool>());
}

TEST_CASE("CLI rejects malformed configs with exit 3") {
    const fs::path out = temp_dir("badcfg");
    const fs::path bad = out / "bad.json";
    std::ofstream(bad) << "{ not json";
    const int rc = run_cli("--config " + bad.string() + " --out " + out.string() + " verify");
    CHECK(rc == 3);
}

TEST_CASE("CLI cycle exits 2 on an equilibrium-capture config") {
    const fs::path dir(ISLM_CONFIG_DIR);
    const fs::path out = temp_dir("nocycle");
    const int rc = run_cli("--config " + (dir / "default_kaldor.json").string() + " --out " +
                           out.string() + " cycle");
    CHECK(rc == 2);
}

TEST_CASE("CLI equilibria output matches the library") {
    const fs::path dir(ISLM_CONFIG_DIR);
    const fs::path out = temp_dir("equil");
    const int rc = run_cli("--config " + (dir / "default_kaldor.json").string() + " --out " +
                           out.string() + " equilibria");
    CHECK(rc == 0);
    const json eqs = json::parse(slurp(out / "equilibria.json"));
    CHECK(eqs.at("equilibria").size() == 3);
    CHECK(eqs.at("equilibria")[1].at("kind") == "saddle");
}

TEST_CASE("CLI runs are byte-deterministic") {
    const fs::path dir(ISLM_CONFIG_DIR);
    const fs::path out1 = temp_dir("det1");
    const fs::path out2 = temp_dir("det2");
    const std::string cfg = (dir / "default_kaldor.json").string();
    for (const fs::path& out : {out1, out2}) {
        CHECK(run_cli("--config " + cfg + " --out " + out.string() + " --nodes 41 verify") == 0);
        CHECK(run_cli("--config " + cfg + " --out " + out.string() + " isoclines") == 0);
    }
    CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
    CHECK(slurp(out1 / "isocline_is.csv") == slurp(out2 / "isocline_is.csv"));
    CHECK(slurp(out1 / "isocline_lm.csv") == slurp(out2 / "isocline_lm.csv"));

    // Manifests agree except for the wall clock.
    json m1 = json::parse(slurp(out1 / "manifest.json"));
    json m2 = json::parse(slurp(out2 / "manifest.json"));
    m1.erase("wall_clock_ms");
    m2.erase("wall_clock_ms");
    CHECK(m1 == m2);
}

TEST_CASE("verify output is identical across worker counts") {
    const fs::path dir(ISLM_CONFIG_DIR);
    const fs::path out1 = temp_dir("thr1");
    const fs::path out4 = temp_dir("thr4");
    const std::string cfg = (dir / "default_kaldor.json").string();
    const std::string tail = " --nodes 61 verify >/dev/null 2>&1";
    std::system(("ISLM_THREADS=1 " + std::string(ISLM_CLI_PATH) + " --config " + cfg +
                 " --out " + out1.string() + tail)
                    .c_str());
    std::system(("ISLM_THREADS=4 " + std::string(ISLM_CLI_PATH) + " --config " + cfg +
                 " --out " + out4.string() + tail)
                    .c_str());
    CHECK(slurp(out1 / "report.json") == slurp(out4 / "report.json"));
}

TEST_CASE("random valid configs survive the JSON round trip") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    for (int k = 0; k < 100; ++k) {
        ModelConfig c = (k % 2) ? default_kaldor() : default_three_phase();
        c.alpha = u(rng);
        c.beta = u(rng);
        c.m_s = u(rng);
        c.invest.i0 = u(rng);
        c.invest.h = u(rng);
        c.save.g = u(rng);
        c.demand.l = u(rng);
        if (k % 2) {
            c.demand.d = u(rng);
            c.supply.e = u(rng);
        } else {
            c.demand.kappa_l = u(rng);
            c.supply.kappa_m = u(rng);
        }
        const ModelConfig back = config_from_json(config_to_json(c));
        CHECK(same_config(c, back));
    }
}

TEST_CASE("CSV trajectory parses back to the written samples") {
    const fs::path dir(ISLM_CONFIG_DIR);
    const fs::path out = temp_dir("sim");
    const int rc = run_cli("--config " + (dir / "default_kaldor.json").string() + " --out " +
                           out.string() + " simulate --t-end 5 --y0 3 --r0 0.5");
    CHECK(rc == 0);
    std::ifstream in(out / "trajectory.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,y,r,i_s,dy_dt,dr_dt,is_jump");
    std::string line;
    std::size_t rows = 0;
    double prev_t = -1.0;
    while (std::getline(in, line)) {
        ++rows;
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t > prev_t);
        prev_t = t;
    }
    CHECK(rows > 10);
}
