#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "hyperdiff/cli.hpp"
#include "hyperdiff/errors.hpp"

using namespace hyperdiff;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("hyperdiff_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct Proc {
    int code;
    std::string out;
};

Proc run(const std::string& args, const std::string& env = "") {
    const fs::path log = scratch() / "stdout.txt";
    const std::string cmd = env + " '" HYPERDIFF_CLI_PATH "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream f(log);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const std::string kSmallIso = "--case A --ratio 1 --theta 0 --nx 20 --ny 20 --dt 0.025 --tol 1e-10";

}  // namespace

TEST_CASE("config keys") {
    cli::RunConfig c;
    cli::apply_key(c, "alpha-s", "2.5");
    cli::apply_key(c, "MAX_STEPS", "1e5");
    cli::apply_key(c, "scheme", "hyperbolic-unrefined");
    cli::apply_key(c, "case", "b");
    cli::apply_key(c, "emit", "field,report");
    cli::apply_key(c, "alphas", "4, 0.5,1");
    CHECK(c.alpha_s == 2.5);
    CHECK(c.max_steps == 100000);
    CHECK(c.scheme == cli::SchemeKind::HyperbolicUnrefined);
    CHECK(c.case_name == "B");
    CHECK(c.emit.field);
    CHECK_FALSE(c.emit.profile);
    CHECK(c.alphas == std::vector<double>{4.0, 0.5, 1.0});
    CHECK_THROWS_AS(cli::apply_key(c, "alpha", "1"), InvalidArgument);
    CHECK_THROWS_AS(cli::apply_key(c, "dt", "fast"), InvalidArgument);
    CHECK_THROWS_AS(cli::apply_key(c, "nx", "2.5"), InvalidArgument);
    CHECK_THROWS_AS(cli::apply_key(c, "scheme", "upwind"), InvalidArgument);
    CHECK_THROWS_AS(cli::apply_key(c, "emit", "pictures"), InvalidArgument);

    std::istringstream text("# comment\ncase = C\n alpha_s=3 # trailing\n\n");
    const auto m = cli::parse_config_text(text, "t.cfg");
    CHECK(m.at("case") == "C");
    CHECK(m.at("alpha_s") == "3");
    std::istringstream bad("speed = 3\n");
    CHECK_THROWS_AS(cli::parse_config_text(bad, "t.cfg"), InvalidArgument);
    std::istringstream nokey("just words\n");
    CHECK_THROWS_AS(cli::parse_config_text(nokey, "t.cfg"), InvalidArgument);
}

TEST_CASE("run writes outputs and exits 0 on convergence") {
    const fs::path out = scratch() / "iso";
    const auto p = run("run " + kSmallIso + " --out '" + out.string() + "' --emit all");
    CHECK(p.code == 0);
    for (const char* f : {"field.csv", "profile.csv", "speed.csv", "report.json", "plot.gp"})
        CHECK(fs::exists(out / f));
    const auto j = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(j["converged"] == true);
    CHECK(j["satisfied"] == true);
    CHECK(j["case"] == "A");
    CHECK(j["scheme"] == "hyperbolic");
    CHECK(j["extras"]["max_abs_error_vs_linear"].get<double>() < 1e-6);
    CHECK(slurp(out / "field.csv").rfind("x,y,phi,u,v\n", 0) == 0);
    CHECK(slurp(out / "profile.csv").rfind("x,phi\n", 0) == 0);
    CHECK(slurp(out / "speed.csv").rfind("x,y,speed\n", 0) == 0);
}

TEST_CASE("central scheme run") {
    const fs::path out = scratch() / "central";
    const auto p = run("run " + std::string("--case A --ratio 1 --theta 0 --nx 20 --ny 20 --tol 1e-10 ") +
                       "--scheme central --emit report --out '" + out.string() + "'");
    CHECK(p.code == 0);
    const auto j = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(j["alpha_s"].is_null());
    CHECK(j["extras"]["max_abs_error_vs_linear"].get<double>() < 1e-6);
    CHECK_FALSE(fs::exists(out / "field.csv"));
}

TEST_CASE("byte-identical reruns") {
    const fs::path a = scratch() / "det_a";
    const fs::path b = scratch() / "det_b";
    const std::string args = "run --case B --nx 20 --ny 20 --dt 0.01 --alpha-s 2 --max-steps 300 ";
    CHECK(run(args + "--out '" + a.string() + "'").code == 2);
    CHECK(run(args + "--out '" + b.string() + "'").code == 2);
    for (const char* f : {"field.csv", "profile.csv", "speed.csv", "report.json"})
        CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("exit codes") {
    CHECK(run("run --case A --nx 10 --ny 10 --dt 0.01 --max-steps 5 --emit none").code == 2);
    CHECK(run("run --case A --alpha-s -1 --emit none").code == 1);
    CHECK(run("run --case Q --emit none").code == 1);
    CHECK(run("run --bogus 3").code == 1);
    CHECK(run("run --case A --nx 10 --ny 10 --dt 0.5 --emit none").code == 1);
    CHECK(run("").code == 1);
    CHECK(run("--help").code == 0);
}

TEST_CASE("config file and environment overrides") {
    const fs::path cfg = scratch() / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "case = A\nratio = 1\ntheta = 0\nnx = 20\nny = 20\ndt = 0.025\ntol = 1e-10\n"
          << "max_steps = 5\nemit = report\n";
    }
    const fs::path out = scratch() / "cfgrun";
    // file asks for 5 steps, the environment lifts it
    CHECK(run("run --config '" + cfg.string() + "' --out '" + out.string() + "'").code == 2);
    CHECK(run("run --config '" + cfg.string() + "' --out '" + out.string() + "'",
              "HYPERDIFF_MAX_STEPS=100000")
              .code == 0);
    // an explicit flag beats the environment
    CHECK(run("run --config '" + cfg.string() + "' --out '" + out.string() + "' --max-steps 5",
              "HYPERDIFF_MAX_STEPS=100000")
              .code == 2);

    const fs::path bad = scratch() / "bad.cfg";
    {
        std::ofstream f(bad);
        f << "case = A\ncolour = blue\n";
    }
    CHECK(run("run --config '" + bad.string() + "'").code == 1);
}

TEST_CASE("sweep summary") {
    const fs::path out = scratch() / "sweep";
    const auto p = run("sweep --case A --ratio 1 --theta 0 --nx 10 --ny 10 --dt 0.05 --tol 1e-10 "
                       "--alphas 2,1 --out '" + out.string() + "'");
    CHECK(p.code == 0);
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(out)) entries.push_back(e.path().filename());
    REQUIRE(entries.size() == 1);
    CHECK(entries[0] == "sweep.csv");
    std::istringstream csv(slurp(out / "sweep.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("alpha_s,min_phi,max_phi,", 0) == 0);
    std::getline(csv, line);
    CHECK(line.rfind("1,", 0) == 0);
    std::getline(csv, line);
    CHECK(line.rfind("2,", 0) == 0);

    const fs::path out2 = scratch() / "sweep_emit";
    CHECK(run("sweep --case A --ratio 1 --theta 0 --nx 10 --ny 10 --dt 0.05 --tol 1e-10 "
              "--alphas 1 --emit profile --out '" + out2.string() + "'")
              .code == 0);
    CHECK(fs::exists(out2 / "alpha_1" / "profile.csv"));

    // a failing entry is recorded and the sweep goes on
    const fs::path out3 = scratch() / "sweep_err";
    CHECK(run("sweep --case A --ratio 1 --theta 0 --nx 10 --ny 10 --dt 0.05 --tol 1e-10 "
              "--alphas -1,1 --out '" + out3.string() + "'")
              .code == 1);
    const std::string s3 = slurp(out3 / "sweep.csv");
    CHECK(s3.find("alpha_s must be > 0") != std::string::npos);
    CHECK(s3.find("\n1,") != std::string::npos);
}

TEST_CASE("analyze table") {
    const auto p = run("analyze --c 0.5,0.25,0.1,0.05,0.025,0.01,0");
    CHECK(p.code == 0);
    std::istringstream in(p.out);
    std::string line;
    std::getline(in, line);
    CHECK(line.find("dt_bound=0.0001000") != std::string::npos);
    std::getline(in, line);
    CHECK(line == "C,h,abs_alpha_tilde_plus,abs_alpha_tilde_minus,status");
    const double published[] = {0.8768, 0.9376, 0.9749, 0.9874, 0.9936, 0.9974, 1.0};
    for (double ref : published) {
        std::getline(in, line);
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cols.push_back(c);
        REQUIRE(cols.size() == 5);
        CHECK(std::abs(std::stod(cols[2]) - ref) <= 0.002);
        CHECK(cols[4] == "ok");
    }
}

TEST_CASE("stencil printout") {
    auto p = run("stencil --alpha-s 0");
    CHECK(p.code == 0);
    CHECK(p.out.find("monotone = true") != std::string::npos);
    CHECK(p.out.find("sum = 1\n") != std::string::npos);
    p = run("stencil --alpha-s 1 --dt 1e-4 --spacing 0.01");
    CHECK(p.out.find("cross magnitude = 1.249750025e-05") != std::string::npos);
    CHECK(p.out.find("monotone = false") != std::string::npos);
    CHECK(p.out.find("sum = 1\n") != std::string::npos);
    const auto sing = run("stencil --kx 1 --ky 1 --kc 0 --dt 0.1 --alpha-s -10");
    CHECK(sing.code == 1);
    CHECK(sing.out.find("singular") != std::string::npos);
}
