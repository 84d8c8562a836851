#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(LABELSHIFT_TEST_TMP) / "cli";

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + LABELSHIFT_CLI + "\" " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::create_directories(kWork);
    const fs::path p = kWork / name;
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

}  // namespace

TEST_CASE("successful run writes the CSV and the summary") {
    const auto cfg = write_config("ok.cfg", "estimator = E1\nn = 800\nseeds = 0..1\n");
    const auto out = kWork / "ok.csv";
    REQUIRE(run("run \"" + cfg.string() + "\" --quiet --out \"" + out.string() + "\"") == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("# labelshift run ", 0) == 0);
    CHECK(without_first_line(csv).rfind("scenario,estimator,statistic_mode,k_or_bandwidth,n,m,seed,", 0) == 0);
    CHECK(fs::exists(kWork / "ok_summary.csv"));
}

TEST_CASE("seed override and reproducibility") {
    const auto cfg = write_config("seeds.cfg", "estimator = E2\nn = 600\nseeds = 0\nerm = true\n");
    const auto a = kWork / "a.csv";
    const auto b = kWork / "b.csv";
    REQUIRE(run("run \"" + cfg.string() + "\" --quiet --seeds 3,5 --out \"" + a.string() + "\"") == 0);
    REQUIRE(run("run \"" + cfg.string() + "\" --quiet --seeds 3,5 --out \"" + b.string() + "\"") == 0);
    const std::string body = without_first_line(slurp(a));
    CHECK(body == without_first_line(slurp(b)));
    CHECK(body.find(",3,") != std::string::npos);
    CHECK(body.find(",5,") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
    CHECK(run("run \"" + (kWork / "missing.cfg").string() + "\" --quiet") == 2);
    CHECK(run("run \"" + write_config("bad.cfg", "colour = red\n").string() + "\" --quiet") == 2);
    CHECK(run("run \"" +
              write_config("mismatch.cfg", "scenario = categorical_vs_n\nestimator = E4\nsweep = 100\n").string() +
              "\" --quiet") == 2);
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("run \"" + write_config("s.cfg", "n = 100\n").string() + "\" --seeds x --quiet") == 2);
}

TEST_CASE("numerical failures exit with 3") {
    const auto cfg = write_config(
        "cap.cfg", "estimator = E2\nn = 4000\ne2_lambda = 0.001\ne2_max_iterations = 1\n");
    CHECK(run("run \"" + cfg.string() + "\" --quiet --out \"" + (kWork / "cap.csv").string() + "\"") == 3);
}
