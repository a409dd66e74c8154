#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string cli = CURVN_CLI_PATH;
const fs::path golden_dir = CURVN_GOLDEN_DIR;

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("curvn_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + cli + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path spec_file(const std::string& name, const std::string& body) {
    const fs::path p = work_dir() / name;
    write(p, body);
    return p;
}

} // namespace

TEST_CASE("cli: eval on the unit circle converges with exit 0") {
    const fs::path in = spec_file("circle.json", R"({"kind":"circle","radius":1})");
    const RunResult r = run("eval " + in.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("19.7392") != std::string::npos);
    CHECK(r.out.find("converged    = true") != std::string::npos);
}

TEST_CASE("cli: golden JSON reports are byte-stable") {
    const fs::path circle = spec_file("circle.json", R"({"kind":"circle","radius":1})");
    const fs::path circle1 = spec_file("circle1.json",
                                       R"({"kind":"circle","radius":1,"center":[1,0]})");

    struct Case { std::string name; std::string args; };
    const Case cases[] = {
        {"eval_circle.json", "eval " + circle.string()},
        {"table.json", "table"},
        {"anomaly_circle.json", "anomaly " + circle1.string() + " --center 0 0"},
    };
    for (const Case& c : cases) {
        CAPTURE(c.name);
        const fs::path out = work_dir() / ("got_" + c.name);
        const RunResult r = run(c.args + " --out " + out.string());
        CHECK(r.exit_code == 0);
        const std::string got = slurp(out);
        CHECK(got == slurp(golden_dir / c.name));
    }
}

TEST_CASE("cli: reports are identical across thread counts") {
    const fs::path in = spec_file("e95.json", R"({"kind":"ellipse","a":1,"ecc":0.95})");
    const fs::path out1 = work_dir() / "r1.json";
    const fs::path out2 = work_dir() / "r2.json";
    CHECK(run("eval " + in.string() + " --out " + out1.string(), "CURVN_THREADS=1").exit_code == 0);
    CHECK(run("eval " + in.string() + " --out " + out2.string(), "CURVN_THREADS=7").exit_code == 0);
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("cli: parse errors name the offending field, exit 2") {
    const fs::path bad_ecc = spec_file("bad_ecc.json", R"({"kind":"ellipse","a":1,"ecc":1.2})");
    RunResult r = run("eval " + bad_ecc.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("ecc") != std::string::npos);
    CHECK(r.err.find("[0, 1)") != std::string::npos);

    const fs::path unknown = spec_file("unknown.json",
                                       R"({"kind":"circle","radius":1,"color":"red"})");
    r = run("eval " + unknown.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("color") != std::string::npos);
}

TEST_CASE("cli: curve validation failures exit 2") {
    const fs::path eight = spec_file(
        "eight.json", R"({"kind":"fourier-loop","cos":[[0,0],[0,0]],"sin":[[0,1],[0.5,0]]})");
    const RunResult r = run("eval " + eight.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("simpleness") != std::string::npos);
}

TEST_CASE("cli: non-convergence exits 3") {
    const fs::path in = spec_file("e99.json", R"({"kind":"ellipse","a":1,"ecc":0.99})");
    const RunResult r = run("eval " + in.string() + " --tol 1e-13 --max-grid 128");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("converged    = false") != std::string::npos);
}

TEST_CASE("cli: I/O failures exit 4") {
    CHECK(run("eval /nonexistent/curve.json").exit_code == 4);
    const fs::path in = spec_file("circle.json", R"({"kind":"circle","radius":1})");
    CHECK(run("eval " + in.string() + " --out /nonexistent-dir/report.json").exit_code == 4);
}

TEST_CASE("cli: identical export invocations produce identical SVG bytes") {
    const fs::path in = spec_file("bump.json",
                                  R"({"kind":"open-bump","amplitude":1,"width":1})");
    const fs::path s1 = work_dir() / "p1.svg";
    const fs::path s2 = work_dir() / "p2.svg";
    CHECK(run("export " + in.string() + " --out " + s1.string()).exit_code == 0);
    CHECK(run("export " + in.string() + " --out " + s2.string()).exit_code == 0);
    const std::string svg = slurp(s1);
    CHECK(svg == slurp(s2));
    CHECK(svg.find("n = 3.369") != std::string::npos);  // caption carries computed n
}

TEST_CASE("cli: job documents drive the same commands") {
    const fs::path report = work_dir() / "job_report.json";
    const fs::path job = spec_file(
        "job.json",
        std::string(R"({"command":"eval","input":{"kind":"circle","radius":1},"out":")") +
            report.string() + R"("})");
    const RunResult r = run("run " + job.string());
    CHECK(r.exit_code == 0);
    CHECK(slurp(report).find("19.739208802") != std::string::npos);
}

TEST_CASE("cli: kernel grid CSV export") {
    const fs::path in = spec_file("circle.json", R"({"kind":"circle","radius":1})");
    const fs::path csv = work_dir() / "kernel.csv";
    const RunResult r =
        run("export " + in.string() + " --format csv --grid 8 --out " + csv.string());
    CHECK(r.exit_code == 0);
    const std::string text = slurp(csv);
    CHECK(text.substr(0, 6) == "s,u,K\n");
    CHECK(text.find("0.5") != std::string::npos);  // circle kernel value
}
