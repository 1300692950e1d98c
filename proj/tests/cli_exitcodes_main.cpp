// Process-level checks of the installed CLI binary: exit codes for every
// failure class, artifact presence, and byte-identical reruns. The in-process
// CLI tests cover content; this harness proves the contract survives the
// real process boundary (shell quoting, stream flushing, exit-status
// propagation). argv[1] is the path to the binary. Prints one PASS/FAIL line
// per check; the exit code is the number of failures.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool cond, const std::string& label) {
    std::printf("%s  %s\n", cond ? "PASS" : "FAIL", label.c_str());
    if (!cond) ++g_failures;
}

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() /
               ("fractaldim_exitcodes_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const std::string& leaf) const { return (path / leaf).string(); }
};

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code = -1;        // process exit status, -1 when spawning failed
    std::string output;   // combined stdout + stderr
};

/** Spawns `binary args...` through the shell with both streams captured. */
Run spawn(const std::string& binary, const std::string& args, const std::string& log_path) {
    const std::string cmd = "'" + binary + "' " + args + " >'" + log_path + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Run run;
    if (status != -1 && WIFEXITED(status)) run.code = WEXITSTATUS(status);
    run.output = slurp(log_path);
    return run;
}

const char* kBenchmarkConfig = R"({
  "system": {
    "ambient_dim": 2,
    "branches": [
      {"linear": [[0.77, 0.0], [0.0, 0.35]], "translation": [0.0, 0.0]},
      {"linear": [[0.77, 0.0], [0.0, 0.35]], "translation": [0.23, 0.65]}
    ]
  },
  "params": {"delta": 0.1, "rho": 0.1},
  "sweep": {"t_min": 0.0, "t_max": 1.7, "steps": 171}
})";

const char* kCantorEstimatorConfig = R"({
  "system": {
    "ambient_dim": 1,
    "branches": [
      {"linear": [[0.3333333333333333]], "translation": [0.0]},
      {"linear": [[0.3333333333333333]], "translation": [0.6666666666666666]}
    ]
  },
  "estimator": {
    "mode": "deterministic_cylinders",
    "depth": 10,
    "scales": [0.3333333333333333, 0.1111111111111111, 0.037037037037037035,
               0.012345679012345678, 0.004115226337448559, 0.0013717421124828531]
  }
})";

const char* kCantorBudgetConfig = R"({
  "system": {
    "ambient_dim": 1,
    "branches": [
      {"linear": [[0.3333333333333333]], "translation": [0.0]},
      {"linear": [[0.3333333333333333]], "translation": [0.6666666666666666]}
    ]
  },
  "estimator": {
    "mode": "deterministic_cylinders",
    "depth": 30,
    "scales": [0.3333333333333333, 0.1111111111111111, 0.037037037037037035]
  }
})";

const char* kOverlapConfig = R"({
  "system": {
    "ambient_dim": 1,
    "branches": [
      {"linear": [[0.6]], "translation": [0.0]},
      {"linear": [[0.5]], "translation": [0.5]}
    ]
  }
})";

const char* kNonContractiveConfig = R"({
  "system": {
    "ambient_dim": 1,
    "branches": [
      {"linear": [[1.1]], "translation": [0.0]},
      {"linear": [[0.3]], "translation": [0.7]}
    ]
  }
})";

const char* kBadSweepConfig = R"({
  "system": {
    "ambient_dim": 2,
    "branches": [
      {"linear": [[0.77, 0.0], [0.0, 0.35]], "translation": [0.0, 0.0]},
      {"linear": [[0.77, 0.0], [0.0, 0.35]], "translation": [0.23, 0.65]}
    ]
  },
  "sweep": {"t_min": -2.0, "t_max": 1.0, "steps": 31}
})";

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: cli_exitcodes <path-to-cli-binary>\n");
        return 1;
    }
    const std::string bin = argv[1];
    TempDir td;

    spit(td.str("bench.json"), kBenchmarkConfig);
    spit(td.str("cantor.json"), kCantorEstimatorConfig);
    spit(td.str("budget.json"), kCantorBudgetConfig);
    spit(td.str("overlap.json"), kOverlapConfig);
    spit(td.str("noncontract.json"), kNonContractiveConfig);
    spit(td.str("badsweep.json"), kBadSweepConfig);

    auto q = [&](const std::string& leaf) { return "--config '" + td.str(leaf) + "'"; };
    auto out = [&](const std::string& leaf) { return "--out '" + td.str(leaf) + "'"; };

    // -- usage errors: exit 1 ------------------------------------------------
    {
        const Run r = spawn(bin, "--help", td.str("log_help.txt"));
        check(r.code == 0, "--help exits 0");
        check(r.output.find("analyze") != std::string::npos &&
                  r.output.find("sweep") != std::string::npos &&
                  r.output.find("boxdim") != std::string::npos &&
                  r.output.find("invert") != std::string::npos,
              "--help lists all four commands");
    }
    check(spawn(bin, "", td.str("log_noargs.txt")).code == 1, "no arguments exits 1");
    check(spawn(bin, "frobnicate", td.str("log_unknown.txt")).code == 1,
          "unknown command exits 1");
    check(spawn(bin, "analyze", td.str("log_nocfg.txt")).code == 1,
          "analyze without --config exits 1");
    check(spawn(bin, "analyze --config '" + td.str("missing.json") + "'",
                td.str("log_missing.txt"))
                  .code == 1,
          "analyze with a missing config file exits 1");
    check(spawn(bin, "boxdim " + q("bench.json") + " " + out("out_noest"),
                td.str("log_noest.txt"))
                  .code == 1,
          "boxdim without an estimator block exits 1");
    check(spawn(bin, "invert " + q("bench.json") + " " + out("out_notarget"),
                td.str("log_notarget.txt"))
                  .code == 1,
          "invert without --target exits 1");

    // -- happy paths: exit 0, artifacts written ------------------------------
    {
        const Run r = spawn(bin, "analyze " + q("bench.json") + " " + out("out_a1"),
                            td.str("log_a1.txt"));
        check(r.code == 0, "analyze exits 0 on the benchmark pair");
        check(fs::exists(td.str("out_a1/report.txt")) && fs::exists(td.str("out_a1/report.json")),
              "analyze writes report.txt and report.json");
        check(r.output == slurp(td.str("out_a1/report.txt")),
              "analyze stdout mirrors report.txt byte for byte");
    }
    {
        const Run r = spawn(bin, "analyze " + q("bench.json") + " " + out("out_a2"),
                            td.str("log_a2.txt"));
        check(r.code == 0 &&
                  slurp(td.str("out_a1/report.json")) == slurp(td.str("out_a2/report.json")),
              "rerunning analyze reproduces report.json byte for byte");
    }
    {
        const Run r = spawn(bin, "sweep " + q("bench.json") + " " + out("out_s1"),
                            td.str("log_s1.txt"));
        check(r.code == 0, "sweep exits 0 on the benchmark pair");
        const std::string csv = slurp(td.str("out_s1/sweep.csv"));
        check(csv.rfind("sigma,alpha,d_lower\n", 0) == 0, "sweep.csv starts with the header");
        check(fs::exists(td.str("out_s1/sweep.svg")), "sweep writes sweep.svg");
        spawn(bin, "sweep " + q("bench.json") + " " + out("out_s2"), td.str("log_s2.txt"));
        check(csv == slurp(td.str("out_s2/sweep.csv")) &&
                  slurp(td.str("out_s1/sweep.svg")) == slurp(td.str("out_s2/sweep.svg")),
              "rerunning sweep reproduces sweep.csv and sweep.svg byte for byte");
    }
    {
        const Run r = spawn(bin, "boxdim " + q("cantor.json") + " " + out("out_b1"),
                            td.str("log_b1.txt"));
        check(r.code == 0, "boxdim exits 0 on the Cantor estimator config");
        check(fs::exists(td.str("out_b1/boxdim.json")), "boxdim writes boxdim.json");
        spawn(bin, "boxdim " + q("cantor.json") + " " + out("out_b2"), td.str("log_b2.txt"));
        check(slurp(td.str("out_b1/boxdim.json")) == slurp(td.str("out_b2/boxdim.json")),
              "rerunning boxdim reproduces boxdim.json byte for byte");
    }
    check(spawn(bin, "invert " + q("bench.json") + " --target 1.3355 " + out("out_i1"),
                td.str("log_i1.txt"))
                  .code == 0,
          "invert exits 0 for an attainable target");

    // -- validation failures: exit 2 -----------------------------------------
    {
        const Run r = spawn(bin, "analyze " + q("overlap.json") + " " + out("out_v1"),
                            td.str("log_v1.txt"));
        check(r.code == 2, "analyze exits 2 on overlapping branch images");
        check(fs::exists(td.str("out_v1/report.txt")) && fs::exists(td.str("out_v1/report.json")),
              "the violation report is still written");
    }
    check(spawn(bin, "analyze " + q("noncontract.json") + " " + out("out_v2"),
                td.str("log_v2.txt"))
                  .code == 2,
          "analyze exits 2 on a non-contractive branch");

    // -- numeric/domain failures: exit 3 --------------------------------------
    check(spawn(bin, "sweep " + q("badsweep.json") + " " + out("out_n1"), td.str("log_n1.txt"))
                  .code == 3,
          "sweep exits 3 when the grid crosses the expanding threshold");
    check(spawn(bin, "boxdim " + q("budget.json") + " " + out("out_n2"), td.str("log_n2.txt"))
                  .code == 3,
          "boxdim exits 3 when the cylinder budget is exceeded");
    check(spawn(bin, "invert " + q("bench.json") + " --target 1.6 " + out("out_n3"),
                td.str("log_n3.txt"))
                  .code == 3,
          "invert exits 3 for an out-of-range target");

    std::printf("summary: %d check(s) failed\n", g_failures);
    return g_failures;
}
