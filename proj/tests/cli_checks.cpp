// Black-box checks of the command-line driver: exit codes, error messages,
// idempotence. Usage: imgrank_cli_checks <path-to-imgrank-cli>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_cli;
fs::path g_scratch;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path log = g_scratch / ("log_" + std::to_string(counter++) + ".txt");
  const std::string command =
      "\"" + g_cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  return result;
}

void check(const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("[%s] %s%s%s\n", ok ? "ok" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: imgrank_cli_checks <path-to-imgrank-cli>\n";
    return 2;
  }
  g_cli = argv[1];
  g_scratch = fs::temp_directory_path() / ("imgrank_cli_checks_" + std::to_string(::getpid()));
  fs::create_directories(g_scratch);

  const fs::path corpus = g_scratch / "corpus";
  const fs::path features = g_scratch / "features.csv";

  // --- synth ---------------------------------------------------------------
  {
    const RunResult r = run("synth --out \"" + corpus.string() + "\" --classes 3 --per-class 10 --seed 7");
    check("synth exits 0", r.exit_code == 0);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(corpus)) {
      if (e.is_regular_file()) ++files;
    }
    check("synth wrote 30 files", files == 30, std::to_string(files));
  }
  {
    const RunResult r = run("synth --classes 3");
    check("synth without --out is a usage error", r.exit_code == 1, r.output);
  }

  // --- extract ---------------------------------------------------------------
  {
    const RunResult r = run("extract --root \"" + corpus.string() + "\" --out \"" + features.string() + "\"");
    check("extract exits 0", r.exit_code == 0);
    std::ifstream in(features);
    std::string header, row;
    std::getline(in, header);
    int rows = 0;
    int columns = 1;
    for (const char c : header) {
      if (c == ',') ++columns;
    }
    while (std::getline(in, row)) ++rows;
    check("feature cache has 30 rows", rows == 30, std::to_string(rows));
    check("feature cache has 169 columns", columns == 169, std::to_string(columns));

    const std::string bytes = slurp(features);
    run("extract --root \"" + corpus.string() + "\" --out \"" + features.string() + "\"");
    check("extract re-run is byte-identical", slurp(features) == bytes);
  }
  {
    const RunResult r = run("extract --root \"" + (g_scratch / "nowhere").string() +
                            "\" --out \"" + (g_scratch / "x.csv").string() + "\"");
    check("extract on a missing root is a data error", r.exit_code == 2, r.output);
  }
  {
    std::ofstream((corpus / "class000" / "broken.png").string()) << "not a png";
    const RunResult r = run("extract --root \"" + corpus.string() + "\" --out \"" +
                            (g_scratch / "y.csv").string() + "\"");
    check("corrupted image aborts with the path named",
          r.exit_code == 2 && r.output.find("broken.png") != std::string::npos, r.output);
    fs::remove(corpus / "class000" / "broken.png");
  }

  // --- eval ------------------------------------------------------------------
  const fs::path out_dir = g_scratch / "out";
  {
    std::ofstream cfg(g_scratch / "ok.cfg");
    cfg << "nmf_rank = 4\npca_dims = 4\ngraph_k = 4\nn_folds = 5\n";
    cfg.close();
    const RunResult r = run("eval --features \"" + features.string() + "\" --config \"" +
                            (g_scratch / "ok.cfg").string() + "\" --out-dir \"" +
                            out_dir.string() + "\"");
    check("eval exits 0", r.exit_code == 0, r.output);
    check("eval prints the five-method table",
          r.output.find("NMF+PCA+GraphRanking") != std::string::npos);
    for (const char* f : {"report.txt", "report.csv", "confusion_NMF.csv", "confusion_PCA.csv",
                          "confusion_NMF+PCA.csv", "confusion_GraphRanking.csv",
                          "confusion_NMF+PCA+GraphRanking.csv", "nmf_w.mat", "pca_mean.mat",
                          "pca_u.mat", "pca_lambda.mat"}) {
      check(std::string("eval wrote ") + f, fs::exists(out_dir / f));
    }
    const std::string report = slurp(out_dir / "report.txt");
    check("report.txt echoes the effective config",
          report.find("nmf_rank = 4") != std::string::npos &&
              report.find("sigma = AUTO") != std::string::npos &&
              report.find("alpha = 0.99") != std::string::npos);
  }
  {
    std::ofstream cfg(g_scratch / "bad_folds.cfg");
    cfg << "n_folds = 1\n";
    cfg.close();
    const RunResult r = run("eval --features \"" + features.string() + "\" --config \"" +
                            (g_scratch / "bad_folds.cfg").string() + "\" --out-dir \"" +
                            out_dir.string() + "\"");
    check("n_folds = 1 is rejected",
          r.exit_code == 1 && r.output.find("n_folds must be >= 2") != std::string::npos,
          r.output);
  }
  {
    std::ofstream cfg(g_scratch / "bad_key.cfg");
    cfg << "banana = 3\n";
    cfg.close();
    const RunResult r = run("eval --features \"" + features.string() + "\" --config \"" +
                            (g_scratch / "bad_key.cfg").string() + "\" --out-dir \"" +
                            out_dir.string() + "\"");
    check("unknown config keys are rejected by name",
          r.exit_code == 1 && r.output.find("banana") != std::string::npos, r.output);
  }
  {
    std::ofstream bad(g_scratch / "malformed.csv");
    bad << "id,label,f0\nrow-without-fields\n";
    bad.close();
    const RunResult r = run("eval --features \"" + (g_scratch / "malformed.csv").string() +
                            "\" --out-dir \"" + out_dir.string() + "\"");
    check("malformed csv is a data error with a line number",
          r.exit_code == 2 && r.output.find(":2") != std::string::npos, r.output);
  }
  {
    const RunResult r = run("eval --features \"" + features.string() + "\" --config \"" +
                            (g_scratch / "ok.cfg").string() + "\" --out-dir \"" +
                            out_dir.string() + "\" --dump-graph \"" +
                            (g_scratch / "graph.txt").string() + "\"");
    check("graph dump writes edges",
          r.exit_code == 0 && fs::file_size(g_scratch / "graph.txt") > 0, r.output);
  }
  {
    const RunResult r = run("frobnicate");
    check("unknown subcommands are usage errors", r.exit_code == 1);
  }

  std::error_code ec;
  fs::remove_all(g_scratch, ec);
  if (g_failures > 0) {
    std::printf("%d CLI checks FAILED\n", g_failures);
    return 1;
  }
  std::printf("all CLI checks passed\n");
  return 0;
}
