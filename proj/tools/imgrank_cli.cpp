// Command-line driver: synthesize a corpus, extract feature vectors, and run
// the cross-validated method comparison.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "imgrank/config.hpp"
#include "imgrank/dataset.hpp"
#include "imgrank/eval.hpp"
#include "imgrank/graph.hpp"
#include "imgrank/matrix_io.hpp"
#include "imgrank/nmf.hpp"
#include "imgrank/pca.hpp"
#include "imgrank/synth.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int cmd_synth(const std::string& out_dir, int classes, int per_class, std::uint64_t seed) {
  imgrank::SynthOptions opt;
  opt.classes = classes;
  opt.per_class = per_class;
  opt.seed = seed;
  imgrank::generate_corpus(out_dir, opt);
  std::cerr << "wrote " << classes * per_class << " images to " << out_dir << "\n";
  return 0;
}

int cmd_extract(const std::string& root, const std::string& out_path) {
  const imgrank::Dataset ds = imgrank::extract_corpus(root);
  imgrank::save_features_csv(out_path, ds);
  std::cerr << "extracted " << ds.records.size() << " records (" << ds.classes.size()
            << " classes) to " << out_path << "\n";
  return 0;
}

// Models refit on the full dataset, persisted in the plain-text matrix format.
void save_full_models(const imgrank::Dataset& ds, const imgrank::Config& cfg,
                      const std::filesystem::path& out_dir) {
  const Eigen::MatrixXd X = ds.feature_matrix();
  const imgrank::NmfFit fit =
      imgrank::nmf_fit(X, cfg.nmf_rank, cfg.nmf_max_iter, cfg.nmf_tol, cfg.seed);
  const imgrank::PcaModel pca = imgrank::pca_fit(X, cfg.pca_dims);
  imgrank::save_matrix((out_dir / "nmf_w.mat").string(), fit.model.basis);
  imgrank::save_vector((out_dir / "pca_mean.mat").string(), pca.mean);
  imgrank::save_matrix((out_dir / "pca_u.mat").string(), pca.components);
  imgrank::save_vector((out_dir / "pca_lambda.mat").string(), pca.eigenvalues);
}

int cmd_eval(const std::string& features_path, const std::string& config_path,
             const std::string& out_dir, const std::string& dump_graph_path) {
  imgrank::Config cfg;
  if (!config_path.empty()) {
    cfg = imgrank::load_config(config_path);
  }
  cfg.validate();

  const imgrank::Dataset ds = imgrank::load_features_csv(features_path);
  std::filesystem::create_directories(out_dir);

  const imgrank::FoldPartition part = imgrank::make_folds(ds, cfg.n_folds, cfg.seed);
  std::vector<imgrank::EvalReport> reports;
  for (const imgrank::Method method : imgrank::kAllMethods) {
    std::cerr << "running " << imgrank::method_name(method) << " ..." << std::endl;
    reports.push_back(imgrank::run_method(ds, part, method, cfg));
  }

  const std::string table = imgrank::render_report(reports);
  std::cout << table;

  const std::filesystem::path dir(out_dir);
  {
    std::ofstream txt(dir / "report.txt");
    if (!txt) {
      throw std::runtime_error("cannot open for writing: " + (dir / "report.txt").string());
    }
    txt << "# records: " << ds.records.size() << ", classes: " << ds.classes.size() << "\n";
    txt << "# config:\n";
    std::istringstream echo(cfg.echo());
    std::string line;
    while (std::getline(echo, line)) txt << "#   " << line << "\n";
    txt << "\n" << table;
  }
  imgrank::write_report_csv((dir / "report.csv").string(), reports);
  for (const imgrank::EvalReport& r : reports) {
    imgrank::write_confusion_csv(
        (dir / ("confusion_" + imgrank::method_name(r.method) + ".csv")).string(), r);
  }
  save_full_models(ds, cfg, dir);

  if (!dump_graph_path.empty()) {
    const Eigen::MatrixXd X = ds.feature_matrix();
    const imgrank::AffinityGraph graph = imgrank::build_knn_graph(X, cfg.graph_k, cfg.sigma);
    imgrank::dump_graph(dump_graph_path, graph);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image classification by NMF/PCA reduction and graph ranking"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic image corpus");
  std::string synth_out;
  int classes = 20, per_class = 50;
  std::uint64_t seed = 42;
  synth->add_option("--out", synth_out, "Output corpus directory")->required();
  synth->add_option("--classes", classes, "Number of classes");
  synth->add_option("--per-class", per_class, "Images per class");
  synth->add_option("--seed", seed, "Generator seed");

  auto* extract = app.add_subcommand("extract", "Extract feature vectors from a corpus");
  std::string extract_root, extract_out;
  extract->add_option("--root", extract_root, "Corpus root (directory per class)")->required();
  extract->add_option("--out", extract_out, "Feature cache CSV path")->required();

  auto* eval = app.add_subcommand("eval", "Run the cross-validated method comparison");
  std::string eval_features, eval_config, eval_out_dir, eval_dump_graph;
  eval->add_option("--features", eval_features, "Feature cache CSV")->required();
  eval->add_option("--config", eval_config, "Config file (key = value lines)");
  eval->add_option("--out-dir", eval_out_dir, "Report output directory")->required();
  eval->add_option("--dump-graph", eval_dump_graph,
                   "Also dump the raw-feature kNN graph to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_out, classes, per_class, seed);
    if (extract->parsed()) return cmd_extract(extract_root, extract_out);
    if (eval->parsed()) return cmd_eval(eval_features, eval_config, eval_out_dir, eval_dump_graph);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
