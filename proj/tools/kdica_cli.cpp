// Command-line front end: dataset synthesis, representation fitting, attribute
// detection, zero-shot classification, retrieval and metric evaluation.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 quality gate (too many degenerate attributes).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdica/dataset.hpp"
#include "kdica/kdica.hpp"
#include "kdica/matrix_io.hpp"
#include "kdica/metrics.hpp"
#include "kdica/model_io.hpp"
#include "kdica/parallel.hpp"
#include "kdica/pipeline.hpp"
#include "kdica/report.hpp"
#include "kdica/retrieval.hpp"
#include "kdica/synthetic.hpp"
#include "kdica/zero_shot.hpp"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitQualityGate = 4;

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

/// Resolved configuration snapshot next to the artifacts. Thread count and
/// other machine state stay out so reruns compare bitwise.
void write_run_config(const std::filesystem::path& dir, const std::string& subcommand,
                      json config) {
  json doc;
  doc["subcommand"] = subcommand;
  doc["config"] = std::move(config);
  doc["format_versions"] = {{"kdmc", 1}, {"kdmx", 1}, {"report", 1}};
  kdica::write_json(dir / "run.json", doc);
}

/// Shared kernel flags; --rbf-gamma g is accepted as exp(-g d^2) and
/// converted to the bandwidth form exp(-d^2 / (2 sigma^2)).
struct KernelFlags {
  std::string family = "rbf";
  double bandwidth = 1.0;
  double rbf_gamma = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kernel", family, "Kernel family: rbf or linear")
        ->check(CLI::IsMember({"rbf", "linear"}));
    cmd->add_option("--bandwidth", bandwidth, "RBF bandwidth sigma (default 1)");
    cmd->add_option("--rbf-gamma", rbf_gamma,
                    "Alternative RBF parameter g in exp(-g d^2); overrides --bandwidth");
  }
  kdica::KernelFamily parsed_family() const { return kdica::kernel_family_from_string(family); }
  double parsed_bandwidth() const {
    if (rbf_gamma > 0.0) return 1.0 / std::sqrt(2.0 * rbf_gamma);
    return bandwidth;
  }
  json to_json() const {
    return {{"family", family}, {"bandwidth", parsed_bandwidth()}};
  }
};

int clamp_components(int b, int max_b) {
  if (b <= max_b) return b;
  std::cerr << "warning: " << b << " components exceed the training size; clipped to "
            << max_b << "\n";
  return max_b;
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::size_t end = comma == std::string::npos ? text.size() : comma;
    std::string field = text.substr(start, end - start);
    if (!field.empty()) out.push_back(std::stoi(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw kdica::ValidationError("empty index list \"" + text + "\"");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_synth(const std::string& out_dir, const kdica::SynthSpec& spec,
              const std::string& format) {
  auto dir = ensure_dir(out_dir);
  auto [train, test] = kdica::generate(spec);
  kdica::save_dataset(train, dir / "train", format);
  kdica::save_dataset(test, dir / "test", format);

  json cfg;
  cfg["seed"] = spec.seed;
  cfg["domains"] = spec.num_domains;
  cfg["train_domains"] = spec.train_domains;
  cfg["samples_per_domain"] = spec.samples_per_domain;
  cfg["attributes"] = spec.num_attributes;
  cfg["feature_dim"] = spec.feature_dim;
  cfg["attribute_signal"] = spec.attribute_signal;
  cfg["domain_nuisance"] = spec.domain_nuisance;
  cfg["noise"] = spec.noise;
  cfg["attribute_flip"] = spec.attribute_flip;
  cfg["holdout_flip"] = spec.effective_holdout_flip();
  cfg["attribute_correlation"] = spec.attribute_correlation;
  cfg["format"] = format;
  write_run_config(dir, "synth", cfg);

  std::cout << "wrote " << (dir / "train").string() << " (" << train.num_samples()
            << " samples, " << train.num_classes() << " domains) and "
            << (dir / "test").string() << " (" << test.num_samples() << " samples, "
            << test.num_classes() << " domains)\n";
  return 0;
}

int cmd_fit(const std::string& train_manifest, const std::string& out_dir,
            const std::string& mode_name, double gamma, int b,
            std::optional<double> epsilon, const KernelFlags& kernel, bool normalize) {
  auto dir = ensure_dir(out_dir);
  kdica::Mode mode = kdica::mode_from_string(mode_name);
  if (mode == kdica::Mode::raw)
    throw kdica::ValidationError("fit requires mode kdica or udica; raw has nothing to fit");

  kdica::Dataset train = kdica::load_dataset(train_manifest);
  if (normalize) train.features = kdica::l2_normalize(train.features);

  kdica::KdicaConfig kc;
  kc.gamma = mode == kdica::Mode::udica ? 1.0 : gamma;
  kc.num_components = clamp_components(b, train.num_samples());
  kc.epsilon = epsilon;
  kc.family = kernel.parsed_family();
  kc.bandwidth = kernel.parsed_bandwidth();
  kdica::KdicaModel model = kdica::fit(train, kc);
  model.l2_normalized = normalize;

  kdica::ModelBundle bundle;
  bundle.mode = mode;
  bundle.l2_normalized = normalize;
  bundle.model = std::move(model);
  kdica::save_model(dir / "model.kdmc", bundle);

  std::cout << "fit " << mode_name << " on " << train.num_samples() << " samples, "
            << bundle.model.num_components() << " components\n";
  std::cout << "eigenvalue spectrum:";
  for (int i = 0; i < bundle.model.eigenvalues.size() && i < 8; ++i)
    std::cout << " " << bundle.model.eigenvalues[i];
  if (bundle.model.eigenvalues.size() > 8) std::cout << " ...";
  std::cout << "\n";

  json cfg;
  cfg["train"] = train_manifest;
  cfg["mode"] = mode_name;
  cfg["gamma"] = kc.gamma;
  cfg["b"] = kc.num_components;
  cfg["epsilon_used"] = bundle.model.epsilon_used;
  cfg["kernel"] = kernel.to_json();
  cfg["normalize"] = normalize;
  write_run_config(dir, "fit", cfg);
  return 0;
}

int cmd_transform(const std::string& model_file, const std::string& features_file,
                  const std::string& format, const std::string& out_dir) {
  auto dir = ensure_dir(out_dir);
  kdica::ModelBundle bundle = kdica::load_model(model_file);
  kdica::Matrix features = kdica::read_matrix(features_file, format);
  kdica::Matrix embedded = kdica::apply_model(bundle, features);
  kdica::write_matrix(dir / ("embedded." + format), embedded, format);

  json cfg;
  cfg["model"] = model_file;
  cfg["features"] = features_file;
  cfg["format"] = format;
  write_run_config(dir, "transform", cfg);
  std::cout << "embedded " << embedded.rows() << " samples into " << embedded.cols()
            << " dimensions\n";
  return 0;
}

int cmd_detect(const std::string& train_manifest, const std::string& test_manifest,
               const std::string& out_dir, const std::string& mode_name, double c, int b,
               double gamma, std::optional<double> epsilon, const KernelFlags& kernel,
               bool normalize, std::uint64_t seed, int epochs, double max_skip_ratio,
               const std::string& format) {
  auto dir = ensure_dir(out_dir);
  kdica::Dataset train = kdica::load_dataset(train_manifest);
  kdica::Dataset test = kdica::load_dataset(test_manifest);

  kdica::DetectConfig cfg;
  cfg.mode = kdica::mode_from_string(mode_name);
  cfg.c = c;
  cfg.b = cfg.mode == kdica::Mode::raw ? b : clamp_components(b, train.num_samples());
  cfg.gamma = gamma;
  cfg.family = kernel.parsed_family();
  cfg.bandwidth = kernel.parsed_bandwidth();
  cfg.epsilon = epsilon;
  cfg.svm_epochs = epochs;
  cfg.seed = seed;
  cfg.normalize = normalize;

  kdica::DetectionResult result = kdica::detect_attributes(train, test, cfg);

  kdica::write_detect_report(dir, result, train.attribute_names, cfg);
  kdica::write_matrix(dir / ("scores." + format), result.scores, format);
  kdica::write_matrix(dir / ("probabilities." + format), result.probabilities, format);

  kdica::ModelBundle bundle;
  bundle.mode = cfg.mode;
  bundle.l2_normalized = normalize;
  bundle.model = result.model;
  bundle.bank = result.bank;
  bundle.svm_c = c;
  bundle.svm_epochs = epochs;
  kdica::save_model(dir / "model.kdmc", bundle);

  json rc;
  rc["train"] = train_manifest;
  rc["test"] = test_manifest;
  rc["mode"] = mode_name;
  rc["c"] = c;
  rc["b"] = cfg.b;
  rc["gamma"] = gamma;
  rc["kernel"] = kernel.to_json();
  rc["normalize"] = normalize;
  rc["seed"] = seed;
  rc["svm_epochs"] = epochs;
  rc["max_skip_ratio"] = max_skip_ratio;
  rc["format"] = format;
  write_run_config(dir, "detect", rc);

  if (result.mean_auc)
    std::cout << "mean attribute AUC: " << *result.mean_auc << "\n";
  else
    std::cout << "mean attribute AUC: undefined (no attribute had both classes)\n";

  double ratio = kdica::skipped_ratio(result);
  if (ratio > max_skip_ratio) {
    std::cerr << "error: " << result.skipped_attributes.size() << " of "
              << result.attribute_auc.size()
              << " attributes were degenerate in training (ratio "
              << ratio << " > " << max_skip_ratio << ")\n";
    return kExitQualityGate;
  }
  return 0;
}

int cmd_zeroshot(const std::string& probabilities_file, const std::string& test_manifest,
                 const std::string& out_dir, bool uniform_priors,
                 const std::string& format) {
  auto dir = ensure_dir(out_dir);
  kdica::Matrix probs = kdica::read_matrix(probabilities_file, format);
  kdica::Dataset test = kdica::load_dataset(test_manifest);
  if (!test.has_class_signatures())
    throw kdica::ValidationError("test manifest provides no class signature table; "
                                 "zero-shot needs one row per unseen class");
  if (probs.rows() != test.num_samples())
    throw kdica::ValidationError("probability rows do not match test samples");

  kdica::ZeroShotTable table =
      kdica::make_zero_shot_table(test.class_signatures, uniform_priors);
  for (const auto& group : table.duplicate_groups) {
    std::cerr << "warning: classes";
    for (int z : group) std::cerr << " " << z;
    std::cerr << " share one signature and are indistinguishable\n";
  }

  kdica::ZeroShotResult result = kdica::dap_zero_shot(probs, table);
  kdica::write_zeroshot_report(dir, result, table, test.domain_labels,
                               test.original_class_ids);

  double accuracy = kdica::mean_per_class_accuracy(result.predicted, test.domain_labels);
  std::cout << "zero-shot mean per-class accuracy: " << accuracy << " over "
            << table.class_signatures.rows() << " classes\n";

  json cfg;
  cfg["probabilities"] = probabilities_file;
  cfg["test"] = test_manifest;
  cfg["uniform_priors"] = uniform_priors;
  cfg["format"] = format;
  write_run_config(dir, "zeroshot", cfg);
  return 0;
}

int cmd_retrieve(const std::string& probabilities_file, const std::string& test_manifest,
                 const std::string& query_text, const std::string& out_dir,
                 const std::string& format) {
  auto dir = ensure_dir(out_dir);
  kdica::Matrix probs = kdica::read_matrix(probabilities_file, format);
  kdica::Dataset test = kdica::load_dataset(test_manifest);
  if (probs.rows() != test.num_samples())
    throw kdica::ValidationError("probability rows do not match test samples");

  std::vector<int> query = parse_index_list(query_text);
  kdica::RetrievalResult result = kdica::retrieve(probs, query, test.attributes);
  kdica::write_retrieval_report(dir, result, query);

  if (result.auc_value)
    std::cout << "retrieval AUC: " << *result.auc_value << "\n";
  else
    std::cout << "retrieval AUC undefined (all images relevant or all irrelevant)\n";

  json cfg;
  cfg["probabilities"] = probabilities_file;
  cfg["test"] = test_manifest;
  cfg["query"] = query;
  cfg["format"] = format;
  write_run_config(dir, "retrieve", cfg);
  return 0;
}

int cmd_eval(const std::string& scores_file, const std::string& labels_file,
             const std::string& out_dir) {
  auto dir = ensure_dir(out_dir);
  kdica::Matrix scores = kdica::read_csv_matrix(scores_file);
  if (scores.cols() != 1)
    throw kdica::ValidationError("scores file must contain a single column, got " +
                                 std::to_string(scores.cols()));
  std::vector<long long> raw = kdica::read_labels(labels_file);
  if (static_cast<Eigen::Index>(raw.size()) != scores.rows())
    throw kdica::ValidationError("label count does not match score count");
  kdica::IntVector labels(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i)
    labels[static_cast<Eigen::Index>(i)] = static_cast<int>(raw[i]);

  auto value = kdica::auc(scores.col(0), labels);
  json doc;
  doc["auc"] = value ? json(*value) : json(nullptr);
  kdica::write_json(dir / "eval.json", doc);
  if (value)
    std::cout << "auc: " << *value << "\n";
  else
    std::cout << "auc undefined: labels contain a single class\n";

  json cfg;
  cfg["scores"] = scores_file;
  cfg["labels"] = labels_file;
  write_run_config(dir, "eval", cfg);
  return 0;
}

int cmd_cv(const std::string& train_manifest, const std::string& out_dir,
           kdica::ExperimentConfig cfg, const KernelFlags& kernel) {
  auto dir = ensure_dir(out_dir);
  cfg.family = kernel.parsed_family();
  cfg.bandwidth = kernel.parsed_bandwidth();
  kdica::Dataset train = kdica::load_dataset(train_manifest);
  kdica::CvResult result = kdica::cross_validate(train, cfg);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  kdica::write_cv_report(dir, result, cfg);

  std::cout << "chosen C=" << result.chosen_c;
  if (cfg.mode != kdica::Mode::raw) std::cout << " b=" << result.chosen_b;
  if (cfg.mode == kdica::Mode::kdica) std::cout << " gamma=" << result.chosen_gamma;
  std::cout << "\n";

  json rc;
  rc["train"] = train_manifest;
  rc["mode"] = to_string(cfg.mode);
  rc["c_grid"] = cfg.c_grid;
  rc["b_grid"] = cfg.b_grid;
  rc["gamma_grid"] = cfg.gamma_grid;
  rc["folds"] = cfg.folds;
  rc["seed"] = cfg.seed;
  rc["kernel"] = kernel.to_json();
  rc["normalize"] = cfg.normalize;
  write_run_config(dir, "cv", rc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Category-invariant attribute representations: fit, detect, "
               "zero-shot and retrieval toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker thread cap (default: KDICA_THREADS or hardware)");

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a multi-domain attribute dataset");
  kdica::SynthSpec spec;
  std::string synth_out = "synth_out";
  std::string synth_format = "csv";
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--seed", spec.seed, "Random seed");
  synth->add_option("--domains", spec.num_domains, "Total domain count");
  synth->add_option("--train-domains", spec.train_domains, "Domains used for training");
  synth->add_option("--samples", spec.samples_per_domain, "Samples per domain");
  synth->add_option("--attributes", spec.num_attributes, "Attribute count");
  synth->add_option("--dim", spec.feature_dim, "Feature dimension");
  synth->add_option("--signal", spec.attribute_signal, "Attribute signal strength");
  synth->add_option("--nuisance", spec.domain_nuisance, "Domain nuisance strength");
  synth->add_option("--noise", spec.noise, "Gaussian noise level");
  synth->add_option("--flip", spec.attribute_flip,
                    "Attribute flip rate against the domain signature (0.5 = i.i.d.)");
  double synth_holdout_flip = -1.0;
  synth->add_option("--holdout-flip", synth_holdout_flip,
                    "Flip rate on held-out domains (default: same as --flip)");
  synth->add_option("--correlation", spec.attribute_correlation,
                    "Pairwise attribute agreement probability");
  synth->add_option("--format", synth_format, "Matrix format: csv or kdmx")
      ->check(CLI::IsMember({"csv", "kdmx"}));

  // fit --------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "Fit the projection on a training manifest");
  std::string fit_train, fit_out = "fit_out", fit_mode = "kdica";
  double fit_gamma = 0.5;
  int fit_b = 30;
  double fit_epsilon = -1.0;
  bool fit_no_normalize = false;
  KernelFlags fit_kernel;
  fit_cmd->add_option("--train", fit_train, "Training manifest")->required();
  fit_cmd->add_option("--out", fit_out, "Output directory");
  fit_cmd->add_option("--mode", fit_mode, "kdica or udica")
      ->check(CLI::IsMember({"kdica", "udica"}));
  fit_cmd->add_option("--gamma", fit_gamma, "Variance/alignment trade-off in [0,1]");
  fit_cmd->add_option("--b", fit_b, "Number of components");
  fit_cmd->add_option("--epsilon", fit_epsilon,
                      "Ridge on the right-hand side (default: 1e-8 tr(K)/M)");
  fit_cmd->add_flag("--no-normalize", fit_no_normalize, "Skip row l2-normalization");
  fit_kernel.attach(fit_cmd);

  // transform ----------------------------------------------------------------
  auto* tr = app.add_subcommand("transform", "Embed a feature matrix with a saved model");
  std::string tr_model, tr_features, tr_format = "csv", tr_out = "transform_out";
  tr->add_option("--model", tr_model, "Model container file")->required();
  tr->add_option("--features", tr_features, "Feature matrix file")->required();
  tr->add_option("--format", tr_format, "Matrix format: csv or kdmx")
      ->check(CLI::IsMember({"csv", "kdmx"}));
  tr->add_option("--out", tr_out, "Output directory");

  // detect -------------------------------------------------------------------
  auto* detect = app.add_subcommand("detect", "Train attribute detectors and score a test set");
  std::string det_train, det_test, det_out = "detect_out", det_mode = "kdica";
  std::string det_format = "csv";
  double det_c = 1.0, det_gamma = 0.5, det_epsilon = -1.0, det_max_skip = 0.5;
  int det_b = 30, det_epochs = 200;
  std::uint64_t det_seed = 0;
  bool det_no_normalize = false;
  KernelFlags det_kernel;
  detect->add_option("--train", det_train, "Training manifest")->required();
  detect->add_option("--test", det_test, "Test manifest")->required();
  detect->add_option("--out", det_out, "Output directory");
  detect->add_option("--mode", det_mode, "kdica, udica or raw")
      ->check(CLI::IsMember({"kdica", "udica", "raw"}));
  detect->add_option("--c", det_c, "SVM hinge penalty");
  detect->add_option("--b", det_b, "Number of components");
  detect->add_option("--gamma", det_gamma, "Variance/alignment trade-off");
  detect->add_option("--epsilon", det_epsilon, "Ridge (default: 1e-8 tr(K)/M)");
  detect->add_option("--seed", det_seed, "Random seed");
  detect->add_option("--epochs", det_epochs, "SVM training epochs");
  detect->add_option("--max-skip-ratio", det_max_skip,
                     "Degenerate-attribute ratio above which the run fails (exit 4)");
  detect->add_option("--format", det_format, "Matrix format for score outputs")
      ->check(CLI::IsMember({"csv", "kdmx"}));
  detect->add_flag("--no-normalize", det_no_normalize, "Skip row l2-normalization");
  det_kernel.attach(detect);

  // zeroshot -----------------------------------------------------------------
  auto* zs = app.add_subcommand("zeroshot", "DAP zero-shot classification from probabilities");
  std::string zs_probs, zs_test, zs_out = "zeroshot_out", zs_format = "csv";
  bool zs_uniform = false;
  zs->add_option("--probabilities", zs_probs, "Calibrated probability matrix")->required();
  zs->add_option("--test", zs_test, "Test manifest (labels + class signatures)")->required();
  zs->add_option("--out", zs_out, "Output directory");
  zs->add_flag("--uniform-priors", zs_uniform, "Use flat 0.5 attribute priors");
  zs->add_option("--format", zs_format, "Matrix format of the probability file")
      ->check(CLI::IsMember({"csv", "kdmx"}));

  // retrieve -----------------------------------------------------------------
  auto* ret = app.add_subcommand("retrieve", "Multi-attribute retrieval by score fusion");
  std::string ret_probs, ret_test, ret_query, ret_out = "retrieve_out", ret_format = "csv";
  ret->add_option("--probabilities", ret_probs, "Calibrated probability matrix")->required();
  ret->add_option("--test", ret_test, "Test manifest (attribute ground truth)")->required();
  ret->add_option("--query", ret_query, "Comma-separated attribute indices")->required();
  ret->add_option("--out", ret_out, "Output directory");
  ret->add_option("--format", ret_format, "Matrix format of the probability file")
      ->check(CLI::IsMember({"csv", "kdmx"}));

  // eval ---------------------------------------------------------------------
  auto* ev = app.add_subcommand("eval", "AUC of a score column against binary labels");
  std::string ev_scores, ev_labels, ev_out = "eval_out";
  ev->add_option("--scores", ev_scores, "Single-column CSV of scores")->required();
  ev->add_option("--labels", ev_labels, "Binary labels, one per line")->required();
  ev->add_option("--out", ev_out, "Output directory");

  // cv -----------------------------------------------------------------------
  auto* cv = app.add_subcommand("cv",
                                "Cross-validate C, b and gamma on a training manifest");
  std::string cv_train, cv_out = "cv_out", cv_mode = "kdica";
  kdica::ExperimentConfig cv_cfg;
  bool cv_no_normalize = false;
  double cv_epsilon = -1.0;
  KernelFlags cv_kernel;
  cv->add_option("--train", cv_train, "Training manifest")->required();
  cv->add_option("--out", cv_out, "Output directory");
  cv->add_option("--mode", cv_mode, "kdica, udica or raw")
      ->check(CLI::IsMember({"kdica", "udica", "raw"}));
  cv->add_option("--c-grid", cv_cfg.c_grid, "Hinge penalty grid")->delimiter(',');
  cv->add_option("--b-grid", cv_cfg.b_grid, "Component count grid")->delimiter(',');
  cv->add_option("--gamma-grid", cv_cfg.gamma_grid, "Trade-off grid")->delimiter(',');
  cv->add_option("--folds", cv_cfg.folds, "Fold count");
  cv->add_option("--seed", cv_cfg.seed, "Random seed");
  cv->add_option("--epochs", cv_cfg.svm_epochs, "SVM training epochs");
  cv->add_option("--epsilon", cv_epsilon, "Ridge (default: 1e-8 tr(K)/M)");
  cv->add_flag("--no-normalize", cv_no_normalize, "Skip row l2-normalization");
  cv_kernel.attach(cv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (threads > 0) kdica::set_max_threads(threads);

  try {
    if (*synth) {
      if (synth_holdout_flip >= 0.0) spec.holdout_flip = synth_holdout_flip;
      return cmd_synth(synth_out, spec, synth_format);
    }
    if (*fit_cmd)
      return cmd_fit(fit_train, fit_out, fit_mode, fit_gamma, fit_b,
                     fit_epsilon >= 0.0 ? std::optional<double>(fit_epsilon) : std::nullopt,
                     fit_kernel, !fit_no_normalize);
    if (*tr) return cmd_transform(tr_model, tr_features, tr_format, tr_out);
    if (*detect)
      return cmd_detect(det_train, det_test, det_out, det_mode, det_c, det_b, det_gamma,
                        det_epsilon >= 0.0 ? std::optional<double>(det_epsilon) : std::nullopt,
                        det_kernel, !det_no_normalize, det_seed, det_epochs, det_max_skip,
                        det_format);
    if (*zs) return cmd_zeroshot(zs_probs, zs_test, zs_out, zs_uniform, zs_format);
    if (*ret) return cmd_retrieve(ret_probs, ret_test, ret_query, ret_out, ret_format);
    if (*ev) return cmd_eval(ev_scores, ev_labels, ev_out);
    if (*cv) {
      cv_cfg.mode = kdica::mode_from_string(cv_mode);
      cv_cfg.normalize = !cv_no_normalize;
      if (cv_epsilon >= 0.0) cv_cfg.epsilon = cv_epsilon;
      return cmd_cv(cv_train, cv_out, cv_cfg, cv_kernel);
    }
  } catch (const kdica::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const kdica::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
