#include "kdica/pipeline.hpp"

#include <algorithm>
#include <set>

#include "kdica/metrics.hpp"
#include "kdica/rng.hpp"

namespace kdica {

Mode mode_from_string(const std::string& name) {
  if (name == "kdica") return Mode::kdica;
  if (name == "udica") return Mode::udica;
  if (name == "raw") return Mode::raw;
  throw ValidationError("unknown mode \"" + name + "\" (expected kdica, udica or raw)");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kdica: return "kdica";
    case Mode::udica: return "udica";
    default: return "raw";
  }
}

namespace {

/// Mean AUC of decision scores against validation attributes, skipping
/// attributes where the AUC is undefined on either side.
std::optional<double> mean_attribute_auc(const Matrix& scores, const IntMatrix& attrs) {
  double sum = 0.0;
  int defined = 0;
  for (int a = 0; a < attrs.cols(); ++a) {
    if (!scores.col(a).allFinite()) continue;
    auto v = auc(scores.col(a), attrs.col(a));
    if (v) {
      sum += *v;
      ++defined;
    }
  }
  if (defined == 0) return std::nullopt;
  return sum / defined;
}

struct Fold {
  Dataset train;
  Matrix val_features;  // already normalized when the config says so
  IntMatrix val_attributes;
};

std::vector<Fold> make_folds(const Dataset& train, int folds, std::uint64_t seed,
                             bool normalize) {
  const int m = train.num_samples();
  std::vector<int> fold_of(static_cast<std::size_t>(m), 0);
  Rng rng = Rng::substream(seed, "cv-folds");
  for (int c = 0; c < train.num_classes(); ++c) {
    std::vector<int> members;
    for (int i = 0; i < m; ++i)
      if (train.domain_labels[i] == c) members.push_back(i);
    rng.shuffle(members);
    for (std::size_t k = 0; k < members.size(); ++k)
      fold_of[static_cast<std::size_t>(members[k])] = static_cast<int>(k % folds);
  }

  Dataset source = train;
  if (normalize) source.features = l2_normalize(source.features);

  std::vector<Fold> out;
  for (int f = 0; f < folds; ++f) {
    std::vector<int> train_rows, val_rows;
    for (int i = 0; i < m; ++i)
      (fold_of[static_cast<std::size_t>(i)] == f ? val_rows : train_rows).push_back(i);
    Fold fold;
    fold.train = take_rows(source, train_rows);
    fold.val_features.resize(static_cast<Eigen::Index>(val_rows.size()), source.features.cols());
    fold.val_attributes.resize(static_cast<Eigen::Index>(val_rows.size()),
                               source.attributes.cols());
    for (std::size_t i = 0; i < val_rows.size(); ++i) {
      fold.val_features.row(static_cast<Eigen::Index>(i)) = source.features.row(val_rows[i]);
      fold.val_attributes.row(static_cast<Eigen::Index>(i)) =
          source.attributes.row(val_rows[i]);
    }
    out.push_back(std::move(fold));
  }
  return out;
}

/// Scores one (C, embedding) pair on one fold: trains the bank (without
/// calibrators, AUC only needs ranks) and averages attribute AUC.
std::optional<double> fold_cell_auc(const Matrix& emb_train, const IntMatrix& train_attrs,
                                    const Matrix& emb_val, const IntMatrix& val_attrs,
                                    double c, int epochs, std::uint64_t seed) {
  BankConfig bc;
  bc.c = c;
  bc.epochs = epochs;
  bc.seed = seed;
  bc.fit_calibrators = false;
  DetectorBank bank = train_detector_bank(emb_train, train_attrs, bc);
  return mean_attribute_auc(bank.decision_scores(emb_val), val_attrs);
}

}  // namespace

CvResult cross_validate(const Dataset& train, const ExperimentConfig& cfg) {
  train.validate();
  if (cfg.c_grid.empty()) throw ValidationError("C grid is empty");
  if (cfg.mode != Mode::raw && cfg.b_grid.empty()) throw ValidationError("b grid is empty");
  if (cfg.mode == Mode::kdica && cfg.gamma_grid.empty())
    throw ValidationError("gamma grid is empty");
  if (cfg.folds < 2) throw ValidationError("fold count must be at least 2");

  CvResult result;

  // Every domain needs a sample in each fold where possible; with fewer
  // samples than folds the fold count drops.
  int min_count = train.num_samples();
  for (int c = 0; c < train.num_classes(); ++c) {
    int n = 0;
    for (int i = 0; i < train.num_samples(); ++i)
      if (train.domain_labels[i] == c) ++n;
    min_count = std::min(min_count, n);
  }
  int folds = cfg.folds;
  if (min_count < folds) {
    folds = std::max(2, min_count);
    result.warnings.push_back("smallest domain has " + std::to_string(min_count) +
                              " samples; folds reduced from " + std::to_string(cfg.folds) +
                              " to " + std::to_string(folds));
  }
  result.folds_used = folds;

  std::vector<Fold> fold_sets = make_folds(train, folds, cfg.seed, cfg.normalize);

  int smallest_fold_train = train.num_samples();
  for (const auto& f : fold_sets)
    smallest_fold_train = std::min(smallest_fold_train, f.train.num_samples());

  // Clip b values that exceed what a fold can support.
  std::vector<int> b_grid;
  if (cfg.mode == Mode::raw) {
    b_grid.push_back(0);
  } else {
    bool clipped = false;
    for (int b : cfg.b_grid) {
      if (b < 1) throw ValidationError("b grid contains a nonpositive entry");
      if (b > smallest_fold_train) {
        clipped = true;
        b = smallest_fold_train;
      }
      b_grid.push_back(b);
    }
    std::sort(b_grid.begin(), b_grid.end());
    b_grid.erase(std::unique(b_grid.begin(), b_grid.end()), b_grid.end());
    if (clipped)
      result.warnings.push_back("b values above the fold training size were clipped to " +
                                std::to_string(smallest_fold_train));
  }
  const int b_max = b_grid.back();

  // Stage one: sweep (C, b) with the pure variance objective. One fit per
  // fold at the largest b; smaller b reuse its leading columns.
  std::vector<std::vector<std::optional<double>>> cell_scores(
      b_grid.size(), std::vector<std::optional<double>>(cfg.c_grid.size()));
  std::vector<std::vector<int>> cell_counts(b_grid.size(),
                                            std::vector<int>(cfg.c_grid.size(), 0));
  std::vector<std::vector<double>> cell_sums(b_grid.size(),
                                             std::vector<double>(cfg.c_grid.size(), 0.0));

  for (std::size_t f = 0; f < fold_sets.size(); ++f) {
    const Fold& fold = fold_sets[f];
    Matrix emb_train_full, emb_val_full;
    if (cfg.mode == Mode::raw) {
      emb_train_full = fold.train.features;
      emb_val_full = fold.val_features;
    } else {
      KdicaConfig kc;
      kc.gamma = 1.0;
      kc.num_components = b_max;
      kc.epsilon = cfg.epsilon;
      kc.family = cfg.family;
      kc.bandwidth = cfg.bandwidth;
      KdicaModel model = fit(fold.train, kc);
      emb_train_full = transform(model, fold.train.features);
      emb_val_full = transform(model, fold.val_features);
    }
    for (std::size_t bi = 0; bi < b_grid.size(); ++bi) {
      Matrix et = cfg.mode == Mode::raw ? emb_train_full
                                        : emb_train_full.leftCols(b_grid[bi]).eval();
      Matrix ev = cfg.mode == Mode::raw ? emb_val_full
                                        : emb_val_full.leftCols(b_grid[bi]).eval();
      for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci) {
        std::uint64_t seed = Rng::mix(cfg.seed, "cv-s1-f" + std::to_string(f) + "-b" +
                                                    std::to_string(b_grid[bi]) + "-c" +
                                                    std::to_string(ci));
        auto score = fold_cell_auc(et, fold.train.attributes, ev, fold.val_attributes,
                                   cfg.c_grid[ci], cfg.svm_epochs, seed);
        if (score) {
          cell_sums[bi][ci] += *score;
          ++cell_counts[bi][ci];
        }
      }
    }
  }

  double best = -1.0;
  std::size_t best_bi = 0, best_ci = 0;
  for (std::size_t bi = 0; bi < b_grid.size(); ++bi)
    for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci) {
      if (cell_counts[bi][ci] == 0) continue;
      double mean = cell_sums[bi][ci] / cell_counts[bi][ci];
      CvCell cell;
      cell.c = cfg.c_grid[ci];
      cell.b = b_grid[bi];
      cell.gamma = 1.0;
      cell.mean_auc = mean;
      result.stage_one.push_back(cell);
      // Ties prefer smaller b, then smaller C (grids are not necessarily
      // sorted, so compare values rather than rely on iteration order).
      bool better = mean > best;
      if (!better && mean == best) {
        if (b_grid[bi] < b_grid[best_bi]) better = true;
        else if (b_grid[bi] == b_grid[best_bi] && cfg.c_grid[ci] < cfg.c_grid[best_ci])
          better = true;
      }
      if (better) {
        best = mean;
        best_bi = bi;
        best_ci = ci;
      }
    }
  if (best < 0.0)
    throw ValidationError("cross-validation could not score any grid cell "
                          "(all attribute AUCs undefined)");
  result.chosen_c = cfg.c_grid[best_ci];
  result.chosen_b = b_grid[best_bi];
  result.chosen_gamma = 1.0;

  if (cfg.mode != Mode::kdica) return result;

  // Stage two: gamma sweep holding (C, b).
  double best_gamma_score = -1.0;
  double best_gamma = cfg.gamma_grid.front();
  for (std::size_t gi = 0; gi < cfg.gamma_grid.size(); ++gi) {
    const double gamma = cfg.gamma_grid[gi];
    if (gamma < 0.0 || gamma > 1.0)
      throw ValidationError("gamma grid entry " + std::to_string(gamma) + " outside [0, 1]");
    double sum = 0.0;
    int count = 0;
    for (std::size_t f = 0; f < fold_sets.size(); ++f) {
      const Fold& fold = fold_sets[f];
      KdicaConfig kc;
      kc.gamma = gamma;
      kc.num_components = result.chosen_b;
      kc.epsilon = cfg.epsilon;
      kc.family = cfg.family;
      kc.bandwidth = cfg.bandwidth;
      KdicaModel model = fit(fold.train, kc);
      std::uint64_t seed = Rng::mix(cfg.seed, "cv-s2-f" + std::to_string(f) + "-g" +
                                                  std::to_string(gi));
      auto score = fold_cell_auc(transform(model, fold.train.features), fold.train.attributes,
                                 transform(model, fold.val_features), fold.val_attributes,
                                 result.chosen_c, cfg.svm_epochs, seed);
      if (score) {
        sum += *score;
        ++count;
      }
    }
    if (count == 0) continue;
    double mean = sum / count;
    CvCell cell;
    cell.c = result.chosen_c;
    cell.b = result.chosen_b;
    cell.gamma = gamma;
    cell.mean_auc = mean;
    result.stage_two.push_back(cell);
    if (mean > best_gamma_score || (mean == best_gamma_score && gamma > best_gamma)) {
      best_gamma_score = mean;
      best_gamma = gamma;
    }
  }
  if (best_gamma_score >= 0.0) result.chosen_gamma = best_gamma;
  return result;
}

DetectionResult detect_attributes(const Dataset& train, const Dataset& test,
                                  const DetectConfig& cfg) {
  train.validate();
  test.validate();
  if (test.num_attributes() != train.num_attributes())
    throw ValidationError("test attribute count " + std::to_string(test.num_attributes()) +
                          " does not match training count " +
                          std::to_string(train.num_attributes()));

  DetectionResult result;
  result.mode = cfg.mode;

  Matrix train_x = cfg.normalize ? l2_normalize(train.features) : train.features;
  Matrix test_x = cfg.normalize ? l2_normalize(test.features) : test.features;

  Matrix emb_train, emb_test;
  if (cfg.mode == Mode::raw) {
    emb_train = train_x;
    emb_test = test_x;
  } else {
    Dataset train_n = train;
    train_n.features = train_x;
    KdicaConfig kc;
    kc.gamma = cfg.mode == Mode::udica ? 1.0 : cfg.gamma;
    kc.num_components = cfg.b;
    kc.epsilon = cfg.epsilon;
    kc.family = cfg.family;
    kc.bandwidth = cfg.bandwidth;
    result.model = fit(train_n, kc);
    result.model.l2_normalized = cfg.normalize;
    emb_train = transform(result.model, train_x);
    emb_test = transform(result.model, test_x);
  }

  BankConfig bc;
  bc.c = cfg.c;
  bc.epochs = cfg.svm_epochs;
  bc.seed = cfg.seed;
  result.bank = train_detector_bank(emb_train, train.attributes, bc);
  result.skipped_attributes = result.bank.skipped_attributes();
  result.scores = result.bank.decision_scores(emb_test);
  result.probabilities = result.bank.probabilities(emb_test);

  double sum = 0.0;
  int defined = 0;
  for (int a = 0; a < train.num_attributes(); ++a) {
    if (result.bank.detectors[static_cast<std::size_t>(a)].skipped) {
      result.attribute_auc.push_back(std::nullopt);
      continue;
    }
    auto v = auc(result.probabilities.col(a), test.attributes.col(a));
    result.attribute_auc.push_back(v);
    if (v) {
      sum += *v;
      ++defined;
    }
  }
  if (defined > 0) result.mean_auc = sum / defined;
  return result;
}

}  // namespace kdica
