#include "kdica/zero_shot.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace kdica {

namespace {

constexpr double kProbClip = 1e-6;

double clip(double p) {
  if (p < kProbClip) return kProbClip;
  if (p > 1.0 - kProbClip) return 1.0 - kProbClip;
  return p;
}

}  // namespace

ZeroShotTable make_zero_shot_table(const IntMatrix& class_signatures, bool uniform_priors) {
  if (class_signatures.rows() == 0 || class_signatures.cols() == 0)
    throw ValidationError("class signature table is empty");
  for (int z = 0; z < class_signatures.rows(); ++z)
    for (int a = 0; a < class_signatures.cols(); ++a)
      if (class_signatures(z, a) != 0 && class_signatures(z, a) != 1)
        throw ValidationError("non-binary class signature entry at row " + std::to_string(z) +
                              ", column " + std::to_string(a));

  ZeroShotTable table;
  table.class_signatures = class_signatures;

  // Group classes by identical signature rows.
  std::map<std::vector<int>, std::vector<int>> groups;
  for (int z = 0; z < class_signatures.rows(); ++z) {
    std::vector<int> key(static_cast<std::size_t>(class_signatures.cols()));
    for (int a = 0; a < class_signatures.cols(); ++a)
      key[static_cast<std::size_t>(a)] = class_signatures(z, a);
    groups[key].push_back(z);
  }
  for (const auto& [key, members] : groups) {
    (void)key;
    if (members.size() > 1) table.duplicate_groups.push_back(members);
  }

  table.priors.resize(class_signatures.cols());
  if (uniform_priors) {
    table.priors.setConstant(0.5);
  } else {
    for (int a = 0; a < class_signatures.cols(); ++a) {
      double mean = class_signatures.col(a).cast<double>().mean();
      table.priors[a] = std::min(0.95, std::max(0.05, mean));
    }
  }
  return table;
}

ZeroShotResult dap_zero_shot(const Matrix& probabilities, const ZeroShotTable& table) {
  const int t = static_cast<int>(probabilities.rows());
  const int a = static_cast<int>(probabilities.cols());
  const int z = static_cast<int>(table.class_signatures.rows());
  if (t == 0) throw ValidationError("probability matrix is empty");
  if (table.class_signatures.cols() != a)
    throw ValidationError("signature width " + std::to_string(table.class_signatures.cols()) +
                          " does not match attribute count " + std::to_string(a));
  if (table.priors.size() != a)
    throw ValidationError("prior count does not match attribute count");
  if (!probabilities.allFinite())
    throw ValidationError("probability matrix contains NaN or infinity");

  // Per-class prior log-mass, constant across samples.
  Vector prior_term(z);
  for (int zi = 0; zi < z; ++zi) {
    double s = 0.0;
    for (int ai = 0; ai < a; ++ai) {
      double pi = clip(table.priors[ai]);
      s += table.class_signatures(zi, ai) == 1 ? std::log(pi) : std::log(1.0 - pi);
    }
    prior_term[zi] = s;
  }

  ZeroShotResult result;
  result.class_scores.resize(t, z);
  result.predicted.resize(t);
  for (int ti = 0; ti < t; ++ti) {
    for (int zi = 0; zi < z; ++zi) {
      double s = 0.0;
      for (int ai = 0; ai < a; ++ai) {
        double p = clip(probabilities(ti, ai));
        s += table.class_signatures(zi, ai) == 1 ? std::log(p) : std::log(1.0 - p);
      }
      result.class_scores(ti, zi) = s - prior_term[zi];
    }
    int arg = 0;
    for (int zi = 1; zi < z; ++zi)
      if (result.class_scores(ti, zi) > result.class_scores(ti, arg)) arg = zi;
    result.predicted[ti] = arg;
  }
  return result;
}

}  // namespace kdica
