#include "kdica/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace kdica {

std::optional<double> auc(const Vector& scores, const IntVector& labels) {
  const int n = static_cast<int>(scores.size());
  if (n == 0) throw ValidationError("auc input is empty");
  if (labels.size() != n)
    throw ValidationError("auc label count " + std::to_string(labels.size()) +
                          " does not match score count " + std::to_string(n));
  if (!scores.allFinite()) throw ValidationError("auc scores contain NaN or infinity");

  long long pos = 0, neg = 0;
  for (int i = 0; i < n; ++i) {
    if (labels[i] == 1)
      ++pos;
    else if (labels[i] == 0)
      ++neg;
    else
      throw ValidationError("auc label " + std::to_string(labels[i]) + " is not binary");
  }
  if (pos == 0 || neg == 0) return std::nullopt;

  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return scores[a] < scores[b]; });

  // Rank sum of positives with midranks over tie groups. Ranks are 1-based;
  // every quantity below is an exact half-integer, so the statistic is exact.
  double rank_sum = 0.0;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    double midrank = 0.5 * static_cast<double>((i + 1) + j);  // mean of ranks i+1..j
    for (int k = i; k < j; ++k)
      if (labels[idx[k]] == 1) rank_sum += midrank;
    i = j;
  }
  double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) * 0.5) / (p * static_cast<double>(neg));
}

double mean_per_class_accuracy(const IntVector& predicted, const IntVector& truth) {
  if (predicted.size() != truth.size())
    throw ValidationError("prediction count does not match truth count");
  if (truth.size() == 0) throw ValidationError("accuracy input is empty");
  std::map<int, std::pair<long long, long long>> per_class;  // class -> (correct, total)
  for (int i = 0; i < truth.size(); ++i) {
    auto& [correct, total] = per_class[truth[i]];
    ++total;
    if (predicted[i] == truth[i]) ++correct;
  }
  double sum = 0.0;
  for (const auto& [cls, counts] : per_class) {
    (void)cls;
    sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  return sum / static_cast<double>(per_class.size());
}

}  // namespace kdica
