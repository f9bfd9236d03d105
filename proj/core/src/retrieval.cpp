#include "kdica/retrieval.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kdica/metrics.hpp"

namespace kdica {

RetrievalResult retrieve(const Matrix& probabilities, const std::vector<int>& query,
                         const IntMatrix& attributes) {
  const int t = static_cast<int>(probabilities.rows());
  const int a = static_cast<int>(probabilities.cols());
  if (query.empty()) throw ValidationError("retrieval query is empty");
  if (attributes.rows() != t || attributes.cols() != a)
    throw ValidationError("attribute matrix shape does not match probability matrix");

  // Set semantics for the query indices.
  std::vector<int> q = query;
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  for (int idx : q)
    if (idx < 0 || idx >= a)
      throw ValidationError("query attribute index " + std::to_string(idx) +
                            " outside [0, " + std::to_string(a) + ")");

  RetrievalResult result;
  result.scores = Vector::Zero(t);
  result.relevance.resize(t);
  for (int i = 0; i < t; ++i) {
    double s = 0.0;
    bool all = true;
    for (int idx : q) {
      s += probabilities(i, idx);
      if (attributes(i, idx) != 1) all = false;
    }
    result.scores[i] = s;
    result.relevance[i] = all ? 1 : 0;
  }

  result.ranking.resize(static_cast<std::size_t>(t));
  std::iota(result.ranking.begin(), result.ranking.end(), 0);
  std::stable_sort(result.ranking.begin(), result.ranking.end(), [&](int x, int y) {
    return result.scores[x] > result.scores[y];
  });

  result.auc_value = auc(result.scores, result.relevance);
  return result;
}

}  // namespace kdica
