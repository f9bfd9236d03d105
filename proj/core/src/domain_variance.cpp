#include "kdica/domain_variance.hpp"

#include <string>

namespace kdica {

QMatrix build_q(const IntVector& domain_labels, int num_domains) {
  const int m = static_cast<int>(domain_labels.size());
  if (m == 0) throw ValidationError("no domain labels");
  if (num_domains <= 0)
    throw ValidationError("domain count must be positive, got " + std::to_string(num_domains));

  QMatrix q;
  q.domain_counts = IntVector::Zero(num_domains);
  for (int i = 0; i < m; ++i) {
    int y = domain_labels[i];
    if (y < 0 || y >= num_domains)
      throw ValidationError("domain label " + std::to_string(y) + " at position " +
                            std::to_string(i) + " outside [0, " +
                            std::to_string(num_domains) + ")");
    ++q.domain_counts[y];
  }
  for (int y = 0; y < num_domains; ++y)
    if (q.domain_counts[y] == 0)
      throw ValidationError("domain " + std::to_string(y) + " has no samples");

  const double c = num_domains;
  q.values.resize(m, m);
  for (int i = 0; i < m; ++i) {
    const double ni = q.domain_counts[domain_labels[i]];
    for (int j = i; j < m; ++j) {
      const double nj = q.domain_counts[domain_labels[j]];
      double v = -1.0 / (c * c * ni * nj);
      if (domain_labels[i] == domain_labels[j]) v += 1.0 / (c * ni * ni);
      q.values(i, j) = v;
      q.values(j, i) = v;
    }
  }
  return q;
}

double distributional_variance(const KernelMatrix& k, const QMatrix& q) {
  if (k.values.rows() != q.values.rows())
    throw ValidationError("kernel size " + std::to_string(k.values.rows()) +
                          " does not match Q size " + std::to_string(q.values.rows()));
  // tr(KQ) = sum_ij K(i,j) Q(j,i); both symmetric so the elementwise product works.
  double v = (k.values.array() * q.values.array()).sum();
  return v < 0.0 ? 0.0 : v;
}

}  // namespace kdica
