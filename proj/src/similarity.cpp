#include "visdec/similarity.hpp"

#include <sstream>
#include <stdexcept>

namespace visdec {

namespace {

void check_lengths(const Vector& a, const Vector& b, const char* op,
                   Index min_len) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << op << ": length mismatch (" << a.size() << " vs " << b.size() << ")";
    throw std::invalid_argument(os.str());
  }
  if (a.size() < min_len) {
    std::ostringstream os;
    os << op << ": vectors must have length >= " << min_len;
    throw std::invalid_argument(os.str());
  }
}

bool is_constant(const Vector& v) { return v.maxCoeff() == v.minCoeff(); }

}  // namespace

double euclidean_sim(const Vector& a, const Vector& b) {
  check_lengths(a, b, "euclidean_sim", 1);
  return 1.0 / (1.0 + (a - b).norm());
}

double cosine_sim(const Vector& a, const Vector& b) {
  check_lengths(a, b, "cosine_sim", 1);
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("cosine_sim: undefined cosine for zero-norm input");
  }
  return a.dot(b) / (na * nb);
}

double pearson_sim(const Vector& a, const Vector& b) {
  check_lengths(a, b, "pearson_sim", 2);
  if (is_constant(a) || is_constant(b)) {
    throw std::invalid_argument(
        "pearson_sim: undefined correlation for constant vector");
  }
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double na = ca.norm();
  const double nb = cb.norm();
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument(
        "pearson_sim: undefined correlation for constant vector");
  }
  return ca.dot(cb) / (na * nb);
}

double similarity(Metric metric, const Vector& a, const Vector& b) {
  switch (metric) {
    case Metric::euclidean: return euclidean_sim(a, b);
    case Metric::cosine: return cosine_sim(a, b);
    case Metric::pearson: return pearson_sim(a, b);
  }
  throw std::invalid_argument("similarity: unknown metric");
}

}  // namespace visdec
