#include "locc/measurement.hpp"

#include <stdexcept>

namespace locc {

void LocalMeasurement::validate() const {
  if (dim < 1) throw std::invalid_argument("LocalMeasurement: bad dimension");
  if (kraus.empty())
    throw std::invalid_argument("LocalMeasurement: no outcomes");
  for (const auto& k : kraus)
    if (k.rows() != dim || k.cols() != dim)
      throw std::invalid_argument("LocalMeasurement: operator shape mismatch");
  if (!labels.empty() && labels.size() != kraus.size())
    throw std::invalid_argument("LocalMeasurement: label count mismatch");
}

bool check_complete(const LocalMeasurement& m, Tolerance tol) {
  m.validate();
  Mat sum = Mat::Zero(m.dim, m.dim);
  for (const auto& k : m.kraus) sum += k.adjoint() * k;
  return approx_equal(sum, Mat::Identity(m.dim, m.dim), tol.abs);
}

bool check_projective(const LocalMeasurement& m, Tolerance tol) {
  m.validate();
  for (const auto& k : m.kraus) {
    if (!approx_equal(k, k.adjoint(), tol.abs)) return false;
    if (!approx_equal(k * k, k, tol.abs)) return false;
  }
  for (std::size_t i = 0; i < m.kraus.size(); ++i)
    for (std::size_t j = i + 1; j < m.kraus.size(); ++j)
      if (!is_zero(m.kraus[i] * m.kraus[j], tol.abs)) return false;
  return true;
}

void SeparablePovm::validate() const {
  if (dim_a < 1 || dim_b < 1)
    throw std::invalid_argument("SeparablePovm: bad dimensions");
  if (outcomes.empty())
    throw std::invalid_argument("SeparablePovm: no outcomes");
  for (const auto& o : outcomes)
    if (o.a_op.rows() != dim_a || o.a_op.cols() != dim_a ||
        o.b_op.rows() != dim_b || o.b_op.cols() != dim_b)
      throw std::invalid_argument("SeparablePovm: operator shape mismatch");
}

bool check_sep_complete(const SeparablePovm& p, Tolerance tol) {
  p.validate();
  long d = static_cast<long>(p.dim_a) * p.dim_b;
  Mat sum = Mat::Zero(d, d);
  for (const auto& o : p.outcomes)
    sum += kron(o.a_op.adjoint() * o.a_op, o.b_op.adjoint() * o.b_op);
  return approx_equal(sum, Mat::Identity(d, d), tol.abs);
}

Mat subset_projector(int dim, const std::vector<int>& idx) {
  Mat p = Mat::Zero(dim, dim);
  for (int i : idx) {
    if (i < 0 || i >= dim)
      throw std::invalid_argument("subset_projector: index out of range");
    p(i, i) = 1.0;
  }
  return p;
}

Mat diag_op(int dim, const std::vector<std::pair<int, double>>& weights) {
  Mat d = Mat::Zero(dim, dim);
  for (auto [i, w] : weights) {
    if (i < 0 || i >= dim)
      throw std::invalid_argument("diag_op: index out of range");
    d(i, i) = w;
  }
  return d;
}

LocalMeasurement block_measurement(Party party, int dim,
                                   const std::vector<std::vector<int>>& blocks) {
  LocalMeasurement m;
  m.party = party;
  m.dim = dim;
  std::vector<bool> used(dim, false);
  for (const auto& blk : blocks) {
    m.kraus.push_back(subset_projector(dim, blk));
    std::string lab;
    for (int i : blk) {
      if (used[i])
        throw std::invalid_argument("block_measurement: overlapping blocks");
      used[i] = true;
      lab += std::to_string(i);
    }
    m.labels.push_back("P{" + lab + "}");
  }
  std::vector<int> rest;
  for (int i = 0; i < dim; ++i)
    if (!used[i]) rest.push_back(i);
  if (!rest.empty()) {
    m.kraus.push_back(subset_projector(dim, rest));
    std::string lab;
    for (int i : rest) lab += std::to_string(i);
    m.labels.push_back("P{" + lab + "}*");
  }
  return m;
}

LocalMeasurement projector_measurement(Party party, int dim,
                                       std::vector<Mat> projectors,
                                       Tolerance tol) {
  LocalMeasurement m;
  m.party = party;
  m.dim = dim;
  Mat sum = Mat::Zero(dim, dim);
  for (auto& p : projectors) {
    sum += p;
    m.kraus.push_back(std::move(p));
  }
  Mat rest = Mat::Identity(dim, dim) - sum;
  if (!is_zero(rest, tol.abs)) m.kraus.push_back(rest);
  return m;
}

}  // namespace locc
