#pragma once

#include <string>
#include <vector>

#include "locc/states.hpp"

namespace locc {

/// One round of local measurement: Kraus operators acting on a single party's
/// space. A complete measurement satisfies sum_l K_l† K_l = I.
struct LocalMeasurement {
  Party party = Party::A;
  int dim = 0;
  std::vector<Mat> kraus;
  std::vector<std::string> labels;  // optional, parallel to kraus

  int outcomes() const { return static_cast<int>(kraus.size()); }
  /// Throws std::invalid_argument on shape/label inconsistencies.
  void validate() const;
};

/// sum K†K = I within tol.abs entrywise.
bool check_complete(const LocalMeasurement& m, Tolerance tol = {});

/// Every operator is Hermitian, idempotent, and the operators mutually
/// annihilate (projective von Neumann measurement), all within tol.abs.
bool check_projective(const LocalMeasurement& m, Tolerance tol = {});

/// One outcome of a separable (product-operator) POVM. The POVM element is
/// (a_op† a_op) (x) (b_op† b_op); `declares` is the state index identified
/// when this outcome occurs.
struct SepOutcome {
  Mat a_op;
  Mat b_op;
  int declares = -1;
};

struct SeparablePovm {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<SepOutcome> outcomes;

  void validate() const;
};

/// sum_m (a†a) (x) (b†b) = I within tol.abs. Throws std::invalid_argument on
/// dimension mismatches.
bool check_sep_complete(const SeparablePovm& p, Tolerance tol = {});

/// Diagonal projector onto a subset of basis indices.
Mat subset_projector(int dim, const std::vector<int>& idx);

/// Diagonal operator with the given (index, weight) entries, zero elsewhere.
Mat diag_op(int dim, const std::vector<std::pair<int, double>>& weights);

/// Projective measurement whose outcomes project onto the given disjoint
/// index blocks; if the blocks do not cover the space, a remainder projector
/// is appended as a final outcome.
LocalMeasurement block_measurement(Party party, int dim,
                                   const std::vector<std::vector<int>>& blocks);

/// Projective measurement from explicit orthogonal projectors; appends the
/// deficit projector I - sum P as a final outcome when nonzero.
LocalMeasurement projector_measurement(Party party, int dim,
                                       std::vector<Mat> projectors,
                                       Tolerance tol = {});

}  // namespace locc
