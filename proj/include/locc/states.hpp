#pragma once

#include <string>
#include <vector>

#include "locc/matrix.hpp"

namespace locc {

enum class Party : char { A = 'A', B = 'B' };

inline Party other(Party p) { return p == Party::A ? Party::B : Party::A; }
inline char party_char(Party p) { return static_cast<char>(p); }

/// Pure bipartite state stored by its coefficient matrix: entry (n, m)
/// multiplies |m>_A |n>_B, so rows index Bob and columns index Alice. States
/// are kept unnormalized; a residual left by measurement operators A, B has
/// coefficient matrix B * coeff * A^T.
struct BipartiteState {
  Mat coeff;  // dim_b x dim_a
  std::string label;

  int dim_a() const { return static_cast<int>(coeff.cols()); }
  int dim_b() const { return static_cast<int>(coeff.rows()); }
  double norm() const { return coeff.norm(); }
};

/// A named family of bipartite states sharing one pair of local dimensions.
struct StateSet {
  std::string name;
  int dim_a = 0;
  int dim_b = 0;
  std::vector<BipartiteState> states;

  int size() const { return static_cast<int>(states.size()); }
  /// Throws std::invalid_argument if any state's shape disagrees with dims.
  void validate() const;
};

struct Term {
  int a = 0;
  int b = 0;
  Complex amp{1.0, 0.0};
};

BipartiteState make_state(int dim_a, int dim_b, const std::vector<Term>& terms,
                          std::string label = "");

/// Schmidt rank = numeric rank of the coefficient matrix.
int schmidt_rank(const BipartiteState& s, Tolerance tol = {});

/// Unnormalized reduced density operator of one party (trace over the other).
Mat reduced_density(const BipartiteState& s, Party p);

/// State left after local operators act: coeff' = b * coeff * a^T. Operator
/// column counts must match the state's dimensions.
BipartiteState residual(const BipartiteState& s, const Mat& a, const Mat& b);

/// Product of the two reduced density operators, rho_A (x) rho_B.
Mat hat_rho(const BipartiteState& s);

/// True iff Tr(X† Y) vanishes for every pair, relative to the Frobenius norms
/// (zero matrices count as orthogonal to everything).
bool pairwise_orthogonal(const std::vector<Mat>& ops, Tolerance tol = {});

/// Pure state of any number of parties, amplitudes in row-major index order
/// (last party's index varies fastest).
struct MultipartiteState {
  std::vector<int> dims;
  Vec coeff;
  std::string label;

  int parties() const { return static_cast<int>(dims.size()); }
  void validate() const;
};

Mat reduced_density(const MultipartiteState& s, int party);

/// Maximum over parties of the rank of that party's reduced density operator.
int generalized_schmidt_rank(const MultipartiteState& s, Tolerance tol = {});

/// Occupancy grid: cell [m][n] lists labels of states with a term
/// |m>_A |n>_B whose amplitude exceeds the cutoff.
std::vector<std::vector<std::string>> grid_labels(const StateSet& s,
                                                  double cutoff = 1e-12);

/// ASCII table of the occupancy grid; rows are Alice's basis states, columns
/// Bob's.
std::string render_grid(const StateSet& s);

}  // namespace locc
