#include "locc/states.hpp"

#include <sstream>
#include <stdexcept>

namespace locc {

void StateSet::validate() const {
  if (dim_a < 1 || dim_b < 1)
    throw std::invalid_argument("StateSet: dimensions must be positive");
  for (const auto& s : states)
    if (s.dim_a() != dim_a || s.dim_b() != dim_b)
      throw std::invalid_argument("StateSet: state '" + s.label +
                                  "' has mismatched dimensions");
}

BipartiteState make_state(int dim_a, int dim_b, const std::vector<Term>& terms,
                          std::string label) {
  if (dim_a < 1 || dim_b < 1)
    throw std::invalid_argument("make_state: dimensions must be positive");
  Mat m = Mat::Zero(dim_b, dim_a);
  for (const auto& t : terms) {
    if (t.a < 0 || t.a >= dim_a || t.b < 0 || t.b >= dim_b)
      throw std::invalid_argument("make_state: term index out of range");
    m(t.b, t.a) += t.amp;
  }
  return BipartiteState{std::move(m), std::move(label)};
}

int schmidt_rank(const BipartiteState& s, Tolerance tol) {
  if (is_zero(s.coeff, 0.0)) return 0;
  return numeric_rank(s.coeff, tol);
}

Mat reduced_density(const BipartiteState& s, Party p) {
  const Mat& m = s.coeff;
  if (p == Party::B) return m * m.adjoint();
  return (m.adjoint() * m).transpose();
}

BipartiteState residual(const BipartiteState& s, const Mat& a, const Mat& b) {
  if (a.cols() != s.dim_a() || b.cols() != s.dim_b())
    throw std::invalid_argument("residual: operator shape mismatch");
  return BipartiteState{b * s.coeff * a.transpose(), s.label};
}

Mat hat_rho(const BipartiteState& s) {
  return kron(reduced_density(s, Party::A), reduced_density(s, Party::B));
}

bool pairwise_orthogonal(const std::vector<Mat>& ops, Tolerance tol) {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      double ni = ops[i].norm(), nj = ops[j].norm();
      if (ni == 0.0 || nj == 0.0) continue;
      Complex ov = (ops[i].adjoint() * ops[j]).trace();
      if (std::abs(ov) > tol.abs * ni * nj) return false;
    }
  }
  return true;
}

void MultipartiteState::validate() const {
  if (dims.size() < 2)
    throw std::invalid_argument("MultipartiteState: need at least two parties");
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("MultipartiteState: bad dimension");
    total *= d;
  }
  if (coeff.size() != total)
    throw std::invalid_argument("MultipartiteState: amplitude count mismatch");
}

Mat reduced_density(const MultipartiteState& s, int party) {
  s.validate();
  if (party < 0 || party >= s.parties())
    throw std::invalid_argument("reduced_density: party index out of range");
  int d = s.dims[party];
  // Row-major strides: party's index advances by the product of later dims.
  long inner = 1;
  for (int q = party + 1; q < s.parties(); ++q) inner *= s.dims[q];
  long outer = s.coeff.size() / (inner * d);
  Mat rho = Mat::Zero(d, d);
  for (long o = 0; o < outer; ++o)
    for (long in = 0; in < inner; ++in) {
      long base = o * d * inner + in;
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
          rho(x, y) += s.coeff(base + x * inner) * std::conj(s.coeff(base + y * inner));
    }
  return rho;
}

int generalized_schmidt_rank(const MultipartiteState& s, Tolerance tol) {
  int r = 0;
  for (int p = 0; p < s.parties(); ++p)
    r = std::max(r, numeric_rank(reduced_density(s, p), tol));
  return r;
}

std::vector<std::vector<std::string>> grid_labels(const StateSet& s,
                                                  double cutoff) {
  s.validate();
  std::vector<std::vector<std::string>> grid(
      s.dim_a, std::vector<std::string>(s.dim_b));
  for (const auto& st : s.states)
    for (int m = 0; m < s.dim_a; ++m)
      for (int n = 0; n < s.dim_b; ++n)
        if (std::abs(st.coeff(n, m)) > cutoff) {
          auto& cell = grid[m][n];
          if (!cell.empty()) cell += ",";
          cell += st.label.empty() ? "?" : st.label;
        }
  return grid;
}

std::string render_grid(const StateSet& s) {
  auto grid = grid_labels(s);
  std::size_t w = 1;
  for (const auto& row : grid)
    for (const auto& cell : row) w = std::max(w, cell.size());
  std::ostringstream out;
  auto pad = [&](const std::string& t, std::size_t width) {
    out << t << std::string(width > t.size() ? width - t.size() : 0, ' ');
  };
  std::size_t rowhdr = 4 + std::to_string(s.dim_a - 1).size();
  pad("", rowhdr + 1);
  for (int n = 0; n < s.dim_b; ++n) {
    pad("|" + std::to_string(n) + ">B", w + 2);
  }
  out << '\n';
  for (int m = 0; m < s.dim_a; ++m) {
    pad("|" + std::to_string(m) + ">A", rowhdr + 1);
    for (int n = 0; n < s.dim_b; ++n)
      pad(grid[m][n].empty() ? "." : grid[m][n], w + 2);
    out << '\n';
  }
  return out.str();
}

}  // namespace locc
