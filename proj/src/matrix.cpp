#include "locc/matrix.hpp"

#include <stdexcept>

namespace locc {

int numeric_rank(const Mat& m, Tolerance tol) {
  if (m.rows() == 0 || m.cols() == 0)
    throw std::invalid_argument("numeric_rank: empty matrix");
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  if (smax == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rel * smax) ++r;
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat support_projector(const Mat& m, Tolerance tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("support_projector: matrix must be square and nonempty");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!approx_equal(m, m.adjoint(), tol.abs * scale))
    throw std::invalid_argument("support_projector: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const auto& ev = es.eigenvalues();
  double lmax = ev(ev.size() - 1);
  Mat proj = Mat::Zero(m.rows(), m.cols());
  if (lmax <= 0.0) return proj;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol.rel * lmax) {
      Vec v = es.eigenvectors().col(i);
      proj += v * v.adjoint();
    }
  }
  return proj;
}

bool is_proportional_unitary(const Mat& a, Tolerance tol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  Mat g = a.adjoint() * a;
  double c = g.trace().real() / static_cast<double>(a.rows());
  if (c <= 0.0) return false;
  Mat dev = g - c * Mat::Identity(a.rows(), a.cols());
  return dev.cwiseAbs().maxCoeff() <= tol.abs * c;
}

bool approx_equal(const Mat& a, const Mat& b, double atol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= atol;
}

bool is_zero(const Mat& m, double atol) {
  if (m.size() == 0) return true;
  return m.cwiseAbs().maxCoeff() <= atol;
}

}  // namespace locc
