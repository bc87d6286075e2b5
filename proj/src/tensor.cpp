#include "tgsm/tensor.hpp"

#include <cmath>

#include "tgsm/errors.hpp"

namespace tgsm::tensor {

namespace {
const double kSqrt2 = std::sqrt(2.0);

// Mandel index of the off-diagonal pair (i, j), i < j.
int off_index(int td, int i, int j) {
  int k = td;
  for (int a = 0; a < td; ++a)
    for (int b = a + 1; b < td; ++b) {
      if (a == i && b == j) return k;
      ++k;
    }
  return -1;
}
}  // namespace

Vec identity(int td) {
  Vec v = Vec::Zero(sym_size(td));
  v.head(td).setOnes();
  return v;
}

double trace(const Vec& a, int td) { return a.head(td).sum(); }

Mat to_matrix(const Vec& a, int td) {
  if (a.size() != sym_size(td)) throw ShapeError("Mandel vector has wrong length");
  Mat m(td, td);
  for (int i = 0; i < td; ++i) m(i, i) = a(i);
  for (int i = 0; i < td; ++i)
    for (int j = i + 1; j < td; ++j) m(i, j) = m(j, i) = a(off_index(td, i, j)) / kSqrt2;
  return m;
}

Vec from_matrix(const Mat& m) {
  const int td = static_cast<int>(m.rows());
  Vec a(sym_size(td));
  for (int i = 0; i < td; ++i) a(i) = m(i, i);
  for (int i = 0; i < td; ++i)
    for (int j = i + 1; j < td; ++j) a(off_index(td, i, j)) = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  return a;
}

Mat isotropic(int td, double lambda, double mu) {
  const int n = sym_size(td);
  const Vec id = identity(td);
  return lambda * id * id.transpose() + 2.0 * mu * Mat::Identity(n, n);
}

Mat deviatoric_basis(int td) {
  const int n = sym_size(td);
  if (td == 1) return Mat(1, 0);
  // Gram-Schmidt on the diagonal differences, then append the shear directions.
  Mat basis(n, n - 1);
  int col = 0;
  for (int k = 0; k < td - 1; ++k) {
    Vec v = Vec::Zero(n);
    for (int i = 0; i <= k; ++i) v(i) = 1.0;
    v(k + 1) = -(k + 1.0);
    basis.col(col++) = v.normalized();
  }
  for (int k = td; k < n; ++k) {
    Vec v = Vec::Zero(n);
    v(k) = 1.0;
    basis.col(col++) = v;
  }
  return basis;
}

Vec strain_from_gradient(const Mat& grad) { return from_matrix(0.5 * (grad + grad.transpose())); }

double min_eigenvalue(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double asymmetry(const Mat& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace tgsm::tensor
