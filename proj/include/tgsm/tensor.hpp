#pragma once

// Symmetric tensors in Mandel notation. A symmetric td x td tensor is stored as
// a vector of length td(td+1)/2: diagonal entries first, then sqrt(2) times the
// upper off-diagonal entries. The Euclidean dot product of two Mandel vectors
// equals the Frobenius product a:b, and rank-4 maps become symmetric matrices.

#include <Eigen/Dense>

namespace tgsm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace tensor {

constexpr int sym_size(int td) { return td * (td + 1) / 2; }

/// Mandel vector of the identity tensor.
Vec identity(int td);

/// tr(a) for a Mandel vector a of tensor dimension td.
double trace(const Vec& a, int td);

Mat to_matrix(const Vec& a, int td);
Vec from_matrix(const Mat& m);

/// lambda I(x)I + 2 mu Id, the isotropic rank-4 map.
Mat isotropic(int td, double lambda, double mu);

/// Columns form an orthonormal basis of the traceless symmetric tensors.
/// For td = 1 the deviatoric space is trivial and a 1x0 matrix is returned.
Mat deviatoric_basis(int td);

/// Symmetric strain (Mandel) from a displacement gradient grad(i, j) = d u_i / d x_j.
Vec strain_from_gradient(const Mat& grad);

/// Smallest / largest eigenvalue of the symmetric part of m.
double min_eigenvalue(const Mat& m);
double max_eigenvalue(const Mat& m);

/// Max |m - m^T| relative to max |m|.
double asymmetry(const Mat& m);

}  // namespace tensor
}  // namespace tgsm
