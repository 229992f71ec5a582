#include "qsep/core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qsep {

double factor_B(const ZVec& z) {
  const double z12 = z[Z12], z13 = z[Z13], z14 = z[Z14];
  const double z23 = z[Z23], z24 = z[Z24], z34 = z[Z34];
  return (z34 * z34 - 1.0) * z12 * z12 +
         2.0 * (z14 * (z24 - z23 * z34) + z13 * (z23 - z24 * z34)) * z12 -
         z23 * z23 - z24 * z24 - z34 * z34 + z14 * z14 * (z23 * z23 - 1.0) +
         z13 * z13 * (z24 * z24 - 1.0) + 2.0 * z23 * z24 * z34 +
         2.0 * z13 * z14 * (z34 - z23 * z24) + 1.0;
}

double factor_D(const ZVec& z) {
  ZVec swapped = z;
  std::swap(swapped[Z14], swapped[Z23]);
  return factor_B(swapped);
}

double minor123_z(const ZVec& z) {
  const double z12 = z[Z12], z13 = z[Z13], z23 = z[Z23];
  return 1.0 + 2.0 * z12 * z13 * z23 - z12 * z12 - z13 * z13 - z23 * z23;
}

double minor234_pt_z(const ZVec& z) {
  const double z14 = z[Z14], z24 = z[Z24], z34 = z[Z34];
  return 1.0 + 2.0 * z14 * z24 * z34 - z14 * z14 - z24 * z24 - z34 * z34;
}

CadLimits cad_limits(double z12, double z13, double z14, double z23,
                     double z24) {
  CadLimits lim;
  const double q12 = std::max(0.0, 1.0 - z12 * z12);
  const double q13 = std::max(0.0, 1.0 - z13 * z13);
  const double q14 = std::max(0.0, 1.0 - z14 * z14);
  const double r23 = std::sqrt(q12) * std::sqrt(q13);
  const double r24 = std::sqrt(q12) * std::sqrt(q14);
  lim.z23 = {z12 * z13 - r23, z12 * z13 + r23, false};
  lim.z24 = {z12 * z14 - r24, z12 * z14 + r24, false};

  // radicands of s, negated so that in-range z23/z24 give nonnegative values
  const double r1 = 1.0 - z12 * z12 - z13 * z13 + 2.0 * z12 * z13 * z23 -
                    z23 * z23;
  const double r2 = 1.0 - z12 * z12 - z14 * z14 + 2.0 * z12 * z14 * z24 -
                    z24 * z24;
  if (r1 < 0.0 || r2 < 0.0) {
    lim.z34 = {0.0, 0.0, true};
    return lim;
  }
  const double s = std::sqrt(r1) * std::sqrt(r2);
  const double num =
      z13 * z14 - z12 * z14 * z23 - z12 * z13 * z24 + z23 * z24;
  const double den = q12;
  if (den < 1e-14) {
    // z12 -> +-1 pinches z23, z24 to points; the limit interval is the
    // three-variable one in (z13, z14, z34)
    const double r = std::sqrt(q13) * std::sqrt(q14);
    lim.z34 = {z13 * z14 - r, z13 * z14 + r, false};
    return lim;
  }
  lim.z34 = {(num - s) / den, (num + s) / den, false};
  return lim;
}

Eigen::Matrix4d bloore_compose(const BlooreCoords& coords) {
  Eigen::Matrix4d rho;
  const Eigen::Vector4d& d = coords.diag;
  const Eigen::Vector4d s = d.cwiseSqrt();
  const ZVec& z = coords.z;
  rho(0, 0) = d(0);
  rho(1, 1) = d(1);
  rho(2, 2) = d(2);
  rho(3, 3) = d(3);
  rho(0, 1) = rho(1, 0) = s(0) * s(1) * z[Z12];
  rho(0, 2) = rho(2, 0) = s(0) * s(2) * z[Z13];
  rho(0, 3) = rho(3, 0) = s(0) * s(3) * z[Z14];
  rho(1, 2) = rho(2, 1) = s(1) * s(2) * z[Z23];
  rho(1, 3) = rho(3, 1) = s(1) * s(3) * z[Z24];
  rho(2, 3) = rho(3, 2) = s(2) * s(3) * z[Z34];
  return rho;
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int dA,
                                   int dB) {
  const int n = dA * dB;
  if (rho.rows() != n || rho.cols() != n)
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dB; ++j)
      for (int k = 0; k < dA; ++k)
        for (int l = 0; l < dB; ++l)
          out(i * dB + l, k * dB + j) = rho(i * dB + j, k * dB + l);
  return out;
}

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::MatrixXcd& m) {
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  return min_eigenvalue(m) >= -kPsdTol * std::max(norm1, 1e-300);
}

bool is_feasible(const BlooreCoords& coords) {
  for (int i = 0; i < 4; ++i) {
    if (coords.diag(i) < 0.0) return false;
    if (coords.diag(i) < 1e-14) {
      // degenerate diagonal: sign(det) carries no information, use the
      // eigenvalue oracle directly
      return is_psd(bloore_compose(coords).cast<std::complex<double>>());
    }
  }
  for (double zi : coords.z)
    if (std::abs(zi) > 1.0) return false;
  return factor_B(coords.z) >= 0.0 && minor123_z(coords.z) >= 0.0;
}

bool is_separable(const Eigen::MatrixXcd& rho, int dA, int dB) {
  return is_psd(partial_transpose(rho, dA, dB));
}

}  // namespace qsep
