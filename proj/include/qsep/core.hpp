#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>

namespace qsep {

/// Relative eigenvalue floor: a Hermitian matrix counts as positive
/// semidefinite when min eig >= -kPsdTol * ||.||_1.
inline constexpr double kPsdTol = 1e-10;

/// Index order for the six off-diagonal Bloore variables of a 4x4 real
/// symmetric matrix: z12, z13, z14, z23, z24, z34.
enum ZIndex { Z12 = 0, Z13, Z14, Z23, Z24, Z34 };

using ZVec = std::array<double, 6>;

/// Bloore coordinates of a real symmetric 4x4 density matrix: the diagonal
/// on the probability simplex plus scaled off-diagonal variables
/// rho_ij = sqrt(rho_ii rho_jj) z_ij, z_ij in [-1,1].
struct BlooreCoords {
  Eigen::Vector4d diag;
  ZVec z;
};

/// Restricted diagonal rho11 = rho22, rho33 = rho44 = (1 - 2 rho11)/2.
struct RestrictedDiag {
  double rho11 = 0.25;
  Eigen::Vector4d expand() const {
    return {rho11, rho11, 0.5 - rho11, 0.5 - rho11};
  }
};

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool empty = false;
  double length() const { return empty ? 0.0 : hi - lo; }
};

/// det rho = (prod rho_ii) * B; B depends on the z_ij only.
double factor_B(const ZVec& z);

/// det of the partial transpose under the restricted diagonal:
/// |rho_PT| = (1/4)(1-2 rho11)^2 rho11^2 * D.  D equals B with z14 and z23
/// exchanged (the partial transpose swaps rho14 with rho23, and the
/// restricted diagonal makes their Bloore scale factors equal).
double factor_D(const ZVec& z);

/// z-part of the principal 3x3 minor on rows/columns {1,2,3}:
/// 1 + 2 z12 z13 z23 - z12^2 - z13^2 - z23^2.
double minor123_z(const ZVec& z);

/// z-part of the 3x3 minor on rows/columns {2,3,4} of the partial
/// transpose: 1 + 2 z14 z24 z34 - z14^2 - z24^2 - z34^2.
double minor234_pt_z(const ZVec& z);

/// Exact nesting limits for the feasible region in z-space: given
/// z12, z13, z14 in [-1,1], z23 and z24 range over the first two intervals,
/// and (for z23, z24 inside them) z34 over the third. Any point drawn
/// inside the nest yields a positive semidefinite matrix for every strictly
/// positive diagonal. The z34 interval is flagged empty when z23/z24 lie
/// outside their own ranges (negative radicand).
struct CadLimits {
  Interval z23, z24, z34;
};
CadLimits cad_limits(double z12, double z13, double z14, double z23,
                     double z24);

/// Assemble the real symmetric matrix rho_ij = sqrt(rho_ii rho_jj) z_ij.
Eigen::Matrix4d bloore_compose(const BlooreCoords& coords);

/// Transpose the second-subsystem index blocks of a (dA*dB)x(dA*dB)
/// density matrix. Involutive; preserves Hermiticity and trace.
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int dA,
                                   int dB);

/// Feasibility (rho >= 0) in Bloore coordinates. For strictly positive
/// diagonals this is the closed-form test B >= 0 and minor123 >= 0 (the
/// |z_ij| <= 1 box covers the 2x2 minors); a degenerate diagonal entry
/// makes the sign of det uninformative, so those fall back to the direct
/// eigenvalue check.
bool is_feasible(const BlooreCoords& coords);

/// Peres-Horodecki test, exact for 2x2 and 2x3: all eigenvalues of the
/// partial transpose >= -kPsdTol * ||rho_PT||_1.
bool is_separable(const Eigen::MatrixXcd& rho, int dA, int dB);

/// Smallest eigenvalue of a Hermitian matrix (dense solver).
double min_eigenvalue(const Eigen::MatrixXcd& m);

/// PSD check with the library-wide relative tolerance.
bool is_psd(const Eigen::MatrixXcd& m);

}  // namespace qsep
