#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

// Gaussian states as covariance matrices plus displacement vectors, and the
// symplectic/channel operations acting on them.
//
// Conventions used throughout the library:
//   * quadrature ordering is (x1, p1, ..., xN, pN)
//   * the vacuum covariance matrix is the identity (gamma_lm = <R_l R_m +
//     R_m R_l> - 2 d_l d_m, so <x^2> = 1/2 for the vacuum)
//   * the Wigner function of a Gaussian state is
//       W(R) = exp[-(R-d)^T gamma^{-1} (R-d)] / (pi^N sqrt(det gamma))
//
// All values are immutable after construction and safe to share across
// threads.

namespace cvqnd {

using Complex = std::complex<double>;

/// Symplectic form Omega = diag of [[0,1],[-1,0]] blocks, one per mode.
Eigen::MatrixXd symplectic_form(int num_modes);

/// Real symmetric 2Nx2N second-moment matrix. Construction symmetrizes the
/// input exactly and rejects matrices that are materially asymmetric or of
/// odd dimension. Physicality (gamma + i*Omega >= 0) is an opt-in check,
/// not enforced on construction.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(const Eigen::MatrixXd& data);

    const Eigen::MatrixXd& matrix() const { return data_; }
    int num_modes() const { return num_modes_; }
    int dim() const { return 2 * num_modes_; }

    /// Smallest eigenvalue of the Hermitian matrix gamma + i*Omega.
    double physicality_defect() const;
    /// True when gamma + i*Omega >= -tol and gamma > 0.
    bool is_physical(double tol = 1e-10) const;

    static CovarianceMatrix identity(int num_modes);

private:
    Eigen::MatrixXd data_;
    int num_modes_;
};

/// Real 2Nx2N matrix S with S Omega S^T = Omega (checked entrywise to 1e-12
/// at construction).
class SymplecticMap {
public:
    explicit SymplecticMap(const Eigen::MatrixXd& data);

    const Eigen::MatrixXd& matrix() const { return data_; }
    int num_modes() const { return num_modes_; }

    static SymplecticMap identity(int num_modes);

private:
    Eigen::MatrixXd data_;
    int num_modes_;
};

/// Gaussian state: covariance matrix plus displacement (quadrature means).
struct GaussianState {
    CovarianceMatrix cov;
    Eigen::VectorXd disp;

    GaussianState(CovarianceMatrix c, Eigen::VectorXd d);
    explicit GaussianState(CovarianceMatrix c);   // zero displacement

    int num_modes() const { return cov.num_modes(); }
};

/// Vacuum of N modes: identity covariance, zero displacement.
GaussianState vacuum_state(int num_modes);

/// Two-mode squeezed vacuum with squeezing parameter r: diagonal entries
/// cosh(2r), cross-mode blocks +-sinh(2r), zero displacement.
GaussianState tmsv_state(double r);

/// Quadrature pair coupled by a QND interaction kappa * q_sys * q_anc.
/// The first letter names the system quadrature, the second the ancilla one.
enum class QndKind { XX, XP, PX, PP };

QndKind qnd_kind_from_string(const std::string& name);
const char* to_string(QndKind kind);

/// Symplectic map of the QND interaction between modes (mode_sys, mode_anc)
/// of an N-mode system. On the coupled pair, ordered (x_s, p_s, x_a, p_a),
/// the 4x4 blocks are
///
///   PP: x_s += k p_a, x_a += k p_s      XX: p_s -= k x_a, p_a -= k x_s
///   XP: p_s -= k p_a, x_a += k x_s      PX: x_s += k x_a, p_a -= k p_s
///
/// i.e. the PP template with the coupled quadrature slots permuted per kind.
/// Each block equals exp(Omega G) for the quadratic Hamiltonian matrix G of
/// kappa * q_sys * q_anc (the generator is nilpotent, so the exponential
/// terminates at first order).
SymplecticMap qnd_map(QndKind kind, double kappa, int mode_sys, int mode_anc,
                      int num_modes);

/// Single-mode phase-space rotation [[cos t, sin t], [-sin t, cos t]].
SymplecticMap phase_map(double theta);

/// Single-mode squeezer diag(e^s, e^-s); s > 0 squeezes p.
SymplecticMap squeeze_map(double s);

/// Two-mode beamsplitter of amplitude transmittance T in [0, 1]:
/// [[T, sqrt(1-T^2)], [sqrt(1-T^2), -T]] acting blockwise on (x,p) pairs.
SymplecticMap beamsplitter_map(double T);

/// Embeds a one- or two-mode map into an N-mode identity.
SymplecticMap embed_single_mode(const SymplecticMap& map, int mode, int num_modes);
SymplecticMap embed_two_mode(const SymplecticMap& map, int mode_a, int mode_b,
                             int num_modes);

/// Matrix product second * first (first acts first).
SymplecticMap compose(const SymplecticMap& second, const SymplecticMap& first);

/// Permutation helper for block regrouping: new mode k is old mode
/// new_order[k]; each (x,p) pair moves as a unit. The result is symplectic.
SymplecticMap mode_permutation(const std::vector<int>& new_order);

/// gamma -> S gamma S^T, d -> S d.
GaussianState apply(const SymplecticMap& map, const GaussianState& state);

/// Loss channel of efficiency eta on the selected modes: the selected blocks
/// map as gamma_b -> eta gamma_b + (1-eta) I, cross blocks scale by
/// sqrt(eta), displacements by sqrt(eta).
GaussianState loss_channel(const GaussianState& state, double eta,
                           const std::vector<int>& modes);

/// Block-diagonal concatenation of states (a's modes first).
GaussianState direct_sum(const GaussianState& a, const GaussianState& b);

/// Wigner density at a phase-space point (length 2N).
double wigner_eval(const GaussianState& state, const Eigen::VectorXd& point);

}  // namespace cvqnd
