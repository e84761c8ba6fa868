#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvqnd/phase_space.hpp"

// Non-Gaussian conditional states as signed mixtures of Gaussian branches.
//
// On/off detection of modes a, b decomposes the post-measurement state of
// modes A, B into four Gaussian branches labelled (i, j) with i, j in {0, 1}:
// index 0 means the mode was projected onto the vacuum, index 1 means it was
// traced out. The signed combination sum (-1)^(i+j) P^(ij) W^(ij) realizes
// the click POVM (1 - |0><0|) on both modes.

namespace cvqnd {

struct BranchIndex {
    int i = 0;  // mode a: 0 = vacuum projection, 1 = trace-out
    int j = 0;  // mode b
};

/// One Gaussian term of a signed mixture over modes A, B.
///
/// For on/off branches the weight is P^(ij) and the linear/prefactor fields
/// are trivial. For homodyne-reduced branches the weight is P^(ij) q_z^(ij),
/// `linear` holds the row vector Lambda^(ij) of the branch Q function and
/// `scalar_prefactor` its exponential factor exp(-Lambda Phi^-1 Lambda^dag/4).
struct GaussianBranch {
    BranchIndex index;
    CovarianceMatrix cov = CovarianceMatrix::identity(2);
    double weight = 0.0;
    int sign = +1;
    Eigen::RowVector4cd linear = Eigen::RowVector4cd::Zero();
    double scalar_prefactor = 1.0;
};

/// Signed mixture sum_k sign_k weight_k W_k with global normalization
/// M = 1 / (sum_k sign_k weight_k). The signed sum is the success weight of
/// the conditioning event; it vanishes when the heralding measurement can
/// never fire (then M is not finite and the mixture cannot be assembled).
struct SignedGaussianMixture {
    std::vector<GaussianBranch> branches;
    double normalization = 0.0;

    double success_weight() const;
};

/// Partition of the precision matrix Gamma = gamma^-1 of a 4-mode state into
/// the entangled-mode block, the ancilla block and the cross block.
struct PrecisionBlocks {
    Eigen::Matrix4d entangled;  // modes A, B
    Eigen::Matrix4d ancilla;    // modes a, b
    Eigen::Matrix4d cross;      // rows A,B x cols a,b
};

PrecisionBlocks precision_blocks(const CovarianceMatrix& gamma8);

/// Covariance of (A, B, a, b) just before the on/off measurement of
/// protocol I: TMSV(r) on A,B and vacuum ancillas, QND-coupled pairwise
/// (A,a) and (B,b) with equal strength, then a loss channel of efficiency
/// eta on the ancillas.
CovarianceMatrix protocol1_pre_measurement_cov(double r, double kappa,
                                               QndKind kind, double eta);

/// Same pipeline with the two QND couplings replaced by beamsplitters of
/// amplitude transmittance T.
CovarianceMatrix protocol1_pre_measurement_cov_beamsplitter(double r, double T,
                                                            double eta);

/// On/off detection of modes a, b of an 8x8 covariance: for each branch
///   Gamma^(ij)_ab = Gamma_ab + (1-i) I_2 (+) (1-j) I_2
///   gamma^(ij)_AB = (Gamma_AB - sigma (Gamma^(ij)_ab)^-1 sigma^T)^-1
///   P^(ij) = 2^(2-i-j) sqrt(det Gamma)
///            / (sqrt(det Gamma^(ij)_AB) sqrt(det Gamma^(ij)_ab))
SignedGaussianMixture on_off_branches(const CovarianceMatrix& gamma8);

/// Photon-subtracted two-mode ancilla preparation: modes a and b start in
/// p-squeezed vacua (parameter s), each passes a beamsplitter of amplitude
/// transmittance T, and the reflected beams are detected on/off with
/// efficiency eta. Branch covariances are diag(theta_+(k), theta_-(k)) per
/// mode with
///   theta_pm(k) = 1 + (2-k)(e^{pm 2s}-1) T^2
///                     / (1 + (1-k)(1 + eta (e^{pm 2s}-1)(1-T^2)))
/// and weights P^(ij) = 2^(2-i-j) sqrt(prod theta) / sqrt(prod tau) with
///   tau_pm(k) = [1 + (e^{pm 2s}-1) T^2]
///               + (1-k) [1 + (e^{pm 2s}-1) T^2 + eta (e^{pm 2s}-1)(1-T^2)].
/// The tau used here reproduces the Wigner-overlap reduction exactly for all
/// eta (checked against an independent single-mode reduction in the tests);
/// at eta = 1 it coincides with the more common form
/// 1 - k - [1+(e-1)T^2] / [(1-eta)(e-1)(1-T^2) - e], whose products differ
/// from the overlap reduction when eta < 1.
SignedGaussianMixture prepare_subtracted_ancilla(double s, double T, double eta);

/// Loss model used ahead of the homodyne measurement. Symmetric is the
/// standard channel (sqrt(xi) on both sides plus (1-xi) I on the ancilla
/// block). OneSided scales only the ancilla columns by xi (plus (1-xi) I on
/// the ancilla block), producing an asymmetric matrix for xi < 1; it is kept
/// for comparison and agrees with Symmetric at xi = 1.
enum class HomodyneLossModel { Symmetric, OneSided };

/// Output of the homodyne reduction of one branch.
struct HomodyneReduction {
    Eigen::Matrix4d cov;            // conditional covariance of A, B (A^-1)
    Eigen::Vector4d mean;           // conditional displacement -A^-1 C z
    double q_z = 0.0;               // outcome density at (z_a, z_b)
    Eigen::Matrix4cd phi;           // Phi = U (A^-1 + I)^-1 U^dag
    Eigen::RowVector4cd lambda;     // Lambda = 2 z^T C^T A^-1 (A^-1+I)^-1 U^dag
    double exp_prefactor = 1.0;     // exp(-Lambda Phi^-1 Lambda^dag / 4)
};

/// Homodyne measurement of x_theta on both ancilla modes of an 8x8 branch
/// covariance (modes A, B, a, b):
///  1. loss channel xi, then phase rotation theta on the ancillas,
///  2. trace-out of the conjugate quadratures = deletion of their rows and
///     columns from the covariance matrix, giving the 6x6 matrix mu,
///  3. partition of mu^-1 into A (modes A,B), B (measured pair) and cross C,
///  4. outcome density q_z = sqrt(det(B - C^T A^-1 C))/pi
///                           * exp[-z^T (B - C^T A^-1 C) z],
///  5. conditional state, Phi and Lambda of the branch Q function.
HomodyneReduction homodyne_reduce(const CovarianceMatrix& gamma8, double theta,
                                  double xi, const Eigen::Vector2d& outcome,
                                  HomodyneLossModel model = HomodyneLossModel::Symmetric);

}  // namespace cvqnd
