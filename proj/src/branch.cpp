#include "cvqnd/branch.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqnd/fock.hpp"

namespace cvqnd {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix4d inverse_checked(const Eigen::Matrix4d& m, const std::string& what) {
    Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
    if (!lu.isInvertible())
        throw std::runtime_error("branch singularity: " + what + " is singular");
    return lu.inverse();
}

CovarianceMatrix pre_measurement_cov(double r, const SymplecticMap& pair_map,
                                     double eta) {
    GaussianState init = direct_sum(tmsv_state(r), vacuum_state(2));  // A,B,a,b
    SymplecticMap s = compose(embed_two_mode(pair_map, 1, 3, 4),
                              embed_two_mode(pair_map, 0, 2, 4));
    GaussianState out = loss_channel(apply(s, init), eta, {2, 3});
    return out.cov;
}

}  // namespace

double SignedGaussianMixture::success_weight() const {
    double sum = 0.0;
    for (const auto& b : branches) sum += b.sign * b.weight;
    return sum;
}

PrecisionBlocks precision_blocks(const CovarianceMatrix& gamma8) {
    if (gamma8.num_modes() != 4)
        throw std::invalid_argument("precision_blocks: expected a 4-mode covariance");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gamma8.matrix());
    if (!lu.isInvertible())
        throw std::runtime_error("precision_blocks: covariance is singular");
    Eigen::MatrixXd prec = lu.inverse();
    PrecisionBlocks blocks;
    blocks.entangled = prec.topLeftCorner<4, 4>();
    blocks.ancilla = prec.bottomRightCorner<4, 4>();
    blocks.cross = prec.topRightCorner<4, 4>();
    return blocks;
}

CovarianceMatrix protocol1_pre_measurement_cov(double r, double kappa,
                                               QndKind kind, double eta) {
    return pre_measurement_cov(r, qnd_map(kind, kappa, 0, 1, 2), eta);
}

CovarianceMatrix protocol1_pre_measurement_cov_beamsplitter(double r, double T,
                                                            double eta) {
    return pre_measurement_cov(r, beamsplitter_map(T), eta);
}

SignedGaussianMixture on_off_branches(const CovarianceMatrix& gamma8) {
    PrecisionBlocks blocks = precision_blocks(gamma8);
    const double det_prec = 1.0 / gamma8.matrix().determinant();
    if (!(det_prec > 0.0))
        throw std::runtime_error("on_off_branches: covariance has non-positive determinant");

    SignedGaussianMixture mixture;
    for (int i = 0; i <= 1; ++i) {
        for (int j = 0; j <= 1; ++j) {
            Eigen::Matrix4d anc = blocks.ancilla;
            anc.topLeftCorner<2, 2>() += (1.0 - i) * Eigen::Matrix2d::Identity();
            anc.bottomRightCorner<2, 2>() += (1.0 - j) * Eigen::Matrix2d::Identity();
            Eigen::FullPivLU<Eigen::Matrix4d> lu_anc(anc);
            if (!lu_anc.isInvertible())
                throw std::runtime_error("branch singularity: ancilla precision block of branch (" +
                                         std::to_string(i) + "," + std::to_string(j) +
                                         ") is singular");
            Eigen::Matrix4d prec_ab =
                blocks.entangled - blocks.cross * lu_anc.inverse() * blocks.cross.transpose();
            Eigen::Matrix4d cov_ab = inverse_checked(
                prec_ab, "entangled-mode precision of branch (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
            const double weight = std::pow(2.0, 2 - i - j) * std::sqrt(det_prec) /
                                  (std::sqrt(prec_ab.determinant()) *
                                   std::sqrt(lu_anc.determinant()));
            GaussianBranch branch;
            branch.index = {i, j};
            branch.cov = CovarianceMatrix(cov_ab);
            branch.weight = weight;
            branch.sign = ((i + j) % 2 == 0) ? +1 : -1;
            mixture.branches.push_back(std::move(branch));
        }
    }
    mixture.normalization = 1.0 / mixture.success_weight();
    return mixture;
}

namespace {

double theta_prep(int k, double s, double T, double eta, int sgn) {
    const double e = std::exp(sgn * 2.0 * s);
    return 1.0 + (2.0 - k) * (e - 1.0) * T * T /
                     (1.0 + (1.0 - k) * (1.0 + eta * (e - 1.0) * (1.0 - T * T)));
}

double tau_prep(int k, double s, double T, double eta, int sgn) {
    const double e = std::exp(sgn * 2.0 * s);
    const double kept = 1.0 + (e - 1.0) * T * T;
    return kept + (1.0 - k) * (kept + eta * (e - 1.0) * (1.0 - T * T));
}

}  // namespace

SignedGaussianMixture prepare_subtracted_ancilla(double s, double T, double eta) {
    if (!(T >= 0.0 && T <= 1.0))
        throw std::domain_error("prepare_subtracted_ancilla: T must lie in [0, 1]");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("prepare_subtracted_ancilla: eta must lie in [0, 1]");
    if (!std::isfinite(s))
        throw std::invalid_argument("prepare_subtracted_ancilla: s must be finite");

    SignedGaussianMixture mixture;
    for (int i = 0; i <= 1; ++i) {
        for (int j = 0; j <= 1; ++j) {
            Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
            cov(0, 0) = theta_prep(i, s, T, eta, +1);
            cov(1, 1) = theta_prep(i, s, T, eta, -1);
            cov(2, 2) = theta_prep(j, s, T, eta, +1);
            cov(3, 3) = theta_prep(j, s, T, eta, -1);
            const double tau_product = tau_prep(i, s, T, eta, +1) * tau_prep(i, s, T, eta, -1) *
                                       tau_prep(j, s, T, eta, +1) * tau_prep(j, s, T, eta, -1);
            if (!(tau_product > 0.0))
                throw std::runtime_error("prepare_subtracted_ancilla: degenerate branch (" +
                                         std::to_string(i) + "," + std::to_string(j) +
                                         "), non-positive tau product");
            const double theta_product = cov(0, 0) * cov(1, 1) * cov(2, 2) * cov(3, 3);
            GaussianBranch branch;
            branch.index = {i, j};
            branch.cov = CovarianceMatrix(cov);
            branch.weight =
                std::pow(2.0, 2 - i - j) * std::sqrt(theta_product) / std::sqrt(tau_product);
            branch.sign = ((i + j) % 2 == 0) ? +1 : -1;
            mixture.branches.push_back(std::move(branch));
        }
    }
    mixture.normalization = 1.0 / mixture.success_weight();
    return mixture;
}

HomodyneReduction homodyne_reduce(const CovarianceMatrix& gamma8, double theta,
                                  double xi, const Eigen::Vector2d& outcome,
                                  HomodyneLossModel model) {
    if (gamma8.num_modes() != 4)
        throw std::invalid_argument("homodyne_reduce: expected a 4-mode covariance");
    if (!(xi >= 0.0 && xi <= 1.0))
        throw std::domain_error("homodyne_reduce: xi must lie in [0, 1]");

    Eigen::MatrixXd g;
    const SymplecticMap rot = compose(embed_single_mode(phase_map(theta), 3, 4),
                                      embed_single_mode(phase_map(theta), 2, 4));
    if (model == HomodyneLossModel::Symmetric) {
        GaussianState state(gamma8);
        g = apply(rot, loss_channel(state, xi, {2, 3})).cov.matrix();
    } else {
        // One-sided variant: scale only the ancilla columns by xi before the
        // rotation, then add (1-xi) on the ancilla diagonal. Asymmetric for
        // xi < 1.
        Eigen::VectorXd scale = Eigen::VectorXd::Ones(8);
        scale.tail<4>().setConstant(xi);
        Eigen::MatrixXd inner = gamma8.matrix() * scale.asDiagonal();
        g = rot.matrix() * inner * rot.matrix().transpose();
        Eigen::VectorXd add = Eigen::VectorXd::Zero(8);
        add.tail<4>().setConstant(1.0 - xi);
        g += add.asDiagonal().toDenseMatrix();
    }

    // Keep (x_A, p_A, x_B, p_B, x_a, x_b); drop the conjugate quadratures
    // p_a, p_b (indices 5 and 7).
    const int keep[6] = {0, 1, 2, 3, 4, 6};
    Eigen::Matrix<double, 6, 6> mu;
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) mu(r, c) = g(keep[r], keep[c]);

    Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu_mu(mu);
    if (!lu_mu.isInvertible())
        throw std::runtime_error("branch singularity: reduced covariance mu is singular");
    const Eigen::Matrix<double, 6, 6> mu_inv = lu_mu.inverse();

    const Eigen::Matrix4d a_block = mu_inv.topLeftCorner<4, 4>();
    const Eigen::Matrix<double, 4, 2> c_block = mu_inv.topRightCorner<4, 2>();
    const Eigen::Matrix2d b_block = mu_inv.bottomRightCorner<2, 2>();

    Eigen::FullPivLU<Eigen::Matrix4d> lu_a(a_block);
    if (!lu_a.isInvertible())
        throw std::runtime_error("branch singularity: conditional precision block is singular");
    const Eigen::Matrix4d a_inv = lu_a.inverse();

    const Eigen::Matrix2d schur = b_block - c_block.transpose() * a_inv * c_block;
    const double det_schur = schur.determinant();
    if (!(det_schur > 0.0))
        throw std::runtime_error("homodyne_reduce: outcome-density matrix not positive");

    HomodyneReduction red;
    red.q_z = std::sqrt(det_schur) / kPi *
              std::exp(-outcome.dot(schur * outcome));
    red.cov = a_inv;
    red.mean = -a_inv * c_block * outcome;

    const Eigen::Matrix4d w = inverse_checked(a_inv + Eigen::Matrix4d::Identity(),
                                              "conditional covariance plus identity");
    const Eigen::Matrix4cd u = fock_mode_unitary();
    red.phi = u * w.cast<Complex>() * u.adjoint();
    const Eigen::RowVector4d lambda_real =
        2.0 * (outcome.transpose() * c_block.transpose() * a_inv * w);
    red.lambda = lambda_real.cast<Complex>() * u.adjoint();
    red.exp_prefactor = std::exp(-red.mean.dot(w * red.mean));
    return red;
}

}  // namespace cvqnd
