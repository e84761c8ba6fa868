#include "cvqnd/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqnd {

FockCutoff::FockCutoff(int n) : n_max(n) {
    if (n < 1) throw std::invalid_argument("FockCutoff: n_max must be >= 1");
}

DensityMatrix::DensityMatrix(FockCutoff cutoff)
    : n_max_(cutoff.n_max),
      elems_(static_cast<std::size_t>(cutoff.n_max + 1) * (cutoff.n_max + 1) *
                 (cutoff.n_max + 1) * (cutoff.n_max + 1),
             Complex(0.0, 0.0)) {}

Eigen::MatrixXcd DensityMatrix::as_matrix() const {
    const int n1 = n_max_ + 1;
    Eigen::MatrixXcd m(n1 * n1, n1 * n1);
    for (int l = 0; l < n1; ++l)
        for (int mm = 0; mm < n1; ++mm)
            for (int n = 0; n < n1; ++n)
                for (int p = 0; p < n1; ++p)
                    m(l * n1 + mm, n * n1 + p) = (*this)(l, mm, n, p);
    return m;
}

Complex DensityMatrix::trace() const {
    Complex tr(0.0, 0.0);
    for (int l = 0; l <= n_max_; ++l)
        for (int m = 0; m <= n_max_; ++m) tr += (*this)(l, m, l, m);
    return tr;
}

double DensityMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (int l = 0; l <= n_max_; ++l)
        for (int m = 0; m <= n_max_; ++m)
            for (int n = 0; n <= n_max_; ++n)
                for (int p = 0; p <= n_max_; ++p)
                    worst = std::max(worst,
                                     std::abs((*this)(l, m, n, p) -
                                              std::conj((*this)(n, p, l, m))));
    return worst;
}

double DensityMatrix::max_abs_imag() const {
    double worst = 0.0;
    for (const Complex& e : elems_) worst = std::max(worst, std::abs(e.imag()));
    return worst;
}

const Eigen::Matrix4cd& fock_mode_unitary() {
    static const Eigen::Matrix4cd u = [] {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const Complex i(0.0, 1.0);
        Eigen::Matrix4cd m;
        m << 1, i, 0, 0,
             1, -i, 0, 0,
             0, 0, 1, i,
             0, 0, 1, -i;
        return Eigen::Matrix4cd(inv_sqrt2 * m);
    }();
    return u;
}

const Eigen::Matrix4d& fock_rearrange_left() {
    static const Eigen::Matrix4d b = [] {
        Eigen::Matrix4d m;
        m << 1, 0, 0, 0,
             0, 0, 1, 0,
             0, 1, 0, 0,
             0, 0, 0, 1;
        return m;
    }();
    return b;
}

const Eigen::Matrix4d& fock_rearrange_right() {
    static const Eigen::Matrix4d d = [] {
        Eigen::Matrix4d m;
        m << 0, 0, 1, 0,
             1, 0, 0, 0,
             0, 0, 0, 1,
             0, 1, 0, 0;
        return m;
    }();
    return d;
}

Eigen::Matrix4cd c_matrix(const Eigen::Matrix4d& gamma_branch) {
    const Eigen::Matrix4cd& u = fock_mode_unitary();
    Eigen::Matrix4cd core =
        u * gamma_branch.cast<Complex>() * u.adjoint() + Eigen::Matrix4cd::Identity();
    Eigen::FullPivLU<Eigen::Matrix4cd> lu(core);
    if (!lu.isInvertible())
        throw std::runtime_error("c_matrix: U gamma U^dag + I is singular (unphysical branch)");
    const Eigen::Matrix4cd inner =
        lu.inverse() - 0.5 * Eigen::Matrix4cd::Identity();
    return fock_rearrange_left().cast<Complex>() * inner *
           fock_rearrange_right().cast<Complex>();
}

QGeneratorParams branch_generator_params(const GaussianBranch& branch,
                                         double normalization) {
    QGeneratorParams params;
    params.theta_eff = c_matrix(branch.cov.matrix());
    params.delta_eff =
        -(branch.linear * fock_rearrange_right().cast<Complex>()).transpose();
    const double det_plus = (branch.cov.matrix() + Eigen::Matrix4d::Identity()).determinant();
    if (!(det_plus > 0.0))
        throw std::runtime_error("branch_generator_params: det(gamma + I) not positive");
    params.prefactor = 4.0 * normalization * branch.sign * branch.weight *
                       branch.scalar_prefactor / std::sqrt(det_plus);
    return params;
}

namespace {

AssembledState assemble(const SignedGaussianMixture& mixture, FockCutoff cutoff) {
    if (mixture.branches.empty())
        throw std::invalid_argument("assemble: mixture has no branches");
    if (!std::isfinite(mixture.normalization))
        throw std::runtime_error("assemble: mixture normalization is not finite "
                                 "(zero success weight)");
    for (const auto& b : mixture.branches)
        if (b.cov.num_modes() != 2)
            throw std::invalid_argument("assemble: branch covariances must cover two modes");

    const int n1 = cutoff.n_max + 1;
    DensityMatrix rho(cutoff);

    // 1/sqrt(k!) factors via lgamma; stable up to large cutoffs.
    std::vector<double> inv_sqrt_fact(n1);
    for (int k = 0; k < n1; ++k) inv_sqrt_fact[k] = std::exp(-0.5 * std::lgamma(k + 1.0));

    for (const auto& branch : mixture.branches) {
        const QGeneratorParams gen = branch_generator_params(branch, mixture.normalization);
        const HermiteTable table =
            hermite_table({gen.theta_eff, gen.delta_eff}, cutoff.n_max);
        if (!table.all_finite())
            throw std::runtime_error("assemble: Hermite table overflow at cutoff " +
                                     std::to_string(cutoff.n_max));
        for (int l = 0; l < n1; ++l)
            for (int m = 0; m < n1; ++m)
                for (int n = 0; n < n1; ++n)
                    for (int p = 0; p < n1; ++p) {
                        const double scale = inv_sqrt_fact[l] * inv_sqrt_fact[m] *
                                             inv_sqrt_fact[n] * inv_sqrt_fact[p];
                        rho(l, m, n, p) += gen.prefactor * scale * table(l, m, n, p);
                    }
    }

    const Complex tr = rho.trace();
    if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag()))
        throw std::runtime_error("assemble: non-finite trace (cutoff overflow)");
    if (std::abs(tr) < 1e-12)
        throw std::runtime_error("assemble: vanishing trace, cannot renormalize");

    AssembledState out{std::move(rho), tr.real()};
    const int n1b = out.rho.n_max() + 1;
    for (int l = 0; l < n1b; ++l)
        for (int m = 0; m < n1b; ++m)
            for (int n = 0; n < n1b; ++n)
                for (int p = 0; p < n1b; ++p) out.rho(l, m, n, p) /= tr.real();
    return out;
}

}  // namespace

AssembledState assemble_protocol1(const SignedGaussianMixture& mixture,
                                  FockCutoff cutoff) {
    for (const auto& b : mixture.branches) {
        if (!b.linear.isZero(0.0))
            throw std::invalid_argument(
                "assemble_protocol1: on/off branches must have no linear term");
        if (b.scalar_prefactor != 1.0)
            throw std::invalid_argument(
                "assemble_protocol1: on/off branches must have unit scalar prefactor");
    }
    return assemble(mixture, cutoff);
}

AssembledState assemble_protocol2(const SignedGaussianMixture& mixture,
                                  FockCutoff cutoff) {
    return assemble(mixture, cutoff);
}

}  // namespace cvqnd
