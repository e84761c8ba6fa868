#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cvqnd/branch.hpp"
#include "cvqnd/hermite.hpp"

// Truncated Fock-basis density matrices assembled from signed Gaussian
// mixtures through the Q-function generating construction.
//
// For a branch with covariance gamma the Q function (Wigner function
// convolved with the vacuum) supplies a generating function for the matrix
// elements; rearranged into Hermite-polynomial form the element is
//
//   rho_{lmnp} = 4 M / sqrt(l! m! n! p!)
//                * sum_branches sign * weight * scalar_prefactor
//                  * H^{Theta_eff, Delta_eff}_{lmnp} / sqrt(det(gamma + I))
//
// with Theta_eff = B [ (U gamma U^dag + I)^-1 - I/2 ] D and, for
// homodyne-reduced branches, Delta_eff = -Lambda D. The sign of Delta_eff
// and of the exponential prefactor exp(-Lambda Phi^-1 Lambda^dag / 4) are
// fixed by the convolution identity Q = W * W_vac and checked in the tests
// against grid integration and first-moment consistency; with a zero
// outcome both reduce to the trivial values and index-parity pruning
// applies.

namespace cvqnd {

struct FockCutoff {
    int n_max;

    explicit FockCutoff(int n);
};

/// Complex array rho_{lmnp} = <l m| rho |n p>, all indices in [0, n_max].
class DensityMatrix {
public:
    explicit DensityMatrix(FockCutoff cutoff);

    int n_max() const { return n_max_; }
    /// Hilbert-space dimension (n_max + 1)^2 of the two-mode truncation.
    int dim() const { return (n_max_ + 1) * (n_max_ + 1); }

    Complex& operator()(int l, int m, int n, int p) {
        return elems_[flat(l, m, n, p)];
    }
    const Complex& operator()(int l, int m, int n, int p) const {
        return elems_[flat(l, m, n, p)];
    }

    /// Square matrix view, row index (l, m), column index (n, p).
    Eigen::MatrixXcd as_matrix() const;
    Complex trace() const;
    /// max |rho_{lmnp} - conj(rho_{nplm})|
    double hermiticity_defect() const;
    double max_abs_imag() const;

private:
    std::size_t flat(int l, int m, int n, int p) const {
        const std::size_t s = static_cast<std::size_t>(n_max_) + 1;
        return ((static_cast<std::size_t>(l) * s + m) * s + n) * s + p;
    }

    int n_max_;
    std::vector<Complex> elems_;
};

/// Hermite-generator data of one branch.
struct QGeneratorParams {
    Eigen::Matrix4cd theta_eff;
    Eigen::Vector4cd delta_eff;
    Complex prefactor;  // sign * weight * scalar_prefactor / sqrt(det(gamma+I)), times 4M
};

/// Unitary change of basis (x_A, p_A, x_B, p_B) -> (a, a^dag, b, b^dag).
const Eigen::Matrix4cd& fock_mode_unitary();
/// Index-rearrangement matrices making the generating exponent compatible
/// with the Hermite convention.
const Eigen::Matrix4d& fock_rearrange_left();   // B
const Eigen::Matrix4d& fock_rearrange_right();  // D

/// C = B [ (U gamma U^dag + I)^-1 - I/2 ] D for a two-mode covariance.
Eigen::Matrix4cd c_matrix(const Eigen::Matrix4d& gamma_branch);

/// Generator parameters of a mixture branch; `normalization` is the global
/// M multiplying every branch.
QGeneratorParams branch_generator_params(const GaussianBranch& branch,
                                         double normalization);

struct AssembledState {
    DensityMatrix rho;          // renormalized to unit trace
    double pre_norm_trace;      // trace of the truncated series before renormalization
};

/// Protocol I assembly: branches from on/off detection (no linear terms).
AssembledState assemble_protocol1(const SignedGaussianMixture& mixture,
                                  FockCutoff cutoff);

/// Protocol II assembly: homodyne-reduced branches whose weights already
/// include the outcome density q_z and whose linear/prefactor fields carry
/// Lambda and exp(-Lambda Phi^-1 Lambda^dag / 4).
AssembledState assemble_protocol2(const SignedGaussianMixture& mixture,
                                  FockCutoff cutoff);

}  // namespace cvqnd
