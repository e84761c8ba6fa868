#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <vector>

#include "cvqnd/fock.hpp"
#include "cvqnd/phase_space.hpp"

// Shared test oracles, independent of the implementation paths they check:
// tensor-grid quadrature, random physical states, Fock-basis brute force and
// closed forms for Schmidt-diagonal pure states.

namespace cvqnd::testing {

/// Tensor-product trapezoid quadrature of f over the box
/// prod_k [-half_width[k], half_width[k]] with points[k] + 1 nodes per axis.
/// Spectrally accurate for smooth integrands that decay inside the box.
double grid_integrate(const std::vector<double>& half_width,
                      const std::vector<int>& points,
                      const std::function<double(const Eigen::VectorXd&)>& f);

struct GridPlan {
    std::vector<double> half_width;
    std::vector<int> points;
};

/// Grid geometry for integrating exp(-v^T P v)-type integrands: step
/// ~0.65/sqrt(lambda_max(P)) along the stiffest direction, half width
/// 6.5 sqrt((P^-1)_kk) + margin per axis.
GridPlan plan_gaussian_grid(const Eigen::MatrixXd& total_precision, double margin = 0.0);

/// Random physical covariance built from local squeezers/rotations and
/// pairwise couplings applied to a mildly thermal state. Bounded parameters
/// keep grid quadrature affordable.
Eigen::MatrixXd random_physical_cov(std::mt19937_64& rng, int num_modes,
                                    double max_squeeze = 0.35,
                                    double max_thermal = 0.3);

/// Brute-force Wigner-overlap weight of on/off branch (i, j): 4D grid over
/// the ancilla marginal of the 8x8 covariance of modes (A, B, a, b), each
/// vacuum-projected mode weighted by 2 exp(-x^2 - p^2), traced modes by 1.
double overlap_weight_oracle(const Eigen::MatrixXd& gamma8, int i, int j);

/// Density matrix of the normalized pure state sum_n c_n |nn>.
DensityMatrix schmidt_density_matrix(const std::vector<double>& coeffs, int n_max);

/// Closed-form log-negativity of the same state: ln((sum |c|)^2 / sum c^2).
double schmidt_log_negativity(const std::vector<double>& coeffs);

/// Schmidt coefficients of the TMSV, c_n = lambda^n.
std::vector<double> tmsv_coeffs(double r, int n_max);
/// Ideal two-mode single-photon-subtracted TMSV, c_n = (n+1) lambda^n.
std::vector<double> subtracted_tmsv_coeffs(double r, int n_max);
/// kappa -> 0 limit of the QND click filter: the state X_A X_B |TMSV>,
/// reduced to Fock coefficients (not Schmidt-diagonal).
double qnd_click_limit_log_negativity(double r, int n_max);

/// Truncated two-mode quadrature operators (x = (a + a^dag)/sqrt(2)).
Eigen::MatrixXcd x_operator_mode_a(int n_max);
Eigen::MatrixXcd p_operator_mode_a(int n_max);

}  // namespace cvqnd::testing
