#pragma once

#include "cvqnd/fock.hpp"

// Entanglement of two-mode Fock-basis density matrices, quantified by the
// negativity N (magnitude of the sum of negative eigenvalues of the partial
// transpose) and the logarithmic negativity E = ln(2N + 1) = ln ||rho^PT||_1.

namespace cvqnd {

struct EntanglementReport {
    double negativity = 0.0;      // N >= 0
    double log_negativity = 0.0;  // E = ln(2N + 1) >= 0
    double spectrum_min = 0.0;    // most negative eigenvalue of rho^PT
    int cutoff_used = 0;
};

/// Transpose on the second mode: out(l, m, n, p) = in(l, p, n, m).
/// An involution; preserves Hermiticity.
DensityMatrix partial_transpose(const DensityMatrix& rho);

/// Dense Hermitian eigendecomposition of rho^PT. Eigenvalues above -1e-10
/// are treated as zero so truncation noise does not inflate the negativity.
EntanglementReport log_negativity(const DensityMatrix& rho);

/// Closed-form logarithmic negativity of the two-mode squeezed vacuum with
/// squeezing r >= 0. The Schmidt coefficients are c_n = sqrt(1-lambda^2)
/// lambda^n with lambda = tanh r, and for a pure Schmidt state
/// ||rho^PT||_1 = (sum_n c_n)^2 = (1-lambda^2)/(1-lambda)^2
///              = (1+lambda)/(1-lambda) = e^{2r},
/// hence E = 2r.
double tmsv_log_negativity_baseline(double r);

}  // namespace cvqnd
