#include "cvqnd/entanglement.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqnd {

DensityMatrix partial_transpose(const DensityMatrix& rho) {
    DensityMatrix out{FockCutoff(rho.n_max())};
    const int n1 = rho.n_max() + 1;
    for (int l = 0; l < n1; ++l)
        for (int m = 0; m < n1; ++m)
            for (int n = 0; n < n1; ++n)
                for (int p = 0; p < n1; ++p) out(l, m, n, p) = rho(l, p, n, m);
    return out;
}

EntanglementReport log_negativity(const DensityMatrix& rho) {
    const Eigen::MatrixXcd pt = partial_transpose(rho).as_matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pt);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error(
            "log_negativity: Hermitian eigensolver failed (dimension " +
            std::to_string(pt.rows()) + ", max |entry| " +
            std::to_string(pt.cwiseAbs().maxCoeff()) + ")");

    constexpr double kNegativeThreshold = -1e-10;
    double negativity = 0.0;
    for (int k = 0; k < solver.eigenvalues().size(); ++k) {
        const double ev = solver.eigenvalues()(k);
        if (ev < kNegativeThreshold) negativity -= ev;
    }

    EntanglementReport report;
    report.negativity = negativity;
    report.log_negativity = std::log(2.0 * negativity + 1.0);
    report.spectrum_min = solver.eigenvalues().minCoeff();
    report.cutoff_used = rho.n_max();
    return report;
}

double tmsv_log_negativity_baseline(double r) {
    if (!(r >= 0.0))
        throw std::domain_error("tmsv_log_negativity_baseline: r must be >= 0");
    return 2.0 * r;
}

}  // namespace cvqnd
