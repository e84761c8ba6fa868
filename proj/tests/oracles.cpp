#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqnd/entanglement.hpp"

namespace cvqnd::testing {

double grid_integrate(const std::vector<double>& half_width,
                      const std::vector<int>& points,
                      const std::function<double(const Eigen::VectorXd&)>& f) {
    const int dim = static_cast<int>(half_width.size());
    if (points.size() != half_width.size())
        throw std::invalid_argument("grid_integrate: dimension mismatch");

    std::vector<double> step(dim);
    double cell = 1.0;
    for (int k = 0; k < dim; ++k) {
        step[k] = 2.0 * half_width[k] / points[k];
        cell *= step[k];
    }

    std::vector<int> idx(dim, 0);
    Eigen::VectorXd x(dim);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (int k = 0; k < dim; ++k) {
            x(k) = -half_width[k] + idx[k] * step[k];
            if (idx[k] == 0 || idx[k] == points[k]) w *= 0.5;  // trapezoid ends
        }
        total += w * f(x);
        int k = dim - 1;
        while (k >= 0 && ++idx[k] > points[k]) idx[k--] = 0;
        if (k < 0) break;
    }
    return total * cell;
}

GridPlan plan_gaussian_grid(const Eigen::MatrixXd& total_precision, double margin) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(total_precision);
    if (solver.info() != Eigen::Success || solver.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("plan_gaussian_grid: precision must be positive definite");
    const double sigma_min = 1.0 / std::sqrt(solver.eigenvalues().maxCoeff());
    const double step = 0.65 * sigma_min;
    const Eigen::MatrixXd cov = total_precision.inverse();

    GridPlan plan;
    const int dim = static_cast<int>(total_precision.rows());
    for (int k = 0; k < dim; ++k) {
        const double hw = 6.5 * std::sqrt(cov(k, k)) + margin;
        plan.half_width.push_back(hw);
        plan.points.push_back(static_cast<int>(std::ceil(2.0 * hw / step)));
    }
    return plan;
}

Eigen::MatrixXd random_physical_cov(std::mt19937_64& rng, int num_modes,
                                    double max_squeeze, double max_thermal) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    Eigen::VectorXd diag(2 * num_modes);
    for (int m = 0; m < num_modes; ++m) {
        const double nu = 1.0 + max_thermal * uni(rng);
        diag(2 * m) = diag(2 * m + 1) = nu;
    }
    GaussianState state{CovarianceMatrix(diag.asDiagonal().toDenseMatrix())};

    for (int m = 0; m < num_modes; ++m) {
        const double s = max_squeeze * (2.0 * uni(rng) - 1.0);
        const double th = 2.0 * M_PI * uni(rng);
        state = apply(embed_single_mode(squeeze_map(s), m, num_modes), state);
        state = apply(embed_single_mode(phase_map(th), m, num_modes), state);
    }
    for (int m = 0; m + 1 < num_modes; ++m) {
        const double kappa = 0.5 * (2.0 * uni(rng) - 1.0);
        const auto kind = static_cast<QndKind>(rng() % 4);
        state = apply(qnd_map(kind, kappa, m, m + 1, num_modes), state);
    }
    return state.cov.matrix();
}

double overlap_weight_oracle(const Eigen::MatrixXd& gamma8, int i, int j) {
    const Eigen::Matrix4d marg = gamma8.bottomRightCorner<4, 4>();
    const Eigen::Matrix4d prec = marg.inverse();
    const double norm = 1.0 / (M_PI * M_PI * std::sqrt(marg.determinant()));

    Eigen::Matrix4d total = prec;
    total(0, 0) += (1 - i);
    total(1, 1) += (1 - i);
    total(2, 2) += (1 - j);
    total(3, 3) += (1 - j);
    const GridPlan plan = plan_gaussian_grid(total);

    return grid_integrate(plan.half_width, plan.points, [&](const Eigen::VectorXd& v) {
        double val = norm * std::exp(-v.dot(prec * v));
        if (i == 0) val *= 2.0 * std::exp(-(v(0) * v(0) + v(1) * v(1)));
        if (j == 0) val *= 2.0 * std::exp(-(v(2) * v(2) + v(3) * v(3)));
        return val;
    });
}

DensityMatrix schmidt_density_matrix(const std::vector<double>& coeffs, int n_max) {
    if (static_cast<int>(coeffs.size()) < n_max + 1)
        throw std::invalid_argument("schmidt_density_matrix: not enough coefficients");
    double norm2 = 0.0;
    for (int n = 0; n <= n_max; ++n) norm2 += coeffs[n] * coeffs[n];
    DensityMatrix rho{FockCutoff(n_max)};
    for (int l = 0; l <= n_max; ++l)
        for (int n = 0; n <= n_max; ++n)
            rho(l, l, n, n) = coeffs[l] * coeffs[n] / norm2;
    return rho;
}

double schmidt_log_negativity(const std::vector<double>& coeffs) {
    double sum_abs = 0.0, sum_sq = 0.0;
    for (double c : coeffs) {
        sum_abs += std::abs(c);
        sum_sq += c * c;
    }
    return std::log(sum_abs * sum_abs / sum_sq);
}

std::vector<double> tmsv_coeffs(double r, int n_max) {
    const double lambda = std::tanh(r);
    std::vector<double> c(n_max + 1);
    double pw = 1.0;
    for (int n = 0; n <= n_max; ++n, pw *= lambda) c[n] = pw;
    return c;
}

std::vector<double> subtracted_tmsv_coeffs(double r, int n_max) {
    const double lambda = std::tanh(r);
    std::vector<double> c(n_max + 1);
    double pw = 1.0;
    for (int n = 0; n <= n_max; ++n, pw *= lambda) c[n] = (n + 1) * pw;
    return c;
}

double qnd_click_limit_log_negativity(double r, int n_max) {
    // X_A X_B |TMSV> with X = (a + a^dag)/sqrt(2): acting on sum lambda^n |nn>
    // produces diagonal and |n, n+-2> coefficients; evaluate the trace norm of
    // the partial transpose of the normalized pure state via its singular
    // values (Schmidt coefficients).
    const double lambda = std::tanh(r);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    double pw = 1.0;
    for (int n = 0; n <= n_max; ++n, pw *= lambda) {
        const auto raise = [&](int k) { return std::sqrt(k + 1.0); };
        const auto lower = [&](int k) { return std::sqrt(static_cast<double>(k)); };
        if (n + 1 <= n_max) c(n + 1, n + 1) += pw * raise(n) * raise(n);
        if (n >= 1) c(n - 1, n - 1) += pw * lower(n) * lower(n);
        if (n + 1 <= n_max && n >= 1) {
            c(n + 1, n - 1) += pw * raise(n) * lower(n);
            c(n - 1, n + 1) += pw * lower(n) * raise(n);
        }
    }
    c /= c.norm();
    const Eigen::VectorXd sv = c.jacobiSvd().singularValues();
    const double s = sv.sum();
    return std::log(s * s);
}

namespace {

// kron(op, I): single-mode operator acting on the first mode of the
// two-mode space with composite row index l * (n_max+1) + m.
Eigen::MatrixXcd embed_first_mode(const Eigen::MatrixXcd& op) {
    const int n1 = static_cast<int>(op.rows());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n1 * n1, n1 * n1);
    for (int l = 0; l < n1; ++l)
        for (int n = 0; n < n1; ++n) {
            if (op(l, n) == Complex(0.0, 0.0)) continue;
            for (int m = 0; m < n1; ++m) out(l * n1 + m, n * n1 + m) = op(l, n);
        }
    return out;
}

}  // namespace

Eigen::MatrixXcd x_operator_mode_a(int n_max) {
    const int n1 = n_max + 1;
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n1, n1);
    for (int n = 0; n + 1 < n1; ++n) {
        const double v = std::sqrt((n + 1) / 2.0);
        x(n, n + 1) = v;
        x(n + 1, n) = v;
    }
    return embed_first_mode(x);
}

Eigen::MatrixXcd p_operator_mode_a(int n_max) {
    const int n1 = n_max + 1;
    const Complex i(0.0, 1.0);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n1, n1);
    for (int n = 0; n + 1 < n1; ++n) {
        const double v = std::sqrt((n + 1) / 2.0);
        p(n, n + 1) = -i * v;  // p = (a - a^dag)/(i sqrt 2)
        p(n + 1, n) = i * v;
    }
    return embed_first_mode(p);
}

}  // namespace cvqnd::testing
