#include "cvqnd/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqnd {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Eigen::MatrixXd symplectic_form(int num_modes) {
    require(num_modes >= 1, "symplectic_form: num_modes must be >= 1");
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
    for (int k = 0; k < num_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

CovarianceMatrix::CovarianceMatrix(const Eigen::MatrixXd& data) {
    require(data.rows() == data.cols(), "CovarianceMatrix: matrix must be square");
    require(data.rows() > 0 && data.rows() % 2 == 0,
            "CovarianceMatrix: dimension must be a positive even number");
    require(data.allFinite(), "CovarianceMatrix: entries must be finite");
    const double scale = std::max(1.0, data.cwiseAbs().maxCoeff());
    const double asym = (data - data.transpose()).cwiseAbs().maxCoeff();
    require(asym <= 1e-9 * scale, "CovarianceMatrix: matrix is not symmetric");
    data_ = 0.5 * (data + data.transpose());  // exactly symmetric
    num_modes_ = static_cast<int>(data.rows()) / 2;
}

double CovarianceMatrix::physicality_defect() const {
    Eigen::MatrixXcd m = data_.cast<Complex>();
    m += Complex(0.0, 1.0) * symplectic_form(num_modes_).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("CovarianceMatrix: eigensolver failed in physicality check");
    return solver.eigenvalues().minCoeff();
}

bool CovarianceMatrix::is_physical(double tol) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gamma_solver(data_);
    if (gamma_solver.info() != Eigen::Success) return false;
    if (gamma_solver.eigenvalues().minCoeff() <= 0.0) return false;
    return physicality_defect() >= -tol;
}

CovarianceMatrix CovarianceMatrix::identity(int num_modes) {
    return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes));
}

SymplecticMap::SymplecticMap(const Eigen::MatrixXd& data) {
    require(data.rows() == data.cols(), "SymplecticMap: matrix must be square");
    require(data.rows() > 0 && data.rows() % 2 == 0,
            "SymplecticMap: dimension must be a positive even number");
    require(data.allFinite(), "SymplecticMap: entries must be finite");
    num_modes_ = static_cast<int>(data.rows()) / 2;
    const Eigen::MatrixXd omega = symplectic_form(num_modes_);
    const double defect = (data * omega * data.transpose() - omega).cwiseAbs().maxCoeff();
    require(defect <= 1e-12, "SymplecticMap: S Omega S^T != Omega (defect " +
                                 std::to_string(defect) + ")");
    data_ = data;
}

SymplecticMap SymplecticMap::identity(int num_modes) {
    return SymplecticMap(Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes));
}

GaussianState::GaussianState(CovarianceMatrix c, Eigen::VectorXd d)
    : cov(std::move(c)), disp(std::move(d)) {
    require(disp.size() == cov.dim(), "GaussianState: displacement length must be 2N");
    require(disp.allFinite(), "GaussianState: displacement must be finite");
}

GaussianState::GaussianState(CovarianceMatrix c)
    : GaussianState(std::move(c), Eigen::VectorXd::Zero(c.dim())) {}

GaussianState vacuum_state(int num_modes) {
    return GaussianState(CovarianceMatrix::identity(num_modes));
}

GaussianState tmsv_state(double r) {
    require(std::isfinite(r), "tmsv_state: r must be finite");
    const double ch = std::cosh(2.0 * r);
    const double sh = std::sinh(2.0 * r);
    Eigen::Matrix4d g;
    g << ch, 0, sh, 0,
         0, ch, 0, -sh,
         sh, 0, ch, 0,
         0, -sh, 0, ch;
    return GaussianState(CovarianceMatrix(g));
}

QndKind qnd_kind_from_string(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
    if (s == "xx") return QndKind::XX;
    if (s == "xp") return QndKind::XP;
    if (s == "px") return QndKind::PX;
    if (s == "pp") return QndKind::PP;
    throw std::invalid_argument("unknown QND kind '" + name + "' (expected xx, xp, px or pp)");
}

const char* to_string(QndKind kind) {
    switch (kind) {
        case QndKind::XX: return "xx";
        case QndKind::XP: return "xp";
        case QndKind::PX: return "px";
        case QndKind::PP: return "pp";
    }
    return "?";
}

SymplecticMap qnd_map(QndKind kind, double kappa, int mode_sys, int mode_anc,
                      int num_modes) {
    require(std::isfinite(kappa), "qnd_map: kappa must be finite");
    require(mode_sys != mode_anc, "qnd_map: invalid mode pair, system and ancilla must differ");
    require(mode_sys >= 0 && mode_sys < num_modes && mode_anc >= 0 && mode_anc < num_modes,
            "qnd_map: mode index out of range");
    const int xs = 2 * mode_sys, ps = 2 * mode_sys + 1;
    const int xa = 2 * mode_anc, pa = 2 * mode_anc + 1;
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes);
    switch (kind) {
        case QndKind::PP: s(xs, pa) = kappa;  s(xa, ps) = kappa;  break;
        case QndKind::XX: s(ps, xa) = -kappa; s(pa, xs) = -kappa; break;
        case QndKind::XP: s(ps, pa) = -kappa; s(xa, xs) = kappa;  break;
        case QndKind::PX: s(xs, xa) = kappa;  s(pa, ps) = -kappa; break;
    }
    return SymplecticMap(s);
}

SymplecticMap phase_map(double theta) {
    Eigen::Matrix2d s;
    s << std::cos(theta), std::sin(theta),
        -std::sin(theta), std::cos(theta);
    return SymplecticMap(s);
}

SymplecticMap squeeze_map(double s) {
    require(std::isfinite(s), "squeeze_map: s must be finite");
    Eigen::Matrix2d m;
    m << std::exp(s), 0, 0, std::exp(-s);
    return SymplecticMap(m);
}

SymplecticMap beamsplitter_map(double T) {
    if (!(T >= 0.0 && T <= 1.0))
        throw std::domain_error("beamsplitter_map: transmittance T must lie in [0, 1]");
    const double R = std::sqrt(std::max(0.0, 1.0 - T * T));
    Eigen::Matrix4d s;
    s << T, 0, R, 0,
         0, T, 0, R,
         R, 0, -T, 0,
         0, R, 0, -T;
    return SymplecticMap(s);
}

SymplecticMap embed_single_mode(const SymplecticMap& map, int mode, int num_modes) {
    require(map.num_modes() == 1, "embed_single_mode: map must act on one mode");
    require(mode >= 0 && mode < num_modes, "embed_single_mode: mode out of range");
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes);
    s.block<2, 2>(2 * mode, 2 * mode) = map.matrix();
    return SymplecticMap(s);
}

SymplecticMap embed_two_mode(const SymplecticMap& map, int mode_a, int mode_b,
                             int num_modes) {
    require(map.num_modes() == 2, "embed_two_mode: map must act on two modes");
    require(mode_a != mode_b, "embed_two_mode: modes must differ");
    require(mode_a >= 0 && mode_a < num_modes && mode_b >= 0 && mode_b < num_modes,
            "embed_two_mode: mode out of range");
    const int ix[4] = {2 * mode_a, 2 * mode_a + 1, 2 * mode_b, 2 * mode_b + 1};
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) s(ix[r], ix[c]) = map.matrix()(r, c);
    return SymplecticMap(s);
}

SymplecticMap compose(const SymplecticMap& second, const SymplecticMap& first) {
    require(second.num_modes() == first.num_modes(), "compose: mode counts must match");
    return SymplecticMap(second.matrix() * first.matrix());
}

SymplecticMap mode_permutation(const std::vector<int>& new_order) {
    const int n = static_cast<int>(new_order.size());
    require(n >= 1, "mode_permutation: empty order");
    std::vector<bool> seen(n, false);
    for (int m : new_order) {
        require(m >= 0 && m < n && !seen[m], "mode_permutation: not a permutation");
        seen[m] = true;
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        s(2 * k, 2 * new_order[k]) = 1.0;
        s(2 * k + 1, 2 * new_order[k] + 1) = 1.0;
    }
    return SymplecticMap(s);
}

GaussianState apply(const SymplecticMap& map, const GaussianState& state) {
    require(map.num_modes() == state.num_modes(), "apply: dimension mismatch");
    const Eigen::MatrixXd& s = map.matrix();
    return GaussianState(CovarianceMatrix(s * state.cov.matrix() * s.transpose()),
                         s * state.disp);
}

GaussianState loss_channel(const GaussianState& state, double eta,
                           const std::vector<int>& modes) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("loss_channel: efficiency eta must lie in [0, 1]");
    const int dim = state.cov.dim();
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(dim);
    Eigen::VectorXd add = Eigen::VectorXd::Zero(dim);
    for (int m : modes) {
        require(m >= 0 && m < state.num_modes(), "loss_channel: mode out of range");
        scale(2 * m) = scale(2 * m + 1) = std::sqrt(eta);
        add(2 * m) = add(2 * m + 1) = 1.0 - eta;
    }
    Eigen::MatrixXd g = scale.asDiagonal() * state.cov.matrix() * scale.asDiagonal();
    g += add.asDiagonal().toDenseMatrix();
    return GaussianState(CovarianceMatrix(g), scale.asDiagonal() * state.disp);
}

GaussianState direct_sum(const GaussianState& a, const GaussianState& b) {
    const int da = a.cov.dim(), db = b.cov.dim();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(da + db, da + db);
    g.topLeftCorner(da, da) = a.cov.matrix();
    g.bottomRightCorner(db, db) = b.cov.matrix();
    Eigen::VectorXd d(da + db);
    d << a.disp, b.disp;
    return GaussianState(CovarianceMatrix(g), d);
}

double wigner_eval(const GaussianState& state, const Eigen::VectorXd& point) {
    require(point.size() == state.cov.dim(), "wigner_eval: point length must be 2N");
    const Eigen::MatrixXd& g = state.cov.matrix();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
    const double det = lu.determinant();
    if (!(det > 0.0) || !std::isfinite(det))
        throw std::runtime_error("wigner_eval: singular covariance matrix");
    const Eigen::VectorXd v = point - state.disp;
    const double quad = v.dot(lu.solve(v));
    const int n = state.num_modes();
    return std::exp(-quad) / (std::pow(M_PI, n) * std::sqrt(det));
}

}  // namespace cvqnd
