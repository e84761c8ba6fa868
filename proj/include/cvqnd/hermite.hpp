#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

// Four-dimensional Hermite polynomials evaluated at the origin,
//
//   H^{Theta,Delta}_{r,s,t,v}(0) with generating function
//   f(y) = exp[-y^T Theta y - Delta . y],
//   H_{r,s,t,v} = (-1)^{r+s+t+v} d^r/dy1 d^s/dy2 d^t/dy3 d^v/dy4 f |_{y=0}.
//
// Tables are filled by the five-term recursion obtained from the generating
// function; raising axis k by one gives
//
//   H_{..., n_k+1, ...} = Delta_k H_{n}
//                         - 2 n_k Theta_kk H_{n_k - 1}
//                         - sum_{m != k} n_m (Theta_km + Theta_mk) H_{n_m - 1}
//
// where H_{n_a - 1} lowers only the named axis. The same coefficient pattern
// serves all four axes with Delta_k and the k-th row/column sums of Theta
// substituted. With Delta = 0 every odd-index-sum entry vanishes by parity
// and is skipped during the fill.

namespace cvqnd {

using Complex = std::complex<double>;

struct HermiteParams {
    Eigen::Matrix4cd theta;
    Eigen::Vector4cd delta = Eigen::Vector4cd::Zero();
};

/// Dense table of H^{Theta,Delta}_{r,s,t,v}(0) for all indices in
/// [0, max_index]^4.
class HermiteTable {
public:
    HermiteTable(HermiteParams params, int max_index,
                 std::vector<Complex> values);

    const Complex& operator()(int r, int s, int t, int v) const {
        return values_[((static_cast<std::size_t>(r) * stride_ + s) * stride_ + t) *
                           stride_ + v];
    }
    int max_index() const { return max_index_; }
    const HermiteParams& params() const { return params_; }
    bool all_finite() const;

private:
    HermiteParams params_;
    int max_index_;
    std::size_t stride_;
    std::vector<Complex> values_;
};

/// Fills the table by the recursion above. O(max_index^4) values with O(1)
/// work each.
HermiteTable hermite_table(const HermiteParams& params, int max_index);

/// Slow oracle: evaluates the same quantity by truncated power-series
/// differentiation of the generating exponential (no recursion involved).
/// Restricted to index sums <= 6.
Complex hermite_direct(const HermiteParams& params, int r, int s, int t, int v);

}  // namespace cvqnd
