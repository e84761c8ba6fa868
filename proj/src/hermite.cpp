#include "cvqnd/hermite.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace cvqnd {

HermiteTable::HermiteTable(HermiteParams params, int max_index,
                           std::vector<Complex> values)
    : params_(std::move(params)),
      max_index_(max_index),
      stride_(static_cast<std::size_t>(max_index) + 1),
      values_(std::move(values)) {
    if (values_.size() != stride_ * stride_ * stride_ * stride_)
        throw std::invalid_argument("HermiteTable: value count does not match max_index");
}

bool HermiteTable::all_finite() const {
    for (const Complex& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

HermiteTable hermite_table(const HermiteParams& params, int max_index) {
    if (max_index < 0)
        throw std::invalid_argument("hermite_table: max_index must be >= 0");
    if (!params.theta.allFinite() || !params.delta.allFinite())
        throw std::invalid_argument("hermite_table: parameters must be finite");

    const std::size_t n1 = static_cast<std::size_t>(max_index) + 1;
    std::vector<Complex> values(n1 * n1 * n1 * n1, Complex(0.0, 0.0));
    const bool zero_delta = params.delta.isZero(0.0);

    // Coupling coefficients Theta_km + Theta_mk per axis pair.
    std::array<std::array<Complex, 4>, 4> coupling{};
    for (int k = 0; k < 4; ++k)
        for (int m = 0; m < 4; ++m) coupling[k][m] = params.theta(k, m) + params.theta(m, k);

    const std::size_t stride[4] = {n1 * n1 * n1, n1 * n1, n1, 1};
    values[0] = Complex(1.0, 0.0);

    int idx[4];
    for (idx[0] = 0; idx[0] <= max_index; ++idx[0])
        for (idx[1] = 0; idx[1] <= max_index; ++idx[1])
            for (idx[2] = 0; idx[2] <= max_index; ++idx[2])
                for (idx[3] = 0; idx[3] <= max_index; ++idx[3]) {
                    const int sum = idx[0] + idx[1] + idx[2] + idx[3];
                    if (sum == 0) continue;
                    if (zero_delta && sum % 2 != 0) continue;  // parity: stays zero
                    int k = 0;
                    while (idx[k] == 0) ++k;
                    const std::size_t base = static_cast<std::size_t>(idx[0]) * stride[0] +
                                             idx[1] * stride[1] + idx[2] * stride[2] + idx[3];
                    const std::size_t below = base - stride[k];  // axis k lowered once
                    Complex val = params.delta(k) * values[below];
                    if (idx[k] >= 2)
                        val -= 2.0 * static_cast<double>(idx[k] - 1) * params.theta(k, k) *
                               values[below - stride[k]];
                    for (int m = 0; m < 4; ++m) {
                        if (m == k || idx[m] == 0) continue;
                        val -= static_cast<double>(idx[m]) * coupling[k][m] *
                               values[below - stride[m]];
                    }
                    values[base] = val;
                }

    return HermiteTable(params, max_index, std::move(values));
}

namespace {

// Truncated multivariate power series in y1..y4, dense over per-axis degrees
// [0, cap]; products drop terms with total degree beyond cap.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int cap)
        : cap_(cap), n1_(cap + 1), coef_(static_cast<std::size_t>(n1_) * n1_ * n1_ * n1_) {}

    Complex& at(int a, int b, int c, int d) {
        return coef_[((static_cast<std::size_t>(a) * n1_ + b) * n1_ + c) * n1_ + d];
    }
    const Complex& at(int a, int b, int c, int d) const {
        return coef_[((static_cast<std::size_t>(a) * n1_ + b) * n1_ + c) * n1_ + d];
    }

    TruncatedSeries multiply(const TruncatedSeries& other) const {
        TruncatedSeries out(cap_);
        for (int a = 0; a <= cap_; ++a)
            for (int b = 0; a + b <= cap_; ++b)
                for (int c = 0; a + b + c <= cap_; ++c)
                    for (int d = 0; a + b + c + d <= cap_; ++d) {
                        const Complex lhs = at(a, b, c, d);
                        if (lhs == Complex(0.0, 0.0)) continue;
                        for (int e = 0; a + b + c + d + e <= cap_; ++e)
                            for (int f = 0; a + b + c + d + e + f <= cap_; ++f)
                                for (int g = 0; a + b + c + d + e + f + g <= cap_; ++g)
                                    for (int h = 0;
                                         a + b + c + d + e + f + g + h <= cap_; ++h) {
                                        const Complex rhs = other.at(e, f, g, h);
                                        if (rhs == Complex(0.0, 0.0)) continue;
                                        out.at(a + e, b + f, c + g, d + h) += lhs * rhs;
                                    }
                    }
        return out;
    }

private:
    int cap_;
    int n1_;
    std::vector<Complex> coef_;
};

}  // namespace

Complex hermite_direct(const HermiteParams& params, int r, int s, int t, int v) {
    if (r < 0 || s < 0 || t < 0 || v < 0)
        throw std::invalid_argument("hermite_direct: indices must be non-negative");
    const int sum = r + s + t + v;
    if (sum > 6)
        throw std::invalid_argument("hermite_direct: index sum must be <= 6");

    // p(y) = -y^T Theta y - Delta . y, then exp(p) as a power series up to
    // total degree `sum`; the coefficient of y1^r y2^s y3^t y4^v times the
    // factorials and the parity sign is the polynomial value at the origin.
    const int cap = sum;
    TruncatedSeries p(cap);
    if (cap >= 1) {
        for (int k = 0; k < 4; ++k) {
            int mono[4] = {0, 0, 0, 0};
            mono[k] = 1;
            p.at(mono[0], mono[1], mono[2], mono[3]) -= params.delta(k);
        }
    }
    if (cap >= 2) {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                int mono[4] = {0, 0, 0, 0};
                mono[a] += 1;
                mono[b] += 1;
                p.at(mono[0], mono[1], mono[2], mono[3]) -= params.theta(a, b);
            }
    }

    TruncatedSeries expo(cap);
    expo.at(0, 0, 0, 0) = 1.0;
    TruncatedSeries power(cap);
    power.at(0, 0, 0, 0) = 1.0;
    double factorial = 1.0;
    for (int k = 1; k <= cap; ++k) {
        power = power.multiply(p);
        factorial *= k;
        TruncatedSeries scaled = power;
        for (int a = 0; a <= cap; ++a)
            for (int b = 0; a + b <= cap; ++b)
                for (int c = 0; a + b + c <= cap; ++c)
                    for (int d = 0; a + b + c + d <= cap; ++d)
                        scaled.at(a, b, c, d) = power.at(a, b, c, d) / factorial;
        // accumulate exp += p^k / k!
        for (int a = 0; a <= cap; ++a)
            for (int b = 0; a + b <= cap; ++b)
                for (int c = 0; a + b + c <= cap; ++c)
                    for (int d = 0; a + b + c + d <= cap; ++d)
                        expo.at(a, b, c, d) += scaled.at(a, b, c, d);
    }

    double factor = (sum % 2 == 0) ? 1.0 : -1.0;
    for (int k = 2; k <= r; ++k) factor *= k;
    for (int k = 2; k <= s; ++k) factor *= k;
    for (int k = 2; k <= t; ++k) factor *= k;
    for (int k = 2; k <= v; ++k) factor *= k;
    return factor * expo.at(r, s, t, v);
}

}  // namespace cvqnd
