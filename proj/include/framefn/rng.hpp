#ifndef FRAMEFN_RNG_HPP
#define FRAMEFN_RNG_HPP

#include <cstdint>
#include <random>

#include "framefn/tensor.hpp"

namespace framefn {

/// Seeded 64-bit generator (mt19937_64) with the sampling helpers used
/// throughout. All randomized outputs in the library flow through this type.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double gauss() { return normal_(eng_); }
    cxd cgauss() { return cxd(gauss(), gauss()); }
    double unif() { return unif_(eng_); }

    std::uint64_t u64() { return eng_(); }

    Vec gaussian_vec(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = cgauss();
        return v;
    }

    Mat gaussian_mat(int rows, int cols) {
        Mat m(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r) m(r, c) = cgauss();
        return m;
    }

    /// Haar-distributed unitary via QR of a complex Gaussian matrix with the
    /// R-diagonal phase fix.
    Mat haar_unitary(int d) {
        Mat g = gaussian_mat(d, d);
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = qr.householderQ() * Mat::Identity(d, d);
        Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < d; ++i) {
            cxd rii = r(i, i);
            double m = std::abs(rii);
            q.col(i) *= (m > 0) ? rii / m : cxd(1, 0);
        }
        return q;
    }

    FactorState random_factor(int d) {
        Vec v = gaussian_vec(d);
        v.normalize();
        return FactorState{v};
    }

    ProductState random_product(const Dims& dims) {
        std::vector<FactorState> fs;
        fs.reserve(dims.factors.size());
        for (int d : dims.factors) fs.push_back(random_factor(d));
        return ProductState{std::move(fs)};
    }

    cxd random_phase() {
        double t = 2.0 * M_PI * unif();
        return cxd(std::cos(t), std::sin(t));
    }

    /// Fisher-Yates; kept explicit so shuffles are stable across stdlibs.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(eng_() % i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace framefn

#endif  // FRAMEFN_RNG_HPP
