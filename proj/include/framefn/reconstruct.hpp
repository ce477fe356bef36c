#ifndef FRAMEFN_RECONSTRUCT_HPP
#define FRAMEFN_RECONSTRUCT_HPP

#include "framefn/frames.hpp"
#include "framefn/rng.hpp"
#include "framefn/tensor.hpp"

namespace framefn {

// ---------------------------------------------------------------------------
// Polarization probes. Against the reference basis {e_p}:
//   sigma(p,p) = e_p
//   sigma(p,q) = (e_p + e_q)/sqrt2      for p < q   (real part probe)
//   sigma(p,q) = (e_q + i e_p)/sqrt2    for p > q   (imaginary part probe)
// The d^2 probe projectors span the operator space, so quadratic-form values
// on the probes determine a Hermitian operator exactly.

inline std::vector<Vec> polarization_probes(int d) {
    std::vector<Vec> probes;
    probes.reserve(d * d);
    const double s = 1.0 / std::sqrt(2.0);
    for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
            Vec v = Vec::Zero(d);
            if (p == q) {
                v[p] = 1.0;
            } else if (p < q) {
                v[p] = s;
                v[q] = s;
            } else {
                v[q] = s;
                v[p] = cxd(0, s);
            }
            probes.push_back(v);
        }
    }
    return probes;
}

struct PolarizationMap {
    int d = 0;
    Mat forward;  // (p,q)-row maps vec(B) -> <sigma(p,q)|B|sigma(p,q)>
    Mat inverse;
    double condition = 0.0;
};

/// The d^2 x d^2 linear map from vectorized operators to probe values, and
/// its inverse. vec index (a,b) = a*d + b.
inline PolarizationMap factor_polarization_map(int d) {
    if (d < 2) throw DimensionMismatch("factor_polarization_map: d must be >= 2");
    PolarizationMap pm;
    pm.d = d;
    auto probes = polarization_probes(d);
    const int m = d * d;
    pm.forward = Mat(m, m);
    for (int row = 0; row < m; ++row) {
        const Vec& sig = probes[row];
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                pm.forward(row, a * d + b) = std::conj(sig[a]) * sig[b];
    }
    Eigen::JacobiSVD<Mat> svd(pm.forward);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] < 1e-12 * sv[0])
        throw std::logic_error("polarization map is singular");
    pm.condition = sv[0] / sv[sv.size() - 1];
    pm.inverse = pm.forward.inverse();
    return pm;
}

namespace detail {

// Multiply matrix `m` along tensor mode `mode` of vector `x`, whose modes
// have sizes `sizes` (mode 0 slowest).
inline Vec mode_multiply(const Vec& x, const Mat& m, const std::vector<int>& sizes, int mode) {
    int before = 1, after = 1;
    for (int j = 0; j < mode; ++j) before *= sizes[j];
    for (size_t j = mode + 1; j < sizes.size(); ++j) after *= sizes[j];
    const int sz = sizes[mode];
    Vec out(x.size());
    for (int b = 0; b < before; ++b) {
        for (int a = 0; a < after; ++a) {
            Vec slice(sz);
            for (int k = 0; k < sz; ++k) slice[k] = x[(b * sz + k) * after + a];
            Vec res = m * slice;
            for (int k = 0; k < sz; ++k) out[(b * sz + k) * after + a] = res[k];
        }
    }
    return out;
}

}  // namespace detail

struct ReconstructionResult {
    Mat op;                   // Hermitian coefficient operator on the total space
    double asymmetry = 0.0;   // norm of the anti-Hermitian part discarded
    double probe_condition = 0.0;
};

/// Recover the coefficient operator of a Born-representable oracle by
/// evaluating it on the full product probe grid (prod d_j^2 evaluations) and
/// inverting the per-factor polarization maps mode by mode. Interpolation,
/// not regression: the probe count equals the operator-space dimension.
inline ReconstructionResult reconstruct(const FrameOracle& oracle, const Dims& dims) {
    if (!(oracle.dims == dims)) throw DimensionMismatch("reconstruct: dims mismatch");
    const int n = dims.n();
    const int total = dims.total();

    std::vector<PolarizationMap> maps;
    std::vector<std::vector<Vec>> probes;
    std::vector<int> mode_sizes;
    double cond = 1.0;
    for (int d : dims.factors) {
        maps.push_back(factor_polarization_map(d));
        probes.push_back(polarization_probes(d));
        mode_sizes.push_back(d * d);
        cond = std::max(cond, maps.back().condition);
    }

    int grid = 1;
    for (int s : mode_sizes) grid *= s;

    // Evaluate on every tensor combination of per-factor probes,
    // factor 1 slowest.
    Vec values(grid);
    std::vector<int> idx(n, 0);
    for (int k = 0; k < grid; ++k) {
        std::vector<FactorState> fs;
        fs.reserve(n);
        for (int j = 0; j < n; ++j) fs.push_back(FactorState{probes[j][idx[j]]});
        values[k] = oracle.eval(ProductState{std::move(fs)});
        for (int j = n - 1; j >= 0; --j) {
            if (++idx[j] < mode_sizes[j]) break;
            idx[j] = 0;
        }
    }

    for (int j = 0; j < n; ++j)
        values = detail::mode_multiply(values, maps[j].inverse, mode_sizes, j);

    // Reindex ((a_1,b_1),...,(a_n,b_n)) -> operator entry (r, s) with
    // r = flatten(a), s = flatten(b).
    Mat c = Mat::Zero(total, total);
    std::fill(idx.begin(), idx.end(), 0);
    for (int k = 0; k < grid; ++k) {
        int r = 0, s = 0;
        for (int j = 0; j < n; ++j) {
            int d = dims.factors[j];
            r = r * d + idx[j] / d;
            s = s * d + idx[j] % d;
        }
        c(r, s) = values[k];
        for (int j = n - 1; j >= 0; --j) {
            if (++idx[j] < mode_sizes[j]) break;
            idx[j] = 0;
        }
    }

    ReconstructionResult out;
    out.asymmetry = (c - c.adjoint()).norm();
    out.op = 0.5 * (c + c.adjoint());
    out.probe_condition = cond;
    return out;
}

// ---------------------------------------------------------------------------
// Born-representability as a least-squares distance

struct FitResult {
    double residual = 0.0;  // RMS over the samples at the optimum
    int samples = 0;
    bool underdetermined = false;
};

/// Least-squares minimum over Hermitian T of |oracle(p) - <x_p|T|x_p>| (RMS)
/// across M random product states. Near zero iff the oracle is
/// Born-representable on the sampled span.
inline FitResult hermitian_fit_residual(const FrameOracle& oracle, const Dims& dims, int m,
                                        std::uint64_t seed) {
    if (!(oracle.dims == dims)) throw DimensionMismatch("hermitian_fit_residual: dims mismatch");
    const int total = dims.total();
    const int params = total * total;  // real parametrization of Hermitian T
    FitResult fit;
    fit.samples = m;
    fit.underdetermined = m < params;

    Rng rng(seed);
    Eigen::MatrixXd a(m, params);
    Eigen::VectorXd y(m);
    for (int k = 0; k < m; ++k) {
        ProductState p = rng.random_product(dims);
        Vec x = tensor_expand(p, dims);
        y[k] = oracle.eval(p);
        int col = 0;
        for (int r = 0; r < total; ++r) a(k, col++) = std::norm(x[r]);
        for (int r = 0; r < total; ++r) {
            for (int s = r + 1; s < total; ++s) {
                cxd cross = std::conj(x[r]) * x[s];
                a(k, col++) = 2.0 * cross.real();   // Re T_rs
                a(k, col++) = -2.0 * cross.imag();  // Im T_rs
            }
        }
    }
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += 1e-12;
    Eigen::VectorXd theta = gram.ldlt().solve(a.transpose() * y);
    fit.residual = std::sqrt((a * theta - y).squaredNorm() / static_cast<double>(m));
    return fit;
}

}  // namespace framefn

#endif  // FRAMEFN_RECONSTRUCT_HPP
