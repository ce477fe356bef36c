#ifndef FRAMEFN_TENSOR_HPP
#define FRAMEFN_TENSOR_HPP

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace framefn {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotOrthonormal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotQubitFirstFactor : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructureViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered factor dimensions of a tensor product space.
struct Dims {
    std::vector<int> factors;

    Dims() = default;
    Dims(std::initializer_list<int> ds) : factors(ds) { check(); }
    explicit Dims(std::vector<int> ds) : factors(std::move(ds)) { check(); }

    void check() const {
        if (factors.empty()) throw DimensionMismatch("Dims: no factors");
        // d = 1 is allowed so (2, n) block bases cover n = 1
        for (int d : factors)
            if (d < 1) throw DimensionMismatch("Dims: every factor dimension must be >= 1");
    }

    int n() const { return static_cast<int>(factors.size()); }
    int total() const {
        return std::accumulate(factors.begin(), factors.end(), 1, std::multiplies<int>());
    }
    bool operator==(const Dims& o) const { return factors == o.factors; }
};

/// Unit vector in one tensor factor.
struct FactorState {
    Vec amp;

    FactorState() = default;
    explicit FactorState(Vec a) : amp(std::move(a)) {}
    int dim() const { return static_cast<int>(amp.size()); }
    double norm() const { return amp.norm(); }
};

/// Product state a_1 (x) ... (x) a_n, stored factor by factor.
struct ProductState {
    std::vector<FactorState> factors;

    ProductState() = default;
    explicit ProductState(std::vector<FactorState> fs) : factors(std::move(fs)) {}

    Dims dims() const {
        std::vector<int> ds;
        ds.reserve(factors.size());
        for (const auto& f : factors) ds.push_back(f.dim());
        return Dims(ds);
    }
};

/// Subspace of C^ambient given by orthonormal columns.
struct Subspace {
    int ambient = 0;
    Mat columns;  // ambient x dim, pairwise orthonormal

    Subspace() = default;
    Subspace(int amb, Mat cols) : ambient(amb), columns(std::move(cols)) {
        if (columns.rows() != ambient)
            throw DimensionMismatch("Subspace: column length != ambient dimension");
    }
    int dim() const { return static_cast<int>(columns.cols()); }
};

// ---------------------------------------------------------------------------

/// Hermitian inner product, conjugate-linear in the first slot.
inline cxd overlap(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw DimensionMismatch("overlap: length mismatch");
    return x.dot(y);
}

/// Fix the phase so the largest-modulus amplitude is real nonnegative
/// (ties broken by lowest index). Returns the unit scalar that was removed.
inline cxd canonicalize_phase(Vec& v) {
    int k = 0;
    double best = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        double m = std::abs(v[i]);
        if (m > best + 1e-15) { best = m; k = i; }
    }
    if (best < 1e-300) return cxd(1, 0);
    cxd phase = v[k] / best;
    v *= std::conj(phase);
    return phase;
}

inline FactorState canonicalized(const FactorState& a) {
    FactorState out = a;
    canonicalize_phase(out.amp);
    return out;
}

inline ProductState canonicalized(const ProductState& p) {
    ProductState out = p;
    for (auto& f : out.factors) canonicalize_phase(f.amp);
    return out;
}

/// Kronecker expansion, lexicographic multi-index order with factor 1 slowest.
inline Vec tensor_expand(const ProductState& p, const Dims& dims) {
    if (!(p.dims() == dims))
        throw DimensionMismatch("tensor_expand: state does not match declared Dims");
    Vec out = p.factors[0].amp;
    for (size_t j = 1; j < p.factors.size(); ++j) {
        const Vec& f = p.factors[j].amp;
        Vec next(out.size() * f.size());
        for (int a = 0; a < out.size(); ++a)
            next.segment(a * f.size(), f.size()) = out[a] * f;
        out = std::move(next);
    }
    return out;
}

inline Vec tensor_expand(const ProductState& p) { return tensor_expand(p, p.dims()); }

/// The (up to phase unique) qubit orthogonal to a, with canonical phase.
inline FactorState qubit_hat(const FactorState& a) {
    if (a.dim() != 2) throw DimensionMismatch("qubit_hat: factor dimension must be 2");
    Vec h(2);
    h[0] = -std::conj(a.amp[1]);
    h[1] = std::conj(a.amp[0]);
    FactorState out{h};
    canonicalize_phase(out.amp);
    return out;
}

struct OrthoReport {
    double max_deviation = 0.0;  // max |<v_i|v_j> - delta_ij|
    bool pass = false;
    int count = 0;
    int ambient = 0;
};

/// Gram-matrix deviation from orthonormality. When require_basis is set,
/// pass additionally demands count == ambient dimension.
inline OrthoReport orthonormal_report(const std::vector<Vec>& vectors, double tol,
                                      bool require_basis = false) {
    OrthoReport rep;
    rep.count = static_cast<int>(vectors.size());
    if (vectors.empty()) { rep.pass = !require_basis; return rep; }
    rep.ambient = static_cast<int>(vectors[0].size());
    for (size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != rep.ambient)
            throw DimensionMismatch("orthonormal_report: mixed vector lengths");
        for (size_t j = i; j < vectors.size(); ++j) {
            double target = (i == j) ? 1.0 : 0.0;
            double dev = std::abs(overlap(vectors[i], vectors[j]) - cxd(target, 0));
            rep.max_deviation = std::max(rep.max_deviation, dev);
        }
    }
    rep.pass = rep.max_deviation <= tol && (!require_basis || rep.count == rep.ambient);
    return rep;
}

inline Mat projector(const Subspace& s) {
    if (s.dim() == 0) return Mat::Zero(s.ambient, s.ambient);
    return s.columns * s.columns.adjoint();
}

/// Orthonormal basis of the orthogonal complement.
inline Subspace complement_basis(const Subspace& s) {
    const int n = s.ambient;
    const int k = s.dim();
    if (k == 0) return Subspace(n, Mat::Identity(n, n));
    if (k == n) return Subspace(n, Mat(n, 0));
    Eigen::HouseholderQR<Mat> qr(s.columns);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    return Subspace(n, q.rightCols(n - k));
}

/// Joint kernel of linear functionals (rows of `functionals`), as an
/// orthonormal-column subspace. lambda(x) = sum_i lambda_i x_i, no conjugation.
inline Subspace kernel_basis(const Mat& functionals, int ambient_dim,
                             double rank_tol = 1e-10) {
    if (functionals.cols() != 0 && functionals.cols() != ambient_dim)
        throw DimensionMismatch("kernel_basis: covector length mismatch");
    if (functionals.rows() == 0)
        return Subspace(ambient_dim, Mat::Identity(ambient_dim, ambient_dim));
    Eigen::JacobiSVD<Mat> svd(functionals, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = sv.size() > 0 ? sv[0] * rank_tol : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return Subspace(ambient_dim, svd.matrixV().rightCols(ambient_dim - rank));
}

inline bool is_hermitian(const Mat& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace framefn

#endif  // FRAMEFN_TENSOR_HPP
