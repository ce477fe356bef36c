#ifndef FRAMEFN_SUBSPACES_HPP
#define FRAMEFN_SUBSPACES_HPP

#include <optional>

#include "framefn/rng.hpp"
#include "framefn/tensor.hpp"

namespace framefn {

/// Largest possible dimension of a subspace containing no nonzero product
/// vector: prod d_j - sum (d_j - 1) - 1.
inline int max_entangled_dim(const Dims& dims) {
    int s = 0;
    for (int d : dims.factors) s += d - 1;
    return dims.total() - s - 1;
}

/// Number of functionals needed to cut the product-vector cone down to 0.
inline int segre_cone_dim(const Dims& dims) {
    int s = 1;
    for (int d : dims.factors) s += d - 1;
    return s;
}

// ---------------------------------------------------------------------------
// Explicit attainment: total-degree Vandermonde functionals
// lambda_t(x) = sum_I x_I t^{|I|}, |I| the sum of 0-based factor indices.
// On a product vector, lambda_t factorizes into per-factor polynomials of
// joint degree <= d-1; vanishing at d distinct points forces a zero factor.
// Hence the joint kernel contains no nonzero product vector, exactly.

struct EntangledSubspaceCert {
    Dims dims;
    Subspace space;
    std::vector<double> points;  // nonempty iff exact-by-construction
    std::uint64_t seed = 0;      // used when randomly generated instead
    bool exact = false;
};

inline Mat vandermonde_functionals(const Dims& dims, const std::vector<double>& points) {
    const int total = dims.total();
    const int n = dims.n();
    Mat rows(static_cast<int>(points.size()), total);
    for (size_t k = 0; k < points.size(); ++k) {
        std::vector<int> idx(n, 0);
        for (int flat = 0; flat < total; ++flat) {
            int degree = 0;
            for (int v : idx) degree += v;
            rows(static_cast<int>(k), flat) = std::pow(points[k], degree);
            for (int j = n - 1; j >= 0; --j) {
                if (++idx[j] < dims.factors[j]) break;
                idx[j] = 0;
            }
        }
    }
    return rows;
}

inline EntangledSubspaceCert vandermonde_subspace(const Dims& dims,
                                                  std::vector<double> points = {}) {
    const int d = segre_cone_dim(dims);
    if (points.empty())
        for (int k = 1; k <= d; ++k) points.push_back(static_cast<double>(k));
    if (static_cast<int>(points.size()) != d)
        throw DimensionMismatch("vandermonde_subspace: need exactly " + std::to_string(d) +
                                " points");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw DimensionMismatch("vandermonde_subspace: repeated points");

    EntangledSubspaceCert cert;
    cert.dims = dims;
    cert.points = points;
    cert.exact = true;
    cert.space = kernel_basis(vandermonde_functionals(dims, points), dims.total());
    if (cert.space.dim() != max_entangled_dim(dims))
        throw std::logic_error("vandermonde_subspace: kernel dimension off the bound");
    return cert;
}

/// Haar-random subspace of the given dimension.
inline Subspace random_subspace(int ambient, int dim, std::uint64_t seed) {
    Rng rng(seed);
    return Subspace(ambient, Mat(rng.haar_unitary(ambient).leftCols(dim)));
}

// ---------------------------------------------------------------------------
// Numeric search for product vectors: alternating maximization of <x|P|x>
// over unit product x. Each factor update solves an exact Hermitian
// eigenproblem, so the objective never decreases within a restart.

struct SearchOptions {
    int restarts = 100;
    int max_iters = 500;
    double tol = 1e-12;
    std::uint64_t seed = 0;
    double stop_at = 1.0 - 1e-12;  // early exit once this overlap is reached
};

struct SearchReport {
    double best_overlap = 0.0;  // max ||P x|| over unit product x found
    ProductState witness;
    int best_restart = -1;
    bool converged = false;
    std::vector<std::vector<double>> traces;  // objective per sweep, per restart
};

namespace detail {

inline double search_objective(const Mat& p, const ProductState& x, const Dims& dims) {
    Vec v = tensor_expand(x, dims);
    return (v.dot(p * v)).real();
}

// Partial contraction of P over all factors but j, at the current iterate.
inline Mat factor_quadratic_form(const Mat& p, const ProductState& x, const Dims& dims, int j) {
    const int d = dims.factors[j];
    std::vector<Vec> unit(d);
    for (int a = 0; a < d; ++a) {
        ProductState e = x;
        e.factors[j].amp = Vec::Zero(d);
        e.factors[j].amp[a] = 1.0;
        unit[a] = tensor_expand(e, dims);
    }
    Mat m(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) m(a, b) = unit[a].dot(p * unit[b]);
    return Mat(0.5 * (m + m.adjoint()));
}

}  // namespace detail

inline SearchReport product_overlap_search(const Subspace& s, const Dims& dims,
                                           const SearchOptions& opts = {},
                                           const std::vector<ProductState>* inits = nullptr) {
    if (s.ambient != dims.total())
        throw DimensionMismatch("product_overlap_search: subspace/dims mismatch");
    const Mat p = projector(s);
    const int n = dims.n();
    Rng rng(opts.seed);

    SearchReport best;
    for (int r = 0; r < opts.restarts; ++r) {
        ProductState x = (inits && r < static_cast<int>(inits->size()))
                             ? (*inits)[static_cast<size_t>(r)]
                             : rng.random_product(dims);
        double obj = detail::search_objective(p, x, dims);
        std::vector<double> trace{obj};
        bool converged = false;
        for (int it = 0; it < opts.max_iters; ++it) {
            for (int j = 0; j < n; ++j) {
                Mat form = detail::factor_quadratic_form(p, x, dims, j);
                Eigen::SelfAdjointEigenSolver<Mat> es(form);
                x.factors[j].amp = es.eigenvectors().col(form.rows() - 1);
            }
            double next = detail::search_objective(p, x, dims);
            trace.push_back(next);
            if (next - obj < opts.tol) {
                obj = next;
                converged = true;
                break;
            }
            obj = next;
        }
        best.traces.push_back(std::move(trace));
        double ov = std::sqrt(std::max(0.0, obj));
        if (best.best_restart < 0 || ov > best.best_overlap) {
            best.best_overlap = ov;
            best.witness = canonicalized(x);
            best.best_restart = r;
            best.converged = converged;
        }
        if (best.best_overlap >= opts.stop_at) break;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Exact rank-1 detection for small bipartite subspaces via 2x2 minors.
// Reshape each basis vector to a 2 x d2 matrix; a vector is a product vector
// iff its matrix has rank <= 1. For a pencil alpha A + beta B each minor is a
// binary quadratic form; product vectors correspond to common projective
// roots.

struct Rank1Verdict {
    bool found = false;
    std::optional<ProductState> witness;
    std::string detail;
};

namespace detail {

inline Mat reshape_2xd(const Vec& x, int d2) {
    Mat m(2, d2);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < d2; ++k) m(i, k) = x[i * d2 + k];
    return m;
}

inline std::optional<ProductState> rank1_factorize(const Vec& x, int d2, double tol) {
    Mat m = reshape_2xd(x, d2);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()[1] > tol * std::max(1.0, svd.singularValues()[0]))
        return std::nullopt;
    Vec h1 = svd.matrixU().col(0);
    Vec h2 = svd.singularValues()[0] * svd.matrixV().col(0).conjugate();
    h2.normalize();
    return canonicalized(ProductState{{FactorState{h1}, FactorState{Vec(h2)}}});
}

// Roots of a*g^2 + b*g + c = 0 in gamma = alpha/beta, plus the point at
// infinity (beta = 0) when a == 0. Returned as (alpha, beta) pairs.
inline std::vector<std::pair<cxd, cxd>> quadratic_projective_roots(cxd a, cxd b, cxd c,
                                                                   double scale_tol) {
    std::vector<std::pair<cxd, cxd>> roots;
    double mag = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (mag < scale_tol) return roots;  // identically zero: caller handles
    if (std::abs(a) < scale_tol * mag) {
        roots.emplace_back(cxd(1, 0), cxd(0, 0));  // infinity
        if (std::abs(b) >= scale_tol * mag) roots.emplace_back(-c / b, cxd(1, 0));
        return roots;
    }
    cxd disc = std::sqrt(b * b - 4.0 * a * c);
    roots.emplace_back((-b + disc) / (2.0 * a), cxd(1, 0));
    roots.emplace_back((-b - disc) / (2.0 * a), cxd(1, 0));
    return roots;
}

}  // namespace detail

/// Exact product-vector detection for bipartite subspaces with a qubit first
/// factor and dim <= 2.
inline Rank1Verdict exact_rank1_test_small(const Subspace& s, const Dims& dims,
                                           double tol = 1e-9) {
    if (dims.n() != 2 || dims.factors[0] != 2)
        throw DimensionMismatch("exact_rank1_test_small: dims must be (2, d2)");
    if (s.ambient != dims.total() || s.dim() < 1 || s.dim() > 2)
        throw DimensionMismatch("exact_rank1_test_small: subspace dim must be 1 or 2");
    const int d2 = dims.factors[1];

    Rank1Verdict verdict;
    if (s.dim() == 1) {
        auto w = detail::rank1_factorize(s.columns.col(0), d2, tol);
        verdict.found = w.has_value();
        verdict.witness = w;
        verdict.detail = verdict.found ? "basis vector has rank-1 reshape"
                                       : "nonvanishing 2x2 minor";
        return verdict;
    }

    Mat a = detail::reshape_2xd(s.columns.col(0), d2);
    Mat b = detail::reshape_2xd(s.columns.col(1), d2);

    // Minor (k,l) of alpha A + beta B as a binary quadratic
    // qa*alpha^2 + qb*alpha*beta + qc*beta^2.
    struct Quad { cxd qa, qb, qc; };
    std::vector<Quad> quads;
    double scale = 0.0;
    for (int k = 0; k < d2; ++k) {
        for (int l = k + 1; l < d2; ++l) {
            Quad q;
            q.qa = a(0, k) * a(1, l) - a(0, l) * a(1, k);
            q.qc = b(0, k) * b(1, l) - b(0, l) * b(1, k);
            q.qb = a(0, k) * b(1, l) + b(0, k) * a(1, l) - a(0, l) * b(1, k) - b(0, l) * a(1, k);
            quads.push_back(q);
            scale = std::max({scale, std::abs(q.qa), std::abs(q.qb), std::abs(q.qc)});
        }
    }

    auto witness_from = [&](cxd alpha, cxd beta) {
        Vec x = alpha * s.columns.col(0) + beta * s.columns.col(1);
        double nrm = x.norm();
        if (nrm < 1e-12) return std::optional<ProductState>{};
        x /= nrm;
        return detail::rank1_factorize(x, d2, 1e-7);
    };

    if (scale < tol) {
        // Every pencil member has rank <= 1.
        verdict.found = true;
        verdict.witness = witness_from(cxd(1, 0), cxd(0, 0));
        verdict.detail = "all pencil minors vanish identically";
        return verdict;
    }

    // Roots of the first non-degenerate quadratic, checked against the rest.
    size_t lead = 0;
    double lead_mag = 0.0;
    for (size_t i = 0; i < quads.size(); ++i) {
        double m = std::max({std::abs(quads[i].qa), std::abs(quads[i].qb), std::abs(quads[i].qc)});
        if (m > lead_mag) { lead_mag = m; lead = i; }
    }
    auto roots = detail::quadratic_projective_roots(quads[lead].qa, quads[lead].qb,
                                                    quads[lead].qc, tol / scale);
    for (auto [alpha, beta] : roots) {
        double mag = std::max(std::abs(alpha), std::abs(beta));
        alpha /= mag;
        beta /= mag;
        bool common = true;
        for (const auto& q : quads) {
            cxd val = q.qa * alpha * alpha + q.qb * alpha * beta + q.qc * beta * beta;
            if (std::abs(val) > 1e-7 * scale) { common = false; break; }
        }
        if (!common) continue;
        if (auto w = witness_from(alpha, beta)) {
            verdict.found = true;
            verdict.witness = w;
            verdict.detail = "common projective root of all pencil minors";
            return verdict;
        }
    }
    verdict.detail = "no common root of the pencil minors";
    return verdict;
}

// ---------------------------------------------------------------------------
// Combined verdict

enum class VerdictKind {
    CertifiedEntangled,
    NumericallyEntangled,
    ContainsProduct,
    Inconclusive,
};

struct VerdictPolicy {
    double found_threshold = 1.0 - 1e-6;
    double entangled_threshold = 1.0 - 1e-3;
    int min_restarts = 100;
};

struct EntangledVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double best_overlap = 0.0;
    std::optional<ProductState> witness;
    std::string detail;
};

inline EntangledVerdict entangled_verdict(const Subspace& s, const Dims& dims,
                                          const EntangledSubspaceCert* cert = nullptr,
                                          VerdictPolicy policy = {},
                                          SearchOptions opts = {}) {
    EntangledVerdict v;
    // Exact routes first.
    if (dims.n() == 2 && dims.factors[0] == 2 && s.dim() >= 1 && s.dim() <= 2) {
        auto exact = exact_rank1_test_small(s, dims);
        if (exact.found) {
            v.kind = VerdictKind::ContainsProduct;
            v.witness = exact.witness;
            v.best_overlap = 1.0;
            v.detail = "exact minor test: " + exact.detail;
            return v;
        }
        v.kind = VerdictKind::CertifiedEntangled;
        v.detail = "exact minor test: " + exact.detail;
        return v;
    }
    if (cert && cert->exact) {
        v.kind = VerdictKind::CertifiedEntangled;
        v.detail = "exact by construction (Vandermonde functionals)";
        return v;
    }

    opts.restarts = std::max(opts.restarts, policy.min_restarts);
    auto rep = product_overlap_search(s, dims, opts);
    v.best_overlap = rep.best_overlap;
    if (rep.best_overlap > policy.found_threshold) {
        v.kind = VerdictKind::ContainsProduct;
        v.witness = rep.witness;
        v.detail = "search found a product vector";
    } else if (rep.best_overlap < policy.entangled_threshold) {
        v.kind = VerdictKind::NumericallyEntangled;
        v.detail = "search stayed below the entangled threshold";
    } else {
        v.kind = VerdictKind::Inconclusive;
        v.detail = "best overlap in the inconclusive band";
    }
    return v;
}

}  // namespace framefn

#endif  // FRAMEFN_SUBSPACES_HPP
