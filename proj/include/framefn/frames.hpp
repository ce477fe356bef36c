#ifndef FRAMEFN_FRAMES_HPP
#define FRAMEFN_FRAMES_HPP

#include <functional>

#include "framefn/bases.hpp"
#include "framefn/rng.hpp"
#include "framefn/tensor.hpp"

namespace framefn {

/// Evaluation contract for a frame function on product states, with its
/// declared weight: sums over unentangled orthonormal bases should equal w.
struct FrameOracle {
    Dims dims;
    double weight = 0.0;
    std::function<double(const ProductState&)> eval;
};

/// Born oracle f(p) = <x|T|x>, x the expansion of p. Weight = tr T.
inline FrameOracle born_oracle(const Mat& t, const Dims& dims) {
    if (t.rows() != dims.total() || t.cols() != dims.total())
        throw DimensionMismatch("born_oracle: operator size != total dimension");
    if (!is_hermitian(t, 1e-12))
        throw DimensionMismatch("born_oracle: operator is not Hermitian");
    FrameOracle f;
    f.dims = dims;
    f.weight = t.trace().real();
    f.eval = [t, dims](const ProductState& p) {
        Vec x = tensor_expand(p, dims);
        return (x.dot(t * x)).real();
    };
    return f;
}

/// Bloch vector (p_x, p_y, p_z) of a unit qubit; phase invariant, and
/// orthogonal qubits map to antipodal points.
inline Eigen::Vector3d bloch(const FactorState& a) {
    if (a.dim() != 2) throw DimensionMismatch("bloch: qubit required");
    cxd cross = std::conj(a.amp[0]) * a.amp[1];
    return {2.0 * cross.real(), 2.0 * cross.imag(),
            std::norm(a.amp[0]) - std::norm(a.amp[1])};
}

/// Qubit frame function g(a) = w1/2 + eps(bloch(a)) with eps odd, so that
/// g(a) + g(a_hat) = w1 for every a. Linear eps gives a Born form; nonlinear
/// eps gives a frame function with no Born representation.
struct QubitFrameFn {
    double weight = 1.0;
    std::function<double(const Eigen::Vector3d&)> odd_part;

    double eval(const FactorState& a) const {
        return weight / 2.0 + (odd_part ? odd_part(bloch(a)) : 0.0);
    }
};

inline QubitFrameFn qubit_frame_constant(double w1) { return {w1, nullptr}; }

inline QubitFrameFn qubit_frame_pz_cubed(double w1, double coeff) {
    return {w1, [coeff](const Eigen::Vector3d& p) { return coeff * p.z() * p.z() * p.z(); }};
}

inline QubitFrameFn qubit_frame_pz_linear(double w1, double coeff) {
    return {w1, [coeff](const Eigen::Vector3d& p) { return coeff * p.z(); }};
}

/// h(v1 (x) u) = g(v1) f(u): an unentangled frame function of weight
/// g.weight * f.weight when the first factor is a qubit.
inline FrameOracle product_frame_oracle(const QubitFrameFn& g, const FrameOracle& h) {
    FrameOracle out;
    out.dims.factors.push_back(2);
    for (int d : h.dims.factors) out.dims.factors.push_back(d);
    out.weight = g.weight * h.weight;
    Dims inner = h.dims;
    auto heval = h.eval;
    out.eval = [g, heval, inner](const ProductState& p) {
        if (p.factors.empty() || p.factors[0].dim() != 2)
            throw NotQubitFirstFactor("product_frame_oracle: first factor must be a qubit");
        ProductState rest;
        rest.factors.assign(p.factors.begin() + 1, p.factors.end());
        return g.eval(p.factors[0]) * heval(rest);
    };
    return out;
}

// ---------------------------------------------------------------------------
// Product-basis counterexample: f(u (x) v) = <v|phi(u)|v> with phi(u) PSD of
// fixed trace w0 = w / d1. Every product basis sums to w, yet for a generic
// phi no Hermitian form on the tensor space reproduces f.

enum class PsiMap {
    Modulus,       // psi(u) = normalized componentwise |u_k|, padded/truncated
    SquareEmbed,   // psi(u) = normalized componentwise u_k^2
    Constant,      // phi(u) = (w0/d2) I  (degenerate: Born)
    RandomField,   // psi(u) = normalized M |u| for a seeded Gaussian M
};

struct CounterexampleOracle {
    int d1 = 0, d2 = 0;
    double w0 = 0.0;
    std::function<Mat(const Vec&)> phi;  // PSD, trace w0

    double eval(const ProductState& p) const {
        if (p.factors.size() != 2 || p.factors[0].dim() != d1 || p.factors[1].dim() != d2)
            throw DimensionMismatch("counterexample eval: dims mismatch");
        const Vec& v = p.factors[1].amp;
        return (v.dot(phi(p.factors[0].amp) * v)).real();
    }

    FrameOracle as_oracle() const {
        FrameOracle f;
        f.dims = Dims({d1, d2});
        f.weight = d1 * w0;
        auto self = *this;
        f.eval = [self](const ProductState& p) { return self.eval(p); };
        return f;
    }
};

namespace detail {

inline Vec pad_truncate(const Vec& u, int d2) {
    Vec out = Vec::Zero(d2);
    for (int k = 0; k < std::min<int>(d2, static_cast<int>(u.size())); ++k) out[k] = u[k];
    return out;
}

}  // namespace detail

inline CounterexampleOracle counterexample_oracle(int d1, int d2, double w,
                                                  PsiMap kind = PsiMap::Modulus,
                                                  std::uint64_t seed = 0) {
    if (d1 < 2 || d2 < 2) throw DimensionMismatch("counterexample_oracle: dims must be >= 2");
    CounterexampleOracle out;
    out.d1 = d1;
    out.d2 = d2;
    out.w0 = w / d1;
    const double w0 = out.w0;

    auto rank1 = [w0, d2](Vec psi) {
        double n = psi.norm();
        if (n < 1e-12) {
            psi = Vec::Zero(d2);
            psi[0] = 1.0;
        } else {
            psi /= n;
        }
        return Mat(w0 * psi * psi.adjoint());
    };

    switch (kind) {
        case PsiMap::Modulus:
            out.phi = [rank1, d1, d2](const Vec& u) {
                Vec m = detail::pad_truncate(u, d2);
                for (int k = 0; k < d2; ++k) m[k] = std::abs(m[k]);
                return rank1(m);
            };
            break;
        case PsiMap::SquareEmbed:
            out.phi = [rank1, d2](const Vec& u) {
                Vec m = detail::pad_truncate(u, d2);
                for (int k = 0; k < d2; ++k) m[k] = m[k] * m[k];
                return rank1(m);
            };
            break;
        case PsiMap::Constant:
            out.phi = [w0, d2](const Vec&) { return Mat((w0 / d2) * Mat::Identity(d2, d2)); };
            break;
        case PsiMap::RandomField: {
            Rng rng(seed);
            Mat field = rng.gaussian_mat(d2, d1);
            out.phi = [rank1, field, d2](const Vec& u) {
                Vec m(u.size());
                for (int k = 0; k < u.size(); ++k) m[k] = std::abs(u[k]);
                return rank1(detail::pad_truncate(Vec(field * m), d2));
            };
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Statistical verification of the weight condition

struct VerifyReport {
    std::vector<double> sums;
    double mean = 0.0;
    double max_deviation = 0.0;  // max |sum - weight|
    int invalid_bases = 0;
    bool pass = false;
};

/// Evaluate the oracle over M sampled bases from `source` (seeds 0..M-1
/// offset by seed0) and compare each basis sum against the declared weight.
inline VerifyReport verify_frame(const FrameOracle& oracle,
                                 const std::function<UnentangledBasis(std::uint64_t)>& source,
                                 int m, double tol, std::uint64_t seed0 = 0,
                                 double basis_tol = 1e-10) {
    VerifyReport rep;
    for (int k = 0; k < m; ++k) {
        UnentangledBasis b = source(seed0 + static_cast<std::uint64_t>(k));
        if (!(b.dims == oracle.dims) || !check_basis(b, basis_tol).pass) {
            ++rep.invalid_bases;
            continue;
        }
        double s = 0.0;
        for (const auto& member : b.members) s += oracle.eval(member);
        rep.sums.push_back(s);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(s - oracle.weight));
    }
    if (!rep.sums.empty()) {
        double tot = 0.0;
        for (double s : rep.sums) tot += s;
        rep.mean = tot / static_cast<double>(rep.sums.size());
    }
    rep.pass = rep.invalid_bases == 0 && !rep.sums.empty() && rep.max_deviation <= tol;
    return rep;
}

/// Max change of the oracle under unit-scalar rescaling of single factors.
inline double phase_invariance_check(const FrameOracle& oracle, int samples,
                                     std::uint64_t seed = 0) {
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        ProductState p = rng.random_product(oracle.dims);
        double base = oracle.eval(p);
        for (size_t j = 0; j < p.factors.size(); ++j) {
            ProductState q = p;
            q.factors[j].amp *= rng.random_phase();
            worst = std::max(worst, std::abs(oracle.eval(q) - base));
        }
    }
    return worst;
}

}  // namespace framefn

#endif  // FRAMEFN_FRAMES_HPP
