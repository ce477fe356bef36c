#ifndef FRAMEFN_BASES_HPP
#define FRAMEFN_BASES_HPP

#include <algorithm>
#include <optional>

#include "framefn/rng.hpp"
#include "framefn/tensor.hpp"

namespace framefn {

/// Orthonormal basis of the full tensor space whose members are all product
/// states.
struct UnentangledBasis {
    Dims dims;
    std::vector<ProductState> members;
};

inline std::vector<Vec> expansions(const UnentangledBasis& b) {
    std::vector<Vec> out;
    out.reserve(b.members.size());
    for (const auto& m : b.members) out.push_back(tensor_expand(m, b.dims));
    return out;
}

inline OrthoReport check_basis(const UnentangledBasis& b, double tol = 1e-10) {
    return orthonormal_report(expansions(b), tol, /*require_basis=*/true);
}

// ---------------------------------------------------------------------------
// Generators

/// All tensor combinations of one Haar-random orthonormal basis per factor.
inline UnentangledBasis random_product_basis(const Dims& dims, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Mat> factor_bases;
    for (int d : dims.factors) {
        Mat u = rng.haar_unitary(d);
        for (int c = 0; c < d; ++c) {
            Vec col = u.col(c);
            canonicalize_phase(col);
            u.col(c) = col;
        }
        factor_bases.push_back(u);
    }
    UnentangledBasis out{dims, {}};
    const int n = dims.n();
    std::vector<int> idx(n, 0);
    for (int k = 0; k < dims.total(); ++k) {
        std::vector<FactorState> fs;
        for (int j = 0; j < n; ++j) fs.push_back(FactorState{factor_bases[j].col(idx[j])});
        out.members.push_back(ProductState{std::move(fs)});
        for (int j = n - 1; j >= 0; --j) {
            if (++idx[j] < dims.factors[j]) break;
            idx[j] = 0;
        }
    }
    return out;
}

namespace detail {

// Recursive construction: pick one factor position as the head, a random
// orthonormal basis of it, and for each head vector an independent
// unentangled basis of the remaining positions.
inline std::vector<std::vector<std::pair<int, Vec>>> mixed_rec(
        const Dims& dims, const std::vector<int>& positions, Rng& rng) {
    std::vector<std::vector<std::pair<int, Vec>>> out;
    if (positions.size() == 1) {
        int pos = positions[0];
        Mat u = rng.haar_unitary(dims.factors[pos]);
        for (int c = 0; c < u.cols(); ++c) {
            Vec col = u.col(c);
            canonicalize_phase(col);
            out.push_back({{pos, col}});
        }
        return out;
    }
    int head_idx = static_cast<int>(rng.u64() % positions.size());
    int head_pos = positions[head_idx];
    std::vector<int> rest = positions;
    rest.erase(rest.begin() + head_idx);
    Mat u = rng.haar_unitary(dims.factors[head_pos]);
    for (int c = 0; c < u.cols(); ++c) {
        Vec col = u.col(c);
        canonicalize_phase(col);
        auto sub = mixed_rec(dims, rest, rng);
        for (auto& member : sub) {
            member.emplace_back(head_pos, col);
            out.push_back(std::move(member));
        }
    }
    return out;
}

}  // namespace detail

/// Generic unentangled basis via the recursive head-factor construction.
/// Typically not a product basis.
inline UnentangledBasis mixed_unentangled_basis(const Dims& dims, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> positions(dims.n());
    for (int j = 0; j < dims.n(); ++j) positions[j] = j;
    auto raw = detail::mixed_rec(dims, positions, rng);
    UnentangledBasis out{dims, {}};
    for (auto& member : raw) {
        std::sort(member.begin(), member.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<FactorState> fs;
        for (auto& [pos, v] : member) fs.push_back(FactorState{v});
        out.members.push_back(ProductState{std::move(fs)});
    }
    rng.shuffle(out.members);
    return out;
}

/// Bipartite basis {u_ij (x) v_i}: one orthonormal basis {v_i} of the second
/// factor, and an independent first-factor basis per i.
inline UnentangledBasis reversed_structure_basis(const Dims& dims, std::uint64_t seed) {
    if (dims.n() != 2) throw DimensionMismatch("reversed_structure_basis: needs 2 factors");
    Rng rng(seed);
    const int d1 = dims.factors[0], d2 = dims.factors[1];
    Mat v = rng.haar_unitary(d2);
    UnentangledBasis out{dims, {}};
    for (int i = 0; i < d2; ++i) {
        Mat u = rng.haar_unitary(d1);
        for (int j = 0; j < d1; ++j) {
            out.members.push_back(ProductState{
                {FactorState{u.col(j)}, FactorState{v.col(i)}}});
        }
    }
    rng.shuffle(out.members);
    return out;
}

/// Block-structured unentangled basis of (2, n):
/// union over blocks i of {a_i (x) b_ij} and {a_i^perp (x) c_ij}, with
/// dim U_i = partition[i]. Shuffled, with random member phases.
inline UnentangledBasis qubit_block_basis(int n, const std::vector<int>& partition,
                                          std::uint64_t seed) {
    int sum = std::accumulate(partition.begin(), partition.end(), 0);
    if (sum != n) throw DimensionMismatch("qubit_block_basis: partition does not sum to n");
    for (size_t i = 0; i < partition.size(); ++i) {
        if (partition[i] <= 0 || (i > 0 && partition[i] > partition[i - 1]))
            throw DimensionMismatch("qubit_block_basis: partition must be positive nonincreasing");
    }
    Rng rng(seed);
    Mat split = rng.haar_unitary(n);  // columns chunked into the U_i
    UnentangledBasis out{Dims({2, n}), {}};
    int col = 0;
    for (int ni : partition) {
        Mat u_i = split.middleCols(col, ni);
        col += ni;
        FactorState a = rng.random_factor(2);
        FactorState a_hat = qubit_hat(a);
        Mat b = u_i * rng.haar_unitary(ni);
        Mat c = u_i * rng.haar_unitary(ni);
        for (int j = 0; j < ni; ++j) {
            out.members.push_back(ProductState{
                {a, FactorState{Vec(rng.random_phase() * b.col(j))}}});
            out.members.push_back(ProductState{
                {a_hat, FactorState{Vec(rng.random_phase() * c.col(j))}}});
        }
    }
    rng.shuffle(out.members);
    return out;
}

// ---------------------------------------------------------------------------
// Classification

/// True iff the members realize the full Cartesian product of one fixed ray
/// basis per factor.
inline bool is_product_basis(const UnentangledBasis& b, double ray_tol = 1e-10) {
    const int n = b.dims.n();
    std::vector<std::vector<Vec>> rays(n);     // distinct rays per factor
    std::vector<std::vector<int>> labels(b.members.size(), std::vector<int>(n, -1));
    for (size_t m = 0; m < b.members.size(); ++m) {
        for (int j = 0; j < n; ++j) {
            const Vec& a = b.members[m].factors[j].amp;
            for (size_t r = 0; r < rays[j].size(); ++r) {
                if (std::abs(overlap(rays[j][r], a)) > 1.0 - ray_tol) {
                    labels[m][j] = static_cast<int>(r);
                    break;
                }
            }
            if (labels[m][j] < 0) {
                rays[j].push_back(a);
                labels[m][j] = static_cast<int>(rays[j].size()) - 1;
            }
        }
    }
    for (int j = 0; j < n; ++j)
        if (static_cast<int>(rays[j].size()) != b.dims.factors[j]) return false;
    std::vector<std::vector<int>> seen = labels;
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

// ---------------------------------------------------------------------------
// Block decomposition of a (2, n) unentangled basis

struct BasisBlock {
    FactorState a;
    FactorState a_hat;
    std::vector<Vec> b_list;
    std::vector<Vec> c_list;
    Subspace space;  // U_i, spanned by b_list
};

struct BasisBlockDecomposition {
    std::vector<int> partition;  // n_1 >= ... >= n_r > 0
    std::vector<BasisBlock> blocks;
};

namespace detail {

constexpr double kRayTol = 1e-8;   // same-ray when |<a_i|a_j>| > 1 - kRayTol
constexpr double kOrthTol = 1e-8;  // orthogonal when |<a_i|a_j>| < kOrthTol

inline void decompose_rec(const UnentangledBasis& basis, std::vector<int> live,
                          double tol, BasisBlockDecomposition& out) {
    if (live.empty()) return;

    const auto& members = basis.members;
    auto qubit_of = [&](int i) -> const Vec& { return members[i].factors[0].amp; };
    auto second_of = [&](int i) -> const Vec& { return members[i].factors[1].amp; };

    // Group live indices into qubit-ray classes; vet every cross pair.
    std::vector<std::vector<int>> classes;
    for (int i : live) {
        bool placed = false;
        for (auto& cls : classes) {
            double ov = std::abs(overlap(qubit_of(cls[0]), qubit_of(i)));
            if (ov > 1.0 - kRayTol) {
                cls.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({i});
    }
    for (size_t p = 0; p < classes.size(); ++p) {
        for (size_t q = p + 1; q < classes.size(); ++q) {
            for (int i : classes[p]) {
                for (int j : classes[q]) {
                    double ova = std::abs(overlap(qubit_of(i), qubit_of(j)));
                    if (ova > 1.0 - kRayTol)
                        throw StructureViolation("ray classes not separated");
                    if (ova >= kOrthTol) {
                        // generic angle: second factors must be orthogonal
                        if (std::abs(overlap(second_of(i), second_of(j))) >= kOrthTol)
                            throw StructureViolation(
                                "nonorthogonal qubits with nonorthogonal second factors");
                    }
                }
            }
        }
    }

    // Maximal class and its orthogonal-ray partner.
    size_t best = 0;
    for (size_t p = 1; p < classes.size(); ++p)
        if (classes[p].size() > classes[best].size()) best = p;
    const Vec& a_ref = qubit_of(classes[best][0]);
    std::optional<size_t> partner;
    for (size_t p = 0; p < classes.size(); ++p) {
        if (p == best) continue;
        if (std::abs(overlap(a_ref, qubit_of(classes[p][0]))) < kOrthTol) {
            if (partner) throw StructureViolation("two classes orthogonal to the same qubit ray");
            partner = p;
        }
    }
    if (!partner)
        throw StructureViolation("maximal ray class has no orthogonal partner class");
    if (classes[*partner].size() != classes[best].size())
        throw StructureViolation("orthogonal ray classes have unequal sizes");

    const int m = static_cast<int>(classes[best].size());

    BasisBlock blk;
    blk.a = canonicalized(FactorState{a_ref});
    blk.a_hat = qubit_hat(blk.a);
    for (int i : classes[best]) {
        Vec h = second_of(i);
        canonicalize_phase(h);
        blk.b_list.push_back(h);
    }
    for (int i : classes[*partner]) {
        Vec h = second_of(i);
        canonicalize_phase(h);
        blk.c_list.push_back(h);
    }

    const int nh = basis.dims.factors[1];
    Mat bcols(nh, m), ccols(nh, m);
    for (int j = 0; j < m; ++j) {
        bcols.col(j) = blk.b_list[j];
        ccols.col(j) = blk.c_list[j];
    }
    Mat pb = bcols * bcols.adjoint();
    Mat pc = ccols * ccols.adjoint();
    if ((pb - pc).cwiseAbs().maxCoeff() > tol)
        throw StructureViolation("b-span and c-span differ");
    blk.space = Subspace(nh, bcols);

    // Remaining second factors must avoid U.
    std::vector<int> rest;
    for (size_t p = 0; p < classes.size(); ++p) {
        if (p == best || p == *partner) continue;
        for (int i : classes[p]) {
            if ((pb * second_of(i)).norm() > tol)
                throw StructureViolation("remaining member not orthogonal to block span");
            rest.push_back(i);
        }
    }

    out.blocks.push_back(std::move(blk));
    out.partition.push_back(m);
    decompose_rec(basis, std::move(rest), tol, out);
}

}  // namespace detail

/// Canonical block decomposition of an unentangled basis of (2, n).
inline BasisBlockDecomposition decompose_qubit_basis(const UnentangledBasis& basis,
                                                     double tol = 1e-8) {
    if (basis.dims.n() != 2 || basis.dims.factors[0] != 2)
        throw NotQubitFirstFactor("decompose_qubit_basis: dims must be (2, n)");
    auto rep = check_basis(basis, std::max(tol, 1e-10));
    if (!rep.pass)
        throw NotOrthonormal("decompose_qubit_basis: input fails orthonormality, max dev " +
                             std::to_string(rep.max_deviation));

    BasisBlockDecomposition out;
    std::vector<int> live(basis.members.size());
    for (size_t i = 0; i < live.size(); ++i) live[i] = static_cast<int>(i);
    detail::decompose_rec(basis, live, tol, out);

    // nonincreasing n_i; stable on ties (first appearance)
    std::vector<int> order(out.blocks.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return out.partition[x] > out.partition[y];
    });
    BasisBlockDecomposition sorted;
    for (int i : order) {
        sorted.partition.push_back(out.partition[i]);
        sorted.blocks.push_back(std::move(out.blocks[i]));
    }
    return sorted;
}

/// Members an input decomposition encodes, in block order.
inline std::vector<ProductState> decomposition_members(const BasisBlockDecomposition& dec) {
    std::vector<ProductState> out;
    for (const auto& blk : dec.blocks) {
        for (const auto& b : blk.b_list)
            out.push_back(ProductState{{blk.a, FactorState{b}}});
        for (const auto& c : blk.c_list)
            out.push_back(ProductState{{blk.a_hat, FactorState{c}}});
    }
    return out;
}

}  // namespace framefn

#endif  // FRAMEFN_BASES_HPP
