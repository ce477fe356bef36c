// Acceptance suite: one test case per criterion, each printing a pass/fail
// line with the measured numbers.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>

#include "framefn/bases.hpp"
#include "framefn/frames.hpp"
#include "framefn/reconstruct.hpp"
#include "framefn/subspaces.hpp"

using namespace framefn;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str());
    std::fflush(stdout);
}

Mat random_hermitian(int n, Rng& rng) {
    Mat g = rng.gaussian_mat(n, n);
    return Mat(0.5 * (g + g.adjoint()));
}

std::vector<std::vector<int>> partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int left, int max) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(left, max); k >= 1; --k) {
            cur.push_back(k);
            rec(left - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

}  // namespace

TEST_CASE("criterion 1: reconstruction round-trip") {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst33 = 0.0, worst333 = 0.0;
    Dims d33({3, 3});
    for (int k = 0; k < 50; ++k) {
        Mat t = random_hermitian(9, rng);
        auto r = reconstruct(born_oracle(t, d33), d33);
        worst33 = std::max(worst33, (r.op - t).cwiseAbs().maxCoeff());
    }
    Dims d333({3, 3, 3});
    for (int k = 0; k < 10; ++k) {
        Mat t = random_hermitian(27, rng);
        auto r = reconstruct(born_oracle(t, d333), d333);
        worst333 = std::max(worst333, (r.op - t).cwiseAbs().maxCoeff());
    }
    double secs = seconds_since(t0);
    bool pass = worst33 < 1e-9 && worst333 < 1e-8 && secs < 10.0;
    report(1, "reconstruction round-trip", pass,
           "max err (3,3)=" + std::to_string(worst33) + ", (3,3,3)=" + std::to_string(worst333) +
               ", " + std::to_string(secs) + "s");
    CHECK(worst33 < 1e-9);
    CHECK(worst333 < 1e-8);
    CHECK(secs < 10.0);
}

TEST_CASE("criterion 2: frame-sum constancy for Born oracles") {
    Rng rng(202);
    double worst = 0.0;
    bool all_pass = true;
    for (auto dims : {Dims({2, 3}), Dims({3, 3}), Dims({2, 2, 2})}) {
        Mat t = random_hermitian(dims.total(), rng);
        auto f = born_oracle(t, dims);
        std::vector<std::function<UnentangledBasis(std::uint64_t)>> families = {
            [dims](std::uint64_t s) { return random_product_basis(dims, s); },
            [dims](std::uint64_t s) { return mixed_unentangled_basis(dims, s); }};
        if (dims.n() == 2 && dims.factors[0] == 2) {
            int n = dims.factors[1];
            families.push_back([n](std::uint64_t s) {
                auto parts = partitions(n);
                return qubit_block_basis(n, parts[s % parts.size()], s);
            });
        }
        for (const auto& fam : families) {
            auto rep = verify_frame(f, fam, 1000, 1e-9);
            worst = std::max(worst, rep.max_deviation);
            all_pass = all_pass && rep.pass;
        }
    }
    report(2, "frame-sum constancy (Born)", all_pass && worst <= 1e-9,
           "max |sum - tr T| = " + std::to_string(worst) + " over 1000 bases per family");
    CHECK(all_pass);
    CHECK(worst <= 1e-9);
}

TEST_CASE("criterion 3: non-Born product frame function on (2,3)") {
    Dims d23({2, 3});
    auto f = product_frame_oracle(qubit_frame_pz_cubed(1.0, 0.3),
                                  born_oracle(Mat::Identity(3, 3), Dims({3})));
    auto parts = partitions(3);
    auto rep = verify_frame(
        f,
        [&parts](std::uint64_t s) { return qubit_block_basis(3, parts[s % parts.size()], s); },
        1000, 1e-9);
    auto fit = hermitian_fit_residual(f, d23, 2000, 303);
    bool pass = rep.pass && std::abs(rep.mean - 3.0) < 1e-9 && fit.residual > 1e-3;
    report(3, "non-Born unentangled frame function", pass,
           "max sum dev = " + std::to_string(rep.max_deviation) +
               ", fit residual = " + std::to_string(fit.residual));
    CHECK(rep.pass);
    CHECK(rep.max_deviation < 1e-9);
    CHECK(fit.residual > 1e-3);
}

TEST_CASE("criterion 4: product-basis counterexample on (3,3)") {
    Dims d33({3, 3});
    auto f = counterexample_oracle(3, 3, 9.0).as_oracle();
    auto rep = verify_frame(
        f, [](std::uint64_t s) { return random_product_basis(Dims({3, 3}), s); }, 1000, 1e-9);
    auto fit = hermitian_fit_residual(f, d33, 2000, 404);
    double best_dev = 0.0;
    for (std::uint64_t s = 0; s < 200 && best_dev <= 0.01; ++s) {
        auto b = reversed_structure_basis(d33, s);
        double sum = 0.0;
        for (const auto& m : b.members) sum += f.eval(m);
        best_dev = std::max(best_dev, std::abs(sum - 9.0));
    }
    bool pass = rep.pass && fit.residual > 1e-3 && best_dev > 0.01;
    report(4, "product-basis counterexample", pass,
           "product-basis dev = " + std::to_string(rep.max_deviation) +
               ", residual = " + std::to_string(fit.residual) +
               ", reversed-basis dev = " + std::to_string(best_dev));
    CHECK(rep.pass);
    CHECK(rep.max_deviation <= 1e-9);
    CHECK(fit.residual > 1e-3);
    CHECK(best_dev > 0.01);
}

TEST_CASE("criterion 5: block decomposition round-trip") {
    auto t0 = std::chrono::steady_clock::now();
    int runs = 0, partition_hits = 0, member_hits = 0, violations = 0;
    std::uint64_t seed = 0;
    while (runs < 500) {
        for (int n = 1; n <= 6 && runs < 500; ++n) {
            for (const auto& part : partitions(n)) {
                if (runs >= 500) break;
                auto basis = qubit_block_basis(n, part, seed++);
                ++runs;
                try {
                    auto dec = decompose_qubit_basis(basis);
                    if (dec.partition == part) ++partition_hits;
                    auto emitted = decomposition_members(dec);
                    bool ok = emitted.size() == basis.members.size();
                    std::vector<bool> used(emitted.size(), false);
                    for (const auto& m : basis.members) {
                        Vec x = tensor_expand(m, basis.dims);
                        bool hit = false;
                        for (size_t i = 0; i < emitted.size(); ++i) {
                            if (used[i]) continue;
                            if (std::abs(std::abs(overlap(x, tensor_expand(emitted[i],
                                                                           basis.dims))) -
                                         1.0) < 1e-9) {
                                used[i] = true;
                                hit = true;
                                break;
                            }
                        }
                        ok = ok && hit;
                    }
                    if (ok) ++member_hits;
                } catch (const StructureViolation&) {
                    ++violations;
                }
            }
        }
    }
    double secs = seconds_since(t0);
    bool pass = partition_hits == runs && member_hits == runs && violations == 0 && secs < 5.0;
    report(5, "block decomposition round-trip", pass,
           std::to_string(partition_hits) + "/" + std::to_string(runs) +
               " partitions, " + std::to_string(member_hits) + " member matches, " +
               std::to_string(violations) + " violations, " + std::to_string(secs) + "s");
    CHECK(partition_hits == runs);
    CHECK(member_hits == runs);
    CHECK(violations == 0);
    CHECK(secs < 5.0);
}

TEST_CASE("criterion 6: entangled-dimension bound and attainment") {
    bool dims_ok = max_entangled_dim(Dims({2, 2})) == 1 && max_entangled_dim(Dims({2, 3})) == 2 &&
                   max_entangled_dim(Dims({3, 3})) == 4 &&
                   max_entangled_dim(Dims({2, 2, 2})) == 4 &&
                   max_entangled_dim(Dims({3, 3, 3})) == 20;
    bool attained = true;
    for (auto dims : {Dims({2, 2}), Dims({2, 3}), Dims({3, 3}), Dims({2, 2, 2}), Dims({3, 3, 3})})
        attained = attained && vandermonde_subspace(dims).space.dim() == max_entangled_dim(dims);

    auto cert33 = vandermonde_subspace(Dims({3, 3}));
    SearchOptions opts;
    opts.restarts = 200;
    opts.seed = 606;
    opts.stop_at = 2.0;  // exhaust all restarts
    auto rep = product_overlap_search(cert33.space, Dims({3, 3}), opts);

    auto cert23 = vandermonde_subspace(Dims({2, 3}));
    auto exact = exact_rank1_test_small(cert23.space, Dims({2, 3}));

    bool pass = dims_ok && attained && rep.best_overlap < 0.999 && !exact.found;
    report(6, "bound and attainment", pass,
           "search best_overlap = " + std::to_string(rep.best_overlap) +
               ", (2,3) exact product vector: " + (exact.found ? "found" : "none"));
    CHECK(dims_ok);
    CHECK(attained);
    CHECK(rep.best_overlap < 0.999);
    CHECK_FALSE(exact.found);
}

TEST_CASE("criterion 7: bound sharpness converse") {
    int found = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Subspace sub = random_subspace(9, 5, 700 + s);
        SearchOptions opts;
        opts.restarts = 100;
        opts.seed = s;
        auto rep = product_overlap_search(sub, Dims({3, 3}), opts);
        if (rep.best_overlap > 1.0 - 1e-6) ++found;
    }
    int exact_found = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto v = exact_rank1_test_small(random_subspace(4, 2, 7000 + s), Dims({2, 2}));
        if (v.found) ++exact_found;
    }
    bool pass = found >= 99 && exact_found == 100;
    report(7, "bound sharpness converse", pass,
           "search found " + std::to_string(found) + "/100 on (3,3) dim 5; exact found " +
               std::to_string(exact_found) + "/100 on (2,2) dim 2");
    CHECK(found >= 99);
    CHECK(exact_found == 100);
}

TEST_CASE("criterion 8: exact and numeric oracles agree") {
    int agree = 0, disagree = 0, inconclusive = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        Dims dims = (s % 2 == 0) ? Dims({2, 2}) : Dims({2, 3});
        int sub_dim = 1 + static_cast<int>((s / 2) % 2);
        Subspace sub = random_subspace(dims.total(), sub_dim, 800 + s);
        auto exact = exact_rank1_test_small(sub, dims);
        SearchOptions opts;
        opts.restarts = 100;
        opts.seed = s;
        auto rep = product_overlap_search(sub, dims, opts);
        if (rep.best_overlap > 1.0 - 1e-6)
            (exact.found ? agree : disagree)++;
        else if (rep.best_overlap < 1.0 - 1e-3)
            (!exact.found ? agree : disagree)++;
        else
            ++inconclusive;
    }
    bool pass = disagree == 0;
    report(8, "oracle agreement", pass,
           std::to_string(agree) + " agree, " + std::to_string(disagree) + " disagree, " +
               std::to_string(inconclusive) + " inconclusive (excluded)");
    CHECK(disagree == 0);
    CHECK(agree + inconclusive == 200);
}
