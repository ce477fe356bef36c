#ifndef FRAMEFN_JSON_IO_HPP
#define FRAMEFN_JSON_IO_HPP

#include <json.hpp>

#include "framefn/bases.hpp"
#include "framefn/frames.hpp"
#include "framefn/reconstruct.hpp"
#include "framefn/subspaces.hpp"
#include "framefn/tensor.hpp"

namespace framefn {

// Repo-wide JSON encodings: complex scalar = [re, im]; vector = list of
// complex scalars; operator = row-major list of rows;
// ProductState = {"dims": [...], "factors": [[...], ...]};
// Subspace = {"ambient": N, "columns": [...]}.
// ordered_json keeps key order stable so outputs are byte-deterministic.

using Json = nlohmann::ordered_json;

inline Json to_json(const cxd& z) { return Json::array({z.real(), z.imag()}); }

inline cxd complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex scalar must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json to_json(const Vec& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
    return out;
}

inline Vec vec_from_json(const Json& j) {
    Vec v(static_cast<int>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = complex_from_json(j[i]);
    return v;
}

inline Json to_json(const Mat& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline Mat mat_from_json(const Json& j) {
    int rows = static_cast<int>(j.size());
    int cols = rows > 0 ? static_cast<int>(j[0].size()) : 0;
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols)
            throw std::invalid_argument("operator rows have unequal lengths");
        for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

inline Json to_json(const Dims& d) { return Json(d.factors); }

inline Dims dims_from_json(const Json& j) { return Dims(j.get<std::vector<int>>()); }

inline Json to_json(const ProductState& p) {
    Json factors = Json::array();
    for (const auto& f : p.factors) factors.push_back(to_json(f.amp));
    return Json{{"dims", to_json(p.dims())}, {"factors", factors}};
}

inline ProductState product_state_from_json(const Json& j) {
    Dims dims = dims_from_json(j.at("dims"));
    std::vector<FactorState> fs;
    for (const auto& f : j.at("factors")) fs.push_back(FactorState{vec_from_json(f)});
    ProductState p{std::move(fs)};
    if (!(p.dims() == dims)) throw DimensionMismatch("ProductState JSON: dims mismatch");
    return p;
}

inline Json to_json(const Subspace& s) {
    Json cols = Json::array();
    for (int c = 0; c < s.columns.cols(); ++c) cols.push_back(to_json(Vec(s.columns.col(c))));
    return Json{{"ambient", s.ambient}, {"columns", cols}};
}

inline Subspace subspace_from_json(const Json& j) {
    int ambient = j.at("ambient").get<int>();
    const Json& cols = j.at("columns");
    Mat m(ambient, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) m.col(static_cast<int>(c)) = vec_from_json(cols[c]);
    return Subspace(ambient, m);
}

inline Json to_json(const UnentangledBasis& b) {
    Json members = Json::array();
    for (const auto& m : b.members) members.push_back(to_json(m));
    return Json{{"dims", to_json(b.dims)}, {"members", members}};
}

inline UnentangledBasis basis_from_json(const Json& j) {
    UnentangledBasis b;
    b.dims = dims_from_json(j.at("dims"));
    for (const auto& m : j.at("members")) b.members.push_back(product_state_from_json(m));
    return b;
}

inline Json to_json(const BasisBlockDecomposition& d) {
    Json blocks = Json::array();
    for (const auto& blk : d.blocks) {
        Json b_list = Json::array(), c_list = Json::array();
        for (const auto& v : blk.b_list) b_list.push_back(to_json(v));
        for (const auto& v : blk.c_list) c_list.push_back(to_json(v));
        blocks.push_back(Json{{"a", to_json(blk.a.amp)},
                              {"a_hat", to_json(blk.a_hat.amp)},
                              {"b_list", b_list},
                              {"c_list", c_list},
                              {"subspace", to_json(blk.space)}});
    }
    return Json{{"partition", d.partition}, {"blocks", blocks}};
}

inline Json to_json(const OrthoReport& r) {
    return Json{{"max_deviation", r.max_deviation},
                {"pass", r.pass},
                {"count", r.count},
                {"ambient", r.ambient}};
}

inline Json to_json(const VerifyReport& r) {
    return Json{{"bases", r.sums.size()},
                {"mean", r.mean},
                {"max_deviation", r.max_deviation},
                {"invalid_bases", r.invalid_bases},
                {"pass", r.pass}};
}

inline Json to_json(const SearchReport& r) {
    return Json{{"best_overlap", r.best_overlap},
                {"best_restart", r.best_restart},
                {"converged", r.converged},
                {"witness", to_json(r.witness)}};
}

inline Json to_json(const EntangledSubspaceCert& c) {
    Json out{{"dims", to_json(c.dims)}, {"subspace", to_json(c.space)}};
    if (c.exact) {
        out["certificate"] = "exact-by-construction";
        out["points"] = c.points;
    } else {
        out["certificate"] = "random";
        out["seed"] = c.seed;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Oracle descriptors

inline Json born_descriptor(const Mat& t, const Dims& dims) {
    return Json{{"kind", "born"}, {"dims", to_json(dims)}, {"T", to_json(t)}};
}

inline Json qubit_product_descriptor(double w1, const std::string& eps, double coeff,
                                     const Json& inner) {
    return Json{{"kind", "qubit_product"},
                {"w1", w1},
                {"epsilon", eps},
                {"coeff", coeff},
                {"inner", inner}};
}

inline Json counterexample_descriptor(int d1, int d2, double w, const std::string& psi,
                                      std::uint64_t seed) {
    return Json{{"kind", "counterexample"},
                {"dims", Json::array({d1, d2})},
                {"w", w},
                {"psi", psi},
                {"seed", seed}};
}

inline PsiMap psi_map_from_name(const std::string& name) {
    if (name == "modulus") return PsiMap::Modulus;
    if (name == "square") return PsiMap::SquareEmbed;
    if (name == "constant") return PsiMap::Constant;
    if (name == "random") return PsiMap::RandomField;
    throw std::invalid_argument("unknown psi map: " + name);
}

inline FrameOracle oracle_from_descriptor(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "born") {
        return born_oracle(mat_from_json(j.at("T")), dims_from_json(j.at("dims")));
    }
    if (kind == "qubit_product") {
        double w1 = j.at("w1").get<double>();
        std::string eps = j.at("epsilon").get<std::string>();
        double coeff = j.value("coeff", 0.0);
        QubitFrameFn g;
        if (eps == "zero") g = qubit_frame_constant(w1);
        else if (eps == "pz_linear") g = qubit_frame_pz_linear(w1, coeff);
        else if (eps == "pz_cubed") g = qubit_frame_pz_cubed(w1, coeff);
        else throw std::invalid_argument("unknown epsilon: " + eps);
        return product_frame_oracle(g, oracle_from_descriptor(j.at("inner")));
    }
    if (kind == "counterexample") {
        const Json& d = j.at("dims");
        return counterexample_oracle(d[0].get<int>(), d[1].get<int>(), j.at("w").get<double>(),
                                     psi_map_from_name(j.value("psi", "modulus")),
                                     j.value("seed", std::uint64_t{0}))
            .as_oracle();
    }
    throw std::invalid_argument("unknown oracle kind: " + kind);
}

}  // namespace framefn

#endif  // FRAMEFN_JSON_IO_HPP
