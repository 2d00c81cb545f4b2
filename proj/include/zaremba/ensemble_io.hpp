#pragma once

/// Versioned JSON serialization for ensembles.  Digits and integer fields
/// round-trip exactly; real parameters round-trip through the shortest
/// double representation.

#include <fstream>
#include <string>

#include <json.hpp>

#include "zaremba/ensemble.hpp"

namespace zaremba {

inline nlohmann::json ensemble_to_json(const Ensemble& e) {
    nlohmann::json j;
    j["format"] = 1;
    j["params"] = {{"n", e.params.n},
                   {"eps0", e.params.eps0},
                   {"J", e.params.J},
                   {"mode", e.params.mode == BuildMode::strict ? "strict" : "relaxed"},
                   {"scale", e.params.scale}};
    j["alphabet"] = e.alphabet.letters();
    j["alphas"] = e.alphas;
    j["ms"] = e.ms;
    nlohmann::json factors = nlohmann::json::array();
    for (const PreEnsemble& f : e.factors) {
        nlohmann::json fj;
        fj["M"] = f.M;
        fj["L"] = f.L;
        fj["p"] = f.p;
        fj["k"] = f.k;
        nlohmann::json members = nlohmann::json::array();
        for (const Word& w : f.members) members.push_back(w.digits());
        fj["members"] = std::move(members);
        factors.push_back(std::move(fj));
    }
    j["factors"] = std::move(factors);
    return j;
}

inline Ensemble ensemble_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j["format"].get<int>() != 1)
        throw std::runtime_error("unsupported ensemble file format");
    Ensemble e;
    e.alphabet = Alphabet(j["alphabet"].get<std::vector<int>>());
    const auto& pj = j["params"];
    e.params.n = pj["n"].get<double>();
    e.params.eps0 = pj["eps0"].get<double>();
    e.params.J = pj["J"].get<int>();
    e.params.mode =
        pj["mode"].get<std::string>() == "strict" ? BuildMode::strict : BuildMode::relaxed;
    e.params.scale = pj["scale"].get<double>();
    e.alphas = j["alphas"].get<std::vector<double>>();
    e.ms = j["ms"].get<std::vector<double>>();
    for (const auto& fj : j["factors"]) {
        PreEnsemble f;
        f.M = fj["M"].get<double>();
        f.L = fj["L"].get<double>();
        f.p = fj["p"].get<int>();
        f.k = fj["k"].get<size_t>();
        f.alphabet = e.alphabet;
        for (const auto& wj : fj["members"]) f.members.push_back(Word(wj.get<std::vector<int>>()));
        e.factors.push_back(std::move(f));
    }
    return e;
}

inline void save_ensemble(const Ensemble& e, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out << ensemble_to_json(e).dump(2) << "\n";
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

inline Ensemble load_ensemble(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return ensemble_from_json(j);
}

}  // namespace zaremba
