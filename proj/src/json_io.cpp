#include "dg/json_io.hpp"

namespace dg {

nlohmann::json series_to_json(const WalshSeries& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [w, c] : f.sorted_terms()) {
        terms.push_back({{"gens", w.gens()}, {"re", c.real()}, {"im", c.imag()}});
    }
    return {{"session", f.session()},
            {"terms", std::move(terms)},
            {"dropped_l2", f.dropped_l2()},
            {"dropped_l1", f.dropped_l1()}};
}

WalshSeries series_from_json(const nlohmann::json& j) {
    WalshSeries f(j.at("session").get<std::uint64_t>());
    for (const auto& term : j.at("terms")) {
        std::vector<GeneratorId> gens = term.at("gens").get<std::vector<GeneratorId>>();
        Complex c{term.at("re").get<double>(), term.at("im").get<double>()};
        f.add_term(Character(std::move(gens)), c);
    }
    f.note_dropped(j.at("dropped_l1").get<double>(), j.at("dropped_l2").get<double>());
    return f;
}

}  // namespace dg
