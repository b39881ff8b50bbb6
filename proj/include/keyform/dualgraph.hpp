#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "keyform/error.hpp"
#include "keyform/puiseux.hpp"
#include "keyform/rational.hpp"

namespace keyform {

struct DualVertex {
    std::string label;
    std::int64_t weight = 0;
    bool is_ltilde = false;
    friend bool operator==(const DualVertex&, const DualVertex&) = default;
};

/// Weighted dual graph of L~ and every exceptional curve except the last one, E*.
struct DualGraph {
    std::vector<DualVertex> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  ///< i < j, sorted
    std::vector<std::string> estar_attachment;                ///< labels of the vertices E* meets

    friend bool operator==(const DualGraph&, const DualGraph&) = default;
};

namespace detail {

/// Blow-up bookkeeping at the point where the strict transform of C currently sits.
/// C is modelled as b = a^{e_0} + a^{e_1} + ... (generic coefficients), keeping only the leading
/// exponent and the characteristic exponents after it. The axes a = 0 and b = 0 may be components.
class BlowupSimulator {
public:
    BlowupSimulator(std::vector<Rat> exps, std::int64_t line_weight) : exps_(std::move(exps)) {
        weights_.push_back(line_weight);
        a_comp_ = 0;
    }

    std::size_t count() const { return weights_.size() - 1; }
    const std::vector<std::int64_t>& weights() const { return weights_; }
    const std::set<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

    bool resolved() const {
        std::int64_t n = 1;
        for (const auto& e : exps_) n = lcm64(n, to_int64(den(e)));
        int comps = (a_comp_ >= 0) + (b_comp_ >= 0);
        if (comps != 1) return false;
        if (exps_.empty()) return n == 1 && a_comp_ >= 0;
        Rat e0 = exps_.front();
        Rat mult = Rat(n) * std::min(Rat(1), e0);
        if (mult != 1) return false;
        return a_comp_ >= 0 ? n == 1 : e0 * n == 1;
    }

    void blow_up() {
        std::size_t e = weights_.size();
        weights_.push_back(-1);
        for (int c : {a_comp_, b_comp_}) {
            if (c < 0) continue;
            weights_[static_cast<std::size_t>(c)] -= 1;
            edges_.insert(ordered(e, static_cast<std::size_t>(c)));
        }
        if (a_comp_ >= 0 && b_comp_ >= 0)
            edges_.erase(ordered(static_cast<std::size_t>(a_comp_), static_cast<std::size_t>(b_comp_)));

        const int E = static_cast<int>(e);
        if (exps_.empty() || exps_.front() > 1) {
            for (auto& x : exps_) x -= 1;
            a_comp_ = E;
        } else if (exps_.front() == 1) {
            exps_.erase(exps_.begin());
            for (auto& x : exps_) x -= 1;
            a_comp_ = E;
            b_comp_ = -1;
        } else {
            // C is tangent to a = 0; in the chart (a/b, b) swap the roles of the coordinates.
            Rat e0 = exps_.front();
            std::vector<Rat> next;
            next.push_back(Rat(1) / e0 - 1);
            for (std::size_t i = 1; i < exps_.size(); ++i) next.push_back((exps_[i] + 1 - 2 * e0) / e0);
            exps_ = std::move(next);
            b_comp_ = a_comp_;
            a_comp_ = E;
        }
    }

private:
    static std::pair<std::size_t, std::size_t> ordered(std::size_t i, std::size_t j) {
        return i < j ? std::make_pair(i, j) : std::make_pair(j, i);
    }

    std::vector<Rat> exps_;
    std::vector<std::int64_t> weights_;  ///< index 0 is L, index i is E_i
    std::set<std::pair<std::size_t, std::size_t>> edges_;
    int a_comp_ = -1;
    int b_comp_ = -1;
};

}  // namespace detail

/// Minimal embedded resolution of C + L (L the line u = 0, C with the given local pairs), followed by r
/// blow-ups at the point of C on the newest exceptional curve; E* is the last exceptional curve.
inline DualGraph build_dual_graph(const std::vector<PuiseuxPair>& pairs, std::int64_t r) {
    validate_local_pairs(pairs);
    if (r < 0) throw PreconditionError("r must be nonnegative");
    if (pairs.front().q >= pairs.front().p) throw PreconditionError("ord_u(phi) >= 1: the strict transform of L is not contractible");
    std::vector<Rat> exps;
    std::int64_t n = 1;
    for (const auto& pr : pairs) {
        n *= pr.p;
        exps.push_back(make_rat(pr.q, n));
    }
    detail::BlowupSimulator sim(exps, 1);
    while (!sim.resolved()) {
        sim.blow_up();
        if (sim.count() > 100000) throw InvariantViolation("blow-up simulation did not terminate");
    }
    for (std::int64_t i = 0; i < r; ++i) sim.blow_up();

    const std::size_t estar = sim.count();
    DualGraph g;
    for (std::size_t i = 0; i < estar; ++i)
        g.vertices.push_back({i == 0 ? "L" : "E" + std::to_string(i), sim.weights()[i], i == 0});
    for (const auto& [i, j] : sim.edges()) {
        if (j == estar) g.estar_attachment.push_back(g.vertices[i].label);
        else g.edges.emplace_back(i, j);
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// Intersection matrix: weights on the diagonal, 1 for each edge.
inline std::vector<std::vector<std::int64_t>> intersection_matrix(const DualGraph& g) {
    std::size_t n = g.vertices.size();
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = g.vertices[i].weight;
    for (const auto& [i, j] : g.edges) m[i][j] = m[j][i] = 1;
    return m;
}

/// Exact Sylvester test on -M using fraction-free elimination (the k-th pivot is the k-th leading minor).
inline bool is_negative_definite(const std::vector<std::vector<std::int64_t>>& m) {
    std::size_t n = m.size();
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = -m[i][j];
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        }
        prev = a[k][k];
    }
    return true;
}

inline nlohmann::json to_json(const DualGraph& g) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : g.vertices) v.push_back({{"label", x.label}, {"weight", x.weight}, {"is_Ltilde", x.is_ltilde}});
    nlohmann::json e = nlohmann::json::array();
    for (const auto& [i, j] : g.edges) e.push_back({i, j});
    return {{"vertices", v}, {"edges", e}, {"estar_attachment", g.estar_attachment}};
}

inline std::string export_json(const DualGraph& g) { return to_json(g).dump(); }

inline std::string export_dot(const DualGraph& g) {
    std::string s = "graph G {\n";
    for (const auto& v : g.vertices)
        s += "  \"" + v.label + "\" [label=\"w=" + std::to_string(v.weight) + "\"" + (v.is_ltilde ? ", shape=box" : "") + "];\n";
    for (const auto& [i, j] : g.edges) s += "  \"" + g.vertices[i].label + "\" -- \"" + g.vertices[j].label + "\";\n";
    return s + "}\n";
}

/// Inverse of export_json.
inline DualGraph parse_graph_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid graph JSON: ") + e.what(), e.byte);
    }
    DualGraph g;
    try {
        for (const auto& v : j.at("vertices"))
            g.vertices.push_back({v.at("label").get<std::string>(), v.at("weight").get<std::int64_t>(), v.at("is_Ltilde").get<bool>()});
        for (const auto& e : j.at("edges")) {
            auto a = e.at(0).get<std::size_t>(), b = e.at(1).get<std::size_t>();
            if (a >= g.vertices.size() || b >= g.vertices.size() || a == b) throw ParseError("invalid edge in graph JSON", 0);
            g.edges.emplace_back(std::min(a, b), std::max(a, b));
        }
        g.estar_attachment = j.at("estar_attachment").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid graph JSON: ") + e.what(), 0);
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

}  // namespace keyform
