#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "keyform/error.hpp"

namespace keyform {

/// Membership table for the semigroup Z>=0<gens> on [0, bound].
class SemigroupTable {
public:
    SemigroupTable(const std::vector<std::int64_t>& gens, std::int64_t bound) : reach_(static_cast<std::size_t>(std::max<std::int64_t>(bound, 0) + 1), false) {
        for (auto g : gens)
            if (g <= 0) throw PreconditionError("semigroup generators must be positive, got " + std::to_string(g));
        reach_[0] = true;
        for (std::size_t n = 1; n < reach_.size(); ++n)
            for (auto g : gens)
                if (static_cast<std::size_t>(g) <= n && reach_[n - static_cast<std::size_t>(g)]) {
                    reach_[n] = true;
                    break;
                }
    }

    bool contains(std::int64_t n) const {
        if (n < 0) return false;
        if (static_cast<std::size_t>(n) >= reach_.size()) throw PreconditionError("semigroup query beyond table bound");
        return reach_[static_cast<std::size_t>(n)];
    }

private:
    std::vector<bool> reach_;
};

inline bool semigroup_membership(std::int64_t n, const std::vector<std::int64_t>& gens) {
    if (n < 0) return false;
    return SemigroupTable(gens, n).contains(n);
}

/// Membership in the group Z<gens>.
inline bool group_membership(std::int64_t n, const std::vector<std::int64_t>& gens) {
    std::int64_t g = 0;
    for (auto v : gens) g = std::gcd(g, v);
    return g == 0 ? n == 0 : n % g == 0;
}

}  // namespace keyform
