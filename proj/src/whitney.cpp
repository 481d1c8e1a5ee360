#include "cone/whitney.hpp"

#include "cone/error.hpp"

#include <cmath>
#include <string>

namespace cone {

double DyadicInterval::length() const { return std::ldexp(1.0, -j); }

bool are_cousins(const DyadicInterval& a, const DyadicInterval& b) {
    if (a.j != b.j || a.j < 1) return false;
    if (std::labs(a.k - b.k) <= 1) return false;
    return std::labs(a.parent().k - b.parent().k) == 1;
}

std::vector<CousinPair> whitney_cousins(int j) {
    if (j < 1 || j > 40) throw DomainError("Whitney scale must lie in [1, 40], got " + std::to_string(j));
    std::vector<CousinPair> pairs;
    const long count = 1L << j;
    for (long k = 0; k < count; ++k) {
        const DyadicInterval a{j, k};
        // Cousins lie among the children of the two parent neighbours.
        for (long pk : {a.parent().k - 1, a.parent().k + 1}) {
            if (pk < 0 || pk >= count / 2) continue;
            for (long c : {2 * pk, 2 * pk + 1}) {
                const DyadicInterval b{j, c};
                if (are_cousins(a, b)) pairs.push_back({a, b});
            }
        }
    }
    return pairs;
}

std::vector<CousinPair> whitney_decompose(int j_max) {
    std::vector<CousinPair> all;
    for (int j = 1; j <= j_max; ++j) {
        auto level = whitney_cousins(j);
        all.insert(all.end(), level.begin(), level.end());
    }
    return all;
}

DyadicInterval dyadic_interval_at(double x, int j) {
    if (!(x >= 1 && x < 2)) throw DomainError("dyadic_interval_at: x must lie in [1, 2)");
    const long k = static_cast<long>(std::floor((x - 1) * std::ldexp(1.0, j)));
    return {j, std::min(k, (1L << j) - 1)};
}

}  // namespace cone
