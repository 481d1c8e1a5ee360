#pragma once

#include <vector>

namespace cone {

// [1 + k 2^-j, 1 + (k + 1) 2^-j], k < 2^j.
struct DyadicInterval {
    int j = 0;
    long k = 0;

    double length() const;
    double lo() const { return 1 + static_cast<double>(k) * length(); }
    double hi() const { return lo() + length(); }
    DyadicInterval parent() const { return {j - 1, k / 2}; }
    bool contains(double x) const { return x >= lo() && x < hi(); }
    bool operator==(const DyadicInterval&) const = default;
};

struct CousinPair {
    DyadicInterval first;
    DyadicInterval second;
};

// Same scale, not adjacent, with adjacent parents.
bool are_cousins(const DyadicInterval& a, const DyadicInterval& b);

// Ordered cousin pairs at scale j (j >= 1).
std::vector<CousinPair> whitney_cousins(int j);

// Cousin pairs at every scale 1..j_max. Their products tile the part of
// [1,2]^2 with |rho1 - rho2| > 2^{1 - j_max} and are pairwise disjoint.
std::vector<CousinPair> whitney_decompose(int j_max);

// Interval of scale j containing x in [1, 2).
DyadicInterval dyadic_interval_at(double x, int j);

}  // namespace cone
