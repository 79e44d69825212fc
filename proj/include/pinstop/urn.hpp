#pragma once

#include <cstdint>
#include <vector>

namespace pinstop {

/// Discrete urn: m balls worth -$1, p balls worth +$1.  With probability
/// `prior` draws are without replacement (the urn empties, sum pins at p - m);
/// otherwise each draw is iid from the initial composition.
struct UrnSpec {
    long long m;
    long long p;
    double prior;
};

/// DP table over draw counts.  State (j, k) = j minus-draws and k plus-draws
/// seen so far, j + k <= N = m + p; forced stop at n = N.
struct UrnValueTable {
    UrnSpec spec;
    int horizon;
    std::vector<double> values;      // triangular, idx(j,k)
    std::vector<double> posteriors;  // P(without replacement | j,k)
    std::vector<std::uint8_t> stop_flags;

    static std::size_t index(int j, int k) {
        const int n = j + k;
        return static_cast<std::size_t>(n) * (n + 1) / 2 + j;
    }
    double value(int j, int k) const { return values[index(j, k)]; }
    double posterior(int j, int k) const { return posteriors[index(j, k)]; }
    bool stops(int j, int k) const { return stop_flags[index(j, k)] != 0; }
};

/// Classical (known without-replacement) urn value V(m, p):
/// V(m', p') = max(0, m'/(m'+p') (V(m'-1,p') - 1) + p'/(m'+p') (V(m',p'-1) + 1)),
/// V(m', 0) = 0, V(0, p') = p'.  Exact rational arithmetic for m + p <= 200,
/// floating point beyond.
double shepp_value(long long m, long long p);

/// beta(p): the largest m with shepp_value(m, p) > 0 (decided exactly).
long long shepp_threshold(long long p);

/// Backward induction for the uncertain-replacement urn.  Posterior odds at
/// (j, k) are prior odds times the without-replacement vs iid likelihood
/// ratio; the predictive +1 probability is the posterior mixture of
/// (p - k)/(m + p - n) and p/(m + p).  Exact rationals for N <= 50, falling
/// factorials in log space beyond.  Ties between stop and draw resolve to stop.
UrnValueTable uncertain_urn_solve(const UrnSpec& u);

/// One balanced urn in the scaling comparison.
struct ScalingRow {
    long long p;
    double scaled_value;  // uncertain value(0,0) / sqrt(2p)
    double target;        // value_a0(0, 0, prior)
    double gap;           // |scaled_value - target|
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    bool decreasing;  // gaps decreasing along p_list
};

/// Balanced urns m = p for each p in p_list against the continuous value.
ScalingReport scaling_check(const std::vector<long long>& p_list, double prior);

} // namespace pinstop
