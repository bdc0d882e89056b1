// Exact-integer counting of locality/target-assignment scheme degeneracy:
// restricted integer partitions, shuffle-invariant multinomials, associated
// Stirling numbers, and the conditional degeneracy counts built from them.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace qpatt {

// Exact arbitrary-precision count; the degeneracies grow super-exponentially.
using BigCount = boost::multiprecision::cpp_int;

// Non-increasing positive parts summing to m.
struct IntegerPartition {
    std::vector<int> parts;

    int sum() const;
    bool operator==(const IntegerPartition&) const = default;
};

// All partitions of m into exactly n parts, each part >= min_part, in
// descending lexicographic order. Empty when infeasible.
std::vector<IntegerPartition> partitions(int m, int n, int min_part);

BigCount factorial(int n);
BigCount binomial(int n, int k);

// Number of unordered set partitions of m labelled modes whose block-size
// profile is x: the multinomial m!/prod(x_j!) with shuffle-equivalent
// orderings of equal-size parts divided out.
BigCount multinomial_tilde(int m, const IntegerPartition& x);

// Associated Stirling number of the second kind: set partitions of m
// labelled elements into n blocks, every block of size >= k. Recurrence
// S_k^m(n) = n*S_k^{m-1}(n) + C(m-1, k-1)*S_k^{m-k}(n-1) with S_k^0(0) = 1,
// S_k^m(0) = 0 for m > 0, and S_k^m(n) = 0 whenever m < k*n.
BigCount stirling_assoc(int k, int m, int n);

// Number of admissible locality partitions of m modes (every block >= 2).
BigCount degeneracy_S(int m);

// Number of (partition, target-assignment) scheme pairs over m modes.
BigCount degeneracy_SK(int m);

// Partitions compatible with a known target assignment K: block sizes must
// dominate k_j + 1 under sorted alignment (equivalent to the existence of a
// valid block-to-constraint matching). Zero when infeasible.
BigCount degeneracy_S_given_K(int m, std::vector<int> k_values);

// Target assignments compatible with a known partition: prod(|s_j| - 1).
BigCount degeneracy_K_given_S(const std::vector<int>& block_sizes);

// Maximum of prod(x_j - 1) over partitions of m with parts >= 2: closed
// form via blocks of size 4 and 5 where that tiling exists, exact
// balanced-split maximum otherwise. Always an exact integer.
BigCount g_K_given_S(int m);

} // namespace qpatt
