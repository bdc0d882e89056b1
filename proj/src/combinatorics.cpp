#include "qpatt/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace qpatt {

namespace {

void collect_partitions(int remaining, int n, int min_part, int max_part,
                        std::vector<int>& current, std::vector<IntegerPartition>& out) {
    if (n == 0) {
        if (remaining == 0)
            out.push_back({current});
        return;
    }
    // parts are emitted non-increasing, largest first
    const int upper = std::min(max_part, remaining - min_part * (n - 1));
    for (int part = upper; part >= min_part; --part) {
        current.push_back(part);
        collect_partitions(remaining - part, n - 1, min_part, part, current, out);
        current.pop_back();
    }
}

// exact maximum of prod(parts) over compositions of s into n positive parts:
// the most-equal split
BigCount balanced_product(int s, int n) {
    const int lo = s / n;
    const int hi_count = s % n;
    BigCount out = 1;
    for (int i = 0; i < n - hi_count; ++i)
        out *= lo;
    for (int i = 0; i < hi_count; ++i)
        out *= lo + 1;
    return out;
}

BigCount pow_big(int base, int exp) {
    BigCount out = 1;
    for (int i = 0; i < exp; ++i)
        out *= base;
    return out;
}

} // namespace

int IntegerPartition::sum() const {
    return std::accumulate(parts.begin(), parts.end(), 0);
}

std::vector<IntegerPartition> partitions(int m, int n, int min_part) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("partitions: m and n must be positive");
    std::vector<IntegerPartition> out;
    if (min_part * n > m)
        return out;
    std::vector<int> current;
    collect_partitions(m, n, std::max(min_part, 1), m, current, out);
    return out;
}

BigCount factorial(int n) {
    if (n < 0)
        throw std::invalid_argument("factorial: negative argument");
    BigCount out = 1;
    for (int i = 2; i <= n; ++i)
        out *= i;
    return out;
}

BigCount binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    BigCount out = 1;
    for (int i = 0; i < k; ++i) {
        out *= n - i;
        out /= i + 1;
    }
    return out;
}

BigCount multinomial_tilde(int m, const IntegerPartition& x) {
    if (x.sum() != m)
        throw std::invalid_argument("multinomial_tilde: parts must sum to m");
    BigCount numer = factorial(m);
    std::map<int, int> size_multiplicity;
    for (int part : x.parts) {
        if (part < 1)
            throw std::invalid_argument("multinomial_tilde: parts must be positive");
        numer /= factorial(part);
        ++size_multiplicity[part];
    }
    for (const auto& [size, count] : size_multiplicity)
        numer /= factorial(count);
    return numer;
}

BigCount stirling_assoc(int k, int m, int n) {
    if (k < 1)
        throw std::invalid_argument("stirling_assoc: minimum block size must be >= 1");
    if (m < 0 || n < 0)
        return 0;
    if (n == 0)
        return m == 0 ? BigCount(1) : BigCount(0);
    if (m < static_cast<long long>(k) * n)
        return 0;

    // local DP over (rows m' x cols n'); no shared state, safe to call from
    // any thread
    std::vector<std::vector<BigCount>> table(static_cast<std::size_t>(m) + 1,
                                             std::vector<BigCount>(static_cast<std::size_t>(n) + 1, 0));
    table[0][0] = 1;
    for (int mm = 1; mm <= m; ++mm) {
        for (int nn = 1; nn <= n; ++nn) {
            if (mm < k * nn)
                continue;
            BigCount value = nn * table[static_cast<std::size_t>(mm - 1)][static_cast<std::size_t>(nn)];
            if (mm >= k)
                value += binomial(mm - 1, k - 1) *
                         table[static_cast<std::size_t>(mm - k)][static_cast<std::size_t>(nn - 1)];
            table[static_cast<std::size_t>(mm)][static_cast<std::size_t>(nn)] = std::move(value);
        }
    }
    return table[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
}

BigCount degeneracy_S(int m) {
    if (m < 2)
        throw std::invalid_argument("degeneracy_S: need m >= 2 for a valid block");
    BigCount total = 0;
    for (int n = 1; n <= m / 2; ++n)
        total += stirling_assoc(2, m, n);
    return total;
}

BigCount degeneracy_SK(int m) {
    if (m < 2)
        throw std::invalid_argument("degeneracy_SK: need m >= 2 for a valid block");
    BigCount total = 0;
    for (int n = 1; n <= m / 2; ++n) {
        for (const auto& x : partitions(m, n, 2)) {
            BigCount choices = 1;
            for (int part : x.parts)
                choices *= part - 1;
            total += multinomial_tilde(m, x) * choices;
        }
    }
    return total;
}

BigCount degeneracy_S_given_K(int m, std::vector<int> k_values) {
    if (k_values.empty())
        throw std::invalid_argument("degeneracy_S_given_K: empty target assignment");
    for (int k : k_values)
        if (k < 1)
            throw std::invalid_argument("degeneracy_S_given_K: target counts must be >= 1");
    std::sort(k_values.begin(), k_values.end(), std::greater<>());
    const int n = static_cast<int>(k_values.size());

    BigCount total = 0;
    for (const auto& x : partitions(m, n, 2)) {
        bool feasible = true;
        for (int j = 0; j < n; ++j) {
            // parts are descending; sorted alignment decides matchability
            if (x.parts[static_cast<std::size_t>(j)] < k_values[static_cast<std::size_t>(j)] + 1) {
                feasible = false;
                break;
            }
        }
        if (feasible)
            total += multinomial_tilde(m, x);
    }
    return total;
}

BigCount degeneracy_K_given_S(const std::vector<int>& block_sizes) {
    if (block_sizes.empty())
        throw std::invalid_argument("degeneracy_K_given_S: empty partition");
    BigCount total = 1;
    for (int size : block_sizes) {
        if (size < 2)
            throw std::invalid_argument("degeneracy_K_given_S: block sizes must be >= 2");
        total *= size - 1;
    }
    return total;
}

BigCount g_K_given_S(int m) {
    if (m < 2)
        throw std::invalid_argument("g_K_given_S: need m >= 2 for a valid block");
    if (m <= 7)
        return m - 1;
    if (m % 5 == 0)
        return pow_big(4, m / 5);

    // Blocks of size 4 and 5: ceil(m/5) blocks, each unit of the deficit
    // 5 - (m mod 5) turning one block from 5 to 4. Feasible only while the
    // deficit does not exceed the block count; otherwise fall back to the
    // exact maximum over all admissible partitions.
    const int blocks = (m + 4) / 5;
    const int deficit = 5 - m % 5;
    if (deficit <= blocks)
        return pow_big(4, blocks - deficit) * pow_big(3, deficit);

    BigCount best = 0;
    for (int n = 1; n <= m / 2; ++n)
        best = std::max(best, balanced_product(m - n, n));
    return best;
}

} // namespace qpatt
