#pragma once
// Random variables on X = {1..n}, their level-set partitions, complementarity,
// and informational completeness decided by exact rank.

#include "cea/algebra.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cea {

class RandomVariable {
public:
    explicit RandomVariable(std::vector<std::string> values);

    /// Fuzzy-event view of a classical effect: i ↦ a_i.
    static RandomVariable from_effect(const ClassicalEffect& a);

    std::size_t size() const { return values_.size(); }
    const std::vector<std::string>& values() const { return values_; }

private:
    std::vector<std::string> values_;
};

/// Set partition of {0..n-1}, stored canonically: blocks ascending, ordered by
/// least element. Printed 1-based.
class Partition {
public:
    Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks);

    /// From a restricted-growth string (block label per element).
    static Partition from_labels(const std::vector<std::size_t>& labels);
    static Partition discrete(std::size_t n);

    std::size_t n() const { return n_; }
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    /// Block index holding element i.
    std::size_t block_of(std::size_t i) const { return owner_[i]; }

    bool is_discrete() const { return blocks_.size() == n_; }
    bool is_singleton(std::size_t i) const { return blocks_[owner_[i]].size() == 1; }

    std::string to_string() const;
    bool operator==(const Partition& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }

private:
    std::size_t n_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<std::size_t> owner_;
};

Partition partition_of(const RandomVariable& f);

/// Common refinement P ∧ Q (nonempty pairwise intersections).
Partition refine(const Partition& p, const Partition& q);

bool is_complementary(const std::vector<Partition>& ps);
bool is_strongly_complementary(const std::vector<Partition>& ps);

struct ICWitness {
    RationalVector mu;
    RationalVector nu;
};

struct ICVerdict {
    bool ic = false;
    std::optional<ICWitness> witness;
};

ICVerdict is_ic(const std::vector<Partition>& ps);

std::vector<Partition> partitions_of(const std::vector<RandomVariable>& fs);
bool is_complementary(const std::vector<RandomVariable>& fs);
bool is_strongly_complementary(const std::vector<RandomVariable>& fs);
ICVerdict is_ic(const std::vector<RandomVariable>& fs);

/// Φ_{f,μ}: value ↦ Σ{μ_i : f(i) = value}, values in order of first appearance.
std::vector<std::pair<std::string, Rational>> distribution_rv(const RandomVariable& f, const RationalVector& mu);

/// Probability of each block of p under μ.
RationalVector block_masses(const Partition& p, const RationalVector& mu);

/// True when μ ≠ ν are probability vectors giving equal block masses under every partition.
bool witness_verifies(const std::vector<Partition>& ps, const ICWitness& w);

/// Every set partition of {0..n-1} (Bell(n) of them), in restricted-growth order.
std::vector<Partition> all_partitions(std::size_t n);

struct SweepReport {
    std::size_t max_n = 0;
    std::size_t single_checked = 0;
    std::size_t single_violations = 0;  // is_ic([p]) disagrees with p discrete
    std::size_t pairs_checked = 0;
    std::size_t strong_not_ic = 0;      // strongly complementary but not IC
    std::size_t ic_not_complementary = 0;
    std::size_t bad_witnesses = 0;
    // Counterexamples to the converses.
    std::size_t complementary_not_ic = 0;
    std::size_t ic_not_strong = 0;
    std::optional<std::pair<Partition, Partition>> first_complementary_not_ic;
    std::optional<std::pair<Partition, Partition>> first_ic_not_strong;

    bool implications_hold() const {
        return single_violations == 0 && strong_not_ic == 0 && ic_not_complementary == 0 && bad_witnesses == 0;
    }
};

/// Exhaustive check over all partitions (and ordered pairs) for sizes 1..max_n.
/// `workers` > 1 splits the pair loop across threads.
SweepReport sweep(std::size_t max_n, unsigned workers = 1);

}  // namespace cea
