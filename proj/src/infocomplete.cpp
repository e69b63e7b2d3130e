#include "cea/infocomplete.hpp"

#include <algorithm>
#include <map>
#include <thread>

namespace cea {

RandomVariable::RandomVariable(std::vector<std::string> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error("random variable needs n >= 1");
}

RandomVariable RandomVariable::from_effect(const ClassicalEffect& a) {
    std::vector<std::string> vals;
    for (const auto& x : a.value()) vals.push_back(to_string(x));
    return RandomVariable(std::move(vals));
}

Partition::Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks) : n_(n), owner_(n, n) {
    if (n == 0) throw Error("partition of an empty set");
    for (auto& b : blocks) {
        if (b.empty()) throw Error("partition has an empty block");
        std::sort(b.begin(), b.end());
        for (auto i : b) {
            if (i >= n) throw Error("partition element out of range");
            if (owner_[i] != n) throw Error("partition blocks overlap");
            owner_[i] = 0;
        }
    }
    if (std::find(owner_.begin(), owner_.end(), n) != owner_.end()) throw Error("partition does not cover X");
    std::sort(blocks.begin(), blocks.end());
    blocks_ = std::move(blocks);
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        for (auto i : blocks_[k]) owner_[i] = k;
}

Partition Partition::from_labels(const std::vector<std::size_t>& labels) {
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    std::vector<std::vector<std::size_t>> blocks;
    for (auto& [label, members] : groups) blocks.push_back(std::move(members));
    return Partition(labels.size(), std::move(blocks));
}

Partition Partition::discrete(std::size_t n) {
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < n; ++i) blocks.push_back({i});
    return Partition(n, std::move(blocks));
}

std::string Partition::to_string() const {
    std::string s = "{";
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (k) s += ",";
        s += "{";
        for (std::size_t j = 0; j < blocks_[k].size(); ++j) {
            if (j) s += ",";
            s += std::to_string(blocks_[k][j] + 1);
        }
        s += "}";
    }
    return s + "}";
}

Partition partition_of(const RandomVariable& f) {
    std::map<std::string, std::size_t> label;
    std::vector<std::size_t> labels;
    for (const auto& v : f.values()) labels.push_back(label.emplace(v, label.size()).first->second);
    return Partition::from_labels(labels);
}

Partition refine(const Partition& p, const Partition& q) {
    if (p.n() != q.n())
        throw Error("partition size mismatch: " + std::to_string(p.n()) + " vs " + std::to_string(q.n()));
    std::vector<std::size_t> labels(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) labels[i] = p.block_of(i) * q.blocks().size() + q.block_of(i);
    return Partition::from_labels(labels);
}

namespace {

void require_common_size(const std::vector<Partition>& ps) {
    if (ps.empty()) throw Error("need at least one random variable");
    for (const auto& p : ps)
        if (p.n() != ps.front().n()) throw Error("random variables are defined on different sets");
}

}  // namespace

bool is_complementary(const std::vector<Partition>& ps) {
    require_common_size(ps);
    Partition acc = ps.front();
    for (std::size_t k = 1; k < ps.size(); ++k) acc = refine(acc, ps[k]);
    return acc.is_discrete();
}

bool is_strongly_complementary(const std::vector<Partition>& ps) {
    require_common_size(ps);
    for (std::size_t i = 0; i < ps.front().n(); ++i)
        if (std::none_of(ps.begin(), ps.end(), [i](const Partition& p) { return p.is_singleton(i); })) return false;
    return true;
}

ICVerdict is_ic(const std::vector<Partition>& ps) {
    require_common_size(ps);
    const std::size_t n = ps.front().n();
    std::vector<RationalVector> rows;
    for (const auto& p : ps)
        for (const auto& block : p.blocks()) {
            RationalVector row(n, Rational(0));
            for (auto i : block) row[i] = 1;
            rows.push_back(std::move(row));
        }
    const auto m = RationalMatrix::from_rows(rows);
    ICVerdict verdict;
    if (rational_rank(m) == n) {
        verdict.ic = true;
        return verdict;
    }
    const RationalVector w = nullspace_basis(m).front();
    Rational peak = 0;
    for (const auto& x : w) peak = std::max<Rational>(peak, abs(x));
    const Rational base(1, n);
    const Rational scale = Rational(1) / (Rational(2 * n) * peak);
    ICWitness witness{RationalVector(n), RationalVector(n)};
    for (std::size_t i = 0; i < n; ++i) {
        witness.mu[i] = base + w[i] * scale;
        witness.nu[i] = base - w[i] * scale;
    }
    verdict.witness = std::move(witness);
    return verdict;
}

std::vector<Partition> partitions_of(const std::vector<RandomVariable>& fs) {
    std::vector<Partition> ps;
    for (const auto& f : fs) ps.push_back(partition_of(f));
    return ps;
}

bool is_complementary(const std::vector<RandomVariable>& fs) { return is_complementary(partitions_of(fs)); }
bool is_strongly_complementary(const std::vector<RandomVariable>& fs) {
    return is_strongly_complementary(partitions_of(fs));
}
ICVerdict is_ic(const std::vector<RandomVariable>& fs) { return is_ic(partitions_of(fs)); }

std::vector<std::pair<std::string, Rational>> distribution_rv(const RandomVariable& f, const RationalVector& mu) {
    if (mu.size() != f.size())
        throw Error("distribution: " + std::to_string(mu.size()) + " probabilities for " + std::to_string(f.size()) +
                    " points");
    std::vector<std::pair<std::string, Rational>> out;
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto [it, fresh] = slot.emplace(f.values()[i], out.size());
        if (fresh) out.emplace_back(f.values()[i], Rational(0));
        out[it->second].second += mu[i];
    }
    return out;
}

RationalVector block_masses(const Partition& p, const RationalVector& mu) {
    if (mu.size() != p.n()) throw Error("block_masses: length mismatch");
    RationalVector out(p.blocks().size(), Rational(0));
    for (std::size_t i = 0; i < p.n(); ++i) out[p.block_of(i)] += mu[i];
    return out;
}

namespace {

bool is_probability_vector(const RationalVector& v) {
    Rational total = 0;
    for (const auto& x : v) {
        if (sgn(x) < 0) return false;
        total += x;
    }
    return total == 1;
}

}  // namespace

bool witness_verifies(const std::vector<Partition>& ps, const ICWitness& w) {
    if (!is_probability_vector(w.mu) || !is_probability_vector(w.nu) || w.mu == w.nu) return false;
    return std::all_of(ps.begin(), ps.end(),
                       [&](const Partition& p) { return block_masses(p, w.mu) == block_masses(p, w.nu); });
}

std::vector<Partition> all_partitions(std::size_t n) {
    std::vector<Partition> out;
    if (n == 0) return out;
    // Restricted growth strings: labels[0] = 0, labels[i] <= 1 + max(labels[0..i-1]).
    std::vector<std::size_t> labels(n, 0), prefix_max(n, 0);
    while (true) {
        out.push_back(Partition::from_labels(labels));
        std::size_t i = n - 1;
        while (i > 0 && labels[i] == prefix_max[i - 1] + 1) --i;
        if (i == 0) break;
        ++labels[i];
        prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            labels[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
    return out;
}

namespace {

void sweep_pairs(const std::vector<Partition>& all, std::size_t begin, std::size_t end, SweepReport& r) {
    for (std::size_t a = begin; a < end; ++a) {
        for (const auto& q : all) {
            const std::vector<Partition> pair{all[a], q};
            const bool strong = is_strongly_complementary(pair);
            const bool comp = is_complementary(pair);
            const auto verdict = is_ic(pair);
            ++r.pairs_checked;
            if (strong && !verdict.ic) ++r.strong_not_ic;
            if (verdict.ic && !comp) ++r.ic_not_complementary;
            if (!verdict.ic && !(verdict.witness && witness_verifies(pair, *verdict.witness))) ++r.bad_witnesses;
            if (comp && !verdict.ic) {
                ++r.complementary_not_ic;
                if (!r.first_complementary_not_ic) r.first_complementary_not_ic.emplace(all[a], q);
            }
            if (verdict.ic && !strong) {
                ++r.ic_not_strong;
                if (!r.first_ic_not_strong) r.first_ic_not_strong.emplace(all[a], q);
            }
        }
    }
}

void merge_into(SweepReport& into, const SweepReport& part) {
    into.pairs_checked += part.pairs_checked;
    into.strong_not_ic += part.strong_not_ic;
    into.ic_not_complementary += part.ic_not_complementary;
    into.bad_witnesses += part.bad_witnesses;
    into.complementary_not_ic += part.complementary_not_ic;
    into.ic_not_strong += part.ic_not_strong;
    if (!into.first_complementary_not_ic) into.first_complementary_not_ic = part.first_complementary_not_ic;
    if (!into.first_ic_not_strong) into.first_ic_not_strong = part.first_ic_not_strong;
}

}  // namespace

SweepReport sweep(std::size_t max_n, unsigned workers) {
    SweepReport report;
    report.max_n = max_n;
    workers = std::max(1u, workers);
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto all = all_partitions(n);
        for (const auto& p : all) {
            const auto verdict = is_ic(std::vector<Partition>{p});
            ++report.single_checked;
            if (verdict.ic != p.is_discrete()) ++report.single_violations;
            if (!verdict.ic && !(verdict.witness && witness_verifies({p}, *verdict.witness))) ++report.bad_witnesses;
        }
        // Each worker owns a contiguous chunk of first partitions; merging in
        // chunk order keeps the reported first counterexamples deterministic.
        const std::size_t chunks = std::min<std::size_t>(workers, all.size());
        std::vector<SweepReport> parts(chunks);
        std::vector<std::thread> threads;
        const std::size_t step = (all.size() + chunks - 1) / chunks;
        for (std::size_t c = 0; c < chunks; ++c) {
            const std::size_t lo = std::min(all.size(), c * step);
            const std::size_t hi = std::min(all.size(), lo + step);
            if (chunks == 1)
                sweep_pairs(all, lo, hi, parts[c]);
            else
                threads.emplace_back(sweep_pairs, std::cref(all), lo, hi, std::ref(parts[c]));
        }
        for (auto& t : threads) t.join();
        for (const auto& part : parts) merge_into(report, part);
    }
    return report;
}

}  // namespace cea
