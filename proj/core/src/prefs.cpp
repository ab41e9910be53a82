#include "stablecut/prefs.hpp"

#include <algorithm>
#include <utility>

namespace stablecut {

PreferenceStructure::PreferenceStructure(Interval domain, std::vector<Permutation> women_rank,
                                         std::vector<Permutation> men_rank)
    : domain_(domain), women_rank_(std::move(women_rank)), men_rank_(std::move(men_rank)) {
    if (domain_.is_empty()) throw EmptySubset("preference domain must be nonempty");
    const size_t n = static_cast<size_t>(domain_.size());
    if (women_rank_.size() != n || men_rank_.size() != n)
        throw DomainMismatch("need one ranking per person on " + domain_.str());
    for (const auto& r : women_rank_)
        if (r.domain() != domain_) throw DomainMismatch("woman ranking domain " + r.domain().str() + " != " + domain_.str());
    for (const auto& r : men_rank_)
        if (r.domain() != domain_) throw DomainMismatch("man ranking domain " + r.domain().str() + " != " + domain_.str());
}

const Permutation& PreferenceStructure::ranking(const Person& who) const {
    if (!domain_.contains(who.index))
        throw OutOfDomain("person " + std::to_string(who.index) + " not in " + domain_.str());
    const size_t k = static_cast<size_t>(who.index - domain_.lo);
    return who.role == Role::Woman ? women_rank_[k] : men_rank_[k];
}

const Permutation& PreferenceStructure::woman_ranking(int index) const { return ranking({index, Role::Woman}); }
const Permutation& PreferenceStructure::man_ranking(int index) const { return ranking({index, Role::Man}); }

PreferenceStructure identity_prefs(Interval domain) {
    const Permutation id = Permutation::identity(domain);
    std::vector<Permutation> w(static_cast<size_t>(domain.size()), id);
    std::vector<Permutation> m(static_cast<size_t>(domain.size()), id);
    return PreferenceStructure(domain, std::move(w), std::move(m));
}

PreferenceStructure sample_prefs(const MallowsParams& params, Interval domain, std::uint64_t master_seed,
                                 std::int64_t trial) {
    if (domain.is_empty()) throw EmptySubset("preference domain must be nonempty");
    const MallowsSampler sampler(params.q, domain);
    std::vector<Permutation> w, m;
    w.reserve(static_cast<size_t>(domain.size()));
    m.reserve(static_cast<size_t>(domain.size()));
    for (int i = domain.lo; i <= domain.hi; ++i) {
        RngStream ws(master_seed, StreamRole::WomanRank, i, trial);
        w.push_back(sampler(ws));
        RngStream ms(master_seed, StreamRole::ManRank, i, trial);
        m.push_back(sampler(ms));
    }
    return PreferenceStructure(domain, std::move(w), std::move(m));
}

bool prefers(const PreferenceStructure& prefs, const Person& who, int a, int b) {
    if (a == b) throw SamePerson("cannot compare candidate " + std::to_string(a) + " with itself");
    const Permutation& r = prefs.ranking(who);
    return r(a) > r(b);
}

PreferenceStructure induced_prefs(const PreferenceStructure& prefs, Interval window) {
    if (window.is_empty()) throw EmptySubset("cannot induce on an empty window");
    if (!prefs.domain().contains(window))
        throw NotSubinterval(window.str() + " is not a subinterval of " + prefs.domain().str());
    std::vector<Permutation> w, m;
    w.reserve(static_cast<size_t>(window.size()));
    m.reserve(static_cast<size_t>(window.size()));
    for (int i = window.lo; i <= window.hi; ++i) {
        w.push_back(induced_permutation(prefs.woman_ranking(i), window));
        m.push_back(induced_permutation(prefs.man_ranking(i), window));
    }
    return PreferenceStructure(window, std::move(w), std::move(m));
}

namespace {

Permutation shift_permutation(const Permutation& p, int delta) {
    Interval dom(p.domain().lo + delta, p.domain().hi + delta);
    std::vector<int> vals = p.values();
    for (int& v : vals) v += delta;
    return Permutation(dom, std::move(vals));
}

}  // namespace

PreferenceStructure shifted(const PreferenceStructure& prefs, int delta) {
    Interval dom(prefs.domain().lo + delta, prefs.domain().hi + delta);
    std::vector<Permutation> w, m;
    w.reserve(prefs.women().size());
    m.reserve(prefs.men().size());
    for (const auto& r : prefs.women()) w.push_back(shift_permutation(r, delta));
    for (const auto& r : prefs.men()) m.push_back(shift_permutation(r, delta));
    return PreferenceStructure(dom, std::move(w), std::move(m));
}

PreferenceStructure with_swap_gadget(const PreferenceStructure& prefs, int a) {
    const Interval dom = prefs.domain();
    if (!dom.contains(a) || !dom.contains(a + 1))
        throw OutOfDomain("gadget positions " + std::to_string(a) + ", " + std::to_string(a + 1) + " not in " +
                          dom.str());
    std::vector<Permutation> w = prefs.women();
    std::vector<Permutation> m = prefs.men();
    const auto swap_at = [&](const Permutation& r) {
        std::vector<int> vals = r.values();
        std::swap(vals[static_cast<size_t>(a - dom.lo)], vals[static_cast<size_t>(a + 1 - dom.lo)]);
        return Permutation(dom, std::move(vals));
    };
    w[static_cast<size_t>(a + 1 - dom.lo)] = swap_at(w[static_cast<size_t>(a + 1 - dom.lo)]);
    m[static_cast<size_t>(a - dom.lo)] = swap_at(m[static_cast<size_t>(a - dom.lo)]);
    return PreferenceStructure(dom, std::move(w), std::move(m));
}

PreferenceStructure gadget_structure(int m) {
    if (m < 2) throw BadParameter("gadget needs m >= 2");
    return with_swap_gadget(identity_prefs(Interval(-m, m)), 1);
}

PreferenceStructure gadget_structure_shifted(int m) { return shifted(gadget_structure(m), m + 1); }

}  // namespace stablecut
