#include "oe/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "oe/error.hpp"
#include "oe/text.hpp"

namespace oe {

std::string_view to_string(ConstraintKind k) {
    return k == ConstraintKind::common_child ? "common_child" : "common_parent";
}

std::optional<ConstraintKind> parse_constraint_kind(std::string_view s) {
    if (s == "common_child") return ConstraintKind::common_child;
    if (s == "common_parent") return ConstraintKind::common_parent;
    return std::nullopt;
}

ConstraintCounts count_by_kind(std::span<const JoinMeetConstraint> cs) {
    ConstraintCounts c;
    for (const auto& x : cs) (x.kind == ConstraintKind::common_child ? c.common_child : c.common_parent)++;
    return c;
}

PairSelection select_incomparable_pairs(const Reachability& reach, std::size_t max_pairs, Rng& rng) {
    PairSelection sel;
    const std::uint64_t n = reach.num_concepts();
    const std::uint64_t all = n * (n - (n > 0 ? 1 : 0)) / 2;
    sel.incomparable_total = static_cast<std::size_t>(all - reach.num_pairs());
    const std::size_t total = sel.incomparable_total;
    if (max_pairs == 0 || total == 0) {
        sel.sampled = total > 0;
        return sel;
    }

    auto for_each_incomparable = [&](auto&& f) {
        for (ConceptId a = 0; a < n; ++a)
            for (ConceptId b = a + 1; b < n; ++b)
                if (!reach.comparable(a, b))
                    if (!f(a, b)) return;
    };

    if (total <= max_pairs) {
        sel.pairs.reserve(total);
        for_each_incomparable([&](ConceptId a, ConceptId b) {
            sel.pairs.emplace_back(a, b);
            return true;
        });
        return sel;
    }

    sel.sampled = true;
    sel.pairs.reserve(max_pairs);
    if (total <= 4 * max_pairs) {
        // Selection sampling over the enumeration keeps exactly max_pairs.
        std::size_t seen = 0;
        for_each_incomparable([&](ConceptId a, ConceptId b) {
            const std::size_t needed = max_pairs - sel.pairs.size();
            if (static_cast<double>(total - seen) * uniform01(rng) < static_cast<double>(needed))
                sel.pairs.emplace_back(a, b);
            ++seen;
            return sel.pairs.size() < max_pairs;
        });
        return sel;
    }

    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(max_pairs * 2);
    while (sel.pairs.size() < max_pairs) {
        auto a = static_cast<ConceptId>(uniform_index(rng, n));
        auto b = static_cast<ConceptId>(uniform_index(rng, n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (reach.comparable(a, b)) continue;
        if (!chosen.insert((std::uint64_t{a} << 32) | b).second) continue;
        sel.pairs.emplace_back(a, b);
    }
    std::sort(sel.pairs.begin(), sel.pairs.end());
    return sel;
}

std::vector<JoinMeetConstraint> mine_constraints(const OntologyGraph& g, std::size_t max_pairs, Rng& rng,
                                                 Exec exec) {
    return mine_constraints(compute_reachability(g), max_pairs, rng, exec);
}

std::vector<JoinMeetConstraint> mine_constraints(const Reachability& reach, std::size_t max_pairs, Rng& rng,
                                                 Exec exec) {
    PairSelection sel = select_incomparable_pairs(reach, max_pairs, rng);
    auto witnesses = kernels::nearest_witnesses(reach, sel.pairs, exec);
    std::vector<JoinMeetConstraint> out;
    for (std::size_t i = 0; i < sel.pairs.size(); ++i) {
        auto [a, b] = sel.pairs[i];
        for (ConceptId c : witnesses[i].common_children) out.push_back({a, b, ConstraintKind::common_child, c});
        for (ConceptId p : witnesses[i].common_parents) out.push_back({a, b, ConstraintKind::common_parent, p});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void emit_constraints(std::span<const JoinMeetConstraint> cs, const ConceptTable& names, std::ostream& out) {
    for (const auto& c : cs)
        out << to_string(c.kind) << '\t' << names.name(c.w1) << '\t' << names.name(c.w2) << '\t'
            << names.name(c.witness) << '\n';
}

void emit_constraints(std::span<const JoinMeetConstraint> cs, const ConceptTable& names,
                      const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    emit_constraints(cs, names, out);
    if (!out) throw IoError("write failed for " + file.string());
}

std::vector<JoinMeetConstraint> parse_constraints(std::istream& in, const ConceptTable& names) {
    std::vector<JoinMeetConstraint> out;
    std::string line;
    std::size_t lineno = 0;
    auto resolve = [&](std::string_view term) {
        auto id = names.find(text::normalize_term(term));
        if (!id) throw ParseError(lineno, "unknown concept '" + std::string(term) + "'");
        return *id;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto f = text::split_tabs(line);
        if (f.size() != 4) throw ParseError(lineno, "expected 4 tab-separated fields");
        auto kind = parse_constraint_kind(f[0]);
        if (!kind) throw ParseError(lineno, "unknown constraint kind '" + std::string(f[0]) + "'");
        JoinMeetConstraint c{resolve(f[1]), resolve(f[2]), *kind, resolve(f[3])};
        if (c.w1 == c.w2) throw ParseError(lineno, "constraint pair members are identical");
        if (c.w1 > c.w2) std::swap(c.w1, c.w2);
        out.push_back(c);
    }
    return out;
}

std::vector<JoinMeetConstraint> parse_constraints(const std::filesystem::path& file, const ConceptTable& names) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    return parse_constraints(in, names);
}

}  // namespace oe
