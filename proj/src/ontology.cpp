#include "oe/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "oe/error.hpp"
#include "oe/kernels.hpp"
#include "oe/text.hpp"

namespace oe {

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::original: return "original";
        case Provenance::closure: return "closure";
        case Provenance::join_mined: return "join_mined";
        case Provenance::meet_mined: return "meet_mined";
    }
    return "original";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
    if (s == "original") return Provenance::original;
    if (s == "closure") return Provenance::closure;
    if (s == "join_mined") return Provenance::join_mined;
    if (s == "meet_mined") return Provenance::meet_mined;
    return std::nullopt;
}

ConceptId ConceptTable::intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    auto id = static_cast<ConceptId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
}

std::optional<ConceptId> ConceptTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

void build_csr(std::size_t n, const std::vector<TripletEdge>& edges, bool up,
               std::vector<std::size_t>& offsets, std::vector<ConceptId>& flat) {
    offsets.assign(n + 1, 0);
    for (const auto& e : edges) ++offsets[(up ? e.child : e.parent) + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    flat.assign(edges.size(), 0);
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& e : edges) {
        ConceptId from = up ? e.child : e.parent;
        flat[cursor[from]++] = up ? e.parent : e.child;
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(flat.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                  flat.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
}

}  // namespace

OntologyGraph::OntologyGraph(ConceptTable concepts, std::vector<TripletEdge> edges, std::string relation)
    : concepts_(std::move(concepts)), edges_(std::move(edges)), relation_(std::move(relation)) {
    const std::size_t n = concepts_.size();
    for (const auto& e : edges_) {
        if (e.child >= n || e.parent >= n) throw std::invalid_argument("edge references unknown concept");
        if (e.child == e.parent) throw std::invalid_argument("self loop on concept " + concepts_.name(e.child));
    }
    build_csr(n, edges_, true, up_offsets_, up_);
    build_csr(n, edges_, false, down_offsets_, down_);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = parents(static_cast<ConceptId>(i));
        if (std::adjacent_find(p.begin(), p.end()) != p.end())
            throw std::invalid_argument("duplicate edge from concept " + concepts_.name(static_cast<ConceptId>(i)));
    }
}

std::span<const ConceptId> OntologyGraph::parents(ConceptId c) const {
    return std::span<const ConceptId>(up_).subspan(up_offsets_[c], up_offsets_[c + 1] - up_offsets_[c]);
}

std::span<const ConceptId> OntologyGraph::children(ConceptId c) const {
    return std::span<const ConceptId>(down_).subspan(down_offsets_[c], down_offsets_[c + 1] - down_offsets_[c]);
}

bool OntologyGraph::has_edge(ConceptId child, ConceptId parent) const {
    if (child >= num_concepts()) return false;
    auto p = parents(child);
    return std::binary_search(p.begin(), p.end(), parent);
}

Reachability::Reachability(std::size_t n, std::vector<std::vector<ConceptId>> lists) {
    if (lists.size() != n) throw std::invalid_argument("ancestor list count mismatch");
    anc_offsets_.assign(n + 1, 0);
    desc_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        anc_offsets_[i + 1] = anc_offsets_[i] + lists[i].size();
        for (ConceptId a : lists[i]) ++desc_offsets_[a + 1];
    }
    for (std::size_t i = 0; i < n; ++i) desc_offsets_[i + 1] += desc_offsets_[i];
    anc_.reserve(anc_offsets_[n]);
    desc_.assign(anc_offsets_[n], 0);
    std::vector<std::size_t> cursor(desc_offsets_.begin(), desc_offsets_.end() - 1);
    // Sources are visited in increasing order, so descendant lists come out sorted.
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(lists[i].begin(), lists[i].end());
        for (ConceptId a : lists[i]) {
            anc_.push_back(a);
            desc_[cursor[a]++] = static_cast<ConceptId>(i);
        }
        std::vector<ConceptId>().swap(lists[i]);
    }
}

std::span<const ConceptId> Reachability::ancestors(ConceptId c) const {
    return std::span<const ConceptId>(anc_).subspan(anc_offsets_[c], anc_offsets_[c + 1] - anc_offsets_[c]);
}

std::span<const ConceptId> Reachability::descendants(ConceptId c) const {
    return std::span<const ConceptId>(desc_).subspan(desc_offsets_[c], desc_offsets_[c + 1] - desc_offsets_[c]);
}

bool Reachability::reaches(ConceptId specific, ConceptId general) const {
    auto a = ancestors(specific);
    return std::binary_search(a.begin(), a.end(), general);
}

namespace {

// Is `target` reachable from `from` along parent links in a growing graph.
bool reachable(const std::vector<std::vector<ConceptId>>& up, ConceptId from, ConceptId target,
               std::vector<std::uint32_t>& stamp, std::uint32_t mark, std::vector<ConceptId>& stack) {
    if (from == target) return true;
    stack.clear();
    stack.push_back(from);
    stamp[from] = mark;
    while (!stack.empty()) {
        ConceptId u = stack.back();
        stack.pop_back();
        for (ConceptId v : up[u]) {
            if (v == target) return true;
            if (stamp[v] != mark) {
                stamp[v] = mark;
                stack.push_back(v);
            }
        }
    }
    return false;
}

}  // namespace

IngestResult ingest_triplets(std::istream& in, std::string_view relation_filter) {
    IngestResult result;
    ConceptTable concepts;
    std::vector<TripletEdge> edges;
    std::vector<std::vector<ConceptId>> up;
    std::vector<std::uint32_t> stamp;
    std::vector<ConceptId> stack;
    std::uint32_t mark = 0;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = text::split_tabs(line);
        if (fields.size() != 3 && fields.size() != 4) {
            result.malformed.push_back({lineno, "expected 3 tab-separated fields, got " + std::to_string(fields.size())});
            continue;
        }
        if (fields[1] != relation_filter) {
            ++result.filtered_out;
            continue;
        }
        Provenance prov = Provenance::original;
        if (fields.size() == 4) {
            auto p = parse_provenance(fields[3]);
            if (!p) {
                result.malformed.push_back({lineno, "unknown provenance '" + std::string(fields[3]) + "'"});
                continue;
            }
            prov = *p;
        }
        std::string child_name = text::normalize_term(fields[0]);
        std::string parent_name = text::normalize_term(fields[2]);
        if (child_name.empty() || parent_name.empty()) {
            result.malformed.push_back({lineno, "empty term"});
            continue;
        }
        ConceptId child = concepts.intern(child_name);
        ConceptId parent = concepts.intern(parent_name);
        if (up.size() < concepts.size()) {
            up.resize(concepts.size());
            stamp.resize(concepts.size(), 0);
        }
        if (child == parent) {
            ++result.self_loops_dropped;
            continue;
        }
        if (std::find(up[child].begin(), up[child].end(), parent) != up[child].end()) {
            ++result.duplicates_dropped;
            continue;
        }
        if (++mark == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            mark = 1;
        }
        if (reachable(up, parent, child, stamp, mark, stack)) {
            ++result.cycles_dropped;
            continue;
        }
        up[child].push_back(parent);
        edges.push_back({child, parent, prov});
    }
    if (edges.empty()) throw EmptyOntology("no '" + std::string(relation_filter) + "' edges in input");
    result.graph = OntologyGraph(std::move(concepts), std::move(edges), std::string(relation_filter));
    return result;
}

IngestResult ingest_triplets(const std::filesystem::path& file, std::string_view relation_filter) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    return ingest_triplets(in, relation_filter);
}

void write_triplets(const OntologyGraph& g, std::ostream& out, bool with_provenance) {
    const auto& names = g.concepts();
    for (const auto& e : g.edges()) {
        out << names.name(e.child) << '\t' << g.relation() << '\t' << names.name(e.parent);
        if (with_provenance) out << '\t' << to_string(e.provenance);
        out << '\n';
    }
}

void write_triplets(const OntologyGraph& g, const std::filesystem::path& file, bool with_provenance) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    write_triplets(g, out, with_provenance);
    if (!out) throw IoError("write failed for " + file.string());
}

void require_acyclic(const OntologyGraph& g) {
    const std::size_t n = g.num_concepts();
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<std::uint8_t> state(n, 0);
    struct Frame {
        ConceptId node;
        std::size_t next;
    };
    std::vector<Frame> stack;
    for (ConceptId s = 0; s < n; ++s) {
        if (state[s] != 0) continue;
        stack.push_back({s, 0});
        state[s] = 1;
        while (!stack.empty()) {
            auto& top = stack.back();
            auto ps = g.parents(top.node);
            if (top.next == ps.size()) {
                state[top.node] = 2;
                stack.pop_back();
                continue;
            }
            ConceptId v = ps[top.next++];
            if (state[v] == 1) {
                std::string cycle = g.concepts().name(v);
                for (auto it = stack.rbegin(); it != stack.rend() && it->node != v; ++it)
                    cycle = g.concepts().name(it->node) + " -> " + cycle;
                cycle = g.concepts().name(v) + " -> " + cycle;
                throw CycleError("cycle: " + cycle);
            }
            if (state[v] == 0) {
                state[v] = 1;
                stack.push_back({v, 0});
            }
        }
    }
}

Reachability compute_reachability(const OntologyGraph& g) {
    require_acyclic(g);
    return Reachability(g.num_concepts(), kernels::ancestor_lists(g, Exec::parallel));
}

OntologyGraph transitive_closure(const OntologyGraph& g) { return transitive_closure(g, compute_reachability(g)); }

OntologyGraph transitive_closure(const OntologyGraph& g, const Reachability& reach) {
    std::vector<TripletEdge> edges(g.edges().begin(), g.edges().end());
    for (ConceptId c = 0; c < g.num_concepts(); ++c)
        for (ConceptId a : reach.ancestors(c))
            if (!g.has_edge(c, a)) edges.push_back({c, a, Provenance::closure});
    return OntologyGraph(g.concepts(), std::move(edges), g.relation());
}

OntologyGraph transitive_reduction(const OntologyGraph& g) {
    Reachability reach = compute_reachability(g);
    std::vector<TripletEdge> kept;
    for (const auto& e : g.edges()) {
        bool redundant = false;
        for (ConceptId q : g.parents(e.child)) {
            if (q != e.parent && reach.reaches(q, e.parent)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) kept.push_back(e);
    }
    return OntologyGraph(g.concepts(), std::move(kept), g.relation());
}

std::pair<ConceptId, ConceptId> sample_negative_pair(const Reachability& closure, Rng& rng,
                                                     const TripletEdge& positive, CorruptSide side,
                                                     int max_retries) {
    const std::size_t n = closure.num_concepts();
    if (n == 0) throw NegativeSamplingExhausted("empty graph");
    // Every replacement is the kept endpoint itself or related to it.
    const std::size_t related = side == CorruptSide::child ? closure.descendants(positive.parent).size()
                                                           : closure.ancestors(positive.child).size();
    if (related + 1 >= n) throw NegativeSamplingExhausted("no non-edge exists on this side");
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        auto r = static_cast<ConceptId>(uniform_index(rng, n));
        ConceptId child = side == CorruptSide::child ? r : positive.child;
        ConceptId parent = side == CorruptSide::parent ? r : positive.parent;
        if (child != parent && !closure.reaches(child, parent)) return {child, parent};
    }
    throw NegativeSamplingExhausted("no non-edge found after " + std::to_string(max_retries) + " draws");
}

std::pair<ConceptId, ConceptId> sample_negative_either(const Reachability& closure, Rng& rng,
                                                       const TripletEdge& positive, CorruptSide preferred,
                                                       int max_retries) {
    try {
        return sample_negative_pair(closure, rng, positive, preferred, max_retries);
    } catch (const NegativeSamplingExhausted&) {
        CorruptSide other = preferred == CorruptSide::child ? CorruptSide::parent : CorruptSide::child;
        return sample_negative_pair(closure, rng, positive, other, max_retries);
    }
}

std::pair<ConceptId, ConceptId> sample_free_pair(const Reachability& closure, Rng& rng, int max_retries) {
    const std::size_t n = closure.num_concepts();
    if (n == 0) throw NegativeSamplingExhausted("empty graph");
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        auto child = static_cast<ConceptId>(uniform_index(rng, n));
        auto parent = static_cast<ConceptId>(uniform_index(rng, n));
        if (child != parent && !closure.reaches(child, parent)) return {child, parent};
    }
    throw NegativeSamplingExhausted("no non-edge found after " + std::to_string(max_retries) + " draws");
}

}  // namespace oe
