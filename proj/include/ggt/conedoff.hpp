#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ggt/errors.hpp"
#include "ggt/graph.hpp"
#include "ggt/words.hpp"

namespace ggt {

// Edge provenance of the pullback-graph construction. Every edge of a
// bundle carries exactly one class; when the defining sets overlap the
// earlier class wins (cone stars, then inner edges, then ambient).
enum class EdgeClass { Cone, Hyperbolic, Parabolic, Ambient };

inline const char* edge_class_name(EdgeClass c) {
    switch (c) {
        case EdgeClass::Cone: return "cone";
        case EdgeClass::Hyperbolic: return "hyperbolic";
        case EdgeClass::Parabolic: return "parabolic";
        case EdgeClass::Ambient: return "ambient";
    }
    return "?";
}

inline EdgeClass edge_class_from_name(const std::string& s) {
    if (s == "cone") return EdgeClass::Cone;
    if (s == "hyperbolic") return EdgeClass::Hyperbolic;
    if (s == "parabolic") return EdgeClass::Parabolic;
    if (s == "ambient") return EdgeClass::Ambient;
    throw config_error("unknown edge class '" + s + "'");
}

// How the inner edges of a peripheral subgroup's cosets are treated:
// None      cones only, coset edges stay ambient
// Hyperbolic    coset Cayley edges become the connecting set
// Parabolic coset Cayley edges plus one level of nested cones
enum class ConeMode { None, Hyperbolic, Parabolic };

struct PeripheralSubgroup {
    std::vector<int> letters;  // free-factor generators, ascending basis indices
    ConeMode mode = ConeMode::None;
    std::vector<std::vector<int>> nested;  // parabolic only; letter subsets of `letters`
};

// Finite list of free-factor subgroup descriptors, one per conjugacy
// class. For free-factor subgroups non-conjugacy is just inequality of
// the letter sets.
struct PeripheralStructure {
    std::vector<PeripheralSubgroup> subgroups;

    void validate(const Basis& basis) const {
        std::set<std::vector<int>> seen;
        for (const auto& s : subgroups) {
            if (s.letters.empty())
                throw config_error("peripheral subgroup must be infinite (nonempty generators)");
            if (!std::is_sorted(s.letters.begin(), s.letters.end()))
                throw config_error("peripheral letters must be sorted");
            for (int l : s.letters)
                if (l < 0 || l >= basis.rank())
                    throw config_error("peripheral letter index out of range");
            if (!seen.insert(s.letters).second)
                throw config_error("peripheral subgroups must be pairwise non-conjugate");
            for (const auto& n : s.nested) {
                if (n.empty()) throw config_error("nested subgroup must be nonempty");
                for (int l : n)
                    if (std::find(s.letters.begin(), s.letters.end(), l) == s.letters.end())
                        throw config_error("nested letters must lie inside the parent subgroup");
            }
            if (!s.nested.empty() && s.mode != ConeMode::Parabolic)
                throw config_error("nested subgroups require parabolic mode");
        }
    }
};

// Canonical representative of the right coset w<S>: strip the maximal
// trailing block of S-letters. The result is the shortlex-minimal
// element of the coset.
inline Word coset_representative(const Word& w, const std::vector<int>& letters) {
    const auto& ls = w.letters();
    size_t end = ls.size();
    while (end > 0 &&
           std::find(letters.begin(), letters.end(), lit_index(ls[end - 1])) != letters.end())
        --end;
    return Word(std::vector<Lit>(ls.begin(), ls.begin() + long(end)));
}

// --- peripheral intersections ------------------------------------------------

// Intersections of two structures whose members are free-factor
// subgroups of a common basis. For free factors a nontrivial conjugate
// intersection forces the identity conjugator, so R is just the family
// of infinite (= nonempty) pairwise letter-set intersections.
inline PeripheralStructure peripheral_intersections(const PeripheralStructure& p,
                                                    const PeripheralStructure& q) {
    PeripheralStructure r;
    std::set<std::vector<int>> seen;
    for (const auto& sp : p.subgroups) {
        for (const auto& sq : q.subgroups) {
            std::vector<int> common;
            std::set_intersection(sp.letters.begin(), sp.letters.end(), sq.letters.begin(),
                                  sq.letters.end(), std::back_inserter(common));
            if (common.empty()) continue;
            if (seen.insert(common).second) r.subgroups.push_back({common, ConeMode::None, {}});
        }
    }
    return r;
}

// Bounded witness search for structures that are not free factors of a
// common basis: P is a free-factor subgroup, Q is given by generator
// words, and a retraction kills P while staying injective on <Q>. Any
// sampled conjugate g^-1 q g that lands in <P> witnesses an infinite
// intersection class. Returns the witnesses found (empty means R = {}).
struct PeripheralWitness {
    Word q, conjugator, element;
};

inline std::vector<PeripheralWitness> peripheral_intersection_witnesses(
    const std::vector<int>& p_letters, const std::vector<Word>& q_gens,
    const std::vector<Word>& conjugators, int word_bound) {
    std::vector<PeripheralWitness> out;
    auto sample = enumerate_subgroup_elements(q_gens, word_bound);
    if (sample.empty())
        throw config_error("intersection sample space is empty: word bound " +
                           std::to_string(word_bound) + " is too small");
    for (const auto& g : conjugators) {
        Word gi = inverse(g);
        for (const auto& q : sample) {
            Word conj = product(product(gi, q), g);
            if (!conj.empty() && uses_only(conj, p_letters)) out.push_back({q, g, conj});
        }
    }
    return out;
}

// --- the coned graph bundle ---------------------------------------------------

struct ConedGraphBundle {
    LabeledGraph graph;
    int ball_vertex_count = 0;
    std::vector<EdgeId> edges;           // sorted
    std::vector<EdgeClass> provenance;   // aligned with `edges`
    // per cone vertex (index >= ball_vertex_count): which subgroup's
    // letter set it cones off (indices into `cone_letters`)
    std::vector<std::vector<int>> cone_letters;
    std::vector<int> cone_subgroup;      // aligned with cone vertices

    EdgeClass class_of(EdgeId e) const {
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e) throw config_error("edge not in bundle");
        return provenance[size_t(it - edges.begin())];
    }

    int cone_count() const { return graph.vertex_count() - ball_vertex_count; }
};

// Builds the coned graph over a Cayley ball:
//   cone stars      one cone vertex per coset of each peripheral subgroup
//                   meeting the ball, joined to every coset element
//   hyperbolic      coset Cayley edges of the subgroup, as the connecting set
//   parabolic       coset Cayley edges plus depth-1 nested cones; a nested
//                   cone with the same letter set and representative as a
//                   top-level cone is the same vertex
//   ambient         the remaining ball edges
// The result is connected whenever the ball is; a disconnected result is
// a construction bug and throws.
inline ConedGraphBundle build_coned_graph(const LabeledGraph& ball, const Basis& basis,
                                          const PeripheralStructure& ps) {
    ps.validate(basis);
    for (int v = 0; v < ball.vertex_count(); ++v)
        if (ball.label(v).kind != VertexKind::Group)
            throw config_error("coned construction expects a Cayley ball");

    ConedGraphBundle bundle;
    bundle.graph = ball;
    bundle.ball_vertex_count = ball.vertex_count();

    std::map<Word, int> word_index = group_vertex_index(ball);
    std::map<EdgeId, EdgeClass> tag;
    for (const auto& e : ball.edges()) tag[e] = EdgeClass::Ambient;

    // cone vertices are deduplicated across top-level and nested use by
    // (letter set, coset representative)
    std::map<std::pair<std::vector<int>, Word>, int> cone_index;
    auto cone_vertex = [&](const std::vector<int>& letters, const Word& rep, int subgroup) {
        auto key = std::make_pair(letters, rep);
        auto it = cone_index.find(key);
        if (it != cone_index.end()) return it->second;
        int v = bundle.graph.add_vertex(VertexLabel::cone(rep, subgroup));
        cone_index[key] = v;
        bundle.cone_letters.push_back(letters);
        bundle.cone_subgroup.push_back(subgroup);
        return v;
    };

    auto claim = [&](EdgeId e, EdgeClass c) {
        auto it = tag.find(e);
        if (it == tag.end()) {
            tag[e] = c;
            return;
        }
        // earlier class wins: Cone < Hyperbolic < Parabolic < Ambient
        if (int(c) < int(it->second)) it->second = c;
    };

    // cosets of one subgroup meeting the ball, keyed by representative
    auto cosets_of = [&](const std::vector<int>& letters) {
        std::map<Word, std::vector<int>> cosets;
        for (int v = 0; v < ball.vertex_count(); ++v)
            cosets[coset_representative(ball.label(v).word, letters)].push_back(v);
        return cosets;
    };

    for (int si = 0; si < int(ps.subgroups.size()); ++si) {
        const auto& sub = ps.subgroups[size_t(si)];
        auto cosets = cosets_of(sub.letters);

        // Step 1: cone stars
        for (const auto& [rep, members] : cosets) {
            int cv = cone_vertex(sub.letters, rep, si);
            for (int m : members) {
                bundle.graph.add_edge(cv, m);
                claim(make_edge(cv, m), EdgeClass::Cone);
            }
        }

        if (sub.mode == ConeMode::None) continue;
        EdgeClass inner_class =
            sub.mode == ConeMode::Hyperbolic ? EdgeClass::Hyperbolic : EdgeClass::Parabolic;

        // Step 2: coset Cayley edges of the subgroup as the connecting set
        for (const auto& [rep, members] : cosets) {
            for (int m : members) {
                const Word& w = ball.label(m).word;
                for (int l : sub.letters) {
                    Word next = product(w, Word(std::vector<Lit>{lit(l, +1)}));
                    auto it = word_index.find(next);
                    if (it != word_index.end()) claim(make_edge(m, it->second), inner_class);
                }
            }
        }

        // depth-1 recursion: cones over nested sub-cosets inside each coset
        if (sub.mode == ConeMode::Parabolic) {
            for (const auto& nested_letters : sub.nested) {
                for (const auto& [rep, members] : cosets) {
                    std::map<Word, std::vector<int>> nested_cosets;
                    for (int m : members)
                        nested_cosets[coset_representative(ball.label(m).word, nested_letters)]
                            .push_back(m);
                    for (const auto& [nrep, nmembers] : nested_cosets) {
                        int cv = cone_vertex(nested_letters, nrep, si);
                        for (int m : nmembers) {
                            bundle.graph.add_edge(cv, m);
                            claim(make_edge(cv, m), EdgeClass::Parabolic);
                        }
                    }
                }
            }
        }
    }

    bundle.graph.sort_adjacency();
    bundle.edges = bundle.graph.edges();
    bundle.provenance.reserve(bundle.edges.size());
    for (const auto& e : bundle.edges) bundle.provenance.push_back(tag.at(e));

    if (!is_connected(bundle.graph))
        throw invariant_error("coned graph is disconnected: construction bug");
    return bundle;
}

// --- finite-scale equivariance -------------------------------------------------

struct EquivarianceViolation {
    int letter;  // basis letter index (sign folded into direction checked)
    EdgeId edge;
    std::string reason;
};

// Image of a bundle vertex under left translation by a single letter, or
// -1 when the image leaves the truncation.
inline int translate_vertex(const ConedGraphBundle& bundle, const Basis& basis,
                            const std::map<Word, int>& word_index, Lit s, int v) {
    (void)basis;
    const auto& lab = bundle.graph.label(v);
    Word moved = product(Word(std::vector<Lit>{s}), lab.word);
    if (lab.kind == VertexKind::Group) {
        auto it = word_index.find(moved);
        return it == word_index.end() ? -1 : it->second;
    }
    if (lab.kind == VertexKind::Cone) {
        int ci = v - bundle.ball_vertex_count;
        const auto& letters = bundle.cone_letters.at(size_t(ci));
        Word rep = coset_representative(moved, letters);
        // the translated cone exists iff its coset meets the ball
        for (int u = bundle.ball_vertex_count; u < bundle.graph.vertex_count(); ++u) {
            int ui = u - bundle.ball_vertex_count;
            if (bundle.cone_letters[size_t(ui)] == letters &&
                bundle.graph.label(u).word == rep)
                return u;
        }
        return -1;
    }
    return -1;
}

// Checks that for every basis letter s and every edge {u, v} whose
// endpoints both translate into the truncation, {s u, s v} is again an
// edge with the same provenance class.
inline std::vector<EquivarianceViolation> equivariance_violations(const ConedGraphBundle& bundle,
                                                                  const Basis& basis) {
    std::vector<EquivarianceViolation> out;
    std::map<Word, int> word_index;
    for (int v = 0; v < bundle.ball_vertex_count; ++v)
        word_index[bundle.graph.label(v).word] = v;
    for (int li = 0; li < basis.rank(); ++li) {
        for (int sign : {+1, -1}) {
            Lit s = lit(li, sign);
            std::vector<int> image(size_t(bundle.graph.vertex_count()), -1);
            for (int v = 0; v < bundle.graph.vertex_count(); ++v)
                image[size_t(v)] = translate_vertex(bundle, basis, word_index, s, v);
            for (size_t ei = 0; ei < bundle.edges.size(); ++ei) {
                auto [a, b] = bundle.edges[ei];
                int ia = image[size_t(a)], ib = image[size_t(b)];
                if (ia < 0 || ib < 0) continue;
                if (!bundle.graph.has_edge(ia, ib)) {
                    out.push_back({li, bundle.edges[ei], "image edge missing"});
                    continue;
                }
                if (bundle.class_of(make_edge(ia, ib)) != bundle.provenance[ei])
                    out.push_back({li, bundle.edges[ei], "provenance differs"});
            }
        }
    }
    return out;
}

}  // namespace ggt
