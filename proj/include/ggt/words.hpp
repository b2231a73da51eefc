#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ggt/errors.hpp"

namespace ggt {

// A letter of a free-product basis. Positive values name generators,
// negative values their inverses: +(i+1) is generator i, -(i+1) its
// inverse. 0 is not a letter.
using Lit = int32_t;

inline Lit lit(int index, int sign) { return sign >= 0 ? Lit(index + 1) : -Lit(index + 1); }
inline int lit_index(Lit l) { return (l > 0 ? l : -l) - 1; }
inline Lit lit_inv(Lit l) { return -l; }

// Order letters for shortlex: generator before its inverse, both before
// every later generator. Used for canonical coset representatives.
inline int lit_rank(Lit l) { return 2 * lit_index(l) + (l < 0 ? 1 : 0); }

// Declared generating set of a free product of finitely generated free
// groups. Generator names are lowercase identifiers; the uppercase form
// of the first character denotes the inverse ("a A b", "x1 X1 y2").
class Basis {
public:
    Basis() = default;

    // One factor per inner list.
    explicit Basis(const std::vector<std::vector<std::string>>& factors) {
        for (int f = 0; f < int(factors.size()); ++f)
            for (const auto& name : factors[f]) add_letter(name, f);
    }

    static Basis free_group(const std::vector<std::string>& names) { return Basis({names}); }

    // rank-n basis named a, b, c, ...
    static Basis free_group(int rank) {
        std::vector<std::string> names;
        for (int i = 0; i < rank; ++i) names.push_back(std::string(1, char('a' + i)));
        return free_group(names);
    }

    void add_letter(const std::string& name, int factor) {
        if (name.empty() || !std::islower(static_cast<unsigned char>(name[0])))
            throw config_error("generator name must start with a lowercase letter: '" + name + "'");
        if (index_of_.count(name))
            throw config_error("duplicate generator name '" + name + "'");
        index_of_[name] = int(names_.size());
        names_.push_back(name);
        factor_of_.push_back(factor);
        factor_count_ = std::max(factor_count_, factor + 1);
    }

    int rank() const { return int(names_.size()); }
    int factor_count() const { return factor_count_; }
    const std::string& name(int index) const { return names_.at(index); }
    int factor(int index) const { return factor_of_.at(index); }

    int find(const std::string& name) const {
        auto it = index_of_.find(name);
        return it == index_of_.end() ? -1 : it->second;
    }

    // Letters belonging to one factor, in declaration order.
    std::vector<int> factor_letters(int factor) const {
        std::vector<int> out;
        for (int i = 0; i < rank(); ++i)
            if (factor_of_[i] == factor) out.push_back(i);
        return out;
    }

    std::string lit_name(Lit l) const {
        std::string n = name(lit_index(l));
        if (l < 0) n[0] = char(std::toupper(static_cast<unsigned char>(n[0])));
        return n;
    }

    Lit parse_lit(const std::string& token) const {
        if (token.empty()) throw config_error("empty generator token");
        std::string low = token;
        bool inverse = std::isupper(static_cast<unsigned char>(low[0]));
        low[0] = char(std::tolower(static_cast<unsigned char>(low[0])));
        int idx = find(low);
        if (idx < 0) throw config_error("unknown generator '" + token + "'");
        return lit(idx, inverse ? -1 : +1);
    }

private:
    std::vector<std::string> names_;
    std::vector<int> factor_of_;
    std::map<std::string, int> index_of_;
    int factor_count_ = 0;
};

// Freely reduced word. In a free product the reduced letter sequence is
// already the normal form: maximal same-factor blocks never cancel
// across block boundaries.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Lit> reduced) : ls_(std::move(reduced)) {}

    const std::vector<Lit>& letters() const { return ls_; }
    int length() const { return int(ls_.size()); }
    bool empty() const { return ls_.empty(); }
    Lit at(int i) const { return ls_[size_t(i)]; }

    bool operator==(const Word& o) const { return ls_ == o.ls_; }
    bool operator!=(const Word& o) const { return ls_ != o.ls_; }
    bool operator<(const Word& o) const { return shortlex_less(*this, o); }

    static bool shortlex_less(const Word& a, const Word& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        for (int i = 0; i < a.length(); ++i)
            if (a.ls_[size_t(i)] != b.ls_[size_t(i)])
                return lit_rank(a.ls_[size_t(i)]) < lit_rank(b.ls_[size_t(i)]);
        return false;
    }

private:
    std::vector<Lit> ls_;
};

// Unique freely reduced form of an arbitrary letter sequence. Idempotent.
inline Word reduce(const std::vector<Lit>& letters) {
    std::vector<Lit> stack;
    stack.reserve(letters.size());
    for (Lit l : letters) {
        if (l == 0) throw config_error("0 is not a letter");
        if (!stack.empty() && stack.back() == lit_inv(l))
            stack.pop_back();
        else
            stack.push_back(l);
    }
    return Word(std::move(stack));
}

inline Word product(const Word& a, const Word& b) {
    const auto& u = a.letters();
    const auto& v = b.letters();
    size_t i = u.size(), j = 0;
    while (i > 0 && j < v.size() && u[i - 1] == lit_inv(v[j])) { --i; ++j; }
    std::vector<Lit> out;
    out.reserve(i + v.size() - j);
    out.insert(out.end(), u.begin(), u.begin() + long(i));
    out.insert(out.end(), v.begin() + long(j), v.end());
    return Word(std::move(out));
}

inline Word inverse(const Word& w) {
    std::vector<Lit> out;
    out.reserve(w.letters().size());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(lit_inv(*it));
    return Word(std::move(out));
}

inline Word power(const Word& w, int n) {
    Word base = n < 0 ? inverse(w) : w;
    Word acc;
    for (int i = 0; i < std::abs(n); ++i) acc = product(acc, base);
    return acc;
}

inline Word word_from_lits(std::initializer_list<Lit> ls) { return reduce(std::vector<Lit>(ls)); }

// "a A b" -> word; validates every token against the basis.
inline Word parse_word(const Basis& basis, const std::string& text) {
    std::istringstream in(text);
    std::vector<Lit> ls;
    std::string tok;
    while (in >> tok) ls.push_back(basis.parse_lit(tok));
    return reduce(ls);
}

inline std::string word_to_string(const Basis& basis, const Word& w) {
    std::string out;
    for (Lit l : w.letters()) {
        if (!out.empty()) out += ' ';
        out += basis.lit_name(l);
    }
    return out;
}

inline void validate_word(const Basis& basis, const Word& w) {
    for (Lit l : w.letters())
        if (lit_index(l) >= basis.rank())
            throw config_error("unknown generator index " + std::to_string(lit_index(l)));
}

// Membership in a free-factor subgroup: the word spells only the given
// letters. This covers exactly the subgroups the scenarios need.
inline bool uses_only(const Word& w, const std::vector<int>& letter_indices) {
    for (Lit l : w.letters())
        if (std::find(letter_indices.begin(), letter_indices.end(), lit_index(l)) ==
            letter_indices.end())
            return false;
    return true;
}

// Total map from generators to words; extends to a homomorphism.
class Endomorphism {
public:
    Endomorphism() = default;
    explicit Endomorphism(int rank) : images_(size_t(rank)) {}

    void set_image(int index, Word w) { images_.at(size_t(index)) = std::move(w); }

    const Word& image(int index) const {
        const auto& img = images_.at(size_t(index));
        if (!img) throw config_error("missing image for generator index " + std::to_string(index));
        return *img;
    }

    bool total() const {
        for (const auto& img : images_)
            if (!img) return false;
        return true;
    }

private:
    std::vector<std::optional<Word>> images_;
};

inline Word apply_endomorphism(const Endomorphism& e, const Word& w) {
    Word acc;
    for (Lit l : w.letters()) {
        const Word& img = e.image(lit_index(l));
        acc = product(acc, l > 0 ? img : inverse(img));
    }
    return acc;
}

// --- bounded witness search for P cap g^-1 Q g = 1 ------------------------

struct IntersectionWitness {
    Word q;           // nontrivial sampled element of <Q>
    Word conjugator;  // g
    Word conjugate;   // reduced g^-1 q g
};

struct IntersectionReport {
    bool consistent = true;
    std::vector<IntersectionWitness> witnesses;
    size_t sampled_words = 0;
    size_t conjugators = 0;
    size_t checks = 0;
};

// All nontrivial elements of the subgroup generated by `gens` whose
// reduced ambient length is at most `max_len`. Breadth-first over
// generator syllables; partial products may overshoot the bound by one
// syllable, which only enlarges the candidate pool.
inline std::vector<Word> enumerate_subgroup_elements(const std::vector<Word>& gens, int max_len) {
    int max_gen_len = 0;
    for (const auto& g : gens) max_gen_len = std::max(max_gen_len, g.length());
    std::set<Word> seen{Word()};
    std::vector<Word> frontier{Word()};
    std::vector<Word> steps;
    for (const auto& g : gens) {
        steps.push_back(g);
        steps.push_back(inverse(g));
    }
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const auto& w : frontier) {
            for (const auto& s : steps) {
                Word p = product(w, s);
                if (p.length() > max_len + max_gen_len) continue;
                if (seen.insert(p).second) next.push_back(p);
            }
        }
        frontier = std::move(next);
    }
    std::vector<Word> out;
    for (const auto& w : seen)
        if (!w.empty() && w.length() <= max_len) out.push_back(w);
    return out;
}

// All reduced words over the basis of length <= max_len, shortlex order.
inline std::vector<Word> enumerate_reduced_words(const Basis& basis, int max_len) {
    std::vector<Word> layer{Word()};
    std::vector<Word> all{Word()};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer) {
            for (int i = 0; i < basis.rank(); ++i) {
                for (int sign : {+1, -1}) {
                    Lit l = lit(i, sign);
                    if (!w.empty() && w.letters().back() == lit_inv(l)) continue;
                    std::vector<Lit> ls = w.letters();
                    ls.push_back(l);
                    next.push_back(Word(std::move(ls)));
                }
            }
        }
        std::sort(next.begin(), next.end(), Word::shortlex_less);
        all.insert(all.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return all;
}

// Desk-scale check of the statement "P cap g^-1 Q g is trivial": for
// every sampled nontrivial q in <Q_gens> (ambient reduced length up to
// word_bound) and every supplied conjugator g, confirms that the reduced
// conjugate g^-1 q g survives the retraction. A found kernel element is
// a witness; CONSISTENT means none was found at these bounds. This is a
// bounded search, not a proof.
inline IntersectionReport verify_trivial_intersection(const std::vector<Word>& p_gens,
                                                      const std::vector<Word>& q_gens,
                                                      const Endomorphism& retraction,
                                                      const std::vector<Word>& conjugators,
                                                      int word_bound) {
    for (const auto& p : p_gens)
        if (!apply_endomorphism(retraction, p).empty())
            throw config_error("retraction does not kill the P generators");
    IntersectionReport report;
    std::vector<Word> sample = enumerate_subgroup_elements(q_gens, word_bound);
    if (sample.empty())
        throw config_error("intersection sample space is empty: word bound " +
                           std::to_string(word_bound) + " is too small");
    report.sampled_words = sample.size();
    report.conjugators = conjugators.size();
    for (const auto& g : conjugators) {
        Word gi = inverse(g);
        for (const auto& q : sample) {
            Word conj = product(product(gi, q), g);
            ++report.checks;
            if (apply_endomorphism(retraction, conj).empty()) {
                report.consistent = false;
                report.witnesses.push_back({q, g, conj});
            }
        }
    }
    return report;
}

}  // namespace ggt
