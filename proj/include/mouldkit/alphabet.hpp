#pragma once

#include "mouldkit/scalar.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace mouldkit {

/* A letter is the degree vector of a homogeneous operator; a word is a
   finite letter sequence. Empty word = empty vector. */
using DegVec = std::vector<int>;
using Word = std::vector<DegVec>;

int total_degree(const DegVec& d);

/* Alphabet letters must have total degree >= 1, all components >= -1 and at
   most one component equal to -1. Degree vectors outside this set can still
   occur as norms of words (sums of letters); they are never letters. */
bool is_valid_letter(const DegVec& d);

int word_weight(const Word& w);
DegVec word_norm(int nu, const Word& w);
Word word_concat(const Word& a, const Word& b);

/* Canonical total orders: letters by (total degree, lexicographic),
   words by (weight, length, letterwise). All table output uses these. */
bool letter_less(const DegVec& a, const DegVec& b);
bool word_less(const Word& a, const Word& b);

struct WordLess {
    bool operator()(const Word& a, const Word& b) const { return word_less(a, b); }
};
struct LetterLess {
    bool operator()(const DegVec& a, const DegVec& b) const { return letter_less(a, b); }
};

/* `(1,0).(-1,2)`; the empty word prints as `()`. */
std::string to_string(const DegVec& d);
std::string to_string(const Word& w);
DegVec parse_degvec(const std::string& text);
Word parse_word(const std::string& text);

/* Splits w into k consecutive nonempty factors, C(l-1,k-1) tuples, in
   cut-position order. k outside [1,l] yields nothing. */
std::vector<std::vector<Word>> partitions(const Word& w, int k);

/* Finite working universe: dimension, multipliers, a concrete letter set and
   the weight bound for every word table built over it. Immutable; shared. */
class TruncationContext {
  public:
    TruncationContext(int nu, MultiplierVector mu, int max_weight, std::vector<DegVec> letters);

    int nu() const { return nu_; }
    int max_weight() const { return max_weight_; }
    const MultiplierVector& mu() const { return mu_; }
    const std::vector<DegVec>& letters() const { return letters_; }

    /* true iff prod mu_i^{d_i} = 1 */
    bool is_resonant(const DegVec& d) const;

    /* All words over the letter set with weight <= max_weight, each once,
       in canonical order. Built on first use. */
    const std::vector<Word>& words() const;

    bool same_as(const TruncationContext& o) const;

  private:
    int nu_;
    MultiplierVector mu_;
    int max_weight_;
    std::vector<DegVec> letters_;
    mutable std::mutex cache_mutex_;
    mutable std::vector<Word> words_;
    mutable bool words_built_ = false;
    mutable std::map<DegVec, bool> resonance_cache_;
};

using ContextPtr = std::shared_ptr<const TruncationContext>;

ContextPtr make_context(int nu, MultiplierVector mu, int max_weight, std::vector<DegVec> letters);

/* Every valid letter of weight 1..max_weight (the full truncated alphabet). */
std::vector<DegVec> all_valid_letters(int nu, int max_weight);

/* The letter set together with every degree vector reachable as a norm of a
   word over it (weight <= max_weight). Mould composition evaluates the left
   factor on norm words, so composed tables are built over this closure. */
std::vector<DegVec> norm_closure(int nu, const std::vector<DegVec>& letters, int max_weight);

std::vector<Word> enumerate_words(int nu, const std::vector<DegVec>& letters, int max_weight);

}  // namespace mouldkit
