#include "mouldkit/alphabet.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mouldkit {

int total_degree(const DegVec& d) {
    int s = 0;
    for (int c : d)
        s += c;
    return s;
}

bool is_valid_letter(const DegVec& d) {
    int minus_ones = 0;
    for (int c : d) {
        if (c < -1)
            return false;
        if (c == -1)
            ++minus_ones;
    }
    return minus_ones <= 1 && total_degree(d) >= 1;
}

int word_weight(const Word& w) {
    int s = 0;
    for (const auto& l : w)
        s += total_degree(l);
    return s;
}

DegVec word_norm(int nu, const Word& w) {
    DegVec n(nu, 0);
    for (const auto& l : w)
        for (int i = 0; i < nu; ++i)
            n[i] += l[i];
    return n;
}

Word word_concat(const Word& a, const Word& b) {
    Word r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

bool letter_less(const DegVec& a, const DegVec& b) {
    int da = total_degree(a), db = total_degree(b);
    if (da != db)
        return da < db;
    return a < b;
}

bool word_less(const Word& a, const Word& b) {
    int wa = word_weight(a), wb = word_weight(b);
    if (wa != wb)
        return wa < wb;
    if (a.size() != b.size())
        return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            return a[i] < b[i];
    return false;
}

std::string to_string(const DegVec& d) {
    std::string out = "(";
    for (size_t i = 0; i < d.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(d[i]);
    }
    return out + ")";
}

std::string to_string(const Word& w) {
    if (w.empty())
        return "()";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i)
            out += ".";
        out += to_string(w[i]);
    }
    return out;
}

DegVec parse_degvec(const std::string& text) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw std::invalid_argument("bad degree vector: '" + text + "'");
    DegVec d;
    std::string inner = text.substr(1, text.size() - 2);
    if (inner.empty())
        return d;
    std::istringstream is(inner);
    std::string tok;
    while (std::getline(is, tok, ','))
        d.push_back(std::stoi(tok));
    return d;
}

Word parse_word(const std::string& text) {
    if (text == "()")
        return Word{};
    Word w;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t close = text.find(')', pos);
        if (text[pos] != '(' || close == std::string::npos)
            throw std::invalid_argument("bad word: '" + text + "'");
        w.push_back(parse_degvec(text.substr(pos, close - pos + 1)));
        pos = close + 1;
        if (pos < text.size()) {
            if (text[pos] != '.')
                throw std::invalid_argument("bad word: '" + text + "'");
            ++pos;
        }
    }
    return w;
}

std::vector<std::vector<Word>> partitions(const Word& w, int k) {
    std::vector<std::vector<Word>> out;
    int l = static_cast<int>(w.size());
    if (k < 1 || k > l)
        return out;
    // choose k-1 cut positions out of l-1
    std::vector<int> cuts(k - 1);
    for (int i = 0; i < k - 1; ++i)
        cuts[i] = i + 1;
    while (true) {
        std::vector<Word> tuple;
        int prev = 0;
        for (int c : cuts) {
            tuple.emplace_back(w.begin() + prev, w.begin() + c);
            prev = c;
        }
        tuple.emplace_back(w.begin() + prev, w.end());
        out.push_back(std::move(tuple));

        int i = k - 2;
        while (i >= 0 && cuts[i] == l - (k - 1 - i))
            --i;
        if (i < 0)
            break;
        ++cuts[i];
        for (int j = i + 1; j < k - 1; ++j)
            cuts[j] = cuts[j - 1] + 1;
    }
    return out;
}

TruncationContext::TruncationContext(int nu, MultiplierVector mu, int max_weight,
                                     std::vector<DegVec> letters)
    : nu_(nu), mu_(std::move(mu)), max_weight_(max_weight), letters_(std::move(letters)) {
    if (nu_ < 1)
        throw std::invalid_argument("context: dimension must be >= 1");
    if (static_cast<int>(mu_.size()) != nu_)
        throw std::invalid_argument("context: multiplier count != dimension");
    for (const auto& m : mu_)
        if (m.is_zero())
            throw std::invalid_argument("context: zero multiplier");
    if (max_weight_ < 1)
        throw std::invalid_argument("context: max weight must be >= 1");
    for (const auto& l : letters_) {
        if (static_cast<int>(l.size()) != nu_)
            throw std::invalid_argument("context: letter dimension mismatch");
        if (total_degree(l) < 1 || total_degree(l) > max_weight_)
            throw std::invalid_argument("context: letter weight out of range: " + to_string(l));
    }
    std::sort(letters_.begin(), letters_.end(), letter_less);
    letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
}

bool TruncationContext::is_resonant(const DegVec& d) const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = resonance_cache_.find(d);
        if (it != resonance_cache_.end())
            return it->second;
    }
    bool r = multiplier_power(mu_, d).is_one();
    std::lock_guard<std::mutex> lock(cache_mutex_);
    resonance_cache_.emplace(d, r);
    return r;
}

const std::vector<Word>& TruncationContext::words() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!words_built_) {
        words_ = enumerate_words(nu_, letters_, max_weight_);
        words_built_ = true;
    }
    return words_;
}

bool TruncationContext::same_as(const TruncationContext& o) const {
    return nu_ == o.nu_ && max_weight_ == o.max_weight_ && mu_ == o.mu_ && letters_ == o.letters_;
}

ContextPtr make_context(int nu, MultiplierVector mu, int max_weight, std::vector<DegVec> letters) {
    return std::make_shared<TruncationContext>(nu, std::move(mu), max_weight, std::move(letters));
}

std::vector<DegVec> all_valid_letters(int nu, int max_weight) {
    std::vector<DegVec> out;
    DegVec cur(nu, 0);
    // enumerate all vectors with components in [-1, max_weight+1] and filter
    auto rec = [&](auto&& self, int i) -> void {
        if (i == nu) {
            if (is_valid_letter(cur) && total_degree(cur) <= max_weight)
                out.push_back(cur);
            return;
        }
        for (int c = -1; c <= max_weight + 1; ++c) {
            cur[i] = c;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), letter_less);
    return out;
}

std::vector<DegVec> norm_closure(int nu, const std::vector<DegVec>& letters, int max_weight) {
    std::set<DegVec> seen(letters.begin(), letters.end());
    std::vector<DegVec> frontier(letters.begin(), letters.end());
    while (!frontier.empty()) {
        std::vector<DegVec> next;
        for (const auto& d : frontier) {
            for (const auto& l : letters) {
                DegVec s(nu);
                for (int i = 0; i < nu; ++i)
                    s[i] = d[i] + l[i];
                if (total_degree(s) > max_weight)
                    continue;
                if (seen.insert(s).second)
                    next.push_back(s);
            }
        }
        frontier = std::move(next);
    }
    std::vector<DegVec> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), letter_less);
    return out;
}

std::vector<Word> enumerate_words(int nu, const std::vector<DegVec>& letters, int max_weight) {
    for (const auto& l : letters) {
        if (static_cast<int>(l.size()) != nu || total_degree(l) < 1)
            throw std::invalid_argument("enumerate_words: bad letter " + to_string(l));
    }
    std::vector<Word> out;
    out.push_back(Word{});
    Word cur;
    auto rec = [&](auto&& self, int budget) -> void {
        for (const auto& l : letters) {
            int w = total_degree(l);
            if (w > budget)
                continue;
            cur.push_back(l);
            out.push_back(cur);
            self(self, budget - w);
            cur.pop_back();
        }
    };
    rec(rec, max_weight);
    std::sort(out.begin(), out.end(), word_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace mouldkit
