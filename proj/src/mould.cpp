#include "mouldkit/mould.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mouldkit {

namespace {

void require_same_context(const Mould& a, const Mould& b, const char* op) {
    if (!a.context()->same_as(*b.context()))
        throw std::invalid_argument(std::string(op) + ": context mismatch");
}

bool length1_supported(const Mould& z) {
    for (const auto& [w, v] : z.table())
        if (w.size() != 1)
            return false;
    return true;
}

}  // namespace

Scalar Mould::value(const Word& w) const {
    auto it = values_.find(w);
    return it == values_.end() ? Scalar() : it->second;
}

void Mould::set(const Word& w, Scalar v) {
    if (v.is_zero())
        values_.erase(w);
    else
        values_[w] = std::move(v);
}

void Mould::add_to(const Word& w, const Scalar& v) {
    if (v.is_zero())
        return;
    auto [it, inserted] = values_.try_emplace(w, v);
    if (!inserted) {
        it->second += v;
        if (it->second.is_zero())
            values_.erase(it);
    }
}

Mould mould_one(ContextPtr ctx) {
    Mould m(std::move(ctx));
    m.set(Word{}, Scalar(1));
    return m;
}

Mould mould_id(ContextPtr ctx) {
    Mould m(ctx);
    for (const auto& l : ctx->letters())
        m.set(Word{l}, Scalar(1));
    return m;
}

Mould mould_add(const Mould& a, const Mould& b) {
    require_same_context(a, b, "mould_add");
    Mould r = a;
    for (const auto& [w, v] : b.table())
        r.add_to(w, v);
    return r;
}

Mould mould_sub(const Mould& a, const Mould& b) {
    require_same_context(a, b, "mould_sub");
    Mould r = a;
    for (const auto& [w, v] : b.table())
        r.add_to(w, -v);
    return r;
}

Mould mould_neg(const Mould& a) { return mould_scale(Scalar(-1L), a); }

Mould mould_scale(const Scalar& c, const Mould& a) {
    Mould r(a.context());
    if (c.is_zero())
        return r;
    for (const auto& [w, v] : a.table())
        r.set(w, c * v);
    return r;
}

Mould mould_mul(const Mould& a, const Mould& b) {
    require_same_context(a, b, "mould_mul");
    const int cap = a.context()->max_weight();
    Mould r(a.context());
    for (const auto& [wa, va] : a.table()) {
        int weight_a = word_weight(wa);
        for (const auto& [wb, vb] : b.table()) {
            if (weight_a + word_weight(wb) > cap)
                continue;
            r.add_to(word_concat(wa, wb), va * vb);
        }
    }
    return r;
}

Mould mould_inverse(const Mould& m) {
    Scalar head = m.value(Word{});
    if (head.is_zero())
        throw std::domain_error("mould_inverse: not invertible (empty-word value is 0)");
    Scalar head_inv = scalar_inverse(head);
    Mould inv(m.context());
    inv.set(Word{}, head_inv);
    // canonical order sorts by weight, and every proper suffix has smaller
    // weight, so suffix values are ready when needed
    for (const Word& w : m.context()->words()) {
        if (w.empty())
            continue;
        Scalar acc;
        for (size_t cut = 1; cut <= w.size(); ++cut) {
            Word pre(w.begin(), w.begin() + cut);
            Word suf(w.begin() + cut, w.end());
            Scalar mv = m.value(pre);
            if (mv.is_zero())
                continue;
            acc += mv * inv.value(suf);
        }
        inv.set(w, -(head_inv * acc));
    }
    return inv;
}

Mould mould_compose(const Mould& m, const Mould& n) {
    require_same_context(m, n, "mould_compose");
    if (!n.value(Word{}).is_zero())
        throw std::invalid_argument("mould_compose: right factor must vanish on the empty word");
    const int cap = m.context()->max_weight();
    const int nu = m.context()->nu();

    // Ordered tuples of nonempty support words of n, extended depth-first;
    // each tuple contributes M^{norm word} * prod N^{factor} at the
    // concatenation.
    std::vector<std::pair<Word, Scalar>> support(n.table().begin(), n.table().end());
    Mould r(m.context());
    r.set(Word{}, m.value(Word{}));

    Word concat;
    Word norms;
    auto rec = [&](auto&& self, int budget, const Scalar& coeff) -> void {
        for (const auto& [w, v] : support) {
            int wt = word_weight(w);
            if (wt > budget)
                continue;
            Scalar c = coeff * v;
            size_t old_size = concat.size();
            concat.insert(concat.end(), w.begin(), w.end());
            norms.push_back(word_norm(nu, w));
            Scalar mv = m.value(norms);
            if (!mv.is_zero())
                r.add_to(concat, mv * c);
            self(self, budget - wt, c);
            concat.resize(old_size);
            norms.pop_back();
        }
    };
    rec(rec, cap, Scalar(1));
    return r;
}

Mould mould_exp(const Mould& m) {
    if (!m.value(Word{}).is_zero())
        throw std::invalid_argument("mould_exp: argument must vanish on the empty word");
    Mould r = mould_one(m.context());
    Mould power = mould_one(m.context());
    Rational fact(1);
    for (int k = 1; k <= m.context()->max_weight(); ++k) {
        power = mould_mul(power, m);
        if (power.table().empty())
            break;
        fact *= k;
        r = mould_add(r, mould_scale(Scalar(Rational(1) / fact), power));
    }
    return r;
}

Mould mould_log(const Mould& m) {
    if (!m.value(Word{}).is_one())
        throw std::invalid_argument("mould_log: argument must be 1 on the empty word");
    Mould x = m;
    x.set(Word{}, Scalar());
    Mould r(m.context());
    Mould power = mould_one(m.context());
    for (int k = 1; k <= m.context()->max_weight(); ++k) {
        power = mould_mul(power, x);
        if (power.table().empty())
            break;
        Scalar coeff(Rational((k % 2) ? 1 : -1, k));
        r = mould_add(r, mould_scale(coeff, power));
    }
    return r;
}

Mould length1_power(const Mould& z, int r) {
    if (!length1_supported(z))
        throw std::invalid_argument("length1_power: mould not supported on single letters");
    Mould out(z.context());
    if (r == 0) {
        out.set(Word{}, Scalar(1));
        return out;
    }
    const int cap = z.context()->max_weight();
    Word cur;
    auto rec = [&](auto&& self, int depth, int budget, const Scalar& coeff) -> void {
        if (depth == r) {
            out.set(cur, coeff);
            return;
        }
        for (const auto& [w, v] : z.table()) {
            int wt = word_weight(w);
            if (wt > budget)
                continue;
            cur.push_back(w[0]);
            self(self, depth + 1, budget - wt, coeff * v);
            cur.pop_back();
        }
    };
    rec(rec, 0, cap, Scalar(1));
    return out;
}

namespace {

/* shared body of the two length-1 series fast paths; coeff(l) multiplies the
   product of letter values on each length-l word */
template <typename CoeffFn>
Mould length1_series(const Mould& z, bool with_empty_one, CoeffFn coeff) {
    if (!length1_supported(z))
        throw std::invalid_argument("length1 fast path: mould not supported on single letters");
    Mould out(z.context());
    if (with_empty_one)
        out.set(Word{}, Scalar(1));
    const int cap = z.context()->max_weight();
    Word cur;
    auto rec = [&](auto&& self, int budget, const Scalar& prod) -> void {
        for (const auto& [w, v] : z.table()) {
            int wt = word_weight(w);
            if (wt > budget)
                continue;
            cur.push_back(w[0]);
            Scalar p = prod * v;
            out.set(cur, p * coeff(static_cast<int>(cur.size())));
            self(self, budget - wt, p);
            cur.pop_back();
        }
    };
    rec(rec, cap, Scalar(1));
    return out;
}

}  // namespace

Mould length1_exp(const Mould& z) {
    return length1_series(z, true, [](int l) {
        Rational f(1);
        for (int k = 2; k <= l; ++k)
            f *= k;
        return Scalar(Rational(1) / f);
    });
}

Mould length1_log(const Mould& z) {
    return length1_series(z, false,
                          [](int l) { return Scalar(Rational((l % 2) ? 1 : -1, l)); });
}

Mould mould_edelta(const Mould& m) {
    const auto& ctx = *m.context();
    Mould r(m.context());
    for (const auto& [w, v] : m.table()) {
        Scalar factor = scalar_inverse(multiplier_power(ctx.mu(), word_norm(ctx.nu(), w)));
        r.set(w, factor * v);
    }
    return r;
}

void dump_mould_tsv(std::ostream& os, const std::string& name, const Mould& m) {
    const auto& ctx = *m.context();
    os << "# mould " << name << " nu=" << ctx.nu() << " mu=" << to_string(ctx.mu())
       << " maxWeight=" << ctx.max_weight() << "\n";
    for (const auto& [w, v] : m.table())
        os << to_string(w) << "\t" << to_string(v) << "\n";
}

Mould parse_mould_tsv(std::istream& is, ContextPtr ctx) {
    Mould m(std::move(ctx));
    const auto& c = *m.context();
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::invalid_argument("mould table: bad row '" + line + "'");
        Word w = parse_word(line.substr(0, tab));
        for (const auto& l : w)
            if (static_cast<int>(l.size()) != c.nu() || total_degree(l) < 1)
                throw std::invalid_argument("mould table: bad letter in row '" + line + "'");
        if (word_weight(w) > c.max_weight())
            throw std::invalid_argument("mould table: word beyond the weight bound in '" + line +
                                        "'");
        m.set(std::move(w), parse_scalar(line.substr(tab + 1)));
    }
    return m;
}

}  // namespace mouldkit
