#include "mouldkit/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace mouldkit {

void TruncatedPoly::add_term(const DegVec& m, const Scalar& c) {
    if (c.is_zero())
        return;
    auto [it, inserted] = coeffs.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            coeffs.erase(it);
    }
}

TruncatedPoly poly_monomial(const DegVec& m, Scalar c) {
    TruncatedPoly p;
    p.add_term(m, c);
    return p;
}

TruncatedPoly poly_add(const TruncatedPoly& a, const TruncatedPoly& b) {
    TruncatedPoly r = a;
    for (const auto& [m, c] : b.coeffs)
        r.add_term(m, c);
    return r;
}

TruncatedPoly poly_sub(const TruncatedPoly& a, const TruncatedPoly& b) {
    TruncatedPoly r = a;
    for (const auto& [m, c] : b.coeffs)
        r.add_term(m, -c);
    return r;
}

TruncatedPoly poly_scale(const Scalar& c, const TruncatedPoly& a) {
    TruncatedPoly r;
    if (c.is_zero())
        return r;
    for (const auto& [m, v] : a.coeffs)
        r.coeffs.emplace(m, c * v);
    return r;
}

TruncatedPoly poly_mul(const TruncatedPoly& a, const TruncatedPoly& b, int trunc) {
    TruncatedPoly r;
    for (const auto& [ma, ca] : a.coeffs) {
        int da = total_degree(ma);
        for (const auto& [mb, cb] : b.coeffs) {
            if (da + total_degree(mb) > trunc)
                continue;
            DegVec m(ma.size());
            for (size_t i = 0; i < ma.size(); ++i)
                m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

TruncatedPoly poly_truncate(const TruncatedPoly& a, int trunc) {
    TruncatedPoly r;
    for (const auto& [m, c] : a.coeffs)
        if (total_degree(m) <= trunc)
            r.coeffs.emplace(m, c);
    return r;
}

TruncatedPoly poly_derivative(const TruncatedPoly& a, int var) {
    TruncatedPoly r;
    for (const auto& [m, c] : a.coeffs) {
        if (m[var] == 0)
            continue;
        DegVec d = m;
        d[var] -= 1;
        r.add_term(d, Scalar(Rational(m[var])) * c);
    }
    return r;
}

TruncatedPoly poly_substitute(const TruncatedPoly& phi, const std::vector<TruncatedPoly>& g,
                              int trunc) {
    const int nu = static_cast<int>(g.size());
    DegVec zero(nu, 0);
    for (const auto& gi : g)
        if (!gi.coeff(zero).is_zero())
            throw std::invalid_argument("poly_substitute: substituted map has a constant term");

    // per-variable power cache
    std::vector<std::vector<TruncatedPoly>> pows(nu);
    for (int i = 0; i < nu; ++i)
        pows[i].push_back(poly_monomial(zero, Scalar(1)));

    auto power = [&](int i, int k) -> const TruncatedPoly& {
        while (static_cast<int>(pows[i].size()) <= k)
            pows[i].push_back(poly_mul(pows[i].back(), g[i], trunc));
        return pows[i][k];
    };

    TruncatedPoly out;
    for (const auto& [m, c] : phi.coeffs) {
        TruncatedPoly term = poly_monomial(zero, c);
        for (int i = 0; i < nu && !term.is_zero(); ++i)
            if (m[i] > 0)
                term = poly_mul(term, power(i, m[i]), trunc);
        out = poly_add(out, term);
    }
    return out;
}

TruncatedPoly flin_apply(const MultiplierVector& mu, const TruncatedPoly& p) {
    TruncatedPoly r;
    for (const auto& [m, c] : p.coeffs)
        r.coeffs.emplace(m, multiplier_power(mu, m) * c);
    return r;
}

TruncatedPoly scale_variables(const TruncatedPoly& p, const MultiplierVector& mu) {
    return flin_apply(mu, p);
}

std::string to_string(const TruncatedPoly& p) {
    if (p.coeffs.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.coeffs) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << to_string(c) << ")*x^" << to_string(m);
    }
    return os.str();
}

std::vector<DegVec> enumerate_monomials(int nu, int max_degree) {
    std::vector<DegVec> out;
    DegVec cur(nu, 0);
    auto rec = [&](auto&& self, int i, int budget) -> void {
        if (i == nu) {
            if (total_degree(cur) >= 1)
                out.push_back(cur);
            return;
        }
        for (int c = 0; c <= budget; ++c) {
            cur[i] = c;
            self(self, i + 1, budget - c);
        }
        cur[i] = 0;
    };
    rec(rec, 0, max_degree);
    std::sort(out.begin(), out.end(), letter_less);
    return out;
}

PolyMap map_identity(int nu) {
    PolyMap m;
    for (int i = 0; i < nu; ++i) {
        DegVec e(nu, 0);
        e[i] = 1;
        m.push_back(poly_monomial(e, Scalar(1)));
    }
    return m;
}

PolyMap map_compose(const PolyMap& g, const PolyMap& f, int trunc) {
    PolyMap out;
    out.reserve(g.size());
    for (const auto& gi : g)
        out.push_back(poly_substitute(gi, f, trunc));
    return out;
}

bool map_equal(const PolyMap& a, const PolyMap& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i]))
            return false;
    return true;
}

}  // namespace mouldkit
