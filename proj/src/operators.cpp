#include "mouldkit/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace mouldkit {

namespace {

void require_compatible(const OperatorSeries& a, const OperatorSeries& b, const char* op) {
    if (a.nu != b.nu || a.trunc != b.trunc)
        throw std::invalid_argument(std::string(op) + ": operator context mismatch");
}

DegVec vec_add(const DegVec& a, const DegVec& b) {
    DegVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

}  // namespace

void HomOperator::add_entry(const DegVec& m, const Scalar& c) {
    if (c.is_zero())
        return;
    auto [it, inserted] = action.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            action.erase(it);
    }
}

void OperatorSeries::add_part_entry(const DegVec& degree, const DegVec& m, const Scalar& c) {
    if (c.is_zero())
        return;
    auto it = parts.find(degree);
    if (it == parts.end())
        it = parts.emplace(degree, HomOperator{degree, {}}).first;
    it->second.add_entry(m, c);
    if (it->second.is_zero())
        parts.erase(it);
}

OperatorSeries op_zero(int nu, int trunc) { return OperatorSeries{nu, trunc, Scalar(), {}}; }

OperatorSeries op_identity(int nu, int trunc) { return OperatorSeries{nu, trunc, Scalar(1), {}}; }

OperatorSeries op_add(const OperatorSeries& a, const OperatorSeries& b) {
    require_compatible(a, b, "op_add");
    OperatorSeries r = a;
    r.constant += b.constant;
    for (const auto& [d, op] : b.parts)
        for (const auto& [m, c] : op.action)
            r.add_part_entry(d, m, c);
    return r;
}

OperatorSeries op_sub(const OperatorSeries& a, const OperatorSeries& b) {
    return op_add(a, op_scale(Scalar(-1L), b));
}

OperatorSeries op_scale(const Scalar& c, const OperatorSeries& a) {
    OperatorSeries r = op_zero(a.nu, a.trunc);
    if (c.is_zero())
        return r;
    r.constant = c * a.constant;
    for (const auto& [d, op] : a.parts)
        for (const auto& [m, v] : op.action)
            r.add_part_entry(d, m, c * v);
    return r;
}

TruncatedPoly op_apply(const OperatorSeries& p, const TruncatedPoly& phi) {
    TruncatedPoly out = poly_scale(p.constant, phi);
    for (const auto& [d, op] : p.parts) {
        for (const auto& [m, c] : phi.coeffs) {
            Scalar beta = op.entry(m);
            if (beta.is_zero())
                continue;
            out.add_term(vec_add(m, d), beta * c);
        }
    }
    return out;
}

OperatorSeries op_mul(const OperatorSeries& a, const OperatorSeries& b) {
    require_compatible(a, b, "op_mul");
    OperatorSeries r = op_zero(a.nu, a.trunc);
    r.constant = a.constant * b.constant;
    if (!a.constant.is_zero())
        for (const auto& [d, op] : b.parts)
            for (const auto& [m, c] : op.action)
                r.add_part_entry(d, m, a.constant * c);
    if (!b.constant.is_zero())
        for (const auto& [d, op] : a.parts)
            for (const auto& [m, c] : op.action)
                r.add_part_entry(d, m, b.constant * c);
    // (a_da o b_db)(x^m) = b[m] * a[m + db] * x^{m + db + da}
    for (const auto& [da, pa] : a.parts) {
        for (const auto& [db, pb] : b.parts) {
            DegVec d = vec_add(da, db);
            for (const auto& [m, cb] : pb.action) {
                Scalar ca = pa.entry(vec_add(m, db));
                if (ca.is_zero())
                    continue;
                r.add_part_entry(d, m, ca * cb);
            }
        }
    }
    return r;
}

OperatorSeries op_commutator(const OperatorSeries& a, const OperatorSeries& b) {
    return op_sub(op_mul(a, b), op_mul(b, a));
}

OperatorSeries op_exp(const OperatorSeries& p) {
    if (!p.constant.is_zero())
        throw std::invalid_argument("op_exp: constant part must be 0");
    OperatorSeries acc = op_identity(p.nu, p.trunc);
    OperatorSeries term = op_identity(p.nu, p.trunc);
    for (int k = 1; k <= p.trunc; ++k) {
        term = op_scale(Scalar(Rational(1, k)), op_mul(term, p));
        if (term.parts_empty())
            break;
        acc = op_add(acc, term);
    }
    return acc;
}

OperatorSeries op_log(const OperatorSeries& p) {
    if (!p.constant.is_one())
        throw std::invalid_argument("op_log: constant part must be 1");
    OperatorSeries x = p;
    x.constant = Scalar();
    OperatorSeries acc = op_zero(p.nu, p.trunc);
    OperatorSeries power = op_identity(p.nu, p.trunc);
    for (int k = 1; k <= p.trunc; ++k) {
        power = op_mul(power, x);
        if (power.parts_empty())
            break;
        acc = op_add(acc, op_scale(Scalar(Rational((k % 2) ? 1 : -1, k)), power));
    }
    return acc;
}

OperatorSeries op_inverse(const OperatorSeries& p) {
    if (p.constant.is_zero())
        throw std::invalid_argument("op_inverse: constant part is 0, not invertible");
    Scalar cinv = scalar_inverse(p.constant);
    OperatorSeries x = op_scale(cinv, p);  // Id + R
    x.constant = Scalar();                 // R
    OperatorSeries acc = op_identity(p.nu, p.trunc);
    OperatorSeries power = op_identity(p.nu, p.trunc);
    for (int k = 1; k <= p.trunc; ++k) {
        power = op_scale(Scalar(-1L), op_mul(power, x));
        if (power.parts_empty())
            break;
        acc = op_add(acc, power);
    }
    return op_scale(cinv, acc);
}

OperatorSeries flin_twist(const OperatorSeries& p, const MultiplierVector& mu) {
    OperatorSeries r = op_zero(p.nu, p.trunc);
    r.constant = p.constant;
    for (const auto& [d, op] : p.parts) {
        Scalar factor = scalar_inverse(multiplier_power(mu, d));
        for (const auto& [m, c] : op.action)
            r.add_part_entry(d, m, factor * c);
    }
    return r;
}

bool commutes_with_flin(const OperatorSeries& p, const MultiplierVector& mu) {
    return flin_twist(p, mu) == p;
}

void validate_prepared(const PreparedDiffeo& f) {
    if (f.nu < 1)
        throw std::invalid_argument("prepared diffeo: dimension must be >= 1");
    if (static_cast<int>(f.mu.size()) != f.nu)
        throw std::invalid_argument("prepared diffeo: multiplier count != dimension");
    for (const auto& m : f.mu)
        if (m.is_zero())
            throw std::invalid_argument("prepared diffeo: zero multiplier");
    if (static_cast<int>(f.h.size()) != f.nu)
        throw std::invalid_argument("prepared diffeo: component count != dimension");
    if (f.trunc < 1)
        throw std::invalid_argument("prepared diffeo: truncation degree must be >= 1");
    for (const auto& hi : f.h)
        for (const auto& [m, c] : hi.coeffs) {
            if (static_cast<int>(m.size()) != f.nu)
                throw std::invalid_argument("prepared diffeo: exponent dimension mismatch");
            if (total_degree(m) < 2)
                throw std::invalid_argument(
                    "prepared diffeo: nonlinear part has a term of degree < 2 at " + to_string(m));
        }
}

PolyMap diffeo_map(const PreparedDiffeo& f) {
    PolyMap m;
    for (int i = 0; i < f.nu; ++i) {
        DegVec e(f.nu, 0);
        e[i] = 1;
        m.push_back(poly_add(poly_monomial(e, f.mu[i]), poly_truncate(f.h[i], f.trunc)));
    }
    return m;
}

OperatorSeries substitution_operator(const PolyMap& g, int trunc) {
    const int nu = static_cast<int>(g.size());
    OperatorSeries out = op_identity(nu, trunc);
    for (const DegVec& m : enumerate_monomials(nu, trunc)) {
        TruncatedPoly image = poly_substitute(poly_monomial(m, Scalar(1)), g, trunc);
        for (const auto& [q, c] : image.coeffs) {
            DegVec shift(q.size());
            bool zero_shift = true;
            for (size_t i = 0; i < q.size(); ++i) {
                shift[i] = q[i] - m[i];
                if (shift[i] != 0)
                    zero_shift = false;
            }
            if (zero_shift) {
                if (!c.is_one())
                    throw std::invalid_argument(
                        "substitution_operator: map is not tangent to the identity");
                continue;
            }
            if (total_degree(shift) < 1)
                throw std::invalid_argument(
                    "substitution_operator: map is not tangent to the identity");
            out.add_part_entry(shift, m, c);
        }
    }
    return out;
}

OperatorSeries extract_B(const PreparedDiffeo& f) {
    validate_prepared(f);
    MultiplierVector mu_inv;
    mu_inv.reserve(f.mu.size());
    for (const auto& m : f.mu)
        mu_inv.push_back(scalar_inverse(m));
    // F = F_lin (phi -> phi o (Id + eps)) with eps(x) = h(f_lin^{-1} x)
    PolyMap id_plus_eps;
    for (int i = 0; i < f.nu; ++i) {
        DegVec e(f.nu, 0);
        e[i] = 1;
        TruncatedPoly eps = scale_variables(poly_truncate(f.h[i], f.trunc), mu_inv);
        id_plus_eps.push_back(poly_add(poly_monomial(e, Scalar(1)), eps));
    }
    return substitution_operator(id_plus_eps, f.trunc);
}

OperatorSeries extract_D(const PreparedDiffeo& f) { return op_log(extract_B(f)); }

OperatorSeries extract_D(const OperatorSeries& id_plus_b) { return op_log(id_plus_b); }

std::vector<DegVec> alphabet_of(const OperatorSeries& p) {
    std::vector<DegVec> out;
    for (const auto& [d, op] : p.parts) {
        if (op.is_zero())
            continue;
        if (!is_valid_letter(d))
            throw std::domain_error("operator degree outside the letter domain: " + to_string(d));
        out.push_back(d);
    }
    return out;
}

OperatorSeries mould_expand(const Mould& m, const OperatorSeries& ops) {
    OperatorSeries out = op_zero(ops.nu, ops.trunc);
    out.constant = m.value(Word{});
    for (const auto& [w, v] : m.table()) {
        if (w.empty())
            continue;
        // B_w = B_{n_1} o ... o B_{n_r}, rightmost acting first
        const HomOperator* last = nullptr;
        OperatorSeries acc = op_zero(ops.nu, ops.trunc);
        bool dead = false;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            const HomOperator* part = ops.part(*it);
            if (!part) {
                dead = true;
                break;
            }
            if (!last) {
                acc.parts.clear();
                acc.parts.emplace(part->degree, *part);
                last = part;
            } else {
                OperatorSeries step = op_zero(ops.nu, ops.trunc);
                step.parts.emplace(part->degree, *part);
                acc = op_mul(step, acc);
                if (acc.parts_empty()) {
                    dead = true;
                    break;
                }
            }
        }
        if (dead)
            continue;
        for (const auto& [d, op] : acc.parts)
            for (const auto& [mm, c] : op.action)
                out.add_part_entry(d, mm, v * c);
    }
    return out;
}

OperatorSeries conjugate_operator(const OperatorSeries& theta, const OperatorSeries& p,
                                  const MultiplierVector& mu) {
    if (theta.constant.is_zero())
        throw std::invalid_argument("conjugate_operator: theta is not invertible");
    return op_mul(op_mul(flin_twist(theta, mu), p), op_inverse(theta));
}

Mould conjugation_mould(const Mould& theta) {
    Mould one_plus_id = mould_add(mould_one(theta.context()), mould_id(theta.context()));
    return mould_mul(mould_mul(mould_edelta(theta), one_plus_id), mould_inverse(theta));
}

PolyMap operator_to_map(const OperatorSeries& p, const MultiplierVector& mu) {
    PolyMap out;
    for (int i = 0; i < p.nu; ++i) {
        DegVec e(p.nu, 0);
        e[i] = 1;
        out.push_back(flin_apply(mu, op_apply(p, poly_monomial(e, Scalar(1)))));
    }
    return out;
}

OperatorSeries bch_star(const OperatorSeries& a, const OperatorSeries& b, int order) {
    if (order < 1 || order > 4)
        throw std::invalid_argument("bch_star: order must be between 1 and 4");
    if (!a.constant.is_zero() || !b.constant.is_zero())
        throw std::invalid_argument("bch_star: arguments must have zero constant part");
    OperatorSeries r = op_add(a, b);
    if (order >= 2) {
        OperatorSeries ab = op_commutator(a, b);
        r = op_add(r, op_scale(Scalar(Rational(1, 2)), ab));
        if (order >= 3) {
            r = op_add(r, op_scale(Scalar(Rational(1, 12)), op_commutator(a, ab)));
            r = op_sub(r, op_scale(Scalar(Rational(1, 12)), op_commutator(b, ab)));
        }
        // no depth-4 brackets; callers pick truncations where those vanish
    }
    return r;
}

}  // namespace mouldkit
