#pragma once

// Finitely supported elements of the group algebra CΓ and square matrices
// over it. Coefficients are complex doubles by default; GaussianRational
// gives exact arithmetic for identity checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spectral_gamma/errors.hpp"
#include "spectral_gamma/groups.hpp"

namespace sgamma {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

/// Exact complex number with rational parts.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(int r) : re(r), im(0) {}

    // Doubles are dyadic rationals, so the conversion is exact.
    static GaussianRational from_complex(Complex z) { return {to_rational(z.real()), to_rational(z.imag())}; }

    static Rational to_rational(double v) {
        if (!std::isfinite(v)) throw DomainError("non-finite coefficient cannot be made exact");
        int exp = 0;
        double mant = std::frexp(v, &exp);
        // mant * 2^53 is an integer
        auto m = static_cast<long long>(std::ldexp(mant, 53));
        Rational r(m);
        exp -= 53;
        boost::multiprecision::cpp_int p = 1;
        p <<= std::abs(exp);
        if (exp >= 0) r *= Rational(p);
        else r /= Rational(p);
        return r;
    }

    Complex to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
    Rational abs2() const { return re * re + im * im; }
    GaussianRational conj() const { return {re, -im}; }
    bool is_zero() const { return re == 0 && im == 0; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Complex> {
    static constexpr bool exact = false;
    // coefficients with modulus below this are purged
    static constexpr double purge = 1e-300;
    static bool is_zero(const Complex& c) { return std::abs(c) < purge; }
    static double abs(const Complex& c) { return std::abs(c); }
    static Complex conj(const Complex& c) { return std::conj(c); }
    static Complex one() { return {1.0, 0.0}; }
    static Complex to_complex(const Complex& c) { return c; }
};

template <>
struct CoeffTraits<GaussianRational> {
    static constexpr bool exact = true;
    static bool is_zero(const GaussianRational& c) { return c.is_zero(); }
    static double abs(const GaussianRational& c) { return std::sqrt(c.abs2().convert_to<double>()); }
    static GaussianRational conj(const GaussianRational& c) { return c.conj(); }
    static GaussianRational one() { return GaussianRational(1); }
    static Complex to_complex(const GaussianRational& c) { return c.to_complex(); }
};

inline constexpr std::size_t kDefaultSupportCap = 4'000'000;

/// A finitely supported element of CΓ. Terms are kept sorted by the canonical
/// key order of GroupElement and never store a zero coefficient.
template <class C>
class BasicElement {
public:
    using Coeff = C;
    using Term = std::pair<GroupElement, C>;
    using Traits = CoeffTraits<C>;

    explicit BasicElement(GroupPtr group) : group_(std::move(group)) {
        if (!group_) throw StructuralError("element needs a group");
    }

    /// Builds an element from possibly repeated, unsorted terms; repeated keys
    /// are summed and zeros dropped.
    static BasicElement from_terms(GroupPtr group, std::vector<Term> terms) {
        BasicElement a(std::move(group));
        for (const auto& [g, c] : terms)
            if (!a.group_->is_valid(g)) throw StructuralError("term is not an element of " + a.group_->spec().to_string());
        std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        for (auto& t : terms) {
            if (!a.terms_.empty() && a.terms_.back().first == t.first) a.terms_.back().second += t.second;
            else a.terms_.push_back(std::move(t));
        }
        a.purge();
        return a;
    }

    static BasicElement delta(GroupPtr group, GroupElement g, C coeff = Traits::one()) {
        return from_terms(std::move(group), {{std::move(g), std::move(coeff)}});
    }

    static BasicElement unit(GroupPtr group) {
        auto e = group->identity();
        return delta(std::move(group), std::move(e));
    }

    const Group& group() const noexcept { return *group_; }
    const GroupPtr& group_ptr() const noexcept { return group_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    C coeff(const GroupElement& g) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), g,
                                   [](const Term& t, const GroupElement& k) { return t.first < k; });
        if (it != terms_.end() && it->first == g) return it->second;
        return C{};
    }

    std::vector<GroupElement> support() const {
        std::vector<GroupElement> s;
        s.reserve(terms_.size());
        for (const auto& t : terms_) s.push_back(t.first);
        return s;
    }

    /// a*(g) = conj(a(g^-1))
    BasicElement involution() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [g, c] : terms_) out.emplace_back(group_->inverse(g), Traits::conj(c));
        return from_terms(group_, std::move(out));
    }

    /// Pointwise absolute value |a|.
    BasicElement<Complex> pointwise_abs() const {
        std::vector<std::pair<GroupElement, Complex>> out;
        for (const auto& [g, c] : terms_) out.emplace_back(g, Complex(Traits::abs(c), 0.0));
        return BasicElement<Complex>::from_terms(group_, std::move(out));
    }

    BasicElement scaled(const C& lambda) const {
        std::vector<Term> out;
        for (const auto& [g, c] : terms_) out.emplace_back(g, c * lambda);
        return from_terms(group_, std::move(out));
    }

    /// Left translate δ_g · a.
    BasicElement left_translate(const GroupElement& g) const {
        std::vector<Term> out;
        for (const auto& [h, c] : terms_) out.emplace_back(group_->multiply(g, h), c);
        return from_terms(group_, std::move(out));
    }

    friend BasicElement operator+(const BasicElement& a, const BasicElement& b) {
        a.check_same(b);
        auto t = a.terms_;
        t.insert(t.end(), b.terms_.begin(), b.terms_.end());
        return from_terms(a.group_, std::move(t));
    }

    friend BasicElement operator-(const BasicElement& a, const BasicElement& b) {
        a.check_same(b);
        auto t = a.terms_;
        for (const auto& [g, c] : b.terms_) t.emplace_back(g, C{} - c);
        return from_terms(a.group_, std::move(t));
    }

    friend bool operator==(const BasicElement& a, const BasicElement& b) {
        return a.group_->spec() == b.group_->spec() && a.terms_ == b.terms_;
    }

    double l1() const {
        double s = 0;
        for (const auto& t : terms_) s += Traits::abs(t.second);
        return s;
    }

    double l2() const {
        double s = 0;
        for (const auto& t : terms_) {
            double v = Traits::abs(t.second);
            s += v * v;
        }
        return std::sqrt(s);
    }

    void check_same(const BasicElement& o) const {
        if (!(group_->spec() == o.group_->spec()))
            throw StructuralError("group mismatch: " + group_->spec().to_string() + " vs " +
                                  o.group_->spec().to_string());
    }

    /// Internal: adopt already sorted, purged terms.
    static BasicElement adopt_sorted(GroupPtr group, std::vector<Term> terms) {
        BasicElement a(std::move(group));
        a.terms_ = std::move(terms);
        return a;
    }

private:
    void purge() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return Traits::is_zero(t.second); }),
                     terms_.end());
    }

    GroupPtr group_;
    std::vector<Term> terms_;
};

using AlgElement = BasicElement<Complex>;
using ExactElement = BasicElement<GaussianRational>;

/// (a·b)(g) = Σ_h a(h) b(h⁻¹g). Summation order is fixed: outer loop over the
/// terms of a, inner over b, both in canonical order.
template <class C>
BasicElement<C> convolve(const BasicElement<C>& a, const BasicElement<C>& b,
                         std::size_t support_cap = kDefaultSupportCap) {
    a.check_same(b);
    using Term = typename BasicElement<C>::Term;
    const Group& G = a.group();
    std::unordered_map<GroupElement, C, GroupElementHash> acc;
    acc.reserve(std::min(a.size() * b.size(), support_cap) + 1);
    for (const auto& [g, x] : a.terms()) {
        for (const auto& [h, y] : b.terms()) {
            auto [it, inserted] = acc.try_emplace(G.multiply(g, h), x * y);
            if (!inserted) it->second += x * y;
        }
        if (acc.size() > support_cap)
            throw ResourceError("convolution support exceeds cap " + std::to_string(support_cap));
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& kv : acc)
        if (!BasicElement<C>::Traits::is_zero(kv.second)) out.emplace_back(kv.first, std::move(kv.second));
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    return BasicElement<C>::adopt_sorted(a.group_ptr(), std::move(out));
}

template <class C>
BasicElement<C> operator*(const BasicElement<C>& a, const BasicElement<C>& b) {
    return convolve(a, b);
}

template <class C>
BasicElement<C> power(const BasicElement<C>& a, std::size_t n, std::size_t support_cap = kDefaultSupportCap) {
    auto acc = BasicElement<C>::unit(a.group_ptr());
    for (std::size_t i = 0; i < n; ++i) acc = convolve(acc, a, support_cap);
    return acc;
}

inline ExactElement to_exact(const AlgElement& a) {
    std::vector<ExactElement::Term> t;
    for (const auto& [g, c] : a.terms()) t.emplace_back(g, GaussianRational::from_complex(c));
    return ExactElement::from_terms(a.group_ptr(), std::move(t));
}

inline AlgElement to_float(const ExactElement& a) {
    std::vector<AlgElement::Term> t;
    for (const auto& [g, c] : a.terms()) t.emplace_back(g, c.to_complex());
    return AlgElement::from_terms(a.group_ptr(), std::move(t));
}

struct NormRecord {
    double l1 = 0;
    double l2 = 0;
    double weighted_l2 = 0;
};

/// ‖a‖₁, ‖a‖₂ and ‖a‖_{2,s} = sqrt(Σ |a_g|² (1+|g|)^{2s}).
template <class C>
NormRecord norms(const BasicElement<C>& a, double s) {
    NormRecord r;
    double w = 0;
    for (const auto& [g, c] : a.terms()) {
        double v = CoeffTraits<C>::abs(c);
        r.l1 += v;
        r.l2 += v * v;
        double len = static_cast<double>(a.group().word_length(g));
        w += v * v * std::pow(1.0 + len, 2.0 * s);
    }
    r.l2 = std::sqrt(r.l2);
    r.weighted_l2 = std::sqrt(w);
    return r;
}

/// χ_S: coefficient one on each element of S.
inline AlgElement indicator(const std::vector<GroupElement>& s, GroupPtr group) {
    if (s.empty()) throw DomainError("indicator of an empty set");
    auto sorted = s;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<AlgElement::Term> t;
    for (auto& g : sorted) t.emplace_back(g, Complex(1.0, 0.0));
    return AlgElement::from_terms(std::move(group), std::move(t));
}

/// Square matrix over CΓ. Its support is the union of the entry supports.
template <class C>
class BasicMatrixElement {
public:
    using Element = BasicElement<C>;

    BasicMatrixElement(GroupPtr group, std::size_t n) : group_(std::move(group)), n_(n) {
        entries_.assign(n * n, Element(group_));
    }

    static BasicMatrixElement identity(GroupPtr group, std::size_t n) {
        BasicMatrixElement m(group, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Element::unit(group);
        return m;
    }

    static BasicMatrixElement diagonal(const std::vector<Element>& diag) {
        if (diag.empty()) throw DomainError("empty diagonal");
        BasicMatrixElement m(diag.front().group_ptr(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            diag[i].check_same(diag.front());
            m.at(i, i) = diag[i];
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    const GroupPtr& group_ptr() const noexcept { return group_; }
    Element& at(std::size_t i, std::size_t j) { return entries_.at(i * n_ + j); }
    const Element& at(std::size_t i, std::size_t j) const { return entries_.at(i * n_ + j); }

    void set(std::size_t i, std::size_t j, Element e) {
        if (!(e.group().spec() == group_->spec())) throw StructuralError("matrix entry from a different group");
        at(i, j) = std::move(e);
    }

    friend BasicMatrixElement operator*(const BasicMatrixElement& a, const BasicMatrixElement& b) {
        if (a.n_ != b.n_) throw StructuralError("matrix size mismatch");
        if (!(a.group_->spec() == b.group_->spec())) throw StructuralError("matrix group mismatch");
        BasicMatrixElement r(a.group_, a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t j = 0; j < a.n_; ++j) {
                Element acc(a.group_);
                for (std::size_t k = 0; k < a.n_; ++k) {
                    if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
                    acc = acc + convolve(a.at(i, k), b.at(k, j));
                }
                r.at(i, j) = std::move(acc);
            }
        return r;
    }

    std::vector<GroupElement> support() const {
        std::vector<GroupElement> s;
        for (const auto& e : entries_) {
            auto es = e.support();
            s.insert(s.end(), es.begin(), es.end());
        }
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }

    /// ‖(a_ij)‖ = Σ_ij ‖a_ij‖ for each of the three norms.
    NormRecord summed_norms(double s) const {
        NormRecord r;
        for (const auto& e : entries_) {
            auto n = norms(e, s);
            r.l1 += n.l1;
            r.l2 += n.l2;
            r.weighted_l2 += n.weighted_l2;
        }
        return r;
    }

    const std::vector<Element>& entries() const noexcept { return entries_; }

private:
    GroupPtr group_;
    std::size_t n_;
    std::vector<Element> entries_;
};

using MatrixAlgElement = BasicMatrixElement<Complex>;

}  // namespace sgamma
