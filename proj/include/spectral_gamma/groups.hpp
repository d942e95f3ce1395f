#pragma once

// Computable group models: integer lattices, free groups, the discrete
// Heisenberg group, finite cyclic groups and finite direct products of these.
// Every element is stored in a canonical normal form, so equality of
// elements is equality of their codes.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "spectral_gamma/errors.hpp"

namespace sgamma {

using Code = boost::container::small_vector<std::int32_t, 6>;

/// Canonical normal form of a group element. The meaning of `code` depends on
/// the group kind:
///   lattice      d coordinates
///   cyclic       one residue in [0, n)
///   free         letters +-(i+1) for generator i, freely reduced
///   heisenberg   (a, b, c) for the matrix [[1,a,c],[0,1,b],[0,0,1]]
///   product      per factor: length prefix followed by the factor code
struct GroupElement {
    Code code;

    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.code == b.code; }
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
    friend bool operator<(const GroupElement& a, const GroupElement& b) {
        // shorter codes first, then lexicographic; a total order used as the
        // canonical key ordering everywhere
        if (a.code.size() != b.code.size()) return a.code.size() < b.code.size();
        return std::lexicographical_compare(a.code.begin(), a.code.end(), b.code.begin(), b.code.end());
    }
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : g.code) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 1099511628211ULL;
        }
        h ^= g.code.size();
        h *= 1099511628211ULL;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

enum class GroupKind { IntegerLattice, FreeGroup, Heisenberg3, Cyclic, DirectProduct };

struct GroupSpec {
    GroupKind kind = GroupKind::IntegerLattice;
    int param = 1;  // dimension, rank or order; unused for Heisenberg3 and products
    std::vector<GroupSpec> factors;

    static GroupSpec lattice(int d) { return {GroupKind::IntegerLattice, d, {}}; }
    static GroupSpec free(int rank) { return {GroupKind::FreeGroup, rank, {}}; }
    static GroupSpec heisenberg() { return {GroupKind::Heisenberg3, 0, {}}; }
    static GroupSpec cyclic(int n) { return {GroupKind::Cyclic, n, {}}; }
    static GroupSpec product(std::vector<GroupSpec> fs) { return {GroupKind::DirectProduct, 0, std::move(fs)}; }

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == GroupKind::DirectProduct) return a.factors == b.factors;
        if (a.kind == GroupKind::Heisenberg3) return true;
        return a.param == b.param;
    }

    /// Short form used on the command line: "lattice:2", "free:2",
    /// "heisenberg", "cyclic:5", "lattice:1*free:2".
    std::string to_string() const {
        switch (kind) {
            case GroupKind::IntegerLattice: return "lattice:" + std::to_string(param);
            case GroupKind::FreeGroup: return "free:" + std::to_string(param);
            case GroupKind::Heisenberg3: return "heisenberg";
            case GroupKind::Cyclic: return "cyclic:" + std::to_string(param);
            case GroupKind::DirectProduct: {
                std::string s;
                for (std::size_t i = 0; i < factors.size(); ++i) {
                    if (i) s += "*";
                    s += factors[i].to_string();
                }
                return s;
            }
        }
        return {};
    }

    static GroupSpec parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        if (text.find('*') != std::string_view::npos) {
            std::vector<GroupSpec> fs;
            std::size_t start = 0;
            while (start <= text.size()) {
                auto pos = text.find('*', start);
                auto part = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
                fs.push_back(parse(part));
                if (pos == std::string_view::npos) break;
                start = pos + 1;
            }
            auto prod = product(std::move(fs));
            prod.validate();
            return prod;
        }
        std::string name(text.substr(0, text.find(':')));
        int p = 1;
        if (auto c = text.find(':'); c != std::string_view::npos) {
            std::string num(text.substr(c + 1));
            char* end = nullptr;
            long v = std::strtol(num.c_str(), &end, 10);
            if (num.empty() || *end != '\0') throw ParseError("group spec '" + std::string(text) + "': bad parameter");
            p = static_cast<int>(v);
        }
        GroupSpec s;
        if (name == "lattice" || name == "z" || name == "Z") s = lattice(p);
        else if (name == "free" || name == "f" || name == "F") s = free(p);
        else if (name == "heisenberg" || name == "heis" || name == "H3") s = heisenberg();
        else if (name == "cyclic" || name == "c" || name == "C") s = cyclic(p);
        else throw ParseError("group spec '" + std::string(text) + "': unknown kind '" + name + "'");
        s.validate();
        return s;
    }

    void validate() const {
        switch (kind) {
            case GroupKind::IntegerLattice:
            case GroupKind::FreeGroup:
            case GroupKind::Cyclic:
                if (param < 1) throw DomainError("group parameter must be >= 1 in " + to_string());
                break;
            case GroupKind::Heisenberg3: break;
            case GroupKind::DirectProduct:
                if (factors.empty()) throw DomainError("direct product needs at least one factor");
                for (const auto& f : factors) f.validate();
                break;
        }
    }
};

/// Exact word-metric ball: all elements of length <= radius, in canonical order.
struct BallTable {
    std::size_t radius = 0;
    std::vector<GroupElement> elements;
    std::size_t volume = 0;
};

inline constexpr std::size_t kDefaultBallCap = 10'000'000;

class Group;
using GroupPtr = std::shared_ptr<const Group>;

/// A group model with its standard symmetric generating set. Immutable from
/// the outside; the Heisenberg distance cache grows lazily under a mutex.
class Group {
public:
    explicit Group(GroupSpec spec) : spec_(std::move(spec)) {
        spec_.validate();
        if (spec_.kind == GroupKind::DirectProduct) {
            for (const auto& f : spec_.factors) factors_.push_back(std::make_shared<Group>(f));
        }
        build_generators();
    }

    Group(const Group&) = delete;
    Group& operator=(const Group&) = delete;

    const GroupSpec& spec() const noexcept { return spec_; }
    GroupKind kind() const noexcept { return spec_.kind; }

    GroupElement identity() const {
        GroupElement e;
        switch (spec_.kind) {
            case GroupKind::IntegerLattice: e.code.assign(static_cast<std::size_t>(spec_.param), 0); break;
            case GroupKind::Cyclic: e.code.assign(1, 0); break;
            case GroupKind::FreeGroup: break;
            case GroupKind::Heisenberg3: e.code.assign(3, 0); break;
            case GroupKind::DirectProduct:
                for (const auto& f : factors_) {
                    auto fe = f->identity();
                    e.code.push_back(static_cast<std::int32_t>(fe.code.size()));
                    e.code.insert(e.code.end(), fe.code.begin(), fe.code.end());
                }
                break;
        }
        return e;
    }

    bool is_identity(const GroupElement& g) const { return g == identity(); }

    bool is_valid(const GroupElement& g) const {
        switch (spec_.kind) {
            case GroupKind::IntegerLattice: return g.code.size() == static_cast<std::size_t>(spec_.param);
            case GroupKind::Cyclic: return g.code.size() == 1 && g.code[0] >= 0 && g.code[0] < spec_.param;
            case GroupKind::Heisenberg3: return g.code.size() == 3;
            case GroupKind::FreeGroup:
                for (std::size_t i = 0; i < g.code.size(); ++i) {
                    auto l = g.code[i];
                    if (l == 0 || std::abs(l) > spec_.param) return false;
                    if (i > 0 && g.code[i - 1] == -l) return false;
                }
                return true;
            case GroupKind::DirectProduct: {
                std::size_t pos = 0;
                for (const auto& f : factors_) {
                    if (pos >= g.code.size()) return false;
                    auto len = static_cast<std::size_t>(g.code[pos]);
                    if (pos + 1 + len > g.code.size()) return false;
                    GroupElement part;
                    part.code.assign(g.code.begin() + static_cast<std::ptrdiff_t>(pos + 1),
                                     g.code.begin() + static_cast<std::ptrdiff_t>(pos + 1 + len));
                    if (!f->is_valid(part)) return false;
                    pos += 1 + len;
                }
                return pos == g.code.size();
            }
        }
        return false;
    }

    GroupElement multiply(const GroupElement& g, const GroupElement& h) const {
        GroupElement r;
        switch (spec_.kind) {
            case GroupKind::IntegerLattice:
                check_size(g, h, static_cast<std::size_t>(spec_.param));
                r.code.resize(g.code.size());
                for (std::size_t i = 0; i < g.code.size(); ++i) r.code[i] = g.code[i] + h.code[i];
                return r;
            case GroupKind::Cyclic: {
                check_size(g, h, 1);
                std::int64_t s = static_cast<std::int64_t>(g.code[0]) + h.code[0];
                r.code.assign(1, static_cast<std::int32_t>(s % spec_.param));
                return r;
            }
            case GroupKind::FreeGroup: {
                r.code = g.code;
                for (auto l : h.code) {
                    if (!r.code.empty() && r.code.back() == -l) r.code.pop_back();
                    else r.code.push_back(l);
                }
                return r;
            }
            case GroupKind::Heisenberg3:
                check_size(g, h, 3);
                r.code = {g.code[0] + h.code[0], g.code[1] + h.code[1],
                          g.code[2] + h.code[2] + g.code[0] * h.code[1]};
                return r;
            case GroupKind::DirectProduct: {
                auto gp = split(g), hp = split(h);
                std::vector<GroupElement> out;
                out.reserve(factors_.size());
                for (std::size_t i = 0; i < factors_.size(); ++i) out.push_back(factors_[i]->multiply(gp[i], hp[i]));
                return join(out);
            }
        }
        return r;
    }

    GroupElement inverse(const GroupElement& g) const {
        GroupElement r;
        switch (spec_.kind) {
            case GroupKind::IntegerLattice:
                r.code.resize(g.code.size());
                for (std::size_t i = 0; i < g.code.size(); ++i) r.code[i] = -g.code[i];
                return r;
            case GroupKind::Cyclic:
                r.code.assign(1, static_cast<std::int32_t>((spec_.param - g.code.at(0)) % spec_.param));
                return r;
            case GroupKind::FreeGroup:
                for (auto it = g.code.rbegin(); it != g.code.rend(); ++it) r.code.push_back(-*it);
                return r;
            case GroupKind::Heisenberg3:
                r.code = {-g.code[0], -g.code[1], -g.code[2] + g.code[0] * g.code[1]};
                return r;
            case GroupKind::DirectProduct: {
                auto parts = split(g);
                for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = factors_[i]->inverse(parts[i]);
                return join(parts);
            }
        }
        return r;
    }

    GroupElement power(const GroupElement& g, long n) const {
        GroupElement base = n < 0 ? inverse(g) : g;
        GroupElement acc = identity();
        for (long k = std::labs(n); k > 0; k >>= 1) {
            if (k & 1) acc = multiply(acc, base);
            base = multiply(base, base);
        }
        return acc;
    }

    /// Standard symmetric generating set, deduplicated, in canonical order.
    const std::vector<GroupElement>& generators() const noexcept { return generators_; }

    /// Length of a shortest word in the standard generators.
    std::size_t word_length(const GroupElement& g) const {
        if (!is_valid(g)) throw StructuralError("element is not valid for group " + spec_.to_string());
        switch (spec_.kind) {
            case GroupKind::IntegerLattice: {
                std::size_t s = 0;
                for (auto v : g.code) s += static_cast<std::size_t>(std::abs(v));
                return s;
            }
            case GroupKind::Cyclic: {
                auto k = static_cast<std::size_t>(g.code[0]);
                return std::min(k, static_cast<std::size_t>(spec_.param) - k);
            }
            case GroupKind::FreeGroup: return g.code.size();
            case GroupKind::Heisenberg3: return heisenberg_length(g);
            case GroupKind::DirectProduct: {
                auto parts = split(g);
                std::size_t s = 0;
                for (std::size_t i = 0; i < parts.size(); ++i) s += factors_[i]->word_length(parts[i]);
                return s;
            }
        }
        return 0;
    }

    /// Breadth-first enumeration of the ball of radius r. Throws ResourceError
    /// naming the last complete radius when more than `cap` elements appear.
    BallTable ball(std::size_t r, std::size_t cap = kDefaultBallCap) const {
        BallTable t;
        t.radius = r;
        std::unordered_set<GroupElement, GroupElementHash> seen;
        std::vector<GroupElement> frontier{identity()};
        seen.insert(frontier.front());
        t.elements.push_back(frontier.front());
        for (std::size_t k = 1; k <= r && !frontier.empty(); ++k) {
            std::vector<GroupElement> next;
            for (const auto& g : frontier) {
                for (const auto& s : generators_) {
                    auto h = multiply(g, s);
                    if (seen.insert(h).second) {
                        if (seen.size() > cap)
                            throw ResourceError("ball enumeration cap " + std::to_string(cap) +
                                                " exceeded at radius " + std::to_string(k) +
                                                " (complete up to radius " + std::to_string(k - 1) + ")");
                        next.push_back(h);
                    }
                }
            }
            t.elements.insert(t.elements.end(), next.begin(), next.end());
            frontier = std::move(next);
        }
        std::sort(t.elements.begin(), t.elements.end());
        t.volume = t.elements.size();
        return t;
    }

    /// Sphere sizes #{g : |g| = k} for k = 0..r. Closed forms for lattices,
    /// free and cyclic groups; BFS shells for the Heisenberg group; sequence
    /// convolution for products.
    std::vector<long double> sphere_sizes(std::size_t r, std::size_t cap = kDefaultBallCap) const {
        std::vector<long double> s(r + 1, 0.0L);
        switch (spec_.kind) {
            case GroupKind::IntegerLattice: {
                long double prev = 0;
                for (std::size_t k = 0; k <= r; ++k) {
                    long double v = lattice_ball(static_cast<std::size_t>(spec_.param), k);
                    s[k] = v - prev;
                    prev = v;
                }
                break;
            }
            case GroupKind::FreeGroup: {
                s[0] = 1;
                long double q = 2.0L * spec_.param - 1;
                long double cur = 2.0L * spec_.param;
                for (std::size_t k = 1; k <= r; ++k, cur *= q) s[k] = cur;
                break;
            }
            case GroupKind::Cyclic: {
                auto n = static_cast<std::size_t>(spec_.param);
                for (std::size_t k = 0; k <= r; ++k) {
                    if (k == 0) s[k] = 1;
                    else if (2 * k < n) s[k] = 2;
                    else if (2 * k == n) s[k] = 1;
                }
                break;
            }
            case GroupKind::Heisenberg3: {
                ensure_heisenberg_radius(r, cap);
                std::lock_guard lock(cache_mutex_);
                std::size_t total = 0;
                for (std::size_t k = 0; k <= r; ++k) {
                    total += heis_shells_[k].size();
                    if (total > cap)
                        throw ResourceError("Heisenberg BFS cap " + std::to_string(cap) + " exceeded at radius " +
                                            std::to_string(k));
                    s[k] = static_cast<long double>(heis_shells_[k].size());
                }
                break;
            }
            case GroupKind::DirectProduct: {
                std::vector<long double> acc{1.0L};
                for (const auto& f : factors_) {
                    auto fs = f->sphere_sizes(r, cap);
                    std::vector<long double> out(std::min(acc.size() + fs.size() - 1, r + 1), 0.0L);
                    for (std::size_t i = 0; i < acc.size(); ++i)
                        for (std::size_t j = 0; j < fs.size() && i + j <= r; ++j) out[i + j] += acc[i] * fs[j];
                    acc = std::move(out);
                }
                std::copy(acc.begin(), acc.end(), s.begin());
                break;
            }
        }
        return s;
    }

    long double ball_volume(std::size_t r, std::size_t cap = kDefaultBallCap) const {
        auto s = sphere_sizes(r, cap);
        long double v = std::accumulate(s.begin(), s.end(), 0.0L);
        if (!(v < std::numeric_limits<long double>::infinity()))
            throw ResourceError("ball volume overflows at radius " + std::to_string(r));
        return v;
    }

    bool has_exponential_growth() const {
        switch (spec_.kind) {
            case GroupKind::FreeGroup: return spec_.param >= 2;
            case GroupKind::DirectProduct:
                return std::any_of(factors_.begin(), factors_.end(),
                                   [](const auto& f) { return f->has_exponential_growth(); });
            default: return false;
        }
    }

    bool is_abelian() const {
        switch (spec_.kind) {
            case GroupKind::IntegerLattice:
            case GroupKind::Cyclic: return true;
            case GroupKind::FreeGroup: return spec_.param == 1;
            case GroupKind::Heisenberg3: return false;
            case GroupKind::DirectProduct:
                return std::all_of(factors_.begin(), factors_.end(), [](const auto& f) { return f->is_abelian(); });
        }
        return false;
    }

    const std::vector<std::shared_ptr<Group>>& factors() const noexcept { return factors_; }

    std::vector<GroupElement> split(const GroupElement& g) const {
        if (spec_.kind != GroupKind::DirectProduct) return {g};
        std::vector<GroupElement> parts;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (pos >= g.code.size()) throw StructuralError("malformed product element");
            auto len = static_cast<std::size_t>(g.code[pos]);
            GroupElement p;
            p.code.assign(g.code.begin() + static_cast<std::ptrdiff_t>(pos + 1),
                          g.code.begin() + static_cast<std::ptrdiff_t>(pos + 1 + len));
            parts.push_back(std::move(p));
            pos += 1 + len;
        }
        return parts;
    }

    GroupElement join(const std::vector<GroupElement>& parts) const {
        GroupElement e;
        for (const auto& p : parts) {
            e.code.push_back(static_cast<std::int32_t>(p.code.size()));
            e.code.insert(e.code.end(), p.code.begin(), p.code.end());
        }
        return e;
    }

    // ---------------------------------------------------------------------
    // Text form. Free and lattice generators are x, y, z, w (then a1, a2, ...
    // for larger ranks); the cyclic generator is g; Heisenberg uses X, Y and
    // the central Z = [X, Y]. Tuples "(3,-2)" give lattice, cyclic and
    // Heisenberg elements directly. Products separate factor words with '|'.
    // ---------------------------------------------------------------------

    std::string generator_name(std::size_t i) const {
        static const char* names[] = {"x", "y", "z", "w"};
        std::size_t count = spec_.kind == GroupKind::Heisenberg3 ? 2 : static_cast<std::size_t>(spec_.param);
        if (spec_.kind == GroupKind::Heisenberg3) return i == 0 ? "X" : "Y";
        if (spec_.kind == GroupKind::Cyclic) return "g";
        if (count <= 4) return names[i];
        return "a" + std::to_string(i + 1);
    }

    std::string format(const GroupElement& g) const {
        switch (spec_.kind) {
            case GroupKind::FreeGroup: {
                if (g.code.empty()) return "e";
                std::string s;
                for (std::size_t i = 0; i < g.code.size();) {
                    std::size_t j = i;
                    while (j < g.code.size() && g.code[j] == g.code[i]) ++j;
                    long run = static_cast<long>(j - i) * (g.code[i] > 0 ? 1 : -1);
                    if (!s.empty()) s += ' ';
                    s += generator_name(static_cast<std::size_t>(std::abs(g.code[i]) - 1));
                    if (run != 1) s += "^" + std::to_string(run);
                    i = j;
                }
                return s;
            }
            case GroupKind::DirectProduct: {
                auto parts = split(g);
                std::string s;
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    if (i) s += " | ";
                    s += factors_[i]->format(parts[i]);
                }
                return s;
            }
            default: {
                std::string s = "(";
                for (std::size_t i = 0; i < g.code.size(); ++i) {
                    if (i) s += ',';
                    s += std::to_string(g.code[i]);
                }
                return s + ")";
            }
        }
    }

    GroupElement parse(std::string_view text) const {
        if (spec_.kind == GroupKind::DirectProduct) {
            std::vector<GroupElement> parts;
            std::size_t start = 0;
            for (std::size_t i = 0; i < factors_.size(); ++i) {
                auto pos = text.find('|', start);
                if (pos == std::string_view::npos && i + 1 < factors_.size())
                    throw ParseError("product element '" + std::string(text) + "' needs " +
                                     std::to_string(factors_.size()) + " '|'-separated parts");
                auto part = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
                parts.push_back(factors_[i]->parse(part));
                start = pos == std::string_view::npos ? text.size() : pos + 1;
            }
            if (text.find('|', start) != std::string_view::npos)
                throw ParseError("product element '" + std::string(text) + "' has too many parts");
            return join(parts);
        }
        std::string s(text);
        auto first = s.find_first_not_of(" \t");
        if (first == std::string::npos) return identity();
        if (s[first] == '(' || s[first] == '[') return parse_tuple(s);
        GroupElement acc = identity();
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) {
            long exp = 1;
            std::string name = tok;
            if (auto caret = tok.find('^'); caret != std::string::npos) {
                name = tok.substr(0, caret);
                std::string e = tok.substr(caret + 1);
                char* end = nullptr;
                exp = std::strtol(e.c_str(), &end, 10);
                if (e.empty() || *end != '\0') throw ParseError("bad exponent in token '" + tok + "'");
            }
            if (name == "e" || name == "1") continue;
            acc = multiply(acc, power(named_element(name), exp));
        }
        return acc;
    }

private:
    static long double lattice_ball(std::size_t d, std::size_t r) {
        // #{x in Z^d : |x|_1 <= r} = sum_k 2^k C(d,k) C(r,k)
        long double total = 0;
        for (std::size_t k = 0; k <= std::min(d, r); ++k) {
            long double c = std::pow(2.0L, static_cast<long double>(k));
            for (std::size_t i = 0; i < k; ++i)
                c *= static_cast<long double>(d - i) * static_cast<long double>(r - i) /
                     (static_cast<long double>(i + 1) * static_cast<long double>(i + 1));
            total += c;
        }
        return std::round(total);
    }

    void check_size(const GroupElement& g, const GroupElement& h, std::size_t n) const {
        if (g.code.size() != n || h.code.size() != n)
            throw StructuralError("element kind does not match group " + spec_.to_string());
    }

    GroupElement named_element(const std::string& name) const {
        switch (spec_.kind) {
            case GroupKind::Heisenberg3:
                if (name == "X" || name == "x") return GroupElement{Code{1, 0, 0}};
                if (name == "Y" || name == "y") return GroupElement{Code{0, 1, 0}};
                if (name == "Z" || name == "z") return GroupElement{Code{0, 0, 1}};
                break;
            case GroupKind::Cyclic:
                if (name == "g" || name == "x") return GroupElement{Code{1 % spec_.param}};
                break;
            case GroupKind::IntegerLattice:
            case GroupKind::FreeGroup: {
                auto n = static_cast<std::size_t>(spec_.param);
                for (std::size_t i = 0; i < n; ++i) {
                    if (name == generator_name(i) || name == "a" + std::to_string(i + 1) ||
                        (spec_.kind == GroupKind::IntegerLattice && name == "e" + std::to_string(i + 1)))
                        return basis(i);
                }
                break;
            }
            default: break;
        }
        throw ParseError("unknown generator '" + name + "' for group " + spec_.to_string());
    }

    GroupElement basis(std::size_t i) const {
        GroupElement g;
        if (spec_.kind == GroupKind::FreeGroup) {
            g.code.push_back(static_cast<std::int32_t>(i + 1));
        } else {
            g.code.assign(static_cast<std::size_t>(spec_.param), 0);
            g.code[i] = 1;
        }
        return g;
    }

    GroupElement parse_tuple(const std::string& s) const {
        GroupElement g;
        std::string inner;
        for (char c : s)
            if (c != '(' && c != ')' && c != '[' && c != ']' && !std::isspace(static_cast<unsigned char>(c)))
                inner += c;
        std::istringstream in(inner);
        std::string item;
        while (std::getline(in, item, ',')) {
            char* end = nullptr;
            long v = std::strtol(item.c_str(), &end, 10);
            if (item.empty() || *end != '\0') throw ParseError("bad tuple entry '" + item + "' in '" + s + "'");
            g.code.push_back(static_cast<std::int32_t>(v));
        }
        if (spec_.kind == GroupKind::Cyclic && g.code.size() == 1) {
            long n = spec_.param;
            g.code[0] = static_cast<std::int32_t>(((g.code[0] % n) + n) % n);
        }
        if (spec_.kind == GroupKind::FreeGroup)
            throw ParseError("free group elements are words, not tuples: '" + s + "'");
        if (!is_valid(g)) throw ParseError("tuple '" + s + "' is not an element of " + spec_.to_string());
        return g;
    }

    void build_generators() {
        std::vector<GroupElement> gens;
        switch (spec_.kind) {
            case GroupKind::IntegerLattice:
            case GroupKind::FreeGroup:
                for (std::size_t i = 0; i < static_cast<std::size_t>(spec_.param); ++i) {
                    gens.push_back(basis(i));
                    gens.push_back(inverse(basis(i)));
                }
                break;
            case GroupKind::Cyclic:
                gens.push_back(GroupElement{Code{1 % spec_.param}});
                gens.push_back(inverse(gens.back()));
                break;
            case GroupKind::Heisenberg3:
                gens = {GroupElement{Code{1, 0, 0}}, GroupElement{Code{-1, 0, 0}},
                        GroupElement{Code{0, 1, 0}}, GroupElement{Code{0, -1, 0}}};
                break;
            case GroupKind::DirectProduct:
                for (std::size_t i = 0; i < factors_.size(); ++i) {
                    for (const auto& s : factors_[i]->generators()) {
                        std::vector<GroupElement> parts;
                        for (std::size_t j = 0; j < factors_.size(); ++j)
                            parts.push_back(j == i ? s : factors_[j]->identity());
                        gens.push_back(join(parts));
                    }
                }
                break;
        }
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        generators_ = std::move(gens);
    }

    // Heisenberg distances come from BFS with memoized shells.
    void ensure_heisenberg_radius(std::size_t r, std::size_t cap) const {
        std::lock_guard lock(cache_mutex_);
        if (heis_shells_.empty()) {
            heis_shells_.push_back({identity()});
            heis_dist_.emplace(identity(), 0);
        }
        while (heis_shells_.size() <= r) {
            std::vector<GroupElement> next;
            std::size_t k = heis_shells_.size();
            for (const auto& g : heis_shells_.back()) {
                for (const auto& s : generators_) {
                    auto h = multiply(g, s);
                    if (heis_dist_.emplace(h, k).second) {
                        next.push_back(h);
                        if (heis_dist_.size() > cap)
                            throw ResourceError("Heisenberg BFS cap " + std::to_string(cap) +
                                                " exceeded at radius " + std::to_string(k));
                    }
                }
            }
            heis_shells_.push_back(std::move(next));
        }
    }

    std::size_t heisenberg_length(const GroupElement& g) const {
        std::size_t r = static_cast<std::size_t>(std::abs(g.code[0]) + std::abs(g.code[1]));
        for (;; ++r) {
            ensure_heisenberg_radius(r, kDefaultBallCap);
            std::lock_guard lock(cache_mutex_);
            if (auto it = heis_dist_.find(g); it != heis_dist_.end()) return it->second;
        }
    }

    GroupSpec spec_;
    std::vector<std::shared_ptr<Group>> factors_;
    std::vector<GroupElement> generators_;

    mutable std::mutex cache_mutex_;
    mutable std::vector<std::vector<GroupElement>> heis_shells_;
    mutable std::unordered_map<GroupElement, std::size_t, GroupElementHash> heis_dist_;
};

inline GroupPtr make_group(GroupSpec spec) { return std::make_shared<const Group>(std::move(spec)); }

/// Largest word length over a finite nonempty set.
inline std::size_t circumscribing_radius(const std::vector<GroupElement>& s, const Group& group) {
    if (s.empty()) throw DomainError("circumscribing radius of an empty set");
    std::size_t r = 0;
    for (const auto& g : s) r = std::max(r, group.word_length(g));
    return r;
}

/// Product set S*T = {st}, deduplicated and sorted.
inline std::vector<GroupElement> product_set(const std::vector<GroupElement>& s, const std::vector<GroupElement>& t,
                                             const Group& group, std::size_t cap = kDefaultBallCap) {
    std::unordered_set<GroupElement, GroupElementHash> out;
    for (const auto& a : s)
        for (const auto& b : t) {
            out.insert(group.multiply(a, b));
            if (out.size() > cap) throw ResourceError("product set exceeds cap " + std::to_string(cap));
        }
    std::vector<GroupElement> v(out.begin(), out.end());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace sgamma
