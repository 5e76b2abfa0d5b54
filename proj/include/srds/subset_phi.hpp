#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srds/errors.hpp"
#include "srds/primitive.hpp"

namespace srds {

// ------------------------------------------------------------ field ops

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return uint64_t((unsigned __int128)a * b % p);
}
inline uint64_t addmod(uint64_t a, uint64_t b, uint64_t p) {
    a += b;
    return a >= p ? a - p : a;
}
inline uint64_t submod(uint64_t a, uint64_t b, uint64_t p) { return a >= b ? a - b : a + p - b; }

inline bool is_prime(uint64_t v) {
    if (v < 2) return false;
    for (uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}
inline uint64_t next_prime(uint64_t v) {
    while (!is_prime(v)) ++v;
    return v;
}

// ------------------------------------------------------- phi instances

// Subset selection problem for the degree-ell elementary symmetric map over
// vectors in F_p^dim: find S (|S| >= ell, or |S| == s when s is fixed) with
// phi_ell(S) = target component-wise.
struct PhiInstance {
    uint64_t p = 0;
    uint32_t ell = 0;
    std::vector<std::vector<uint64_t>> elements;
    std::vector<uint64_t> target;
    std::optional<uint64_t> s;

    size_t dim() const { return target.size(); }
};

// phi_ell over a list of vectors: per column, the degree-ell elementary
// symmetric polynomial of the entries.
inline std::vector<uint64_t> phi_eval(uint32_t ell, const std::vector<std::vector<uint64_t>>& xs,
                                      uint64_t p) {
    if (ell == 0) throw ParameterError("phi: ell must be positive");
    if (xs.empty()) throw ParameterError("phi: empty input set");
    size_t dim = xs.front().size();
    for (const auto& x : xs)
        if (x.size() != dim) throw MalformedInput("phi: dimension mismatch");
    // e[j][c], j = 0..ell; e[0] = 1
    std::vector<std::vector<uint64_t>> e(ell + 1, std::vector<uint64_t>(dim, 0));
    std::fill(e[0].begin(), e[0].end(), 1);
    for (const auto& x : xs) {
        for (size_t c = 0; c < dim; ++c) {
            uint64_t v = x[c] % p;
            if (!v) continue;
            for (uint32_t j = ell; j >= 1; --j)
                e[j][c] = addmod(e[j][c], mulmod(v, e[j - 1][c], p), p);
        }
    }
    return e[ell];
}

// --------------------------------------------------------- 3-CNF input

struct Cnf {
    uint32_t n_vars = 0;
    std::vector<std::array<int, 3>> clauses;  // literals: +v / -v, 1-based vars
};

// Strict DIMACS cnf reader: exactly the declared counts, exactly three
// distinct-variable literals per clause, 0-terminated.
inline Cnf parse_dimacs(std::istream& in) {
    Cnf f;
    std::string line;
    bool header = false;
    uint32_t want_clauses = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (!header) {
            std::string p, fmt;
            if (!(ls >> p >> fmt >> f.n_vars >> want_clauses) || p != "p" || fmt != "cnf")
                throw MalformedInput("dimacs: bad header");
            std::string rest;
            if (ls >> rest) throw MalformedInput("dimacs: trailing header tokens");
            header = true;
            continue;
        }
        std::array<int, 3> cl{};
        int lit, idx = 0;
        while (ls >> lit) {
            if (lit == 0) {
                if (idx != 3) throw MalformedInput("dimacs: clause must have three literals");
                std::array<uint32_t, 3> vars{uint32_t(std::abs(cl[0])), uint32_t(std::abs(cl[1])),
                                             uint32_t(std::abs(cl[2]))};
                if (vars[0] == vars[1] || vars[0] == vars[2] || vars[1] == vars[2])
                    throw MalformedInput("dimacs: repeated variable in clause");
                f.clauses.push_back(cl);
                idx = 0;
                continue;
            }
            if (idx >= 3) throw MalformedInput("dimacs: clause too long");
            if (uint32_t(std::abs(lit)) < 1 || uint32_t(std::abs(lit)) > f.n_vars)
                throw MalformedInput("dimacs: literal out of range");
            cl[size_t(idx++)] = lit;
        }
        if (idx != 0) throw MalformedInput("dimacs: clause missing terminator");
    }
    if (!header) throw MalformedInput("dimacs: missing header");
    if (f.clauses.size() != want_clauses) throw MalformedInput("dimacs: clause count mismatch");
    return f;
}

inline std::string to_dimacs(const Cnf& f) {
    std::ostringstream os;
    os << "p cnf " << f.n_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& cl : f.clauses) os << cl[0] << ' ' << cl[1] << ' ' << cl[2] << " 0\n";
    return os.str();
}

// Exhaustive satisfiability oracle for small variable counts.
inline std::optional<uint32_t> sat_assignment(const Cnf& f) {
    if (f.n_vars > 24) throw ParameterError("sat oracle: too many variables");
    for (uint32_t a = 0; a < (1u << f.n_vars); ++a) {
        bool sat = true;
        for (const auto& cl : f.clauses) {
            bool cs = false;
            for (int lit : cl) {
                uint32_t v = uint32_t(std::abs(lit)) - 1;
                bool val = (a >> v) & 1;
                if ((lit > 0) == val) {
                    cs = true;
                    break;
                }
            }
            if (!cs) {
                sat = false;
                break;
            }
        }
        if (sat) return a;
    }
    return std::nullopt;
}

// --------------------------------------------------------- reductions

namespace detail_phi {

inline bool modulus_aliases(uint64_t p, uint32_t ell) {
    // Column counts up to ell+2 can occur; their binomials must not alias 1.
    for (uint64_t w = ell + 1; w <= uint64_t(ell) + 2; ++w) {
        uint64_t binom = 1;
        for (uint64_t i = 0; i < ell; ++i) binom = binom * (w - i) / (i + 1);
        if (binom % p == 1) return true;
    }
    return false;
}

inline void check_modulus(uint64_t p, uint32_t ell) {
    if (!is_prime(p)) throw ParameterError("reduction: modulus must be prime");
    if (p < 63) throw ParameterError("reduction: modulus must be at least 63");
    if (p < uint64_t(ell) + 2) throw ParameterError("reduction: modulus must exceed ell+1");
    if (modulus_aliases(p, ell))
        throw ParameterError("reduction: modulus aliases a binomial to 1");
}

}  // namespace detail_phi

inline uint64_t default_modulus(uint32_t ell) {
    uint64_t p = next_prime(std::max<uint64_t>(uint64_t(ell) + 2, 63));
    while (detail_phi::modulus_aliases(p, ell)) p = next_prime(p + 1);
    return p;
}

// Degree-2 reduction. Columns: one guard, one per variable, one per clause.
// Elements, in pinned order: a guard-only vector, a guard+variables vector,
// then (v_i, v_i') per variable (variable column plus the clause columns
// where the corresponding literal appears), then three slack elements per
// clause with values 9, 4, 2. Target: guard 1, variables 1, clauses 9.
// Slack combinations reach 9 exactly when the clause has 1, 2 or 3 true
// literals; with 0 true literals every combination stays below 63, which the
// p >= 63 requirement keeps distinct from 9.
inline PhiInstance reduce_3sat_phi2(const Cnf& f, uint64_t p = 0) {
    if (p == 0) p = default_modulus(2);
    detail_phi::check_modulus(p, 2);
    const uint32_t N = f.n_vars;
    const uint32_t m = uint32_t(f.clauses.size());
    const size_t dim = 1 + N + m;
    PhiInstance inst;
    inst.p = p;
    inst.ell = 2;
    inst.target.assign(dim, 0);
    inst.target[0] = 1;
    for (uint32_t i = 1; i <= N; ++i) inst.target[i] = 1;
    for (uint32_t j = 1; j <= m; ++j) inst.target[N + j] = 9 % p;

    std::vector<uint64_t> guard_only(dim, 0), guard_vars(dim, 0);
    guard_only[0] = 1;
    guard_vars[0] = 1;
    for (uint32_t i = 1; i <= N; ++i) guard_vars[i] = 1;
    inst.elements.push_back(guard_only);
    inst.elements.push_back(guard_vars);
    for (uint32_t i = 1; i <= N; ++i) {
        std::vector<uint64_t> pos(dim, 0), neg(dim, 0);
        pos[i] = 1;
        neg[i] = 1;
        for (uint32_t j = 0; j < m; ++j) {
            for (int lit : f.clauses[j]) {
                if (uint32_t(std::abs(lit)) != i) continue;
                (lit > 0 ? pos : neg)[1 + N + j] = 1;
            }
        }
        inst.elements.push_back(std::move(pos));
        inst.elements.push_back(std::move(neg));
    }
    for (uint32_t j = 1; j <= m; ++j) {
        for (uint64_t val : {uint64_t(9), uint64_t(4), uint64_t(2)}) {
            std::vector<uint64_t> e(dim, 0);
            e[N + j] = val % p;
            inst.elements.push_back(std::move(e));
        }
    }
    return inst;
}

// Degree-ell reduction (ell >= 3). All entries are 0/1, target is all-ones,
// and a column with w selected ones contributes C(w, ell), which is 1 only
// at w = ell for the column counts this construction can reach. Elements in
// pinned order: one guard-only vector, (ell-1) guard+variables vectors,
// (v_i, v_i') per variable, then (ell-1) slack elements per clause.
inline PhiInstance reduce_3sat_phil(const Cnf& f, uint32_t ell, uint64_t p = 0) {
    if (ell < 3) throw ParameterError("reduction: ell must be at least 3 here");
    if (p == 0) p = default_modulus(ell);
    detail_phi::check_modulus(p, ell);
    const uint32_t N = f.n_vars;
    const uint32_t m = uint32_t(f.clauses.size());
    const size_t dim = 1 + N + m;
    PhiInstance inst;
    inst.p = p;
    inst.ell = ell;
    inst.target.assign(dim, 1);

    std::vector<uint64_t> guard_only(dim, 0);
    guard_only[0] = 1;
    inst.elements.push_back(guard_only);
    for (uint32_t r = 1; r < ell; ++r) {
        std::vector<uint64_t> gv(dim, 0);
        gv[0] = 1;
        for (uint32_t i = 1; i <= N; ++i) gv[i] = 1;
        inst.elements.push_back(std::move(gv));
    }
    for (uint32_t i = 1; i <= N; ++i) {
        std::vector<uint64_t> pos(dim, 0), neg(dim, 0);
        pos[i] = 1;
        neg[i] = 1;
        for (uint32_t j = 0; j < m; ++j) {
            for (int lit : f.clauses[j]) {
                if (uint32_t(std::abs(lit)) != i) continue;
                (lit > 0 ? pos : neg)[1 + N + j] = 1;
            }
        }
        inst.elements.push_back(std::move(pos));
        inst.elements.push_back(std::move(neg));
    }
    for (uint32_t j = 1; j <= m; ++j) {
        for (uint32_t r = 1; r < ell; ++r) {
            std::vector<uint64_t> e(dim, 0);
            e[N + j] = 1;
            inst.elements.push_back(std::move(e));
        }
    }
    return inst;
}

// Balanced padding for the fixed-witness-size variant: equalize variable and
// clause counts. Dummy clauses are carried by a fresh always-true variable,
// which preserves satisfiability in both directions; when clauses must be
// added, the common count grows by one to host that variable.
inline Cnf pad_formula(const Cnf& f) {
    if (f.n_vars < 3) throw ParameterError("padding: need at least three variables");
    uint32_t N = f.n_vars, m = uint32_t(f.clauses.size());
    Cnf out = f;
    if (m >= N) {
        out.n_vars = m;  // unused variables are harmless
        return out;
    }
    uint32_t target = N + 1;  // fresh variable hosts the dummy clauses
    out.n_vars = target;
    uint32_t dummy = N + 1;
    while (out.clauses.size() < size_t(target))
        out.clauses.push_back({int(dummy), 1, -2});
    return out;
}

struct WitnessSizeBounds {
    uint64_t lo = 0, hi = 0;
};

inline WitnessSizeBounds witness_size_bounds(uint32_t ell, uint32_t n_vars, uint32_t m) {
    WitnessSizeBounds b;
    if (ell == 2) {
        b.lo = b.hi = 2 + n_vars + m;  // one slack element per clause, always
    } else {
        b.lo = ell + n_vars + uint64_t(ell >= 3 ? ell - 3 : 0) * m;
        b.hi = ell + n_vars + uint64_t(ell - 1) * m;
    }
    return b;
}

// ------------------------------------------------------------- solving

struct SolveOptions {
    size_t cap = 24;  // refuse larger instances (exponential guard)
};

struct SolveResult {
    bool found = false;
    std::vector<uint32_t> witness;  // 1-based element indices, ascending
    uint64_t nodes = 0;
};

namespace detail_phi {

struct DfsState {
    const PhiInstance* inst;
    size_t n, dim;
    uint32_t ell;
    uint64_t p;
    std::vector<std::vector<uint64_t>> e;  // e[j][c], e[0] = 1
    std::vector<size_t> last_touch;        // per column: last element index with a nonzero entry
    std::vector<uint32_t> chosen;
    SolveResult* res;

    bool column_ok(size_t c) const { return e[ell][c] == inst->target[c] % p; }

    void apply(size_t i, bool undo) {
        const auto& x = inst->elements[i];
        for (size_t c = 0; c < dim; ++c) {
            uint64_t v = x[c] % p;
            if (!v) continue;
            if (!undo) {
                for (uint32_t j = ell; j >= 1; --j)
                    e[j][c] = addmod(e[j][c], mulmod(v, e[j - 1][c], p), p);
            } else {
                for (uint32_t j = 1; j <= ell; ++j)
                    e[j][c] = submod(e[j][c], mulmod(v, e[j - 1][c], p), p);
            }
        }
    }

    bool dfs(size_t i) {
        ++res->nodes;
        // columns that no later element can change must already match
        if (i > 0) {
            for (size_t c = 0; c < dim; ++c)
                if (last_touch[c] == i - 1 && !column_ok(c)) return false;
        }
        if (i == n) {
            uint64_t size = chosen.size();
            if (size < inst->ell) return false;
            if (inst->s && size != *inst->s) return false;
            for (size_t c = 0; c < dim; ++c)
                if (!column_ok(c)) return false;
            res->found = true;
            res->witness.clear();
            for (uint32_t idx : chosen) res->witness.push_back(idx + 1);
            return true;
        }
        size_t remaining = n - i;
        uint64_t needed = inst->s ? *inst->s : uint64_t(inst->ell);
        if (chosen.size() + remaining < needed) return false;
        if (inst->s && chosen.size() > *inst->s) return false;
        // include-first order yields the lexicographically least witness
        chosen.push_back(uint32_t(i));
        apply(i, false);
        if (dfs(i + 1)) return true;
        apply(i, true);
        chosen.pop_back();
        return dfs(i + 1);
    }
};

}  // namespace detail_phi

// Complete search with column-finalization pruning; include-first order
// returns the lexicographically least witness. For degree-1 instances above
// the plain-search comfort zone a meet-in-the-middle split applies.
inline SolveResult brute_force(const PhiInstance& inst, const SolveOptions& opts = {}) {
    size_t n = inst.elements.size();
    if (n > opts.cap)
        throw ParameterError("solver: instance size exceeds configured cap (" +
                             std::to_string(opts.cap) + ")");
    if (inst.ell == 0 || inst.ell > n) throw ParameterError("solver: need ell in [1, n]");
    for (const auto& x : inst.elements)
        if (x.size() != inst.dim()) throw MalformedInput("solver: element dimension mismatch");

    if (inst.ell == 1 && n > 20) {
        // meet-in-the-middle over column-sum vectors
        SolveResult res;
        size_t half = n / 2;
        auto enumerate = [&](size_t from, size_t to) {
            std::map<std::vector<uint64_t>, std::vector<std::vector<uint32_t>>> sums;
            size_t cnt = to - from;
            for (uint64_t mask = 0; mask < (uint64_t(1) << cnt); ++mask) {
                std::vector<uint64_t> acc(inst.dim(), 0);
                std::vector<uint32_t> idxs;
                for (size_t i = 0; i < cnt; ++i) {
                    if (!((mask >> i) & 1)) continue;
                    idxs.push_back(uint32_t(from + i));
                    for (size_t c = 0; c < inst.dim(); ++c)
                        acc[c] = addmod(acc[c], inst.elements[from + i][c] % inst.p, inst.p);
                }
                sums[acc].push_back(idxs);
            }
            return sums;
        };
        auto left = enumerate(0, half), right = enumerate(half, n);
        std::optional<std::vector<uint32_t>> best;
        for (auto& [lsum, lsets] : left) {
            std::vector<uint64_t> need(inst.dim());
            for (size_t c = 0; c < inst.dim(); ++c)
                need[c] = submod(inst.target[c] % inst.p, lsum[c], inst.p);
            auto it = right.find(need);
            if (it == right.end()) continue;
            for (const auto& ls : lsets)
                for (const auto& rs : it->second) {
                    std::vector<uint32_t> w = ls;
                    w.insert(w.end(), rs.begin(), rs.end());
                    if (w.size() < inst.ell) continue;
                    if (inst.s && w.size() != *inst.s) continue;
                    if (!best || w < *best) best = w;
                }
        }
        res.nodes = (uint64_t(1) << half) + (uint64_t(1) << (n - half));
        if (best) {
            res.found = true;
            for (uint32_t i : *best) res.witness.push_back(i + 1);
        }
        return res;
    }

    SolveResult res;
    detail_phi::DfsState st;
    st.inst = &inst;
    st.n = n;
    st.dim = inst.dim();
    st.ell = inst.ell;
    st.p = inst.p;
    st.e.assign(inst.ell + 1, std::vector<uint64_t>(st.dim, 0));
    std::fill(st.e[0].begin(), st.e[0].end(), 1);
    st.last_touch.assign(st.dim, SIZE_MAX);
    for (size_t i = 0; i < n; ++i)
        for (size_t c = 0; c < st.dim; ++c)
            if (inst.elements[i][c] % inst.p) st.last_touch[c] = i;
    for (size_t c = 0; c < st.dim; ++c)
        if (st.last_touch[c] == SIZE_MAX && inst.target[c] % inst.p)
            return res;  // untouchable nonzero target
    st.res = &res;
    st.dfs(0);
    return res;
}

// Reference checker: plain power-set enumeration, usable up to ~16 elements.
inline SolveResult enumerate_all(const PhiInstance& inst) {
    size_t n = inst.elements.size();
    if (n > 16) throw ParameterError("enumerate_all: instance too large");
    SolveResult res;
    std::optional<std::vector<uint32_t>> best;
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        std::vector<std::vector<uint64_t>> xs;
        std::vector<uint32_t> idxs;
        for (size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) {
                xs.push_back(inst.elements[i]);
                idxs.push_back(uint32_t(i));
            }
        ++res.nodes;
        if (idxs.size() < inst.ell) continue;
        if (inst.s && idxs.size() != *inst.s) continue;
        bool ok = true;
        auto val = phi_eval(inst.ell, xs, inst.p);
        for (size_t c = 0; c < inst.dim(); ++c)
            if (val[c] != inst.target[c] % inst.p) {
                ok = false;
                break;
            }
        if (ok && (!best || idxs < *best)) best = idxs;
    }
    if (best) {
        res.found = true;
        for (uint32_t i : *best) res.witness.push_back(i + 1);
    }
    return res;
}

inline bool check_witness(const PhiInstance& inst, const std::vector<uint32_t>& witness_1based) {
    if (witness_1based.size() < inst.ell) return false;
    if (inst.s && witness_1based.size() != *inst.s) return false;
    std::vector<std::vector<uint64_t>> xs;
    for (uint32_t i : witness_1based) {
        if (i < 1 || i > inst.elements.size()) return false;
        xs.push_back(inst.elements[i - 1]);
    }
    auto val = phi_eval(inst.ell, xs, inst.p);
    for (size_t c = 0; c < inst.dim(); ++c)
        if (val[c] != inst.target[c] % inst.p) return false;
    return true;
}

// ------------------------------------------------- subset products

// Scalar subset-product instances over the odd residues mod 2^bits, used as
// the average-case sampling target. "yes" instances plant a random witness
// of the requested size; "no" instances draw an independent target (almost
// surely unreachable).
struct ProductInstance {
    uint64_t modulus = 0;
    std::vector<uint64_t> elements;
    uint64_t target = 1;
    std::optional<uint64_t> s;  // required subset size
    bool planted = false;
    std::vector<uint32_t> planted_witness;  // 1-based
};

inline ProductInstance sample_subset_product(uint32_t n, uint32_t s, int modulus_bits,
                                             bool yes_instance, const Seed& seed) {
    if (modulus_bits < 2 || modulus_bits > 63) throw ParameterError("sampler: bad modulus bits");
    if (n == 0 || n > 63) throw ParameterError("sampler: bad element count");
    if (s == 0 || s > n) throw ParameterError("sampler: need s in [1, n]");
    ProductInstance inst;
    inst.modulus = uint64_t(1) << modulus_bits;
    inst.s = s;
    PrfStream stream(tag::kPrg, seed, 0);
    for (uint32_t i = 0; i < n; ++i)
        inst.elements.push_back(stream.next_below(inst.modulus) | 1);  // unit: odd residue
    if (yes_instance) {
        inst.planted = true;
        std::vector<uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (uint32_t i = n - 1; i > 0; --i)  // seeded Fisher-Yates
            std::swap(order[i], order[size_t(stream.next_below(i + 1))]);
        order.resize(s);
        std::sort(order.begin(), order.end());
        inst.target = 1;
        for (uint32_t i : order) {
            inst.planted_witness.push_back(i + 1);
            inst.target = mulmod(inst.target, inst.elements[i], inst.modulus);
        }
    } else {
        inst.target = stream.next_below(inst.modulus) | 1;
    }
    return inst;
}

// Meet-in-the-middle subset-product search; odd residues are invertible mod
// a power of two, so half-products can be matched through division.
inline SolveResult solve_subset_product(const ProductInstance& inst, size_t cap = 40) {
    size_t n = inst.elements.size();
    if (n > cap) throw ParameterError("solver: instance size exceeds configured cap");
    auto invmod_pow2 = [&](uint64_t a) {
        // Newton iteration for the inverse of an odd residue mod 2^k
        uint64_t x = 1;
        for (int i = 0; i < 6; ++i) x = x * (2 - a * x);  // mod 2^64 wraps are fine
        return x % inst.modulus;
    };
    SolveResult res;
    size_t half = n / 2;
    std::map<uint64_t, std::vector<std::vector<uint32_t>>> left;
    for (uint64_t mask = 0; mask < (uint64_t(1) << half); ++mask) {
        uint64_t prod = 1;
        std::vector<uint32_t> idxs;
        for (size_t i = 0; i < half; ++i)
            if ((mask >> i) & 1) {
                prod = mulmod(prod, inst.elements[i], inst.modulus);
                idxs.push_back(uint32_t(i));
            }
        left[prod].push_back(idxs);
    }
    std::optional<std::vector<uint32_t>> best;
    for (uint64_t mask = 0; mask < (uint64_t(1) << (n - half)); ++mask) {
        uint64_t prod = 1;
        std::vector<uint32_t> idxs;
        for (size_t i = 0; i < n - half; ++i)
            if ((mask >> i) & 1) {
                prod = mulmod(prod, inst.elements[half + i], inst.modulus);
                idxs.push_back(uint32_t(half + i));
            }
        uint64_t need = mulmod(inst.target % inst.modulus, invmod_pow2(prod), inst.modulus);
        auto it = left.find(need);
        if (it == left.end()) continue;
        for (const auto& ls : it->second) {
            std::vector<uint32_t> w = ls;
            w.insert(w.end(), idxs.begin(), idxs.end());
            if (w.empty()) continue;  // the empty subset is not a witness
            if (inst.s && w.size() != *inst.s) continue;
            if (!best || w < *best) best = w;
        }
    }
    res.nodes = (uint64_t(1) << half) + (uint64_t(1) << (n - half));
    if (best) {
        res.found = true;
        for (uint32_t i : *best) res.witness.push_back(i + 1);
    }
    return res;
}

// ------------------------------------------------------ formula corpus

// Random 3-CNF with distinct variables per clause.
inline Cnf sample_3cnf(uint32_t n_vars, uint32_t m, const Seed& seed) {
    if (n_vars < 3) throw ParameterError("sampler: need at least three variables");
    Cnf f;
    f.n_vars = n_vars;
    PrfStream stream(tag::kPrg, seed, 1);
    for (uint32_t j = 0; j < m; ++j) {
        std::array<int, 3> cl{};
        std::vector<uint32_t> vars;
        while (vars.size() < 3) {
            uint32_t v = uint32_t(stream.next_below(n_vars)) + 1;
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        for (int i = 0; i < 3; ++i)
            cl[size_t(i)] = stream.next_below(2) ? int(vars[size_t(i)]) : -int(vars[size_t(i)]);
        f.clauses.push_back(cl);
    }
    return f;
}

}  // namespace srds
