#include <set>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "srds/subset_phi.hpp"

using namespace srds;

namespace {

std::vector<std::vector<uint64_t>> scalars(std::initializer_list<uint64_t> vs) {
    std::vector<std::vector<uint64_t>> out;
    for (uint64_t v : vs) out.push_back({v});
    return out;
}

Cnf cnf_of(const std::string& dimacs) {
    std::istringstream in(dimacs);
    return parse_dimacs(in);
}

// Exercised repeatedly below: a satisfiable and an unsatisfiable formula.
const char* kSat3 =
    "p cnf 3 2\n1 2 3 0\n-1 -2 3 0\n";
const char* kUnsat3 =
    "c all eight sign patterns over three variables\n"
    "p cnf 3 8\n"
    "1 2 3 0\n1 2 -3 0\n1 -2 3 0\n1 -2 -3 0\n"
    "-1 2 3 0\n-1 2 -3 0\n-1 -2 3 0\n-1 -2 -3 0\n";

}  // namespace

// Frozen values from tools/oracle_phi.py (direct combination-sum evaluation).

TEST_CASE("elementary symmetric evaluation matches the reference oracle") {
    CHECK(phi_eval(2, scalars({2, 3, 5}), 101) == std::vector<uint64_t>{31});
    CHECK(phi_eval(2, scalars({2, 3, 5, 7}), 101) == std::vector<uint64_t>{0});
    CHECK(phi_eval(3, scalars({2, 3, 5, 7}), 101) == std::vector<uint64_t>{45});
    CHECK(phi_eval(3, scalars({1, 2, 3, 4, 5, 6, 7}), 97) == std::vector<uint64_t>{20});
    CHECK(phi_eval(4, scalars({1, 2, 3, 4, 5, 6, 7, 8, 9}), 1009) ==
          std::vector<uint64_t>{715});
    CHECK(phi_eval(5, scalars({3, 1, 4, 1, 5, 9, 2, 6}), 997) == std::vector<uint64_t>{691});
    CHECK(phi_eval(2, scalars({0, 5, 0, 7}), 11) == std::vector<uint64_t>{2});
    CHECK(phi_eval(8, scalars({1, 2, 3, 4, 5, 6, 7, 8}), 65537) ==
          std::vector<uint64_t>{40320});  // 8!

    std::vector<std::vector<uint64_t>> vecs{{2, 1}, {3, 10}, {5, 100}, {7, 1000}};
    CHECK(phi_eval(2, vecs, 1013) == std::vector<uint64_t>({101, 680}));
}

TEST_CASE("evaluation satisfies the one-element extension recurrence") {
    PrfStream draw(tag::kPrg, seed_from_u64(20), 0);
    for (int trial = 0; trial < 30; ++trial) {
        uint64_t p = 10007;
        size_t k = 3 + draw.next_below(6);
        std::vector<std::vector<uint64_t>> xs;
        for (size_t i = 0; i < k; ++i) xs.push_back({draw.next_below(p)});
        uint64_t x = draw.next_below(p);
        uint32_t ell = uint32_t(2 + draw.next_below(k - 1));

        auto with = xs;
        with.push_back({x});
        uint64_t lhs = phi_eval(ell, with, p)[0];
        uint64_t rhs = addmod(phi_eval(ell, xs, p)[0],
                              mulmod(x, phi_eval(ell - 1, xs, p)[0], p), p);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("evaluation rejects degenerate shapes") {
    CHECK_THROWS_AS(phi_eval(0, scalars({1}), 101), ParameterError);
    CHECK_THROWS_AS(phi_eval(2, {}, 101), ParameterError);
    CHECK_THROWS_AS(phi_eval(2, {{1, 2}, {1}}, 101), MalformedInput);
    // ell above the set size is the empty sum.
    CHECK(phi_eval(5, scalars({1, 2}), 101) == std::vector<uint64_t>{0});
}

TEST_CASE("modulus selection avoids small, composite and aliasing primes") {
    CHECK(default_modulus(2) == 67);
    CHECK(default_modulus(3) == 67);
    CHECK(default_modulus(4) == 67);
    CHECK_NOTHROW(detail_phi::check_modulus(default_modulus(2), 2));
    CHECK_THROWS_AS(detail_phi::check_modulus(65, 2), ParameterError);  // composite
    CHECK_THROWS_AS(detail_phi::check_modulus(61, 2), ParameterError);  // below 63
    // C(66, 64) = 2145 = 1 mod 67: the binomial aliasing guard.
    CHECK_THROWS_AS(detail_phi::check_modulus(67, 64), ParameterError);
    CHECK_NOTHROW(detail_phi::check_modulus(default_modulus(64), 64));

    CHECK(is_prime(2));
    CHECK(is_prime(67));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(63));
    CHECK(next_prime(63) == 67);
    CHECK(next_prime(68) == 71);
}

TEST_CASE("DIMACS parsing accepts exact-three clauses only") {
    Cnf f = cnf_of(kSat3);
    CHECK(f.n_vars == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[1] == std::array<int, 3>{-1, -2, 3});

    // Round trip through the writer.
    Cnf again = cnf_of(to_dimacs(f));
    CHECK(again.n_vars == f.n_vars);
    CHECK(again.clauses == f.clauses);

    CHECK_THROWS_AS(cnf_of("p cnf 2 1\n1 2 0\n"), MalformedInput);
    CHECK_THROWS_AS(cnf_of("p cnf 2 1\n1 2 3 0\n"), MalformedInput);  // var out of range
    CHECK_THROWS_AS(cnf_of("1 2 3 0\n"), MalformedInput);             // missing header
    CHECK_THROWS_AS(cnf_of("p cnf 3 1\n1 2 3\n"), MalformedInput);    // missing terminator
}

TEST_CASE("the brute-force satisfiability oracle is sound") {
    CHECK(sat_assignment(cnf_of(kSat3)).has_value());
    CHECK_FALSE(sat_assignment(cnf_of(kUnsat3)).has_value());
    uint32_t a = *sat_assignment(cnf_of(kSat3));
    // Returned assignment actually satisfies the formula.
    for (const auto& cl : cnf_of(kSat3).clauses) {
        bool ok = false;
        for (int lit : cl) ok = ok || (((a >> (std::abs(lit) - 1)) & 1) == (lit > 0));
        CHECK(ok);
    }
}

TEST_CASE("degree-two reduction has the pinned shape") {
    Cnf f = cnf_of(kSat3);  // N=3, m=2
    PhiInstance inst = reduce_3sat_phi2(f);
    CHECK(inst.p == 67);
    CHECK(inst.ell == 2);
    CHECK(inst.dim() == 1 + 3 + 2);
    CHECK(inst.elements.size() == 2 + 2 * 3 + 3 * 2);  // 14
    CHECK(inst.target[0] == 1);
    CHECK(inst.target[3] == 1);
    CHECK(inst.target[4] == 9);

    // Literal incidence: element for +x1 marks clause 1 (where literal 1 sits).
    const auto& pos_x1 = inst.elements[2];
    CHECK(pos_x1[1] == 1);
    CHECK(pos_x1[4] == 1);  // clause 1 column
    CHECK(pos_x1[5] == 0);  // clause 2 has -1
    const auto& neg_x1 = inst.elements[3];
    CHECK(neg_x1[5] == 1);
}

TEST_CASE("degree-ell reduction has the pinned shape") {
    Cnf f = cnf_of(kSat3);
    PhiInstance inst = reduce_3sat_phil(f, 3);
    CHECK(inst.ell == 3);
    CHECK(inst.elements.size() == 3 + 2 * 3 + 2 * 2);  // 13
    CHECK(inst.target == std::vector<uint64_t>(6, 1));
    CHECK_THROWS_AS(reduce_3sat_phil(f, 2), ParameterError);
}

TEST_CASE("reduction preserves satisfiability in both directions") {
    struct Sample {
        const char* dimacs;
        bool sat;
    };
    const Sample samples[] = {
        {kSat3, true},
        {kUnsat3, false},
        {"p cnf 3 1\n1 -2 3 0\n", true},
        {"p cnf 4 4\n1 2 3 0\n-1 2 4 0\n-2 -3 -4 0\n1 -3 4 0\n", true},
        {"p cnf 3 4\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n1 2 -3 0\n", true},
    };
    for (const Sample& s : samples) {
        Cnf f = cnf_of(s.dimacs);
        CHECK(sat_assignment(f).has_value() == s.sat);
        for (uint32_t ell : {2u, 3u, 4u}) {
            PhiInstance inst =
                ell == 2 ? reduce_3sat_phi2(f) : reduce_3sat_phil(f, ell);
            SolveResult r = brute_force(inst, SolveOptions{40});
            INFO("ell=" << ell << " formula " << s.dimacs);
            CHECK(r.found == s.sat);
            if (r.found) CHECK(check_witness(inst, r.witness));
        }
    }
}

TEST_CASE("witness sizes land inside the published bounds") {
    Cnf f = cnf_of("p cnf 4 4\n1 2 3 0\n-1 2 4 0\n-2 -3 -4 0\n1 -3 4 0\n");
    for (uint32_t ell : {2u, 3u, 4u}) {
        PhiInstance inst = ell == 2 ? reduce_3sat_phi2(f) : reduce_3sat_phil(f, ell);
        SolveResult r = brute_force(inst, SolveOptions{40});
        REQUIRE(r.found);
        WitnessSizeBounds b = witness_size_bounds(ell, f.n_vars, uint32_t(f.clauses.size()));
        CHECK(r.witness.size() >= b.lo);
        CHECK(r.witness.size() <= b.hi);
    }
}

TEST_CASE("padding equalizes dimensions and preserves satisfiability") {
    Cnf narrow = cnf_of("p cnf 5 2\n1 2 3 0\n-1 4 5 0\n");  // N > m
    Cnf padded = pad_formula(narrow);
    CHECK(padded.n_vars == 6);
    CHECK(padded.clauses.size() == 6);
    CHECK(sat_assignment(padded).has_value() == sat_assignment(narrow).has_value());

    Cnf unsat = cnf_of(kUnsat3);  // m > N: variable count lifted, clauses kept
    Cnf padded2 = pad_formula(unsat);
    CHECK(padded2.n_vars == 8);
    CHECK(padded2.clauses.size() == 8);
    CHECK_FALSE(sat_assignment(padded2).has_value());

    // Fixed-size witness variant: padded instances pin |S| exactly.
    PhiInstance inst = reduce_3sat_phi2(padded);
    inst.s = witness_size_bounds(2, padded.n_vars, uint32_t(padded.clauses.size())).lo;
    SolveResult r = brute_force(inst, SolveOptions{40});
    CHECK(r.found);
    if (r.found) {
        CHECK(r.witness.size() == *inst.s);
        CHECK(check_witness(inst, r.witness));
    }
}

TEST_CASE("the two solvers agree everywhere the small one can reach") {
    // N=3, m=2 keeps the instance at 14 elements, inside the reference
    // checker's power-set range.
    for (int trial = 0; trial < 12; ++trial) {
        Cnf f = sample_3cnf(3, 2, derive(seed_from_u64(31), "cnf", uint64_t(trial)));
        PhiInstance inst = reduce_3sat_phi2(f);
        SolveResult fast = brute_force(inst, SolveOptions{24});
        SolveResult slow = enumerate_all(inst);
        CHECK(fast.found == slow.found);
        if (fast.found) {
            CHECK(check_witness(inst, fast.witness));
            CHECK(check_witness(inst, slow.witness));
        }
    }
}

TEST_CASE("witness checking is strict about membership and size") {
    Cnf f = cnf_of(kSat3);
    PhiInstance inst = reduce_3sat_phi2(f);
    SolveResult r = brute_force(inst, SolveOptions{24});
    REQUIRE(r.found);
    REQUIRE(check_witness(inst, r.witness));

    auto w = r.witness;
    w.push_back(w.back());  // duplicate index
    CHECK_FALSE(check_witness(inst, w));
    auto w2 = r.witness;
    w2[0] = 0;  // zero is out of range (indices are 1-based)
    CHECK_FALSE(check_witness(inst, w2));
    auto w3 = r.witness;
    w3.pop_back();
    CHECK_FALSE(check_witness(inst, w3));

    PhiInstance pinned = inst;
    pinned.s = r.witness.size() + 1;
    CHECK_FALSE(check_witness(pinned, r.witness));
}

TEST_CASE("solver guard refuses oversized instances") {
    // All-zero elements with a nonzero target: unsolvable without search,
    // so only the cap check is exercised.
    PhiInstance big;
    big.p = 67;
    big.ell = 2;
    big.target = {1};
    for (int i = 0; i < 30; ++i) big.elements.push_back({0});
    CHECK_THROWS_AS(brute_force(big, SolveOptions{24}), ParameterError);
    SolveResult r = brute_force(big, SolveOptions{30});
    CHECK_FALSE(r.found);
}

TEST_CASE("planted product instances solve; unplanted ones rarely do") {
    ProductInstance yes = sample_subset_product(12, 5, 32, true, seed_from_u64(40));
    REQUIRE(yes.planted_witness.size() == 5);
    uint64_t prod = 1;
    uint64_t mask = yes.modulus - 1;  // modulus is 2^bits
    for (uint32_t idx : yes.planted_witness)
        prod = (prod * yes.elements[idx - 1]) & mask;
    CHECK(prod == yes.target);

    SolveResult r = solve_subset_product(yes, 24);
    CHECK(r.found);

    ProductInstance no = sample_subset_product(12, 5, 32, false, seed_from_u64(41));
    CHECK(no.planted_witness.empty());
    SolveResult rn = solve_subset_product(no, 24);
    CHECK_FALSE(rn.found);  // 2^12 subsets against a 32-bit target
}

TEST_CASE("formula sampling is exact-three and in range") {
    Cnf f = sample_3cnf(4, 6, seed_from_u64(50));
    CHECK(f.n_vars == 4);
    CHECK(f.clauses.size() == 6);
    for (const auto& cl : f.clauses) {
        std::set<uint32_t> vars;
        for (int lit : cl) {
            CHECK(lit != 0);
            CHECK(uint32_t(std::abs(lit)) <= 4);
            vars.insert(uint32_t(std::abs(lit)));
        }
        CHECK(vars.size() == 3);  // distinct variables per clause
    }
    Cnf again = sample_3cnf(4, 6, seed_from_u64(50));
    CHECK(again.clauses == f.clauses);
}
