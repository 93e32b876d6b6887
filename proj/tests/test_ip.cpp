// Finite-product sets and bounded/exact witness searches, all compared
// against the odometer and bitmask reference implementations.
#include <catch2/catch_amalgamated.hpp>

#include <hindman/ip.hpp>

#include <random>

#include "oracles.hpp"

using namespace hindman;

namespace {

const oracle::Op add_op = [](std::uint64_t a, std::uint64_t b) { return a + b; };

std::vector<std::uint64_t> indexes(const std::vector<Element>& v) {
    std::vector<std::uint64_t> out;
    for (Element e : v) out.push_back(e.index);
    return out;
}

std::vector<Element> elements(const std::vector<std::uint64_t>& v) {
    std::vector<Element> out;
    for (std::uint64_t i : v) out.push_back(Element{i});
    return out;
}

SetPredicate mod_pred(const SemigroupHandle& s, std::uint32_t d, std::vector<std::uint32_t> residues) {
    std::vector<bool> subset(d, false);
    for (std::uint32_t r : residues) subset[r] = true;
    auto hom = std::make_shared<const Homomorphism>(s, FiniteSemigroup::zmod_add(d), ModRule{d});
    return SetPredicate::from_quotient(std::move(hom), std::move(subset));
}

} // namespace

TEST_CASE("finite product sets match the reference enumeration") {
    SemigroupHandle add = SemigroupHandle::nat_add();
    CHECK(indexes(fp_set(add, elements({1, 2}))) == oracle::fp(add_op, {1, 2}));
    CHECK(indexes(fp_set(add, elements({1, 2, 3}))) == oracle::fp(add_op, {1, 2, 3}));
    CHECK(fp_set(add, {}).empty());

    std::mt19937 rng(60902);
    std::uniform_int_distribution<std::uint64_t> pick(0, 40);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint64_t> basis(1 + trial % 6);
        for (auto& b : basis) b = pick(rng);
        auto got = indexes(fp_set(add, elements(basis)));
        CHECK(got == oracle::fp(add_op, basis));
        CHECK(got.size() <= (std::size_t{1} << basis.size()) - 1);
    }

    FiniteSemigroup z6 = FiniteSemigroup::zmod_add(6);
    SemigroupHandle z6h = SemigroupHandle::finite_table(z6);
    oracle::Op z6op = [&](std::uint64_t a, std::uint64_t b) {
        return std::uint64_t{z6.product(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b))};
    };
    CHECK(indexes(fp_set(z6h, elements({2, 3, 5}))) == oracle::fp(z6op, {2, 3, 5}));
    CHECK_THROWS_AS(fp_set(add, std::vector<Element>(31, Element{1})), std::invalid_argument);
}

TEST_CASE("word products appear only in index order") {
    SemigroupHandle fw = SemigroupHandle::free_word("ab");
    std::vector<Element> basis{fw.element_of_word("a"), fw.element_of_word("b")};
    auto products = fp_set(fw, basis);
    auto has = [&](const std::string& w) {
        Element e = fw.element_of_word(w);
        return std::find(products.begin(), products.end(), e) != products.end();
    };
    CHECK(has("a"));
    CHECK(has("b"));
    CHECK(has("ab"));
    CHECK_FALSE(has("ba"));

    std::vector<std::string> expected = oracle::fp_words({"a", "b"});
    std::vector<std::string> got;
    for (Element e : products) got.push_back(fw.word_of(e));
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
}

TEST_CASE("bounded witness search finds least witnesses") {
    SemigroupHandle add = SemigroupHandle::nat_add();
    SetPredicate evens = mod_pred(add, 2, {0});

    auto v = ip_witness_bounded(add, evens, 3, 64);
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{0, 0, 0});
    CHECK(indexes(v.witness->fp) == std::vector<std::uint64_t>{0});

    v = ip_witness_bounded(add, evens, 3, 64, SearchOptions{true});
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{2, 2, 2});
    CHECK(indexes(v.witness->fp) == std::vector<std::uint64_t>{2, 4, 6});

    auto ref = oracle::least_witness(add_op, [](std::uint64_t n) { return n % 2 == 0; }, 3, 1, 64);
    CHECK(indexes(v.witness->basis) == ref.basis);

    SetPredicate odds = mod_pred(add, 2, {1});
    v = ip_witness_bounded(add, odds, 2, 64);
    REQUIRE(v.is_exhausted());
    CHECK(v.bounds->depth == 2);
    CHECK_FALSE(oracle::least_witness(add_op, [](std::uint64_t n) { return n % 2 == 1; }, 2, 0, 64).found);
}

TEST_CASE("distinct-entry and distinct-product searches") {
    SemigroupHandle add = SemigroupHandle::nat_add();
    SetPredicate mult3 = mod_pred(add, 3, {0});

    auto v = dip_witness_bounded(add, mult3, 3, 64);
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{0, 3, 6});
    v = dip_witness_bounded(add, mult3, 3, 64, SearchOptions{true});
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{3, 6, 9});
    auto ref = oracle::least_witness(add_op, [](std::uint64_t n) { return n % 3 == 0; }, 3, 1, 64, true);
    CHECK(indexes(v.witness->basis) == ref.basis);

    SetPredicate evens = mod_pred(add, 2, {0});
    v = iip_witness_bounded(add, evens, 3, 7, 64, SearchOptions{true});
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{2, 4, 8});
    CHECK(v.witness->fp.size() == 7);
    ref = oracle::least_witness(add_op, [](std::uint64_t n) { return n % 2 == 0; }, 3, 1, 64, false, 7);
    CHECK(indexes(v.witness->basis) == ref.basis);

    // Depth 3 yields at most 7 products, so requiring 8 distinct must fail.
    CHECK(iip_witness_bounded(add, evens, 3, 8, 64).is_exhausted());
    CHECK_THROWS_AS(iip_witness_bounded(add, evens, 3, 0, 64), std::invalid_argument);

    SemigroupHandle fw = SemigroupHandle::free_word("ab");
    SetPredicate a_words = SetPredicate::from_evaluator([&](Element e) {
        for (char c : fw.word_of(e))
            if (c != 'a') return false;
        return true;
    });
    v = dip_witness_bounded(fw, a_words, 2, 16);
    REQUIRE(v.is_ip());
    CHECK(fw.word_of(v.witness->basis[0]) == "a");
    CHECK(fw.word_of(v.witness->basis[1]) == "aa");
}

TEST_CASE("exact quotient oracle") {
    SemigroupHandle add = SemigroupHandle::nat_add();
    auto v = is_ip_quotient(mod_pred(add, 2, {0}));
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{0, 0, 0, 0});

    v = is_ip_quotient(mod_pred(add, 2, {0}), 4, SearchOptions{true});
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{2, 2, 2, 2});
    CHECK(indexes(v.witness->fp) == std::vector<std::uint64_t>{2, 4, 6, 8});

    CHECK(is_ip_quotient(mod_pred(add, 2, {1})).is_not_ip_exact());
    CHECK(is_ip_quotient(mod_pred(add, 5, {})).is_not_ip_exact());
    CHECK_THROWS_AS(is_ip_quotient(SetPredicate::from_evaluator([](Element) { return true; })),
                    std::invalid_argument);
}

TEST_CASE("class-level pruning agrees with brute force on finite tables") {
    FiniteSemigroup lz = FiniteSemigroup::left_zero(3);
    SemigroupHandle lzh = SemigroupHandle::finite_table(lz);
    std::vector<std::uint32_t> ident{0, 1, 2};
    auto hom = std::make_shared<const Homomorphism>(lzh, lz, TableMapRule{ident});
    SetPredicate only1 = SetPredicate::from_quotient(hom, std::vector<bool>{false, true, false});

    auto v = ip_witness_bounded(lzh, only1, 5, 8);
    REQUIRE(v.is_ip());
    CHECK(indexes(v.witness->basis) == std::vector<std::uint64_t>{1, 1, 1, 1, 1});
    CHECK(indexes(v.witness->fp) == std::vector<std::uint64_t>{1});

    // Only 3 elements exist, so 4 pairwise distinct entries are impossible
    // regardless of the requested window.
    SetPredicate all = SetPredicate::from_quotient(hom, std::vector<bool>{true, true, true});
    CHECK(dip_witness_bounded(lzh, all, 4, 100).is_exhausted());
}

TEST_CASE("two-sided partition check") {
    SemigroupHandle add = SemigroupHandle::nat_add();
    SetPredicate x = mod_pred(add, 6, {0, 2, 4});
    SetPredicate y = mod_pred(add, 6, {0});

    PartitionReport r = partition_check(add, x, y, 3, 64);
    REQUIRE(r.y_verdict.is_ip());
    CHECK(indexes(r.y_verdict.witness->basis) == std::vector<std::uint64_t>{0, 0, 0});
    // Even non-multiples of 6 reduce to the nonzero classes of Z_3, where
    // any three values contain a zero-sum subsequence: depth 3 always fails.
    CHECK(r.complement_verdict.is_exhausted());
    CHECK(r.x_has_witness);
    CHECK_FALSE(r.violation_at_bounds);

    auto in_x = [](std::uint64_t n) { return n % 2 == 0; };
    auto in_comp = [](std::uint64_t n) { return n % 2 == 0 && n % 6 != 0; };
    CHECK(oracle::least_witness(add_op, in_x, 3, 0, 64).found);
    CHECK_FALSE(oracle::least_witness(add_op, in_comp, 3, 0, 64).found);

    CHECK_THROWS_AS(partition_check(add, mod_pred(add, 4, {0}), mod_pred(add, 2, {0}), 3, 64),
                    std::invalid_argument);
}

TEST_CASE("finite-sums windows") {
    WindowResult w = hindman_window(1, 2, 10);
    REQUIRE(w.found);
    CHECK(w.least_n == 3);
    CHECK(w.certificate.size() == 2);
    CHECK(oracle::least_window(1, 2, 10) == std::size_t{3});

    w = hindman_window(2, 2, 5);
    CHECK_FALSE(w.found);
    CHECK(w.n_max == 5);

    CHECK_THROWS_AS(hindman_window(0, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(hindman_window(2, 1, 5), std::invalid_argument);
    CHECK_THROWS_AS(hindman_window(2, 17, 5), std::invalid_argument);
}

TEST_CASE("avoidance predicate agrees with the reference on every coloring") {
    for (std::uint32_t bits = 0; bits < (1u << 8); ++bits) {
        std::vector<int> coloring(8);
        for (std::size_t i = 0; i < 8; ++i) coloring[i] = bits >> i & 1;
        CHECK(coloring_avoids_fs(2, coloring) == !oracle::has_mono_fs(2, coloring));
    }
}
