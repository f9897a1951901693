#include <doctest.h>

#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynseq/oracle.hpp"
#include "dynseq/text_index.hpp"

using namespace dynseq;

namespace {
std::vector<Code> codes(const std::string& s) { return {s.begin(), s.end()}; }

DynStringConfig tiny() {
    DynStringConfig c;
    c.q = 4;
    c.node.superblock_bits = 256;
    c.node.block_bits = 64;
    c.node.b = 2;
    return c;
}

void check_against_oracle(const TextCollection& t, const std::vector<std::vector<Code>>& docs) {
    REQUIRE(t.validate().empty());
    CHECK(t.bwt() == oracle::nv_bwt(docs));
    for (std::size_t r = 0; r < docs.size(); ++r) CHECK(t.extract(t.documents()[r]) == docs[r]);
}
}  // namespace

TEST_CASE("text index: single document BWT") {
    TextCollection t(255);
    t.insert(codes("mississippi"));
    auto bwt = t.bwt();
    std::string s;
    for (Code c : bwt) s += c == 0 ? '#' : static_cast<char>(c);
    CHECK(s == "ipssm#pissii");
    CHECK(t.count(codes("ssi")) == 2);
    CHECK(t.count(codes("i")) == 4);
    CHECK(t.count(codes("x")) == 0);
    CHECK(t.extract(t.documents()[0]) == codes("mississippi"));

    TextCollection u(255);
    u.insert(codes("a"));
    CHECK(u.bwt() == std::vector<Code>{'a', 0});
}

TEST_CASE("text index: counting sums over documents") {
    TextCollection t(255);
    t.insert(codes("abc"));
    t.insert(codes("ab"));
    CHECK(t.count(codes("ab")) == 2);
    CHECK(t.count(codes("abc")) == 1);
    CHECK(t.count(codes("ba")) == 0);
    CHECK(t.count(std::vector<Code>{0}) == 0);
    CHECK(t.count(std::vector<Code>{300}) == 0);
    const auto r = t.search(codes("b"));
    CHECK(r.size() == 2);
}

TEST_CASE("text index: empty collection") {
    TextCollection t(255);
    CHECK(t.count(codes("a")) == 0);
    CHECK(t.bwt().empty());
    CHECK(t.validate().empty());
}

TEST_CASE("text index: rejects bad documents and stale handles") {
    TextCollection t(4);
    CHECK_THROWS_AS(t.insert(std::vector<Code>{}), std::invalid_argument);
    CHECK_THROWS_AS(t.insert(std::vector<Code>{1, 5}), std::invalid_argument);
    CHECK_THROWS_AS(t.insert(std::vector<Code>{0}), std::invalid_argument);
    const DocId a = t.insert(std::vector<Code>{1, 2});
    t.erase(a);
    CHECK_THROWS_AS(t.erase(a), std::runtime_error);
    CHECK_THROWS_AS(t.extract(a), std::runtime_error);
    CHECK(t.document_count() == 0);
    CHECK(t.validate().empty());
}

TEST_CASE("text index: handles stay stable across deletes") {
    TextCollection t(255);
    const DocId a = t.insert(codes("alpha"));
    const DocId b = t.insert(codes("beta"));
    const DocId c = t.insert(codes("gamma"));
    t.erase(b);
    CHECK(t.extract(a) == codes("alpha"));
    CHECK(t.extract(c) == codes("gamma"));
    CHECK(t.rank_of(c) == 2);
    const DocId d = t.insert(codes("beta"));
    CHECK(d != b);
    check_against_oracle(t, {codes("alpha"), codes("gamma"), codes("beta")});
}

TEST_CASE("text index: equal first characters in deletion") {
    // Documents sharing prefixes put several rows with the same first symbol
    // next to each other; deletion must track the orphaned row exactly.
    TextCollection t(255, tiny());
    std::vector<std::vector<Code>> docs{codes("aaaa"), codes("aab"), codes("aaaa"), codes("ba"),
                                        codes("aaab")};
    std::vector<DocId> ids;
    for (auto& d : docs) ids.push_back(t.insert(d));
    check_against_oracle(t, docs);
    t.erase(ids[2]);
    docs.erase(docs.begin() + 2);
    check_against_oracle(t, docs);
    t.erase(ids[0]);
    docs.erase(docs.begin());
    check_against_oracle(t, docs);
}

TEST_CASE("text index: random insert and delete replay") {
    std::mt19937_64 rng(99);
    for (std::uint32_t sigma : {2u, 3u, 26u}) {
        TextCollection t(sigma, tiny());
        std::vector<std::vector<Code>> docs;
        for (int step = 0; step < 120; ++step) {
            if (!docs.empty() && rng() % 3 == 0) {
                const std::size_t r = rng() % docs.size();
                t.erase(t.documents()[r]);
                docs.erase(docs.begin() + static_cast<std::ptrdiff_t>(r));
            } else {
                std::vector<Code> d(1 + rng() % 12);
                for (auto& c : d) c = static_cast<Code>(1 + rng() % sigma);
                t.insert(d);
                docs.push_back(d);
            }
            if (step % 10 == 0) check_against_oracle(t, docs);
            std::vector<Code> pat(1 + rng() % 3);
            for (auto& c : pat) c = static_cast<Code>(1 + rng() % sigma);
            CHECK(t.count(pat) == oracle::nv_count(docs, pat));
        }
        check_against_oracle(t, docs);
    }
}

TEST_CASE("text index: large alphabet uses lazily grouped counts") {
    TextCollection t(4000000000u);
    const std::vector<Code> d{3999999999u, 7, 3999999999u, 70000};
    const DocId id = t.insert(d);
    CHECK(t.count(std::vector<Code>{3999999999u}) == 2);
    CHECK(t.count(std::vector<Code>{7, 3999999999u}) == 1);
    CHECK(t.C(70000) == 2);
    CHECK(t.extract(id) == d);
    CHECK(t.validate().empty());
    t.erase(id);
    CHECK(t.total_length() == 0);
    CHECK(t.validate().empty());
}

TEST_CASE("text index: serialization round trip") {
    TextCollection t(255);
    t.insert(codes("hello world"));
    t.insert(std::vector<Code>{1, 255, 128});
    std::stringstream ss;
    save_index(t, ss);
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 7) == "SUCIDX1");
    CHECK(bytes.size() == 7 + 4 + (8 + 11) + (8 + 3));

    std::stringstream in(bytes);
    TextCollection u = load_index(in);
    REQUIRE(u.document_count() == 2);
    CHECK(u.extract(u.documents()[0]) == codes("hello world"));
    CHECK(u.bwt() == t.bwt());
    std::stringstream again;
    save_index(u, again);
    CHECK(again.str() == bytes);

    std::stringstream bad("SUCIDX2\0\0\0\0");
    CHECK_THROWS_AS(load_index(bad), std::runtime_error);
    std::stringstream cut(bytes.substr(0, bytes.size() - 1));
    CHECK_THROWS_AS(load_index(cut), std::runtime_error);
    TextCollection wide(1000);
    CHECK_THROWS_AS(save_index(wide, ss), std::invalid_argument);
}
