// Table documents: exact JSON round trips, byte determinism, the degree
// CSV, the file cache, and the closed-form reference degree rows.
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "ringrep/charkit.hpp"
#include "ringrep/reference.hpp"
#include "ringrep/serialize.hpp"

using namespace ringrep;

namespace {

struct TableCtx {
  FieldTower F;
  TruncRing R;
  MatGroup G;
  std::shared_ptr<const std::vector<Mat>> elems;
  FiniteGroup fg;
  ConjClasses cls;
  CharacterTable tab;
  TableCtx(int q, int r)
      : F(FieldTower::make(q, 1)),
        R(F, 1, r),
        G(R, 2),
        elems(std::make_shared<const std::vector<Mat>>(G.enumerate_sl(1))),
        fg(group_from_mats(G, elems)),
        cls(ConjClasses::compute(fg)),
        tab(CharacterTable::compute(cls)) {}
  TableDoc doc(int q, int r) const {
    return make_table_doc(2, q, r, R, *elems, cls, tab);
  }
};

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ringrep-test-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("table document: round trip is exact and byte-stable") {
  TableCtx ctx(2, 2);
  TableDoc doc = ctx.doc(2, 2);
  CHECK(doc.order == 48);
  CHECK(doc.classes.size() == 10);
  CHECK(doc.irreducibles.size() == 10);
  for (const auto& c : doc.classes) {
    REQUIRE(c.rep.size() == 2);
    for (const auto& row : c.rep) {
      REQUIRE(row.size() == 2);
      for (const auto& entry : row) CHECK(entry.size() == 2);
    }
  }

  std::string text = table_doc_to_json(doc);
  TableDoc back = table_doc_from_json(text);
  CHECK(back == doc);
  // Reparsing reproduces the bytes exactly, and a second serialization of
  // the same computation is identical.
  CHECK(table_doc_to_json(back) == text);
  CHECK(table_doc_to_json(ctx.doc(2, 2)) == text);

  // A nontrivial cyclotomic survives exactly (the depth-1 q=3 table has
  // irrational values on the order-3 classes).
  TableCtx c3(3, 1);
  TableDoc d3 = c3.doc(3, 1);
  bool irrational = false;
  for (const auto& row : d3.irreducibles)
    for (const Cyclo& v : row.values)
      if (!v.is_rational()) irrational = true;
  CHECK(irrational);
  TableDoc b3 = table_doc_from_json(table_doc_to_json(d3));
  CHECK(b3 == d3);
  CHECK(table_doc_to_json(b3) == table_doc_to_json(d3));
}

TEST_CASE("table document: malformed inputs are rejected") {
  TableCtx ctx(2, 2);
  std::string text = table_doc_to_json(ctx.doc(2, 2));

  CHECK_THROWS_AS(table_doc_from_json("not json"), std::runtime_error);
  CHECK_THROWS_AS(table_doc_from_json("{}"), std::runtime_error);

  // Wrong format version.
  std::string bumped = text;
  auto pos = bumped.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  bumped.replace(pos, 19, "\"format_version\": 9");
  CHECK_THROWS_AS(table_doc_from_json(bumped), std::runtime_error);

  // Coefficient vector inconsistent with its conductor.
  std::string broken = text;
  pos = broken.find("\"conductor\": 1");
  REQUIRE(pos != std::string::npos);
  broken.replace(pos, 14, "\"conductor\": 4");
  CHECK_THROWS_AS(table_doc_from_json(broken), std::runtime_error);
}

TEST_CASE("table document: degree CSV") {
  TableCtx ctx(2, 2);
  CHECK(table_doc_degree_csv(ctx.doc(2, 2)) ==
        "degree,count\n1,4\n2,2\n3,4\n");
}

TEST_CASE("cache: save, load, key checks") {
  TempDir tmp;
  std::string dir = tmp.path.string();
  TableCtx ctx(2, 2);
  TableDoc doc = ctx.doc(2, 2);

  TableDoc loaded;
  CHECK(!load_cached_table(dir, 2, 2, 2, &loaded));  // nothing saved yet
  save_cached_table(dir, doc);
  REQUIRE(load_cached_table(dir, 2, 2, 2, &loaded));
  CHECK(loaded == doc);
  CHECK(table_doc_to_json(loaded) == table_doc_to_json(doc));
  CHECK(!load_cached_table(dir, 2, 3, 2, &loaded));  // different key

  // A file stored under the wrong key is rejected, not silently used.
  std::string wrong_key = table_doc_to_json(doc);
  write_file_atomic((tmp.path / cache_file_name(2, 3, 2)).string(), wrong_key);
  CHECK_THROWS_AS(load_cached_table(dir, 2, 3, 2, &loaded),
                  std::runtime_error);

  // Corrupted cache files surface as errors.
  write_file_atomic((tmp.path / cache_file_name(2, 2, 2)).string(), "junk");
  CHECK_THROWS_AS(load_cached_table(dir, 2, 2, 2, &loaded),
                  std::runtime_error);
}

TEST_CASE("cache: directory resolution and atomic writes") {
  TempDir tmp;
  ::setenv("RINGREP_CACHE_DIR", tmp.path.c_str(), 1);
  CHECK(default_cache_dir() == tmp.path.string());
  ::unsetenv("RINGREP_CACHE_DIR");
  CHECK(default_cache_dir() == ".ringrep-cache");

  // Atomic writes create parents and leave no temp files behind.
  std::filesystem::path nested = tmp.path / "a" / "b" / "out.txt";
  write_file_atomic(nested.string(), "payload");
  std::ifstream in(nested);
  std::string got((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  CHECK(got == "payload");
  int entries = 0;
  for (const auto& e : std::filesystem::directory_iterator(nested.parent_path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}

TEST_CASE("reference degree rows: consistency across q") {
  // Even q: the printed table is exact; `corrected` is ignored.
  for (long long q : {2, 4}) {
    auto rows = depth2_degree_rows(q, false);
    CHECK(rows == depth2_degree_rows(q, true));
    CHECK(degree_rows_weight(rows) == depth_group_order(q, 2));
  }
  // Odd q: the corrected table is exact; the printed one misses
  // 2q * ((q^2-1)/2)^2.
  for (long long q : {3, 5, 7}) {
    auto corrected = depth2_degree_rows(q, true);
    CHECK(degree_rows_weight(corrected) == depth_group_order(q, 2));
    auto printed = depth2_degree_rows(q, false);
    long long half = (q * q - 1) / 2;
    CHECK(degree_rows_weight(printed) ==
          depth_group_order(q, 2) - 2 * q * half * half);
  }
  CHECK(depth_group_order(2, 1) == 6);
  CHECK(depth_group_order(3, 2) == 648);
  CHECK(depth_group_order(2, 3) == 384);
}

TEST_CASE("reference degree rows match the computed depth-2 tables") {
  for (int q : {2, 3}) {
    TableCtx ctx(q, 2);
    std::map<long long, long long> computed;
    for (int i = 0; i < ctx.tab.num(); ++i) ++computed[ctx.tab.degree(i)];
    std::map<long long, long long> expected;
    for (const DegreeRow& row : depth2_degree_rows(q, true))
      if (row.count != 0) expected[row.degree] += row.count;
    CHECK(computed == expected);
  }
}
