#pragma once
// Exact JSON serialization of computed character tables, plus a small
// deterministic file cache keyed by (n, q, r, format version).
//
// A TableDoc is a self-contained snapshot of one computed table: group
// metadata, the conjugacy classes with integer-coded representative
// matrices, and every irreducible row as exact cyclotomic values
// (conductor plus rational coefficient strings).  Serialization is
// deterministic: keys are emitted in sorted order and rationals in GMP
// canonical form, so serialize(parse(s)) == s and two runs of the same
// computation produce byte-identical files.

#include <cstdint>
#include <string>
#include <vector>

#include "ringrep/charkit.hpp"
#include "ringrep/matgrp.hpp"
#include "ringrep/trunc.hpp"

namespace ringrep {

// Bump when the document layout changes; cached files are keyed by it.
inline constexpr int kTableFormatVersion = 1;

struct TableDoc {
  int format_version = kTableFormatVersion;
  int n = 0;
  int q = 0;
  int r = 0;
  long long order = 0;

  struct ClassRow {
    long long size = 0;
    std::uint64_t element_order = 0;
    // rep[i][j][k]: canonical integer code of the eps^k coefficient of the
    // representative's (i, j) entry; n x n x r.
    std::vector<std::vector<std::vector<std::uint64_t>>> rep;
    friend bool operator==(const ClassRow&, const ClassRow&) = default;
  };
  struct IrrRow {
    long long degree = 0;
    std::vector<Cyclo> values;  // one exact value per class, in class order
    friend bool operator==(const IrrRow&, const IrrRow&) = default;
  };

  std::vector<ClassRow> classes;
  std::vector<IrrRow> irreducibles;
  friend bool operator==(const TableDoc&, const TableDoc&) = default;
};

// Snapshot computed data.  `elems` must be the element list the classes
// were computed over (class representatives are indices into it).
TableDoc make_table_doc(int n, int q, int r, const TruncRing& ring,
                        const std::vector<Mat>& elems, const ConjClasses& cls,
                        const CharacterTable& tab);

// Deterministic pretty-printed JSON (sorted keys, 2-space indent).
std::string table_doc_to_json(const TableDoc& doc);

// Parse and validate; throws std::runtime_error on malformed input or an
// unsupported format version.
TableDoc table_doc_from_json(const std::string& text);

// CSV "degree,count" lines (header included) of the degree multiset of the
// document's irreducibles, ascending by degree.
std::string table_doc_degree_csv(const TableDoc& doc);

// ---------------------------------------------------------------------------
// File cache.

// $RINGREP_CACHE_DIR if set and nonempty, else ".ringrep-cache".
std::string default_cache_dir();

// File name encoding the full cache key, e.g. "table-n2-q3-r2-v1.json".
std::string cache_file_name(int n, int q, int r);

// Load <dir>/<cache_file_name(n,q,r)> into *out.  Returns false if the
// file does not exist; throws std::runtime_error if it exists but is
// malformed or carries a different key than requested.
bool load_cached_table(const std::string& dir, int n, int q, int r,
                       TableDoc* out);

// Write the document under its key in `dir` (created if needed),
// atomically.
void save_cached_table(const std::string& dir, const TableDoc& doc);

// Write content to path via a unique sibling temp file and rename, so
// readers never observe a partial file.  Creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ringrep
